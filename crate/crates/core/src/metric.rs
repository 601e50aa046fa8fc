//! The disagreement distance and its Monte Carlo estimators.
//!
//! Input space splits into regions: `Omega_k(w)` is where network `w`
//! assigns the unique label `k`, and `Omega_0(w)` is the tie set where the
//! argmax is not unique. The distance between two networks is the measure of
//! the set where their region indices differ. Two equivalent forms are
//! provided: a direct disagreement frequency, and one half the summed
//! measures of the symmetric differences `Omega_k(w) \u{394} Omega_k(w')`.
//! On a shared sample set the two agree exactly, bit for bit: a point whose
//! indices differ lands in exactly two symmetric differences, a point whose
//! indices agree lands in none.
//!
//! Ties are compared on region indices, not label sets: two points both in
//! the tie region count as agreeing even if different classes tie. That is
//! the convention under which the two forms coincide for every class count;
//! [`tie_diagnostics`] reports how much the alternative label-set reading
//! would differ.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::SampleSet;
use crate::net::{check_tie_tol, Evaluator, NetworkParams};

// ======================================================================
// Domain types
// ======================================================================

/// Region index of a point: `0` for a tie, else the unique winning class
/// in `1..=K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionIndex(pub u32);

impl RegionIndex {
    pub const TIE: RegionIndex = RegionIndex(0);

    pub fn is_tie(self) -> bool {
        self.0 == 0
    }

    /// Winning class if the argmax is unique.
    pub fn class(self) -> Option<usize> {
        (self.0 != 0).then_some(self.0 as usize)
    }
}

/// How an estimate or reference value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    Disagreement,
    SymmetricDifference,
    Exact,
    Quadrature,
}

/// A probability estimate in [0,1] with a 95% normal-approximation
/// confidence half-width (zero for exact and quadrature references).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub value: f64,
    #[serde(rename = "n")]
    pub n_samples: u64,
    #[serde(rename = "ci95")]
    pub ci_half_width: f64,
    pub estimator: EstimatorKind,
}

impl DistanceEstimate {
    /// Binomial estimate `count / n` with its 95% half-width.
    pub fn from_count(count: u64, n: u64, estimator: EstimatorKind) -> Self {
        debug_assert!(n > 0 && count <= n);
        let p = count as f64 / n as f64;
        DistanceEstimate {
            value: p,
            n_samples: n,
            ci_half_width: 1.96 * (p * (1.0 - p) / n as f64).sqrt(),
            estimator,
        }
    }

    /// Wraps a closed-form value.
    pub fn exact(value: f64) -> Self {
        DistanceEstimate {
            value,
            n_samples: 1,
            ci_half_width: 0.0,
            estimator: EstimatorKind::Exact,
        }
    }

    /// Wraps a quadrature value computed on `nodes` grid cells.
    pub fn quadrature(value: f64, nodes: u64) -> Self {
        DistanceEstimate {
            value,
            n_samples: nodes.max(1),
            ci_half_width: 0.0,
            estimator: EstimatorKind::Quadrature,
        }
    }
}

/// Region-index versus label-set disagreement on one sample set.
///
/// The two can only differ at points where both networks tie but on
/// different class sets; `discrepancy_mass` is the fraction of such points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TieDiagnostics {
    pub region_disagreement: f64,
    pub label_set_disagreement: f64,
    pub discrepancy_mass: f64,
    pub n_samples: u64,
}

// ======================================================================
// Classification
// ======================================================================

/// Region index from raw output scores: the argmax class (1-based) if it is
/// unique under `tie_tol`, else 0.
fn classify(out: &[f64], tie_tol: f64) -> Result<u32> {
    let mut max = f64::NEG_INFINITY;
    let mut arg = 0usize;
    for (j, &v) in out.iter().enumerate() {
        if v.is_nan() {
            return Err(Error::NonFinite("network output"));
        }
        if v > max {
            max = v;
            arg = j;
        }
    }
    let cutoff = max - tie_tol;
    let winners = out.iter().filter(|&&v| v >= cutoff).count();
    Ok(if winners > 1 { 0 } else { arg as u32 + 1 })
}

/// Region index plus the bitmask of classes within `tie_tol` of the max.
fn classify_with_mask(out: &[f64], tie_tol: f64) -> Result<(u32, u64)> {
    let region = classify(out, tie_tol)?;
    let max = out.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cutoff = max - tie_tol;
    let mut mask = 0u64;
    for (j, &v) in out.iter().enumerate() {
        if v >= cutoff {
            mask |= 1 << j;
        }
    }
    Ok((region, mask))
}

/// Region index of a single point.
pub fn region_index(params: &NetworkParams, x: &[f64], tie_tol: f64) -> Result<RegionIndex> {
    check_tie_tol(tie_tol)?;
    let out = params.forward(x)?;
    classify(&out, tie_tol).map(RegionIndex)
}

/// Region indices of a whole sample set, computed in parallel.
///
/// Point `i`'s index depends only on `(params, samples[i], tie_tol)`, so the
/// result is identical at any thread count.
pub fn region_indices(
    params: &NetworkParams,
    samples: &SampleSet,
    tie_tol: f64,
) -> Result<Vec<RegionIndex>> {
    check_tie_tol(tie_tol)?;
    if samples.dim() != params.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: params.input_dim(),
            got: samples.dim(),
            context: "sample dimension",
        });
    }
    samples
        .par_iter()
        .map_init(
            || Evaluator::new(params),
            |ev, x| classify(ev.outputs(x), tie_tol).map(RegionIndex),
        )
        .collect()
}

// ======================================================================
// Estimators
// ======================================================================

fn check_comparable(w: &NetworkParams, w2: &NetworkParams) -> Result<()> {
    if w.input_dim() != w2.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: w.input_dim(),
            got: w2.input_dim(),
            context: "input dimensions of compared networks",
        });
    }
    if w.class_count() != w2.class_count() {
        return Err(Error::DimensionMismatch {
            expected: w.class_count(),
            got: w2.class_count(),
            context: "class counts of compared networks",
        });
    }
    Ok(())
}

fn check_nonempty(samples: &SampleSet) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample set".into()));
    }
    Ok(())
}

/// Disagreement frequency from two precomputed index arrays.
pub fn disagreement_from_indices(
    a: &[RegionIndex],
    b: &[RegionIndex],
) -> Result<DistanceEstimate> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
            context: "region index arrays",
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty region index arrays".into()));
    }
    let count = a.iter().zip(b).filter(|(x, y)| x != y).count() as u64;
    Ok(DistanceEstimate::from_count(
        count,
        a.len() as u64,
        EstimatorKind::Disagreement,
    ))
}

/// Symmetric-difference form from two precomputed index arrays.
///
/// Sums, over every region `k` in `0..=class_count`, the fraction of points
/// lying in exactly one of the two `k`-regions, and halves the total. The
/// total is exactly twice the disagreement count, and the value is computed
/// as `total / (2n)`, so the result is bit-identical to
/// [`disagreement_from_indices`] on the same arrays.
pub fn symdiff_from_indices(
    a: &[RegionIndex],
    b: &[RegionIndex],
    class_count: usize,
) -> Result<DistanceEstimate> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
            context: "region index arrays",
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty region index arrays".into()));
    }
    let mut per_region = vec![0u64; class_count + 1];
    for (x, y) in a.iter().zip(b) {
        // x differs from y on membership of exactly regions x.0 and y.0.
        if x != y {
            per_region[x.0 as usize] += 1;
            per_region[y.0 as usize] += 1;
        }
    }
    let total: u64 = per_region.iter().sum();
    let n = a.len() as u64;
    let p = total as f64 / (2 * n) as f64;
    Ok(DistanceEstimate {
        value: p,
        n_samples: n,
        ci_half_width: 1.96 * (p * (1.0 - p) / n as f64).sqrt(),
        estimator: EstimatorKind::SymmetricDifference,
    })
}

/// Probability that the two networks label a random point differently,
/// estimated as the disagreement frequency of region indices over `samples`.
pub fn d_mu_disagreement(
    w: &NetworkParams,
    w2: &NetworkParams,
    samples: &SampleSet,
    tie_tol: f64,
) -> Result<DistanceEstimate> {
    check_comparable(w, w2)?;
    check_nonempty(samples)?;
    let ia = region_indices(w, samples, tie_tol)?;
    let ib = region_indices(w2, samples, tie_tol)?;
    disagreement_from_indices(&ia, &ib)
}

/// Same probability via the symmetric-difference form; bit-identical to
/// [`d_mu_disagreement`] on the same samples.
pub fn d_mu_symdiff(
    w: &NetworkParams,
    w2: &NetworkParams,
    samples: &SampleSet,
    tie_tol: f64,
) -> Result<DistanceEstimate> {
    check_comparable(w, w2)?;
    check_nonempty(samples)?;
    let ia = region_indices(w, samples, tie_tol)?;
    let ib = region_indices(w2, samples, tie_tol)?;
    symdiff_from_indices(&ia, &ib, w.class_count())
}

/// Fraction of samples where the predicted label set differs from the
/// ground-truth class. A tie never matches, since the label set then has
/// more than one element.
pub fn generalization_error<F>(
    w: &NetworkParams,
    truth: F,
    samples: &SampleSet,
) -> Result<DistanceEstimate>
where
    F: Fn(&[f64]) -> usize + Sync,
{
    check_nonempty(samples)?;
    if samples.dim() != w.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: w.input_dim(),
            got: samples.dim(),
            context: "sample dimension",
        });
    }
    let counts: Result<Vec<u8>> = samples
        .par_iter()
        .map_init(
            || Evaluator::new(w),
            |ev, x| {
                let r = classify(ev.outputs(x), 0.0)?;
                Ok((r as usize != truth(x)) as u8)
            },
        )
        .collect();
    let counts = counts?;
    let wrong: u64 = counts.iter().map(|&c| c as u64).sum();
    Ok(DistanceEstimate::from_count(
        wrong,
        samples.len() as u64,
        EstimatorKind::Disagreement,
    ))
}

/// Fraction of samples landing in the tie region `Omega_0(w)`.
pub fn omega0_mass(
    w: &NetworkParams,
    samples: &SampleSet,
    tie_tol: f64,
) -> Result<DistanceEstimate> {
    check_nonempty(samples)?;
    let indices = region_indices(w, samples, tie_tol)?;
    let ties = indices.iter().filter(|r| r.is_tie()).count() as u64;
    Ok(DistanceEstimate::from_count(
        ties,
        samples.len() as u64,
        EstimatorKind::Disagreement,
    ))
}

/// Compares the region-index disagreement against the label-set reading.
pub fn tie_diagnostics(
    w: &NetworkParams,
    w2: &NetworkParams,
    samples: &SampleSet,
    tie_tol: f64,
) -> Result<TieDiagnostics> {
    check_comparable(w, w2)?;
    check_nonempty(samples)?;
    check_tie_tol(tie_tol)?;
    if w.class_count() > 63 {
        return Err(Error::Unsupported(
            "tie diagnostics support at most 63 classes".into(),
        ));
    }
    if samples.dim() != w.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: w.input_dim(),
            got: samples.dim(),
            context: "sample dimension",
        });
    }
    let per_point: Result<Vec<(u8, u8)>> = samples
        .par_iter()
        .map_init(
            || (Evaluator::new(w), Evaluator::new(w2)),
            |(ea, eb), x| {
                let (ra, ma) = classify_with_mask(ea.outputs(x), tie_tol)?;
                let (rb, mb) = classify_with_mask(eb.outputs(x), tie_tol)?;
                Ok(((ra != rb) as u8, (ma != mb) as u8))
            },
        )
        .collect();
    let per_point = per_point?;
    let n = per_point.len() as u64;
    let mut region = 0u64;
    let mut label_set = 0u64;
    let mut discrepancy = 0u64;
    for (r, s) in per_point {
        region += r as u64;
        label_set += s as u64;
        discrepancy += (r != s) as u64;
    }
    Ok(TieDiagnostics {
        region_disagreement: region as f64 / n as f64,
        label_set_disagreement: label_set as f64 / n as f64,
        discrepancy_mass: discrepancy as f64 / n as f64,
        n_samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{InputDomain, InputMeasure, MeasureLaw};
    use crate::net::Activation;

    fn toy(flat: [f64; 6]) -> NetworkParams {
        NetworkParams::from_flat(&[2, 2], Activation::Identity, &flat).unwrap()
    }

    const V1: [f64; 6] = [0.8, 1.0, 1.0, 1.0, 0.9, 1.0];
    const V3: [f64; 6] = [-2.0, 1.0, 1.0, 1.0, -1.9, 1.0];
    const ALL_ONE: [f64; 6] = [1.0; 6];

    fn uniform_box() -> InputMeasure {
        InputMeasure::new(
            InputDomain::Box {
                bounds: vec![[-3.0, 3.0], [-3.0, 3.0]],
            },
            MeasureLaw::Uniform,
        )
        .unwrap()
    }

    fn gaussian_box() -> InputMeasure {
        InputMeasure::new(
            InputDomain::Box {
                bounds: vec![[-3.0, 3.0], [-3.0, 3.0]],
            },
            MeasureLaw::TruncatedGaussian { mean: vec![0.0, 0.0] },
        )
        .unwrap()
    }

    #[test]
    fn region_index_examples() {
        let all_one = toy(ALL_ONE);
        for x in [[0.0, 0.0], [1.0, -2.0], [-3.0, 3.0]] {
            assert_eq!(region_index(&all_one, &x, 0.0).unwrap(), RegionIndex::TIE);
        }
        let w1 = toy(V1);
        // Scores at (-1,0): 0.1 vs 0.0; at (0,0): 0.9 vs 1.0.
        assert_eq!(region_index(&w1, &[-1.0, 0.0], 0.0).unwrap(), RegionIndex(1));
        assert_eq!(region_index(&w1, &[0.0, 0.0], 0.0).unwrap(), RegionIndex(2));
    }

    #[test]
    fn region_index_consistent_with_predict() {
        let w1 = toy(V1);
        for x in [[-1.0, 0.5], [-0.5, 1.7], [0.3, -2.0]] {
            let r = region_index(&w1, &x, 0.0).unwrap();
            let pred = w1.predict(&x, 0.0).unwrap();
            match r.class() {
                Some(k) => assert_eq!(pred.labels, vec![k]),
                None => assert!(pred.is_tie),
            }
        }
    }

    #[test]
    fn self_distance_is_zero() {
        let w1 = toy(V1);
        let s = uniform_box().sample(10_000, 1);
        let d = d_mu_disagreement(&w1, &w1, &s, 0.0).unwrap();
        assert_eq!(d.value, 0.0);
        assert_eq!(d.ci_half_width, 0.0);
        assert_eq!(d.n_samples, 10_000);
    }

    #[test]
    fn distance_matches_strip_oracle_uniform() {
        // Disagreement region of these two half-plane classifiers is the
        // vertical strip -29/30 < x1 < -1/2, of uniform mass 7/90.
        let s = uniform_box().sample(200_000, 42);
        let d = d_mu_disagreement(&toy(V1), &toy(V3), &s, 0.0).unwrap();
        let expect = 7.0 / 90.0;
        assert!(
            (d.value - expect).abs() <= 3.0 * d.ci_half_width,
            "estimate {} vs strip mass {expect} (ci {})",
            d.value,
            d.ci_half_width
        );
    }

    #[test]
    fn distance_matches_strip_oracle_gaussian() {
        use crate::measure::std_normal_cdf as cdf;
        let s = gaussian_box().sample(200_000, 42);
        let d = d_mu_disagreement(&toy(V1), &toy(V3), &s, 0.0).unwrap();
        let expect = (cdf(-0.5) - cdf(-29.0 / 30.0)) / (cdf(3.0) - cdf(-3.0));
        assert!((expect - 0.1421).abs() < 5e-5, "oracle sanity: {expect}");
        assert!(
            (d.value - expect).abs() <= 3.0 * d.ci_half_width,
            "estimate {} vs strip mass {expect}",
            d.value
        );
    }

    #[test]
    fn symdiff_equals_disagreement_bitwise() {
        let s = uniform_box().sample(50_000, 9);
        let (w1, w3) = (toy(V1), toy(V3));
        let a = d_mu_disagreement(&w1, &w3, &s, 0.0).unwrap();
        let b = d_mu_symdiff(&w1, &w3, &s, 0.0).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.n_samples, b.n_samples);
        // Four classes exercise the per-region loop.
        let p = NetworkParams::from_flat(
            &[2, 4],
            Activation::Identity,
            &[0.5, -1.0, 0.25, 2.0, 1.0, 0.0, -0.5, 1.5, 0.1, -0.2, 0.3, 0.4],
        )
        .unwrap();
        let q = NetworkParams::from_flat(
            &[2, 4],
            Activation::Identity,
            &[-0.5, 1.0, 0.5, -2.0, 0.0, 1.0, 0.5, -1.5, 0.2, 0.1, -0.3, 0.0],
        )
        .unwrap();
        let a = d_mu_disagreement(&p, &q, &s, 0.0).unwrap();
        let b = d_mu_symdiff(&p, &q, &s, 0.0).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn degenerate_vs_strict_network_disagrees_everywhere() {
        // The all-one net ties at every point; any tie-free net disagrees
        // with it everywhere under the region-index convention.
        let s = uniform_box().sample(10_000, 3);
        let a = d_mu_disagreement(&toy(ALL_ONE), &toy(V1), &s, 0.0).unwrap();
        assert_eq!(a.value, 1.0);
        let b = d_mu_symdiff(&toy(ALL_ONE), &toy(V1), &s, 0.0).unwrap();
        assert_eq!(b.value, 1.0);
    }

    #[test]
    fn pointwise_symmetry_and_triangle_on_shared_samples() {
        let s = uniform_box().sample(20_000, 17);
        let nets = [toy(V1), toy(V3), toy([0.3, -0.7, 1.2, 0.4, -0.1, 0.6])];
        for a in &nets {
            for b in &nets {
                let dab = d_mu_disagreement(a, b, &s, 0.0).unwrap().value;
                let dba = d_mu_disagreement(b, a, &s, 0.0).unwrap().value;
                assert_eq!(dab.to_bits(), dba.to_bits(), "symmetry");
                for c in &nets {
                    let dac = d_mu_disagreement(a, c, &s, 0.0).unwrap().value;
                    let dcb = d_mu_disagreement(c, b, &s, 0.0).unwrap().value;
                    assert!(dab <= dac + dcb + 1e-15, "triangle");
                }
            }
        }
    }

    #[test]
    fn generalization_error_examples() {
        let s = uniform_box().sample(10_000, 5);
        let w1 = toy(V1);
        // Truth realizing the network's own decision rule: class 1 exactly
        // where its first score wins, i.e. where 0.2 x1 + 0.1 > 0 fails.
        let g = generalization_error(
            &w1,
            |x| if 0.2 * x[0] + 0.1 < 0.0 { 1 } else { 2 },
            &s,
        )
        .unwrap();
        assert_eq!(g.value, 0.0, "truth = own half-plane rule");
        // Constant truth against the everywhere-tied net: label sets never
        // match a singleton.
        let g = generalization_error(&toy(ALL_ONE), |_| 1, &s).unwrap();
        assert_eq!(g.value, 1.0);
        // Truth = sign of x1 + 0.5: same boundary as w1, classes swapped
        // on the correct sides (class 1 where x1 < -0.5).
        let g = generalization_error(&w1, |x| if x[0] + 0.5 < 0.0 { 1 } else { 2 }, &s).unwrap();
        assert_eq!(g.value, 0.0);
    }

    #[test]
    fn omega0_mass_examples() {
        let s = uniform_box().sample(200_000, 13);
        assert_eq!(omega0_mass(&toy(ALL_ONE), &s, 0.0).unwrap().value, 1.0);
        assert_eq!(omega0_mass(&toy(V1), &s, 0.0).unwrap().value, 0.0);
        // Positive tolerance: ties where |0.2 x1 + 0.1| <= 0.01, the strip
        // -0.55 <= x1 <= -0.45, of uniform mass 0.1/6 = 1/60.
        let m = omega0_mass(&toy(V1), &s, 0.01).unwrap();
        let expect = 1.0 / 60.0;
        assert!(
            (m.value - expect).abs() < 2e-3,
            "strip mass {} vs {expect}",
            m.value
        );
    }

    #[test]
    fn estimators_reject_bad_inputs() {
        let s = uniform_box().sample(100, 1);
        let empty = SampleSet::from_flat(2, vec![]).unwrap();
        let (w1, w3) = (toy(V1), toy(V3));
        assert!(d_mu_disagreement(&w1, &w3, &empty, 0.0).is_err());
        assert!(d_mu_symdiff(&w1, &w3, &empty, 0.0).is_err());
        assert!(omega0_mass(&w1, &empty, 0.0).is_err());
        assert!(d_mu_disagreement(&w1, &w3, &s, -1.0).is_err());
        // Mismatched class counts.
        let k4 = NetworkParams::from_flat(&[2, 4], Activation::Identity, &[0.1; 12]).unwrap();
        assert!(d_mu_disagreement(&w1, &k4, &s, 0.0).is_err());
        // Mismatched sample dimension.
        let s3 = SampleSet::from_flat(3, vec![0.0; 9]).unwrap();
        assert!(d_mu_disagreement(&w1, &w3, &s3, 0.0).is_err());
        // Mismatched index arrays.
        let ia = region_indices(&w1, &s, 0.0).unwrap();
        assert!(disagreement_from_indices(&ia, &ia[..50]).is_err());
    }

    #[test]
    fn ci_half_width_bound() {
        let s = uniform_box().sample(4_000, 2);
        let d = d_mu_disagreement(&toy(V1), &toy(V3), &s, 0.0).unwrap();
        assert!(d.ci_half_width <= 0.98 / (d.n_samples as f64).sqrt() + 1e-15);
        assert!(d.value >= 0.0 && d.value <= 1.0);
    }

    #[test]
    fn estimate_json_shape() {
        let e = DistanceEstimate {
            value: 0.25,
            n_samples: 1000,
            ci_half_width: 0.01,
            estimator: EstimatorKind::SymmetricDifference,
        };
        let json = serde_json::to_value(e).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "value": 0.25,
                "n": 1000,
                "ci95": 0.01,
                "estimator": "symmetric-difference",
            })
        );
    }

    #[test]
    fn tie_diagnostics_separates_conventions() {
        // Three-class nets that both tie at the origin, on different sets:
        // biases (1,1,0) ties classes {1,2}; biases (1,0,1) ties {1,3}.
        let a = NetworkParams::new(
            vec![2, 3],
            Activation::Identity,
            vec![vec![vec![0.0, 0.0]; 3]],
            vec![vec![1.0, 1.0, 0.0]],
        )
        .unwrap();
        let b = NetworkParams::new(
            vec![2, 3],
            Activation::Identity,
            vec![vec![vec![0.0, 0.0]; 3]],
            vec![vec![1.0, 0.0, 1.0]],
        )
        .unwrap();
        let s = SampleSet::from_flat(2, vec![0.0, 0.0]).unwrap();
        let diag = tie_diagnostics(&a, &b, &s, 0.0).unwrap();
        // Region indices agree (both 0); label sets {1,2} vs {1,3} differ.
        assert_eq!(diag.region_disagreement, 0.0);
        assert_eq!(diag.label_set_disagreement, 1.0);
        assert_eq!(diag.discrepancy_mass, 1.0);
        // For tie-free pairs the two readings coincide.
        let s = uniform_box().sample(20_000, 21);
        let diag = tie_diagnostics(&toy(V1), &toy(V3), &s, 0.0).unwrap();
        assert_eq!(diag.discrepancy_mass, 0.0);
        assert_eq!(diag.region_disagreement, diag.label_set_disagreement);
    }
}
