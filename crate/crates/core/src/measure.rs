//! Input domains and probability measures on them.
//!
//! A measure pairs a bounded domain (ball or axis-aligned box) with a law:
//! uniform, or a standard Gaussian truncated to the domain. Both laws have
//! bounded density, and [`InputMeasure::kappa`] returns the exact supremum
//! of that density, the constant that turns Lebesgue-null sets into
//! measure-null sets in the analysis built on top of this module.
//!
//! Sampling is deterministic: point `i` of `sample(n, seed)` is a function
//! of `(seed, i)` alone (see [`crate::rng`]), so sample sets are identical
//! across runs, platforms, and thread counts.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::{gamma, gamma_lr};

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Lowest acceptance probability tolerated for rejection sampling. Below
/// this the configuration is rejected at construction instead of looping
/// near-forever at sampling time.
const MIN_ACCEPT_PROB: f64 = 1e-4;

/// Standard normal CDF.
pub(crate) fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

// ======================================================================
// Domains
// ======================================================================

/// Bounded input domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDomain {
    /// Closed Euclidean ball of the given radius centered at the origin.
    Ball { radius: f64, dim: usize },
    /// Axis-aligned box; `bounds[i]` is the closed interval for axis `i`.
    Box { bounds: Vec<[f64; 2]> },
}

impl InputDomain {
    pub fn dim(&self) -> usize {
        match self {
            InputDomain::Ball { dim, .. } => *dim,
            InputDomain::Box { bounds } => bounds.len(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            InputDomain::Ball { radius, .. } => {
                x.iter().map(|v| v * v).sum::<f64>() <= radius * radius
            }
            InputDomain::Box { bounds } => x
                .iter()
                .zip(bounds)
                .all(|(v, [lo, hi])| *lo <= *v && *v <= *hi),
        }
    }

    /// Lebesgue volume of the domain.
    pub fn volume(&self) -> f64 {
        match self {
            InputDomain::Ball { radius, dim } => {
                let d = *dim as f64;
                std::f64::consts::PI.powf(d / 2.0) * radius.powi(*dim as i32)
                    / gamma(d / 2.0 + 1.0)
            }
            InputDomain::Box { bounds } => bounds.iter().map(|[lo, hi]| hi - lo).product(),
        }
    }

    /// Smallest axis-aligned box containing the domain.
    pub fn bounding_box(&self) -> Vec<[f64; 2]> {
        match self {
            InputDomain::Ball { radius, dim } => vec![[-radius, *radius]; *dim],
            InputDomain::Box { bounds } => bounds.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            InputDomain::Ball { radius, dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidMeasure("ball dimension must be positive".into()));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidMeasure(format!(
                        "ball radius must be finite and positive, got {radius}"
                    )));
                }
            }
            InputDomain::Box { bounds } => {
                if bounds.is_empty() {
                    return Err(Error::InvalidMeasure("box needs at least one axis".into()));
                }
                for [lo, hi] in bounds {
                    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                        return Err(Error::InvalidMeasure(format!(
                            "box bounds must be finite with lo < hi, got [{lo}, {hi}]"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

// ======================================================================
// Laws and measures
// ======================================================================

/// Probability law on a domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum MeasureLaw {
    Uniform,
    /// Standard (identity covariance) Gaussian centered at `mean`,
    /// conditioned on the domain.
    TruncatedGaussian { mean: Vec<f64> },
}

/// A probability measure on a bounded input domain, with bounded density.
#[derive(Debug, Clone, PartialEq)]
pub struct InputMeasure {
    domain: InputDomain,
    law: MeasureLaw,
    /// Normalizing constant: domain volume (uniform) or the mass the
    /// untruncated Gaussian assigns to the domain.
    norm: f64,
    /// Cached supremum of the density over the domain.
    kappa: f64,
}

impl InputMeasure {
    pub fn new(domain: InputDomain, law: MeasureLaw) -> Result<Self> {
        domain.validate()?;
        let (norm, kappa) = match &law {
            MeasureLaw::Uniform => {
                let vol = domain.volume();
                (vol, 1.0 / vol)
            }
            MeasureLaw::TruncatedGaussian { mean } => {
                if mean.len() != domain.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: domain.dim(),
                        got: mean.len(),
                        context: "truncated Gaussian mean",
                    });
                }
                if !mean.iter().all(|v| v.is_finite()) {
                    return Err(Error::NonFinite("truncated Gaussian mean"));
                }
                let d = domain.dim() as f64;
                let (mass, peak_sq) = match &domain {
                    InputDomain::Ball { radius, .. } => {
                        if mean.iter().any(|&v| v != 0.0) {
                            return Err(Error::Unsupported(
                                "truncated Gaussian on a ball requires zero mean \
                                 (the normalization has no closed form otherwise)"
                                    .into(),
                            ));
                        }
                        // Mass of the r-ball under a standard d-dim Gaussian.
                        (gamma_lr(d / 2.0, radius * radius / 2.0), 0.0)
                    }
                    InputDomain::Box { bounds } => {
                        let mut mass = 1.0;
                        let mut peak_sq = 0.0;
                        for ([lo, hi], m) in bounds.iter().zip(mean) {
                            mass *= std_normal_cdf(hi - m) - std_normal_cdf(lo - m);
                            let nearest = m.clamp(*lo, *hi);
                            peak_sq += (nearest - m) * (nearest - m);
                        }
                        (mass, peak_sq)
                    }
                };
                if !(mass.is_finite() && mass >= MIN_ACCEPT_PROB) {
                    return Err(Error::InvalidMeasure(format!(
                        "the Gaussian puts mass {mass:.3e} on the domain; rejection \
                         sampling needs at least {MIN_ACCEPT_PROB:.0e}"
                    )));
                }
                let norm = mass * (2.0 * std::f64::consts::PI).powf(d / 2.0);
                (norm, (-peak_sq / 2.0).exp() / norm)
            }
        };
        Ok(InputMeasure {
            domain,
            law,
            norm,
            kappa,
        })
    }

    pub fn domain(&self) -> &InputDomain {
        &self.domain
    }

    pub fn law(&self) -> &MeasureLaw {
        &self.law
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Supremum of the density over the domain. Every event `U` satisfies
    /// `mu(U) <= kappa * lebesgue(U)`, so Lebesgue-null sets are mu-null.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Probability density at `x` (zero outside the domain).
    pub fn density(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
                context: "density argument",
            });
        }
        Ok(self.density_raw(x))
    }

    /// Density without the dimension check, for validated inner loops.
    pub(crate) fn density_raw(&self, x: &[f64]) -> f64 {
        if !self.domain.contains(x) {
            return 0.0;
        }
        match &self.law {
            MeasureLaw::Uniform => 1.0 / self.norm,
            MeasureLaw::TruncatedGaussian { mean } => {
                let sq: f64 = x.iter().zip(mean).map(|(v, m)| (v - m) * (v - m)).sum();
                (-sq / 2.0).exp() / self.norm
            }
        }
    }

    /// Draws `n` points. Point `i` depends only on `(seed, i)`, so the
    /// result is identical no matter how many threads run the fill.
    pub fn sample(&self, n: usize, seed: u64) -> SampleSet {
        let dim = self.dim();
        let mut data = vec![0.0; n * dim];
        data.par_chunks_mut(dim).enumerate().for_each(|(i, out)| {
            let mut rng = stream_rng(seed, i as u64);
            self.fill_point(&mut rng, out);
        });
        SampleSet { dim, data }
    }

    fn fill_point(&self, rng: &mut impl Rng, out: &mut [f64]) {
        match &self.law {
            MeasureLaw::Uniform => match &self.domain {
                InputDomain::Box { bounds } => {
                    for (v, [lo, hi]) in out.iter_mut().zip(bounds) {
                        *v = lo + (hi - lo) * rng.random::<f64>();
                    }
                }
                InputDomain::Ball { radius, dim } => loop {
                    let mut sq = 0.0;
                    for v in out.iter_mut() {
                        let z: f64 = rng.sample(StandardNormal);
                        *v = z;
                        sq += z * z;
                    }
                    if sq == 0.0 {
                        continue;
                    }
                    let scale =
                        radius * rng.random::<f64>().powf(1.0 / *dim as f64) / sq.sqrt();
                    for v in out.iter_mut() {
                        *v *= scale;
                    }
                    break;
                },
            },
            MeasureLaw::TruncatedGaussian { mean } => {
                // Rejection from the untruncated Gaussian. Construction
                // guarantees acceptance probability >= MIN_ACCEPT_PROB, so
                // the cap is unreachable in practice.
                for _ in 0..10_000_000u64 {
                    for (v, m) in out.iter_mut().zip(mean) {
                        let z: f64 = rng.sample(StandardNormal);
                        *v = m + z;
                    }
                    if self.domain.contains(out) {
                        return;
                    }
                }
                panic!("rejection sampling failed to hit the domain");
            }
        }
    }

    /// For box domains the law is a product; this is the marginal CDF of
    /// one axis. Callers must ensure the domain is a box.
    pub(crate) fn axis_cdf(&self, axis: usize, t: f64) -> f64 {
        let InputDomain::Box { bounds } = &self.domain else {
            panic!("axis_cdf requires a box domain");
        };
        let [lo, hi] = bounds[axis];
        let t = t.clamp(lo, hi);
        match &self.law {
            MeasureLaw::Uniform => (t - lo) / (hi - lo),
            MeasureLaw::TruncatedGaussian { mean } => {
                let m = mean[axis];
                (std_normal_cdf(t - m) - std_normal_cdf(lo - m))
                    / (std_normal_cdf(hi - m) - std_normal_cdf(lo - m))
            }
        }
    }
}

// ======================================================================
// Sample sets
// ======================================================================

/// A fixed batch of sampled input points, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    dim: usize,
    data: Vec<f64>,
}

impl SampleSet {
    /// Wraps externally produced points (`data` is row-concatenated).
    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() % dim != 0 {
            return Err(Error::InvalidArgument(format!(
                "flat sample data of length {} is not a multiple of dim {dim}",
                data.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("sample data"));
        }
        Ok(SampleSet { dim, data })
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub(crate) fn par_iter(&self) -> impl IndexedParallelIterator<Item = &[f64]> {
        self.data.par_chunks_exact(self.dim)
    }
}
