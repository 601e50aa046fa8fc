//! Equivalence classes of networks and continuity of the quotient map.
//!
//! Zero distance is an equivalence: distinct parameter vectors can label
//! every input identically. This module works with that quotient at sample
//! resolution. Distances here are always computed on one shared sample set
//! with zero tie tolerance, which makes the metric axioms deterministic
//! facts about integer disagreement counts rather than statistical claims:
//! the pointwise indicator inequalities force symmetry and the triangle
//! inequality to hold exactly, and the axiom suite verifies them on counts.
//!
//! The continuity probe examines the quotient map around a center network:
//! neighbors drawn uniformly from a small parameter ball should stay close
//! in distance unless the center carries positive tie mass, in which case
//! every tie-free neighbor is at distance at least that mass (the probe is
//! the empirical form of the discontinuity bound: half the tie mass from
//! below).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{InputDomain, InputMeasure, MeasureLaw, SampleSet};
use crate::metric::{region_indices, RegionIndex};
use crate::net::NetworkParams;
use crate::rng::derive_seed;

// ======================================================================
// Types
// ======================================================================

/// Partition of a network list into empirical equivalence classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassPartition {
    /// Flat parameter vector of each class's founding member.
    pub representatives: Vec<Vec<f64>>,
    /// `assignment[i]` is the class index of input network `i`.
    pub assignment: Vec<usize>,
    pub threshold: f64,
}

impl ClassPartition {
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }
}

/// Metric-axiom check results on one shared sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricAxiomReport {
    pub distance_matrix: Vec<Vec<f64>>,
    pub n_samples: u64,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub nonnegativity_violations: usize,
    pub self_distance_violations: usize,
    pub symmetry_violations: usize,
    pub triangle_violations: usize,
}

impl MetricAxiomReport {
    pub fn total_violations(&self) -> usize {
        self.nonnegativity_violations
            + self.self_distance_violations
            + self.symmetry_violations
            + self.triangle_violations
    }
}

/// Result of probing the quotient map around one center network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityProbeResult {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Largest estimated distance from the center to any sampled neighbor.
    pub max_quotient_distance: f64,
    pub argmax_neighbor: Vec<f64>,
    /// Tie-region mass of the center itself (zero tolerance).
    pub omega0_mass_center: f64,
    /// Number of distinct empirical classes among the neighbors
    /// (threshold 0 clustering).
    pub neighbor_class_count: usize,
}

// ======================================================================
// Operations
// ======================================================================

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold must be finite and non-negative, got {threshold}"
        )));
    }
    Ok(())
}

fn disagree_count(a: &[RegionIndex], b: &[RegionIndex]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

/// Whether the two networks are equivalent at sample resolution: estimated
/// distance at most `threshold` on the shared samples.
pub fn same_class(
    w: &NetworkParams,
    w2: &NetworkParams,
    samples: &SampleSet,
    threshold: f64,
) -> Result<bool> {
    check_threshold(threshold)?;
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample set".into()));
    }
    let d = crate::metric::d_mu_disagreement(w, w2, samples, 0.0)?;
    Ok(d.value <= threshold)
}

/// Greedy leader clustering in input order: each network joins the first
/// representative within `threshold`, else founds a new class.
/// Deterministic given the input order.
pub fn cluster_classes(
    nets: &[NetworkParams],
    samples: &SampleSet,
    threshold: f64,
) -> Result<ClassPartition> {
    check_threshold(threshold)?;
    if nets.is_empty() {
        return Err(Error::InvalidArgument("empty network list".into()));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample set".into()));
    }
    let arrays = index_arrays(nets, samples)?;
    let n = samples.len() as f64;
    let mut rep_indices: Vec<usize> = Vec::new();
    let mut assignment = vec![0usize; nets.len()];
    for i in 0..nets.len() {
        let found = rep_indices.iter().position(|&r| {
            disagree_count(&arrays[i], &arrays[r]) as f64 / n <= threshold
        });
        assignment[i] = match found {
            Some(class) => class,
            None => {
                rep_indices.push(i);
                rep_indices.len() - 1
            }
        };
    }
    Ok(ClassPartition {
        representatives: rep_indices.iter().map(|&r| nets[r].flatten()).collect(),
        assignment,
        threshold,
    })
}

/// Verifies the metric axioms for all pairs and triples on shared samples.
///
/// Distances for both orders of every pair are computed independently, and
/// all checks run on the underlying integer disagreement counts, so a
/// reported zero is exact rather than within rounding.
pub fn metric_axiom_suite(
    nets: &[NetworkParams],
    samples: &SampleSet,
) -> Result<MetricAxiomReport> {
    if nets.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "metric axiom suite needs at least 3 networks, got {}",
            nets.len()
        )));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample set".into()));
    }
    let arrays = index_arrays(nets, samples)?;
    let k = nets.len();
    let n = samples.len() as u64;
    // Full ordered count matrix, each direction evaluated on its own.
    let counts: Vec<Vec<u64>> = (0..k)
        .into_par_iter()
        .map(|i| (0..k).map(|j| disagree_count(&arrays[i], &arrays[j])).collect())
        .collect();
    let distance_matrix: Vec<Vec<f64>> = counts
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 / n as f64).collect())
        .collect();
    let mut nonnegativity_violations = 0;
    let mut self_distance_violations = 0;
    let mut symmetry_violations = 0;
    let mut triangle_violations = 0;
    for i in 0..k {
        if counts[i][i] != 0 {
            self_distance_violations += 1;
        }
        for j in 0..k {
            if counts[i][j] > n {
                nonnegativity_violations += 1;
            }
            if j > i && counts[i][j] != counts[j][i] {
                symmetry_violations += 1;
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                if i != j && j != l && i != l && counts[i][j] > counts[i][l] + counts[l][j] {
                    triangle_violations += 1;
                }
            }
        }
    }
    Ok(MetricAxiomReport {
        distance_matrix,
        n_samples: n,
        pairs_checked: k * (k - 1) / 2,
        triples_checked: k * (k - 1) * (k - 2) / 6,
        nonnegativity_violations,
        self_distance_violations,
        symmetry_violations,
        triangle_violations,
    })
}

/// Samples neighbors uniformly from the parameter ball around `center` and
/// measures how far the quotient point moves.
pub fn continuity_probe(
    center: &NetworkParams,
    radius: f64,
    n_neighbors: usize,
    samples: &SampleSet,
    seed: u64,
) -> Result<ContinuityProbeResult> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "probe radius must be finite and positive, got {radius}"
        )));
    }
    if n_neighbors == 0 {
        return Err(Error::InvalidArgument("need at least one neighbor".into()));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample set".into()));
    }
    let flat = center.flatten();
    let m = flat.len();
    let ball = InputMeasure::new(
        InputDomain::Ball { radius, dim: m },
        MeasureLaw::Uniform,
    )?;
    let offsets = ball.sample(n_neighbors, derive_seed(seed, "probe-neighbors"));
    let neighbors: Vec<NetworkParams> = offsets
        .iter()
        .map(|off| {
            let mut v = flat.clone();
            for (vi, oi) in v.iter_mut().zip(off) {
                *vi += oi;
            }
            NetworkParams::from_flat(center.layer_dims(), center.activation(), &v)
        })
        .collect::<Result<_>>()?;

    let center_idx = region_indices(center, samples, 0.0)?;
    let neighbor_arrays = index_arrays(&neighbors, samples)?;
    let n = samples.len() as f64;
    let distances: Vec<f64> = neighbor_arrays
        .iter()
        .map(|arr| disagree_count(&center_idx, arr) as f64 / n)
        .collect();
    let (argmax, &max_quotient_distance) = distances
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.total_cmp(b))
        .unwrap();
    let omega0 = center_idx.iter().filter(|r| r.is_tie()).count() as f64 / n;

    // Distinct classes among the neighbors, leader clustering at zero
    // threshold on the already-computed index arrays.
    let mut leaders: Vec<usize> = Vec::new();
    for (i, arr) in neighbor_arrays.iter().enumerate() {
        if !leaders
            .iter()
            .any(|&l| disagree_count(arr, &neighbor_arrays[l]) == 0)
        {
            leaders.push(i);
        }
    }

    Ok(ContinuityProbeResult {
        center: flat,
        radius,
        max_quotient_distance,
        argmax_neighbor: neighbors[argmax].flatten(),
        omega0_mass_center: omega0,
        neighbor_class_count: leaders.len(),
    })
}

/// Region-index arrays for every network, in parallel.
fn index_arrays(nets: &[NetworkParams], samples: &SampleSet) -> Result<Vec<Vec<RegionIndex>>> {
    let first = &nets[0];
    for net in &nets[1..] {
        if net.input_dim() != first.input_dim() || net.class_count() != first.class_count() {
            return Err(Error::DimensionMismatch {
                expected: first.input_dim(),
                got: net.input_dim(),
                context: "networks in one comparison must share input and output widths",
            });
        }
    }
    nets.par_iter()
        .map(|net| region_indices(net, samples, 0.0))
        .collect()
}
