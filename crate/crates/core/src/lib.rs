//! Probabilistic distance between classifier networks.
//!
//! Two networks with the same input space and label set are compared by the
//! probability that a random input drawn from a fixed measure is labeled
//! differently. This crate provides the building blocks for that comparison:
//!
//! * [`net`]: feedforward network parameters, evaluation, and the flat
//!   parameter-vector encoding used to treat networks as points in R^m.
//! * [`measure`]: input domains (balls, boxes), the uniform and truncated
//!   Gaussian laws on them, deterministic sampling, and density bounds.
//! * [`metric`]: the disagreement distance itself, Monte Carlo estimators,
//!   tie-region mass, and generalization error against a ground truth.
//! * [`oracle`]: closed-form and quadrature references for the single-layer
//!   two-class case, used to validate the estimators.
//! * [`quotient`]: equivalence classes of networks under zero distance,
//!   metric-axiom checking, and continuity probes around a center network.
//!
//! All operations are pure: nothing here mutates shared state, and every
//! randomized routine is a deterministic function of an explicit seed, so
//! results are reproducible across runs and thread counts.

pub mod measure;
pub mod metric;
pub mod net;
pub mod oracle;
pub mod quotient;
pub mod rng;

mod error;

pub use error::{Error, Result};
pub use measure::{InputDomain, InputMeasure, MeasureLaw, SampleSet};
pub use metric::{
    d_mu_disagreement, d_mu_symdiff, disagreement_from_indices, generalization_error,
    omega0_mass, region_index, region_indices, symdiff_from_indices, tie_diagnostics,
    DistanceEstimate, EstimatorKind, RegionIndex, TieDiagnostics,
};
pub use net::{
    euclidean_distance, param_count, Activation, Evaluator, LabelPrediction, NetworkParams,
};
pub use oracle::{exact_disagreement, halfplane_of, quad_disagreement, HalfPlane};
pub use quotient::{
    cluster_classes, continuity_probe, metric_axiom_suite, same_class, ClassPartition,
    ContinuityProbeResult, MetricAxiomReport,
};
