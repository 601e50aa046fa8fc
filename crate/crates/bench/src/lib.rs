//! Shared fixtures for the criterion benches: the toy networks and the two
//! reference measures, built the same way the CLI builds them.

use dmetric_core::{Activation, InputDomain, InputMeasure, MeasureLaw, NetworkParams};

pub const TOY_W1: [f64; 6] = [0.8, 1.0, 1.0, 1.0, 0.9, 1.0];
pub const TOY_W3: [f64; 6] = [-2.0, 1.0, 1.0, 1.0, -1.9, 1.0];

pub fn toy(flat: &[f64]) -> NetworkParams {
    NetworkParams::from_flat(&[2, 2], Activation::Identity, flat).expect("toy network")
}

/// A deeper network with the same 2-D input, for non-oracle paths.
pub fn wide_net(seed_like: f64) -> NetworkParams {
    let flat: Vec<f64> = (0..param_len(&[2, 8, 4]))
        .map(|i| ((i as f64 + seed_like) * 0.37).sin())
        .collect();
    NetworkParams::from_flat(&[2, 8, 4], Activation::Tanh, &flat).expect("wide network")
}

fn param_len(dims: &[usize]) -> usize {
    dims.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

pub fn uniform_box() -> InputMeasure {
    InputMeasure::new(
        InputDomain::Box { bounds: vec![[-3.0, 3.0], [-3.0, 3.0]] },
        MeasureLaw::Uniform,
    )
    .expect("uniform box")
}

pub fn gaussian_box() -> InputMeasure {
    InputMeasure::new(
        InputDomain::Box { bounds: vec![[-3.0, 3.0], [-3.0, 3.0]] },
        MeasureLaw::TruncatedGaussian { mean: vec![0.0, 0.0] },
    )
    .expect("gaussian box")
}
