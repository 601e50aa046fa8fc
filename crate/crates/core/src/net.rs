//! Feedforward classifier networks and their flat parameter encoding.
//!
//! A network with layer widths `(n_0, ..., n_{L+1})` maps an input in R^{n_0}
//! through `L+1` affine layers, each followed by the same scalar activation,
//! to an output in R^{n_{L+1}}. The output coordinates score the `K = n_{L+1}`
//! classes; the predicted label is the argmax, with exact or tolerance-based
//! ties reported explicitly rather than broken arbitrarily.
//!
//! Networks are also points in R^m, `m = sum_l n_l (n_{l-1} + 1)`:
//! [`NetworkParams::flatten`] stacks each weight matrix column by column,
//! followed by that layer's bias, layers in order. All distance computations
//! on parameter space use this encoding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ======================================================================
// Activation functions
// ======================================================================

/// Scalar activation applied after every affine layer.
///
/// All variants are continuous and strictly increasing, which keeps the
/// argmax label invariant under the activation of the final layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Activation {
    Identity,
    Tanh,
    Logistic,
    LeakyRectifier { slope: f64 },
    Softplus,
}

impl Activation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Identity => z,
            Activation::Tanh => z.tanh(),
            Activation::Logistic => 1.0 / (1.0 + (-z).exp()),
            Activation::LeakyRectifier { slope } => {
                if z >= 0.0 {
                    z
                } else {
                    slope * z
                }
            }
            // max(z,0) + ln(1 + exp(-|z|)) equals ln(1 + exp(z)) without
            // overflowing for large |z|.
            Activation::Softplus => z.max(0.0) + (-z.abs()).exp().ln_1p(),
        }
    }

    /// A leaky rectifier is only strictly increasing for positive slope.
    pub fn validate(self) -> Result<()> {
        if let Activation::LeakyRectifier { slope } = self {
            if !(slope.is_finite() && slope > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "leaky rectifier slope must be finite and positive, got {slope}"
                )));
            }
        }
        Ok(())
    }
}

// ======================================================================
// Network parameters
// ======================================================================

/// One affine layer, stored row-major for cache-friendly evaluation.
#[derive(Debug, Clone, PartialEq)]
struct Layer {
    rows: usize,
    cols: usize,
    /// Row-major weight matrix, `rows x cols`.
    w: Vec<f64>,
    /// Bias, length `rows`.
    b: Vec<f64>,
}

/// Parameters of one feedforward classifier network.
///
/// Immutable after construction; evaluation never mutates, so a single
/// instance can be shared freely across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkParamsRepr", into = "NetworkParamsRepr")]
pub struct NetworkParams {
    layer_dims: Vec<usize>,
    activation: Activation,
    layers: Vec<Layer>,
}

/// JSON shape: weight matrices as nested row lists.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkParamsRepr {
    layer_dims: Vec<usize>,
    activation: Activation,
    weights: Vec<Vec<Vec<f64>>>,
    biases: Vec<Vec<f64>>,
}

impl TryFrom<NetworkParamsRepr> for NetworkParams {
    type Error = Error;

    fn try_from(repr: NetworkParamsRepr) -> Result<Self> {
        NetworkParams::new(repr.layer_dims, repr.activation, repr.weights, repr.biases)
    }
}

impl From<NetworkParams> for NetworkParamsRepr {
    fn from(p: NetworkParams) -> Self {
        let weights = p
            .layers
            .iter()
            .map(|l| l.w.chunks(l.cols).map(|row| row.to_vec()).collect())
            .collect();
        let biases = p.layers.iter().map(|l| l.b.clone()).collect();
        NetworkParamsRepr {
            layer_dims: p.layer_dims,
            activation: p.activation,
            weights,
            biases,
        }
    }
}

impl NetworkParams {
    /// Builds a network from per-layer weight matrices (as row lists) and
    /// biases, checking every shape against `layer_dims`.
    pub fn new(
        layer_dims: Vec<usize>,
        activation: Activation,
        weights: Vec<Vec<Vec<f64>>>,
        biases: Vec<Vec<f64>>,
    ) -> Result<Self> {
        validate_layer_dims(&layer_dims)?;
        activation.validate()?;
        let n_layers = layer_dims.len() - 1;
        if weights.len() != n_layers || biases.len() != n_layers {
            return Err(Error::InvalidShape(format!(
                "expected {n_layers} weight matrices and biases, got {} and {}",
                weights.len(),
                biases.len()
            )));
        }
        let mut layers = Vec::with_capacity(n_layers);
        for (l, (wm, bv)) in weights.into_iter().zip(biases).enumerate() {
            let rows = layer_dims[l + 1];
            let cols = layer_dims[l];
            if wm.len() != rows {
                return Err(Error::InvalidShape(format!(
                    "layer {l}: expected {rows} weight rows, got {}",
                    wm.len()
                )));
            }
            let mut w = Vec::with_capacity(rows * cols);
            for (r, row) in wm.into_iter().enumerate() {
                if row.len() != cols {
                    return Err(Error::InvalidShape(format!(
                        "layer {l}, row {r}: expected {cols} entries, got {}",
                        row.len()
                    )));
                }
                w.extend_from_slice(&row);
            }
            if bv.len() != rows {
                return Err(Error::InvalidShape(format!(
                    "layer {l}: expected bias of length {rows}, got {}",
                    bv.len()
                )));
            }
            if !w.iter().chain(&bv).all(|v| v.is_finite()) {
                return Err(Error::NonFinite("network parameters"));
            }
            layers.push(Layer { rows, cols, w, b: bv });
        }
        Ok(NetworkParams {
            layer_dims,
            activation,
            layers,
        })
    }

    /// Rebuilds a network from its flat parameter vector (the inverse of
    /// [`flatten`](Self::flatten)).
    pub fn from_flat(layer_dims: &[usize], activation: Activation, flat: &[f64]) -> Result<Self> {
        validate_layer_dims(layer_dims)?;
        activation.validate()?;
        let m = param_count(layer_dims);
        if flat.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: flat.len(),
                context: "flat parameter vector",
            });
        }
        if !flat.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("flat parameter vector"));
        }
        let mut layers = Vec::with_capacity(layer_dims.len() - 1);
        let mut off = 0;
        for l in 0..layer_dims.len() - 1 {
            let rows = layer_dims[l + 1];
            let cols = layer_dims[l];
            let mut w = vec![0.0; rows * cols];
            for col in 0..cols {
                for row in 0..rows {
                    w[row * cols + col] = flat[off];
                    off += 1;
                }
            }
            let b = flat[off..off + rows].to_vec();
            off += rows;
            layers.push(Layer { rows, cols, w, b });
        }
        Ok(NetworkParams {
            layer_dims: layer_dims.to_vec(),
            activation,
            layers,
        })
    }

    /// Flat view in R^m: per layer, the weight matrix stacked column by
    /// column, then the bias; layers concatenated in order.
    pub fn flatten(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(param_count(&self.layer_dims));
        for layer in &self.layers {
            for col in 0..layer.cols {
                for row in 0..layer.rows {
                    flat.push(layer.w[row * layer.cols + col]);
                }
            }
            flat.extend_from_slice(&layer.b);
        }
        flat
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    /// Number of classes `K` (width of the output layer).
    pub fn class_count(&self) -> usize {
        *self.layer_dims.last().unwrap()
    }

    /// Total parameter count `m`.
    pub fn param_count(&self) -> usize {
        param_count(&self.layer_dims)
    }

    /// Weight entry `(row, col)` of layer `l` (0-based everywhere).
    pub fn weight(&self, l: usize, row: usize, col: usize) -> f64 {
        let layer = &self.layers[l];
        layer.w[row * layer.cols + col]
    }

    /// Bias entry `row` of layer `l`.
    pub fn bias(&self, l: usize, row: usize) -> f64 {
        self.layers[l].b[row]
    }

    /// Output scores for one input.
    ///
    /// Allocates per call; use an [`Evaluator`] in inner loops.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut eval = Evaluator::new(self);
        Ok(eval.outputs(x).to_vec())
    }

    /// Predicted label set for one input.
    ///
    /// All classes whose score is within `tie_tol` of the maximum are
    /// reported; `is_tie` is set when that set has more than one element.
    /// With `tie_tol = 0` a tie means exact score equality.
    pub fn predict(&self, x: &[f64], tie_tol: f64) -> Result<LabelPrediction> {
        self.check_input(x)?;
        check_tie_tol(tie_tol)?;
        let mut eval = Evaluator::new(self);
        let out = eval.outputs(x);
        if out.iter().any(|v| v.is_nan()) {
            return Err(Error::NonFinite("network output"));
        }
        let max = out.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let labels: Vec<usize> = out
            .iter()
            .enumerate()
            .filter(|(_, &v)| v >= max - tie_tol)
            .map(|(j, _)| j + 1)
            .collect();
        let is_tie = labels.len() > 1;
        Ok(LabelPrediction { labels, is_tie })
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
                context: "network input",
            });
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("network input"));
        }
        Ok(())
    }
}

/// Predicted label set: 1-based class indices in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelPrediction {
    pub labels: Vec<usize>,
    pub is_tie: bool,
}

fn validate_layer_dims(layer_dims: &[usize]) -> Result<()> {
    if layer_dims.len() < 2 {
        return Err(Error::InvalidShape(format!(
            "need at least input and output widths, got {} entries",
            layer_dims.len()
        )));
    }
    if layer_dims.iter().any(|&d| d == 0) {
        return Err(Error::InvalidShape("zero-width layer".into()));
    }
    Ok(())
}

pub(crate) fn check_tie_tol(tie_tol: f64) -> Result<()> {
    if !(tie_tol.is_finite() && tie_tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tie tolerance must be finite and non-negative, got {tie_tol}"
        )));
    }
    Ok(())
}

/// Parameter count `m = sum_l n_l (n_{l-1} + 1)` for the given widths.
pub fn param_count(layer_dims: &[usize]) -> usize {
    layer_dims
        .windows(2)
        .map(|w| w[1] * (w[0] + 1))
        .sum()
}

/// Euclidean distance between two flat parameter vectors.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
            context: "flat parameter vectors",
        });
    }
    if !a.iter().chain(b).all(|v| v.is_finite()) {
        return Err(Error::NonFinite("flat parameter vector"));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

// ======================================================================
// Reusable evaluator
// ======================================================================

/// Scratch-buffer evaluator for repeated forward passes.
///
/// Holds two ping-pong buffers sized to the widest layer, so evaluating a
/// point allocates nothing. Not `Sync`: give each thread its own.
pub struct Evaluator<'a> {
    params: &'a NetworkParams,
    buf_a: Vec<f64>,
    buf_b: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(params: &'a NetworkParams) -> Self {
        let width = params.layer_dims.iter().copied().max().unwrap();
        Evaluator {
            params,
            buf_a: vec![0.0; width],
            buf_b: vec![0.0; width],
        }
    }

    /// Output scores for `x`. The slice is valid until the next call.
    ///
    /// Panics on input dimension mismatch; validate dimensions once at the
    /// batch boundary instead of per point.
    pub fn outputs(&mut self, x: &[f64]) -> &[f64] {
        let params = self.params;
        assert_eq!(x.len(), params.input_dim(), "network input dimension");
        let act = params.activation;
        let mut cur = std::mem::take(&mut self.buf_a);
        let mut nxt = std::mem::take(&mut self.buf_b);
        cur[..x.len()].copy_from_slice(x);
        for layer in &params.layers {
            for row in 0..layer.rows {
                let wrow = &layer.w[row * layer.cols..(row + 1) * layer.cols];
                let mut z = layer.b[row];
                for (wv, xv) in wrow.iter().zip(&cur[..layer.cols]) {
                    z += wv * xv;
                }
                nxt[row] = act.apply(z);
            }
            std::mem::swap(&mut cur, &mut nxt);
        }
        self.buf_a = cur;
        self.buf_b = nxt;
        &self.buf_a[..params.class_count()]
    }
}
