//! Quadratic loss and its gradient via backpropagation.
//!
//! The loss over a batch is the mean of the squared Euclidean error,
//! `(1/B) sum_i ||f(x_i) - t_i||^2`, and the gradient is taken with respect
//! to every weight and bias.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, Result};
use crate::nnet::{forward_into, LayerParams, NetworkParams, Workspace};

/// Gradient buffer shaped exactly like a network's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerParams>,
}

impl Gradients {
    pub fn zeros_like(params: &NetworkParams) -> Self {
        Gradients {
            layers: params
                .layers
                .iter()
                .map(|l| LayerParams::zeros(l.in_dim, l.out_dim))
                .collect(),
        }
    }

    pub fn fill_zero(&mut self) {
        for layer in &mut self.layers {
            layer.weights.iter_mut().for_each(|w| *w = 0.0);
            layer.bias.iter_mut().for_each(|b| *b = 0.0);
        }
    }
}

/// Scratch for the backward sweep: two delta buffers sized to the widest
/// layer, reused across samples.
pub(super) struct BackpropScratch {
    delta: Vec<f64>,
    delta_prev: Vec<f64>,
}

impl BackpropScratch {
    pub(super) fn for_params(params: &NetworkParams) -> Self {
        let max_width = params
            .arch
            .layer_widths()
            .into_iter()
            .max()
            .unwrap_or(1);
        BackpropScratch {
            delta: vec![0.0; max_width],
            delta_prev: vec![0.0; max_width],
        }
    }
}

/// Mean squared-error loss and its gradient over a batch of
/// `(input, target)` pairs.
///
/// Errors on an empty batch or dimension-inconsistent pairs.
pub fn loss_and_gradient(
    params: &NetworkParams,
    batch: &[(Vec<f64>, Vec<f64>)],
) -> Result<(f64, Gradients)> {
    if batch.is_empty() {
        return input_err("loss_and_gradient: empty batch");
    }
    let (n_in, n_out) = (params.arch.input_width, params.arch.output_width);
    for (i, (x, t)) in batch.iter().enumerate() {
        if x.len() != n_in || t.len() != n_out {
            return input_err(format!(
                "loss_and_gradient: pair {i} has shape ({}, {}), expected ({n_in}, {n_out})",
                x.len(),
                t.len()
            ));
        }
    }
    let mut grads = Gradients::zeros_like(params);
    let mut ws = Workspace::for_arch(&params.arch);
    let mut scratch = BackpropScratch::for_params(params);
    let loss = accumulate_batch(params, batch.iter(), batch.len(), &mut grads, &mut ws, &mut scratch);
    Ok((loss, grads))
}

/// Core batch sweep; assumes validated shapes and pre-zeroed `grads`.
/// Returns the batch-mean loss.
pub(super) fn accumulate_batch<'a>(
    params: &NetworkParams,
    samples: impl Iterator<Item = &'a (Vec<f64>, Vec<f64>)>,
    batch_len: usize,
    grads: &mut Gradients,
    ws: &mut Workspace,
    scratch: &mut BackpropScratch,
) -> f64 {
    let inv_b = 1.0 / batch_len as f64;
    let mut loss_sum = 0.0;
    for (input, target) in samples {
        forward_into(params, input, ws);
        loss_sum += backward_one(params, target, inv_b, ws, scratch, grads);
    }
    loss_sum * inv_b
}

/// Backward pass for the sample currently held in the workspace.
/// Accumulates `inv_b`-scaled gradients; returns the sample's squared error.
fn backward_one(
    params: &NetworkParams,
    target: &[f64],
    inv_b: f64,
    ws: &Workspace,
    scratch: &mut BackpropScratch,
    grads: &mut Gradients,
) -> f64 {
    let n_layers = params.layers.len();
    let output = ws.a.last().expect("workspace output");

    // d/da ||a - t||^2 = 2 (a - t); the output activation is the identity.
    let mut sq_err = 0.0;
    {
        let delta = &mut scratch.delta[..output.len()];
        for ((d, &a), &t) in delta.iter_mut().zip(output.iter()).zip(target) {
            let r = a - t;
            sq_err += r * r;
            *d = 2.0 * r * inv_b;
        }
    }

    for l in (0..n_layers).rev() {
        let layer = &params.layers[l];
        let glayer = &mut grads.layers[l];
        let a_prev = &ws.a[l];
        let delta = &scratch.delta[..layer.out_dim];

        for (r, &d) in delta.iter().enumerate() {
            glayer.bias[r] += d;
            let grow = &mut glayer.weights[r * layer.in_dim..(r + 1) * layer.in_dim];
            for (g, &a) in grow.iter_mut().zip(a_prev) {
                *g += d * a;
            }
        }

        if l > 0 {
            // delta_prev = (W_l^T delta) .* act'(z_{l-1})
            let act = params.arch.activation_of_layer(l - 1);
            let z_prev = &ws.z[l - 1];
            let dp = &mut scratch.delta_prev[..layer.in_dim];
            dp.iter_mut().for_each(|d| *d = 0.0);
            for (r, &d) in delta.iter().enumerate() {
                let row = &layer.weights[r * layer.in_dim..(r + 1) * layer.in_dim];
                for (acc, &w) in dp.iter_mut().zip(row) {
                    *acc += w * d;
                }
            }
            for (d, &z) in dp.iter_mut().zip(z_prev) {
                *d *= act.derivative(z);
            }
            core::mem::swap(&mut scratch.delta, &mut scratch.delta_prev);
        }
    }
    sq_err
}
