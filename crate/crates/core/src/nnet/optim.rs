//! Adam optimizer state and update step.

use alloc::vec::Vec;

use crate::math;
use crate::nnet::{Gradients, LayerParams, NetworkParams};

/// First/second-moment accumulators for Adam, plus the step counter and the
/// optimizer constants. Buffers are shaped like the network parameters.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub m: Vec<LayerParams>,
    pub v: Vec<LayerParams>,
    pub t: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    /// Fresh state (all moments zero, `t = 0`) with the given constants.
    pub fn new(params: &NetworkParams, beta1: f64, beta2: f64, epsilon: f64) -> Self {
        let zeros = || -> Vec<LayerParams> {
            params
                .layers
                .iter()
                .map(|l| LayerParams::zeros(l.in_dim, l.out_dim))
                .collect()
        };
        AdamState {
            m: zeros(),
            v: zeros(),
            t: 0,
            beta1,
            beta2,
            epsilon,
        }
    }
}

/// One Adam update with bias correction, in place:
///
/// ```text
/// t <- t + 1
/// m <- b1 m + (1 - b1) g        v <- b2 v + (1 - b2) g^2
/// p <- p - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
/// ```
pub fn adam_step(params: &mut NetworkParams, state: &mut AdamState, grads: &Gradients, lr: f64) {
    debug_assert_eq!(params.layers.len(), grads.layers.len());
    state.t += 1;
    let bc1 = 1.0 - math::powi(state.beta1, state.t as i32);
    let bc2 = 1.0 - math::powi(state.beta2, state.t as i32);
    let (b1, b2, eps) = (state.beta1, state.beta2, state.epsilon);

    for (l, layer) in params.layers.iter_mut().enumerate() {
        let g = &grads.layers[l];
        let m = &mut state.m[l];
        let v = &mut state.v[l];
        update_buffer(&mut layer.weights, &g.weights, &mut m.weights, &mut v.weights, lr, b1, b2, eps, bc1, bc2);
        update_buffer(&mut layer.bias, &g.bias, &mut m.bias, &mut v.bias, lr, b1, b2, eps, bc1, bc2);
    }
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn update_buffer(
    p: &mut [f64],
    g: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    b1: f64,
    b2: f64,
    eps: f64,
    bc1: f64,
    bc2: f64,
) {
    for i in 0..p.len() {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        p[i] -= lr * m_hat / (math::sqrt(v_hat) + eps);
    }
}
