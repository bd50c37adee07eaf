//! Dense feedforward networks, from scratch: architecture and parameter
//! types, seeded initialization, and forward evaluation.
//!
//! A network is the composition of affine maps `W_l z + b_l` followed by a
//! component-wise activation; hidden layers share one activation and the
//! output layer is always the identity, which is the usual choice for
//! regression-style surrogates. Parameters are plain `f64` buffers so a
//! trained network is `Send + Sync` and can be evaluated concurrently.

mod backprop;
mod optim;
mod train;

pub use backprop::{loss_and_gradient, Gradients};
pub use optim::{adam_step, AdamState};
pub use train::{train, EpochRecord, LrSchedule, TrainHistory, TrainingConfig};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input_err, Result};
use crate::math;

/// Component-wise activation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Activation {
    ReLU,
    Tanh,
    Sigmoid,
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::ReLU => {
                if z > 0.0 {
                    z
                } else {
                    0.0
                }
            }
            Activation::Tanh => math::tanh(z),
            Activation::Sigmoid => 1.0 / (1.0 + math::exp(-z)),
            Activation::Identity => z,
        }
    }

    /// Derivative with respect to the pre-activation. For ReLU the kink at
    /// zero takes the subgradient 0.
    #[inline]
    pub fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::ReLU => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => {
                let t = math::tanh(z);
                1.0 - t * t
            }
            Activation::Sigmoid => {
                let s = 1.0 / (1.0 + math::exp(-z));
                s * (1.0 - s)
            }
            Activation::Identity => 1.0,
        }
    }
}

/// Network shape: layer widths plus the activation assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Architecture {
    pub input_width: usize,
    pub hidden_widths: Vec<usize>,
    pub output_width: usize,
    pub hidden_activation: Activation,
    /// Always [`Activation::Identity`]; kept explicit so checkpoints are
    /// self-describing.
    pub output_activation: Activation,
}

impl Architecture {
    pub fn new(
        input_width: usize,
        hidden_widths: Vec<usize>,
        output_width: usize,
        hidden_activation: Activation,
    ) -> Result<Self> {
        let arch = Architecture {
            input_width,
            hidden_widths,
            output_width,
            hidden_activation,
            output_activation: Activation::Identity,
        };
        arch.validate()?;
        Ok(arch)
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_width == 0 || self.output_width == 0 {
            return input_err("architecture widths must be at least 1");
        }
        if self.hidden_widths.is_empty() {
            return input_err("architecture needs at least one hidden layer");
        }
        if self.hidden_widths.iter().any(|&w| w == 0) {
            return input_err("hidden layer widths must be at least 1");
        }
        if self.output_activation != Activation::Identity {
            return input_err("output activation must be the identity");
        }
        Ok(())
    }

    /// Widths of every layer including input and output:
    /// `n_0, n_1, ..., n_{L+1}`.
    pub fn layer_widths(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.hidden_widths.len() + 2);
        w.push(self.input_width);
        w.extend_from_slice(&self.hidden_widths);
        w.push(self.output_width);
        w
    }

    /// Number of parameterized layers (`L + 1`).
    pub fn n_layers(&self) -> usize {
        self.hidden_widths.len() + 1
    }

    pub fn activation_of_layer(&self, layer: usize) -> Activation {
        if layer + 1 == self.n_layers() {
            self.output_activation
        } else {
            self.hidden_activation
        }
    }

    pub fn n_parameters(&self) -> usize {
        let w = self.layer_widths();
        w.windows(2).map(|p| p[0] * p[1] + p[1]).sum()
    }
}

/// One affine layer: row-major weight matrix (`out_dim x in_dim`) and bias.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayerParams {
    pub in_dim: usize,
    pub out_dim: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl LayerParams {
    pub fn zeros(in_dim: usize, out_dim: usize) -> Self {
        LayerParams {
            in_dim,
            out_dim,
            weights: vec![0.0; in_dim * out_dim],
            bias: vec![0.0; out_dim],
        }
    }

    /// `out = W z + b`. Caller guarantees the shapes.
    #[inline]
    pub(super) fn affine_into(&self, z: &[f64], out: &mut [f64]) {
        debug_assert_eq!(z.len(), self.in_dim);
        debug_assert_eq!(out.len(), self.out_dim);
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.weights[r * self.in_dim..(r + 1) * self.in_dim];
            let mut acc = self.bias[r];
            for (w, x) in row.iter().zip(z) {
                acc += w * x;
            }
            *o = acc;
        }
    }
}

/// Full parameter set of a network, together with its architecture.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NetworkParams {
    pub arch: Architecture,
    pub layers: Vec<LayerParams>,
}

impl NetworkParams {
    /// All-zero parameters for the given architecture.
    pub fn zeros(arch: &Architecture) -> Result<Self> {
        arch.validate()?;
        let widths = arch.layer_widths();
        let layers = widths
            .windows(2)
            .map(|p| LayerParams::zeros(p[0], p[1]))
            .collect();
        Ok(NetworkParams {
            arch: arch.clone(),
            layers,
        })
    }

    /// Checks that layer shapes chain correctly and match the architecture.
    pub fn validate(&self) -> Result<()> {
        self.arch.validate()?;
        let widths = self.arch.layer_widths();
        if self.layers.len() != self.arch.n_layers() {
            return input_err("layer count does not match architecture");
        }
        for (l, layer) in self.layers.iter().enumerate() {
            if layer.in_dim != widths[l] || layer.out_dim != widths[l + 1] {
                return input_err(format!("layer {l} has mismatched dimensions"));
            }
            if layer.weights.len() != layer.in_dim * layer.out_dim
                || layer.bias.len() != layer.out_dim
            {
                return input_err(format!("layer {l} has mismatched buffer lengths"));
            }
        }
        Ok(())
    }

    pub fn n_parameters(&self) -> usize {
        self.arch.n_parameters()
    }
}

/// Seeded network initialization: He-uniform weights, zero biases.
///
/// Layer `l` draws its weights from `U(-b, b)` with `b = sqrt(6 / n_{l-1})`,
/// the usual scaling for ReLU stacks; biases start at zero. Deterministic
/// for a given seed (ChaCha8 stream, weights drawn row-major, layer by
/// layer).
pub fn init_network(arch: &Architecture, seed: u64) -> Result<NetworkParams> {
    arch.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(init_with_rng(arch, &mut rng))
}

pub(super) fn init_with_rng(arch: &Architecture, rng: &mut ChaCha8Rng) -> NetworkParams {
    let widths = arch.layer_widths();
    let layers = widths
        .windows(2)
        .map(|p| {
            let (fan_in, fan_out) = (p[0], p[1]);
            let bound = math::sqrt(6.0 / fan_in as f64);
            let mut layer = LayerParams::zeros(fan_in, fan_out);
            for w in layer.weights.iter_mut() {
                *w = bound * (2.0 * rng.gen::<f64>() - 1.0);
            }
            layer
        })
        .collect();
    NetworkParams {
        arch: arch.clone(),
        layers,
    }
}

/// Evaluates the network at `input`.
///
/// Errors if the input length does not match the architecture.
pub fn forward(params: &NetworkParams, input: &[f64]) -> Result<Vec<f64>> {
    if input.len() != params.arch.input_width {
        return input_err(format!(
            "forward: input length {} but network expects {}",
            input.len(),
            params.arch.input_width
        ));
    }
    let mut ws = Workspace::for_arch(&params.arch);
    forward_into(params, input, &mut ws);
    Ok(ws.output().to_vec())
}

/// Scalar-output convenience used in the Monte Carlo hot path.
///
/// Panics in debug builds if the network is not `d -> 1`.
pub fn forward_scalar(params: &NetworkParams, input: &[f64], ws: &mut Workspace) -> f64 {
    debug_assert_eq!(params.arch.output_width, 1);
    forward_into(params, input, ws);
    ws.output()[0]
}

/// Per-thread evaluation scratch: pre-activations and activations for every
/// layer. Reused across calls to avoid allocation in hot loops.
#[derive(Debug, Clone)]
pub struct Workspace {
    /// `a[0]` holds the input; `a[l]` the activation of layer `l`.
    pub(super) a: Vec<Vec<f64>>,
    /// `z[l]` holds the pre-activation of layer `l + 1`'s input, i.e.
    /// `z[l] = W_{l+1} a[l] + b_{l+1}` before the activation is applied.
    pub(super) z: Vec<Vec<f64>>,
}

impl Workspace {
    pub fn for_arch(arch: &Architecture) -> Self {
        let widths = arch.layer_widths();
        let a = widths.iter().map(|&w| vec![0.0; w]).collect();
        let z = widths[1..].iter().map(|&w| vec![0.0; w]).collect();
        Workspace { a, z }
    }

    pub(super) fn output(&self) -> &[f64] {
        self.a.last().expect("workspace has at least the input slot")
    }
}

/// Forward pass that records every layer's pre-activation and activation in
/// the workspace (needed by backpropagation).
pub(super) fn forward_into(params: &NetworkParams, input: &[f64], ws: &mut Workspace) {
    ws.a[0].copy_from_slice(input);
    for (l, layer) in params.layers.iter().enumerate() {
        let (before, after) = ws.a.split_at_mut(l + 1);
        layer.affine_into(&before[l], &mut ws.z[l]);
        let act = params.arch.activation_of_layer(l);
        for (a, &z) in after[0].iter_mut().zip(ws.z[l].iter()) {
            *a = act.apply(z);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relu_arch(hidden: &[usize]) -> Architecture {
        Architecture::new(1, hidden.to_vec(), 1, Activation::ReLU).unwrap()
    }

    #[test]
    fn init_shapes_match_architecture() {
        // 1 -> [20,20,20,20] -> 1 must produce 20x1, 20x20 x3, 1x20
        let arch = relu_arch(&[20, 20, 20, 20]);
        let params = init_network(&arch, 0).unwrap();
        let dims: Vec<(usize, usize)> = params.layers.iter().map(|l| (l.out_dim, l.in_dim)).collect();
        assert_eq!(dims, [(20, 1), (20, 20), (20, 20), (20, 20), (1, 20)]);
        params.validate().unwrap();
    }

    #[test]
    fn init_is_deterministic() {
        let arch = relu_arch(&[20, 20, 20, 20]);
        let a = init_network(&arch, 7).unwrap();
        let b = init_network(&arch, 7).unwrap();
        assert_eq!(a, b);
        let c = init_network(&arch, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn init_biases_are_zero() {
        let arch = relu_arch(&[5, 5]);
        let params = init_network(&arch, 3).unwrap();
        for layer in &params.layers {
            assert!(layer.bias.iter().all(|&b| b == 0.0));
        }
    }

    #[test]
    fn first_layer_weight_mean_is_unbiased_over_seeds() {
        // Empirical mean of W_1 entries over 1e4 seeds should be within 3
        // standard errors of 0; entries are U(-b, b) with b = sqrt(6), so
        // Var = b^2 / 3 = 2.
        let arch = relu_arch(&[20, 20, 20, 20]);
        let n_seeds = 10_000usize;
        let mut sum = 0.0;
        let mut count = 0usize;
        for seed in 0..n_seeds as u64 {
            let params = init_network(&arch, seed).unwrap();
            for &w in &params.layers[0].weights {
                sum += w;
                count += 1;
            }
        }
        let mean = sum / count as f64;
        let se = (2.0 / count as f64).sqrt();
        assert!(
            mean.abs() <= 3.0 * se,
            "first-layer weight mean {mean} exceeds 3 standard errors {}",
            3.0 * se
        );
    }

    #[test]
    fn forward_zero_params_gives_zero_output() {
        let arch = relu_arch(&[4, 4]);
        let params = NetworkParams::zeros(&arch).unwrap();
        let out = forward(&params, &[123.456]).unwrap();
        assert_eq!(out, [0.0]);
    }

    #[test]
    fn forward_single_hidden_neuron_hand_case() {
        // W1=[1], b1=[-2], ReLU; W2=[3], b2=[1]; input 5 -> 3*max(0,3)+1 = 10
        let arch = relu_arch(&[1]);
        let mut params = NetworkParams::zeros(&arch).unwrap();
        params.layers[0].weights[0] = 1.0;
        params.layers[0].bias[0] = -2.0;
        params.layers[1].weights[0] = 3.0;
        params.layers[1].bias[0] = 1.0;
        let out = forward(&params, &[5.0]).unwrap();
        assert_eq!(out, [10.0]);
        // below the kink the hidden neuron is clamped to zero
        let out = forward(&params, &[1.0]).unwrap();
        assert_eq!(out, [1.0]);
    }

    #[test]
    fn forward_rejects_wrong_input_length() {
        let arch = relu_arch(&[3]);
        let params = NetworkParams::zeros(&arch).unwrap();
        assert!(forward(&params, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn tanh_forward_matches_independent_evaluator() {
        // Independent layer-by-layer oracle using std float functions.
        fn oracle(params: &NetworkParams, input: &[f64]) -> Vec<f64> {
            let mut a: Vec<f64> = input.to_vec();
            let last = params.layers.len() - 1;
            for (l, layer) in params.layers.iter().enumerate() {
                let mut next = alloc::vec![0.0; layer.out_dim];
                for r in 0..layer.out_dim {
                    let mut acc = layer.bias[r];
                    for c in 0..layer.in_dim {
                        acc += layer.weights[r * layer.in_dim + c] * a[c];
                    }
                    next[r] = if l == last { acc } else { acc.tanh() };
                }
                a = next;
            }
            a
        }

        let arch = Architecture::new(3, alloc::vec![10, 7, 5], 2, Activation::Tanh).unwrap();
        let params = init_network(&arch, 42).unwrap();
        let mut rng = <ChaCha8Rng as SeedableRng>::seed_from_u64(99);
        for _ in 0..100 {
            let input: Vec<f64> = (0..3).map(|_| 4.0 * rng.gen::<f64>() - 2.0).collect();
            let got = forward(&params, &input).unwrap();
            let want = oracle(&params, &input);
            for (g, w) in got.iter().zip(&want) {
                let denom = w.abs().max(1e-30);
                assert!(
                    ((g - w) / denom).abs() < 1e-12,
                    "forward {g} vs oracle {w}"
                );
            }
        }
    }

    #[test]
    fn concurrent_forward_matches_sequential() {
        use std::sync::Arc;
        use std::thread;
        use std::vec::Vec as StdVec;

        let arch = relu_arch(&[16, 16]);
        let params = Arc::new(init_network(&arch, 11).unwrap());
        let inputs: StdVec<f64> = (0..64).map(|i| (i as f64) / 7.0 - 4.0).collect();

        let sequential: StdVec<f64> = inputs
            .iter()
            .map(|&x| forward(&params, &[x]).unwrap()[0])
            .collect();

        let mut handles = StdVec::new();
        for chunk in inputs.chunks(16) {
            let p = Arc::clone(&params);
            let chunk = chunk.to_vec();
            handles.push(thread::spawn(move || {
                chunk
                    .iter()
                    .map(|&x| forward(&p, &[x]).unwrap()[0])
                    .collect::<StdVec<f64>>()
            }));
        }
        let mut parallel = StdVec::new();
        for h in handles {
            parallel.extend(h.join().unwrap());
        }
        for (s, p) in sequential.iter().zip(&parallel) {
            assert_eq!(s.to_bits(), p.to_bits());
        }
    }

    #[test]
    fn invalid_architectures_are_rejected() {
        assert!(Architecture::new(1, alloc::vec![], 1, Activation::ReLU).is_err());
        assert!(Architecture::new(0, alloc::vec![4], 1, Activation::ReLU).is_err());
        assert!(Architecture::new(1, alloc::vec![4, 0], 1, Activation::ReLU).is_err());
    }
}
