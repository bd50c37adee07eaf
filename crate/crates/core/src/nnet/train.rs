//! Mini-batch Adam training loop with an optional validation split and
//! plateau-driven learning-rate reduction.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{config_err, Error, Result};
use crate::nnet::backprop::{accumulate_batch, BackpropScratch, Gradients};
use crate::nnet::{adam_step, forward_into, init_with_rng, AdamState, Architecture, NetworkParams, Workspace};

/// Learning-rate schedules. `ReduceOnPlateau` multiplies the rate by
/// `factor` whenever the validation loss fails to improve for `patience`
/// consecutive epochs; the rate never drops below [`LR_FLOOR`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LrSchedule {
    Fixed,
    ReduceOnPlateau { patience: usize, factor: f64 },
}

/// Lower bound for the adapted learning rate.
pub const LR_FLOOR: f64 = 1e-5;

/// Hyper-parameters for [`train`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainingConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    /// Fraction of the dataset held out for validation, in `[0, 1)`.
    pub validation_fraction: f64,
    pub lr_schedule: LrSchedule,
}

impl TrainingConfig {
    pub fn new(epochs: usize, batch_size: usize, learning_rate: f64) -> Self {
        TrainingConfig {
            epochs,
            batch_size,
            learning_rate,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            validation_fraction: 0.0,
            lr_schedule: LrSchedule::Fixed,
        }
    }

    pub fn with_validation(mut self, fraction: f64, patience: usize, factor: f64) -> Self {
        self.validation_fraction = fraction;
        self.lr_schedule = LrSchedule::ReduceOnPlateau { patience, factor };
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return config_err("epochs must be at least 1");
        }
        if self.batch_size == 0 {
            return config_err("batch size must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return config_err("learning rate must be positive and finite");
        }
        if !(0.0..1.0).contains(&self.adam_beta1) || !(0.0..1.0).contains(&self.adam_beta2) {
            return config_err("adam betas must lie in [0, 1)");
        }
        if !(self.adam_epsilon > 0.0) {
            return config_err("adam epsilon must be positive");
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return config_err("validation fraction must lie in [0, 1)");
        }
        if let LrSchedule::ReduceOnPlateau { patience, factor } = self.lr_schedule {
            if patience == 0 {
                return config_err("plateau patience must be at least 1");
            }
            if !(0.0 < factor && factor < 1.0) {
                return config_err("plateau factor must lie in (0, 1)");
            }
            if self.validation_fraction == 0.0 {
                return config_err("ReduceOnPlateau requires a validation split");
            }
        }
        Ok(())
    }
}

/// Losses recorded after one epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpochRecord {
    pub train_loss: f64,
    pub val_loss: Option<f64>,
    pub learning_rate: f64,
}

/// Per-epoch training and validation losses.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
}

impl TrainHistory {
    pub fn final_train_loss(&self) -> f64 {
        self.epochs.last().map_or(f64::NAN, |e| e.train_loss)
    }

    pub fn final_val_loss(&self) -> Option<f64> {
        self.epochs.last().and_then(|e| e.val_loss)
    }
}

/// Trains a freshly initialized network on `data` with mini-batch Adam.
///
/// One ChaCha8 stream seeded by `seed` drives initialization, the
/// validation split, and every epoch's shuffle, so a (seed, data, config)
/// triple fully determines the result. The last incomplete mini-batch of
/// each epoch is kept, so every datum is seen once per epoch. A non-finite
/// loss aborts with [`Error::NonFiniteLoss`].
pub fn train(
    arch: &Architecture,
    data: &[(Vec<f64>, Vec<f64>)],
    cfg: &TrainingConfig,
    seed: u64,
) -> Result<(NetworkParams, TrainHistory)> {
    arch.validate()?;
    cfg.validate()?;
    for (i, (x, t)) in data.iter().enumerate() {
        if x.len() != arch.input_width || t.len() != arch.output_width {
            return config_err(format!("training pair {i} does not match the architecture"));
        }
    }

    let n = data.len();
    let val_len = ((n as f64) * cfg.validation_fraction) as usize;
    let train_len = n - val_len;
    if train_len < cfg.batch_size {
        return config_err(format!(
            "training split of {train_len} points cannot fill a batch of {}",
            cfg.batch_size
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = init_with_rng(arch, &mut rng);
    let mut state = AdamState::new(&params, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_epsilon);
    let mut grads = Gradients::zeros_like(&params);
    let mut ws = Workspace::for_arch(arch);
    let mut scratch = BackpropScratch::for_params(&params);

    // Split once: a seeded shuffle of all indices, validation at the tail.
    let mut perm: Vec<usize> = (0..n).collect();
    shuffle(&mut perm, &mut rng);
    let (train_idx, val_idx) = perm.split_at(train_len);
    let mut train_order: Vec<usize> = train_idx.to_vec();

    let mut lr = cfg.learning_rate;
    let mut best_val = f64::INFINITY;
    let mut stale_epochs = 0usize;
    let mut history = TrainHistory::default();

    for epoch in 0..cfg.epochs {
        shuffle(&mut train_order, &mut rng);
        let mut loss_weighted = 0.0;
        for chunk in train_order.chunks(cfg.batch_size) {
            grads.fill_zero();
            let batch_loss = accumulate_batch(
                &params,
                chunk.iter().map(|&i| &data[i]),
                chunk.len(),
                &mut grads,
                &mut ws,
                &mut scratch,
            );
            if !batch_loss.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, loss: batch_loss });
            }
            adam_step(&mut params, &mut state, &grads, lr);
            loss_weighted += batch_loss * chunk.len() as f64;
        }
        let train_loss = loss_weighted / train_len as f64;

        let val_loss = if val_len > 0 {
            let v = dataset_loss(&params, data, val_idx, &mut ws);
            if !v.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, loss: v });
            }
            Some(v)
        } else {
            None
        };

        if let (LrSchedule::ReduceOnPlateau { patience, factor }, Some(v)) =
            (cfg.lr_schedule, val_loss)
        {
            if v < best_val {
                best_val = v;
                stale_epochs = 0;
            } else {
                stale_epochs += 1;
                if stale_epochs >= patience {
                    lr = (lr * factor).max(LR_FLOOR);
                    stale_epochs = 0;
                }
            }
        }

        history.epochs.push(EpochRecord {
            train_loss,
            val_loss,
            learning_rate: lr,
        });
    }

    Ok((params, history))
}

/// Mean squared error of the current parameters over the indexed subset.
fn dataset_loss(
    params: &NetworkParams,
    data: &[(Vec<f64>, Vec<f64>)],
    idx: &[usize],
    ws: &mut Workspace,
) -> f64 {
    let mut sum = 0.0;
    for &i in idx {
        let (input, target) = &data[i];
        forward_into(params, input, ws);
        for (&a, &t) in ws.output().iter().zip(target) {
            let r = a - t;
            sum += r * r;
        }
    }
    sum / idx.len() as f64
}

/// Fisher-Yates with the shared training RNG.
fn shuffle(idx: &mut [usize], rng: &mut ChaCha8Rng) {
    for i in (1..idx.len()).rev() {
        let j = rng.gen_range(0..=i);
        idx.swap(i, j);
    }
}
