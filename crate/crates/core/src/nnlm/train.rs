use crate::error::{Error, Result};
use crate::rng;
use crate::text::ContextSample;

use super::config::NnlmConfig;
use super::model::NnlmModel;
use super::network::{backward, check_sample, forward};
use super::params::{GradientSet, NnlmParams};

/// Optimizer state carried across mini-batches.
#[derive(Debug, Clone)]
pub struct TrainState {
    pub params: NnlmParams,
    pub velocity: GradientSet,
    pub epoch: usize,
    pub best_validation_loss: f64,
    pub epochs_since_improvement: usize,
}

impl TrainState {
    pub fn new(params: NnlmParams) -> Self {
        TrainState {
            velocity: params.zeros_like(),
            params,
            epoch: 0,
            best_validation_loss: f64::INFINITY,
            epochs_since_improvement: 0,
        }
    }
}

/// Classical momentum: `v <- mu v - lr g`, `theta <- theta + v`.
pub fn sgd_momentum_step(state: &mut TrainState, grads: &GradientSet, learning_rate: f64, momentum: f64) {
    let velocity = state.velocity.tensors_mut();
    let params = state.params.tensors_mut();
    let grads = grads.tensors();
    for ((v, p), g) in velocity.into_iter().zip(params).zip(grads) {
        assert_eq!(v.len(), g.len(), "gradient shape mismatch");
        for ((vi, pi), gi) in v.iter_mut().zip(p.iter_mut()).zip(g) {
            *vi = momentum * *vi - learning_rate * gi;
            *pi += *vi;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean training cross-entropy over the epoch's mini-batches.
    pub train_loss: f64,
    pub validation_loss: f64,
}

impl EpochRecord {
    pub fn validation_perplexity(&self) -> f64 {
        self.validation_loss.exp()
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameters from the epoch with the lowest validation loss.
    pub model: NnlmModel,
    pub history: Vec<EpochRecord>,
    pub best_epoch: usize,
}

const EVAL_CHUNK: usize = 512;

/// An epoch whose loss exceeds this multiple of the uniform model's loss
/// (`ln V`) counts as diverged even when it is still finite: saturated sigmoids
/// keep the loss finite while the weights run away.
pub const DIVERGENCE_FACTOR: f64 = 50.0;

/// Mean cross-entropy over `samples`, evaluated in chunks.
pub fn mean_loss(params: &NnlmParams, samples: &[ContextSample]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::NoTokens);
    }
    let mut total = 0.0;
    for chunk in samples.chunks(EVAL_CHUNK) {
        total += forward(params, chunk)?.loss * chunk.len() as f64;
    }
    Ok(total / samples.len() as f64)
}

/// Mini-batch training with per-epoch shuffling, validation tracking and
/// patience-based early stopping. Returns the best-validation parameters.
pub fn train(config: &NnlmConfig, train: &[ContextSample], validation: &[ContextSample]) -> Result<TrainOutcome> {
    config.validate()?;
    if train.is_empty() || validation.is_empty() {
        return Err(Error::invalid("training and validation samples must be nonempty"));
    }
    let mut state = TrainState::new(NnlmParams::init(config));
    for s in train.iter().chain(validation) {
        check_sample(&state.params, s)?;
    }

    let mut shuffle_rng = rng::stream(config.seed, &[rng::label::SHUFFLE]);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut best = state.params.clone();
    let mut best_epoch = 0;
    let mut history = Vec::new();
    let mut batch = Vec::with_capacity(config.batch_size);

    while state.epoch < config.max_epochs {
        state.epoch += 1;
        let epoch = state.epoch;
        rng::shuffle(&mut shuffle_rng, &mut order);
        let mut epoch_loss = 0.0;
        for idx in order.chunks(config.batch_size) {
            batch.clear();
            batch.extend(idx.iter().map(|&i| train[i].clone()));
            let trace = forward(&state.params, &batch)?;
            if !trace.loss.is_finite() {
                return Err(Error::Diverged { epoch, loss: trace.loss });
            }
            epoch_loss += trace.loss * batch.len() as f64;
            let grads = backward(&state.params, &trace, &batch);
            sgd_momentum_step(&mut state, &grads, config.learning_rate, config.momentum);
        }
        let train_loss = epoch_loss / train.len() as f64;
        let validation_loss = mean_loss(&state.params, validation)?;
        let limit = DIVERGENCE_FACTOR * (config.vocab_size as f64).ln();
        let diverged = |l: f64| !l.is_finite() || l > limit;
        if diverged(train_loss) || diverged(validation_loss) || !state.params.all_finite() {
            let loss = if diverged(validation_loss) { validation_loss } else { train_loss };
            return Err(Error::Diverged { epoch, loss });
        }
        history.push(EpochRecord {
            epoch,
            train_loss,
            validation_loss,
        });
        if validation_loss < state.best_validation_loss {
            state.best_validation_loss = validation_loss;
            state.epochs_since_improvement = 0;
            best.clone_from(&state.params);
            best_epoch = epoch;
        } else {
            state.epochs_since_improvement += 1;
            if state.epochs_since_improvement >= config.patience {
                break;
            }
        }
    }
    Ok(TrainOutcome {
        model: NnlmModel::new(config.clone(), best)?,
        history,
        best_epoch,
    })
}
