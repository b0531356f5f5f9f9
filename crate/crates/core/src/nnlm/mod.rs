//! Feed-forward neural network language model.

mod config;
mod io;
mod model;
mod network;
mod params;
mod train;

pub use config::NnlmConfig;
pub use io::FORMAT_VERSION;
pub use model::NnlmModel;
pub use network::{backward, cross_entropy, forward, ForwardTrace};
pub use params::{GradientSet, NnlmParams, TENSOR_NAMES};
pub use train::{mean_loss, sgd_momentum_step, train, EpochRecord, TrainOutcome, TrainState, DIVERGENCE_FACTOR};
