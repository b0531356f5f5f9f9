use ndarray::{Array1, Array2};

use crate::rng;

use super::config::NnlmConfig;

/// All weights and biases of the network.
///
/// - `embed`: `V x D`, one row per word, shared by every context position
/// - `hidden_w`: `(N-1)*D x H`, `hidden_b`: `H`
/// - `output_w`: `H x V`, `output_b`: `V`
#[derive(Debug, Clone, PartialEq)]
pub struct NnlmParams {
    pub embed: Array2<f64>,
    pub hidden_w: Array2<f64>,
    pub hidden_b: Array1<f64>,
    pub output_w: Array2<f64>,
    pub output_b: Array1<f64>,
}

/// Gradients and momentum buffers share the parameter layout.
pub type GradientSet = NnlmParams;

pub const TENSOR_NAMES: [&str; 5] = ["embed", "hidden_w", "hidden_b", "output_w", "output_b"];

impl NnlmParams {
    pub fn zeros(config: &NnlmConfig) -> Self {
        let (v, d, h) = (config.vocab_size, config.embed_dim, config.hidden_dim);
        NnlmParams {
            embed: Array2::zeros((v, d)),
            hidden_w: Array2::zeros((config.context_len() * d, h)),
            hidden_b: Array1::zeros(h),
            output_w: Array2::zeros((h, v)),
            output_b: Array1::zeros(v),
        }
    }

    /// Weights uniform in `(-init_scale, init_scale)` drawn in the order
    /// embed, hidden_w, output_w (row-major); biases zero.
    pub fn init(config: &NnlmConfig) -> Self {
        let mut p = Self::zeros(config);
        let mut rng = rng::stream(config.seed, &[rng::label::INIT]);
        let scale = config.init_scale;
        for w in [&mut p.embed, &mut p.hidden_w, &mut p.output_w] {
            w.mapv_inplace(|_| (2.0 * rng::uniform_f64(&mut rng) - 1.0) * scale);
        }
        p
    }

    pub fn zeros_like(&self) -> Self {
        NnlmParams {
            embed: Array2::zeros(self.embed.raw_dim()),
            hidden_w: Array2::zeros(self.hidden_w.raw_dim()),
            hidden_b: Array1::zeros(self.hidden_b.raw_dim()),
            output_w: Array2::zeros(self.output_w.raw_dim()),
            output_b: Array1::zeros(self.output_b.raw_dim()),
        }
    }

    pub fn vocab_size(&self) -> usize {
        self.embed.nrows()
    }

    pub fn embed_dim(&self) -> usize {
        self.embed.ncols()
    }

    pub fn context_len(&self) -> usize {
        self.hidden_w.nrows() / self.embed_dim()
    }

    /// Row-major views of the five tensors in [`TENSOR_NAMES`] order.
    pub fn tensors(&self) -> [&[f64]; 5] {
        [
            self.embed.as_slice().expect("standard layout"),
            self.hidden_w.as_slice().expect("standard layout"),
            self.hidden_b.as_slice().expect("standard layout"),
            self.output_w.as_slice().expect("standard layout"),
            self.output_b.as_slice().expect("standard layout"),
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut [f64]; 5] {
        [
            self.embed.as_slice_mut().expect("standard layout"),
            self.hidden_w.as_slice_mut().expect("standard layout"),
            self.hidden_b.as_slice_mut().expect("standard layout"),
            self.output_w.as_slice_mut().expect("standard layout"),
            self.output_b.as_slice_mut().expect("standard layout"),
        ]
    }

    pub fn shapes(&self) -> [Vec<usize>; 5] {
        [
            self.embed.shape().to_vec(),
            self.hidden_w.shape().to_vec(),
            self.hidden_b.shape().to_vec(),
            self.output_w.shape().to_vec(),
            self.output_b.shape().to_vec(),
        ]
    }

    pub fn all_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|x| x.is_finite()))
    }
}
