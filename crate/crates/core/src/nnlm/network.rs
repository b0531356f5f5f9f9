//! Forward and backward passes.
//!
//! For a batch of `B` samples:
//!
//! ```text
//! x = [E[c_1] | E[c_2] | ... | E[c_{N-1}]]        B x (N-1)D
//! h = sigmoid(x W_h + b_h)                         B x H
//! y = softmax(h W_o + b_o)                         B x V
//! C = -(1/B) sum_b log y[b, target_b]
//! ```
//!
//! Backward uses `dC/dz_o = (y - t) / B` and accumulates embedding gradients
//! into the rows of the context words (so a word repeated in a context
//! collects one contribution per position).

use ndarray::{s, Array1, Array2, Axis};

use crate::error::{Error, Result};
use crate::text::ContextSample;

use super::params::{GradientSet, NnlmParams};

/// Intermediate activations of one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    /// `B x (N-1)D` concatenated context embeddings.
    pub embedded: Array2<f64>,
    /// `B x H` sigmoid activations.
    pub hidden: Array2<f64>,
    /// `B x V` softmax outputs, floored at `f64::MIN_POSITIVE`.
    pub output_probs: Array2<f64>,
    /// `B x V` log-softmax computed directly from the logits.
    pub log_probs: Array2<f64>,
    pub targets: Vec<u32>,
    /// Mean cross-entropy (nats) over the batch.
    pub loss: f64,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

pub(crate) fn check_sample(params: &NnlmParams, sample: &ContextSample) -> Result<()> {
    let v = params.vocab_size();
    if sample.context.len() != params.context_len() {
        return Err(Error::invalid(format!(
            "context has {} ids, model expects {}",
            sample.context.len(),
            params.context_len()
        )));
    }
    for &id in sample.context.iter().chain(std::iter::once(&sample.target)) {
        if id as usize >= v {
            return Err(Error::IdOutOfRange { id, vocab_size: v });
        }
    }
    Ok(())
}

/// Row-wise log-softmax with max subtraction.
fn log_softmax_rows(logits: &mut Array2<f64>) {
    for mut row in logits.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |m, &x| m.max(x));
        let log_z = row.iter().map(|&x| (x - max).exp()).sum::<f64>().ln() + max;
        row.mapv_inplace(|x| x - log_z);
    }
}

pub fn forward(params: &NnlmParams, batch: &[ContextSample]) -> Result<ForwardTrace> {
    if batch.is_empty() {
        return Err(Error::invalid("forward needs a nonempty batch"));
    }
    for sample in batch {
        check_sample(params, sample)?;
    }
    let d = params.embed_dim();
    let mut embedded = Array2::zeros((batch.len(), params.hidden_w.nrows()));
    for (r, sample) in batch.iter().enumerate() {
        for (p, &w) in sample.context.iter().enumerate() {
            embedded
                .slice_mut(s![r, p * d..(p + 1) * d])
                .assign(&params.embed.row(w as usize));
        }
    }
    let mut hidden = embedded.dot(&params.hidden_w) + &params.hidden_b;
    hidden.mapv_inplace(sigmoid);
    let mut log_probs = hidden.dot(&params.output_w) + &params.output_b;
    log_softmax_rows(&mut log_probs);
    let output_probs = log_probs.mapv(|lp| lp.exp().max(f64::MIN_POSITIVE));

    let targets: Vec<u32> = batch.iter().map(|s| s.target).collect();
    let loss = -targets
        .iter()
        .enumerate()
        .map(|(r, &t)| log_probs[[r, t as usize]])
        .sum::<f64>()
        / batch.len() as f64;
    Ok(ForwardTrace {
        embedded,
        hidden,
        output_probs,
        log_probs,
        targets,
        loss,
    })
}

/// Mean cross-entropy of `probs` rows against one-hot `targets`.
pub fn cross_entropy(probs: &Array2<f64>, targets: &[u32]) -> f64 {
    assert_eq!(probs.nrows(), targets.len(), "targets must align with the batch");
    let total: f64 = targets
        .iter()
        .enumerate()
        .map(|(r, &t)| -probs[[r, t as usize]].ln())
        .sum();
    total / targets.len() as f64
}

pub fn backward(params: &NnlmParams, trace: &ForwardTrace, batch: &[ContextSample]) -> GradientSet {
    let b = batch.len();
    assert_eq!(trace.targets.len(), b, "trace does not belong to this batch");
    let scale = 1.0 / b as f64;

    let mut d_logits = trace.output_probs.clone();
    for (r, &t) in trace.targets.iter().enumerate() {
        d_logits[[r, t as usize]] -= 1.0;
    }
    d_logits *= scale;

    let output_w = trace.hidden.t().dot(&d_logits);
    let output_b = d_logits.sum_axis(Axis(0));

    let mut d_hidden = d_logits.dot(&params.output_w.t());
    d_hidden.zip_mut_with(&trace.hidden, |g, &h| *g *= h * (1.0 - h));
    let hidden_w = trace.embedded.t().dot(&d_hidden);
    let hidden_b = d_hidden.sum_axis(Axis(0));

    let d_embedded = d_hidden.dot(&params.hidden_w.t());
    let d = params.embed_dim();
    let mut embed = Array2::zeros(params.embed.raw_dim());
    for (r, sample) in batch.iter().enumerate() {
        for (p, &w) in sample.context.iter().enumerate() {
            let mut row = embed.row_mut(w as usize);
            row += &d_embedded.slice(s![r, p * d..(p + 1) * d]);
        }
    }
    GradientSet {
        embed,
        hidden_w,
        hidden_b,
        output_w,
        output_b,
    }
}

/// Log-probability distribution over the vocabulary for one context.
pub fn log_distribution(params: &NnlmParams, context: &[u32]) -> Result<Array1<f64>> {
    let probe = ContextSample {
        context: context.to_vec(),
        target: 0,
    };
    let trace = forward(params, std::slice::from_ref(&probe))?;
    Ok(trace.log_probs.row(0).to_owned())
}
