pub mod eval;
pub mod experiment;
pub mod preprocess;
pub mod report;
pub mod synth;
pub mod train;

use authorship_lm::eval::LanguageModel;
use authorship_lm::kn::KnModel;
use authorship_lm::nnlm::NnlmModel;

use crate::config::{Method, RunConfig};
use crate::layout::model_path;

pub fn load_model(cfg: &RunConfig, method: Method, author: &str, seed: u64) -> anyhow::Result<Box<dyn LanguageModel>> {
    let path = model_path(cfg, method, author, seed);
    Ok(match method {
        Method::Nnlm => Box::new(NnlmModel::load(&path)?),
        Method::Kn => Box::new(KnModel::load_arpa(&path)?),
    })
}
