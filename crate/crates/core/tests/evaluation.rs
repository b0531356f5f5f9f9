mod common;

use authorship_lm::eval::{
    accuracy_sweep, aggregate_over_seeds, argmin, classify, perplexity, AuthorModel, LanguageModel, MeanStd,
    MethodModels, SweepConfig,
};
use authorship_lm::experiment::AuthorSplit;
use authorship_lm::kn::KnModel;
use authorship_lm::nnlm::{forward, mean_loss, NnlmConfig, NnlmModel, NnlmParams};
use authorship_lm::rng;
use authorship_lm::text::{
    encode, generate_synthetic_corpus, samples_from_sentences, synthetic_lexicon, MarkovSpec, PipelineParams,
    RawCorpus, Vocabulary,
};
use authorship_lm::Error;
use proptest::prelude::*;
use rand::Rng;

struct Uniform(usize);

impl LanguageModel for Uniform {
    fn order(&self) -> usize {
        3
    }
    fn vocab_size(&self) -> usize {
        self.0
    }
    fn log_prob(&self, _: &[u32], _: u32) -> authorship_lm::Result<f64> {
        Ok(-(self.0 as f64).ln())
    }
}

fn random_sentences(seed: u64, v: u32, n: usize, order: usize) -> Vec<Vec<u32>> {
    let mut r = rng::seeded(seed);
    (0..n)
        .map(|_| {
            let mut s = vec![0; order - 1];
            s.extend((0..r.gen_range(1..15)).map(|_| r.gen_range(2..v)));
            s.push(1);
            s
        })
        .collect()
}

#[test]
fn uniform_model_has_perplexity_v() {
    let report = perplexity(&Uniform(100), &random_sentences(1, 100, 40, 3)).unwrap();
    // exp(ln 100) itself rounds to 100 + 1 ulp; nothing accumulates beyond that
    assert!((report.perplexity() - 100.0).abs() / 100.0 <= 1e-15, "{}", report.perplexity());
    assert!(matches!(perplexity(&Uniform(100), &[]), Err(Error::NoTokens)));
}

#[test]
fn zero_output_layer_gives_log_v_loss() {
    for v in [4, 17, 100] {
        let config = NnlmConfig { embed_dim: 3, hidden_dim: 5, ..NnlmConfig::new(4, v) };
        let mut params = NnlmParams::init(&config);
        params.output_w.fill(0.0);
        let samples = samples_from_sentences(&random_sentences(v as u64, v as u32, 10, 4), 4);
        let loss = forward(&params, &samples).unwrap().loss;
        assert!((loss - (v as f64).ln()).abs() < 1e-12);
    }
}

#[test]
fn perplexity_is_exp_of_network_loss() {
    let config = NnlmConfig { embed_dim: 6, hidden_dim: 9, init_scale: 0.8, seed: 4, ..NnlmConfig::new(4, 25) };
    let model = NnlmModel::new(config.clone(), NnlmParams::init(&config)).unwrap();
    let sentences = random_sentences(8, 25, 60, 4);
    let pp = perplexity(&model, &sentences).unwrap().perplexity();
    let loss = mean_loss(&model.params, &samples_from_sentences(&sentences, 4)).unwrap();
    assert!((pp - loss.exp()).abs() / pp < 1e-9);
}

#[test]
fn kn_perplexity_matches_hand_product() {
    // "a b a b", N = 2, V = 5: D1 = 0.5, D2 = 0.6, continuation unigram
    // P1(a) = 0.45, P1(b) = P1(</s>) = 0.2.
    // P(a|<s>) = 0.4 + 0.6*0.45 = 0.67, P(b|a) = 0.76,
    // P(a|b) = 0.2 + 0.6*0.45 = 0.47, P(</s>|b) = 0.2 + 0.6*0.2 = 0.32
    let sentence = vec![0, 3, 4, 3, 4, 1];
    let model = KnModel::train(std::slice::from_ref(&sentence), 2, 5).unwrap();
    let pp = perplexity(&model, &[sentence]).unwrap().perplexity();
    let hand = (0.67f64 * 0.76 * 0.47 * 0.76 * 0.32).powf(-1.0 / 5.0);
    assert!((pp - hand).abs() < 1e-10, "{pp} vs {hand}");
}

fn kn_authors(raws: &[RawCorpus], seed: u64) -> (Vec<AuthorModel>, Vec<Vec<Vec<String>>>) {
    raws.iter()
        .map(|raw| {
            let split = AuthorSplit::prepare(raw, &PipelineParams::default(), seed, [0.8, 0.1, 0.1]).unwrap();
            let model = split.train_kn().unwrap();
            let m = AuthorModel::new(raw.author_id.clone(), split.processed.vocabulary.clone(), Box::new(model));
            (m, split.test_words())
        })
        .unzip()
}

#[test]
fn disjoint_vocabularies_are_separable() {
    let raws: Vec<RawCorpus> = (0..2)
        .map(|a| {
            let spec = MarkovSpec::random(synthetic_lexicon(15, 15 * a), 4, 0.15, a as u64).unwrap();
            generate_synthetic_corpus(&format!("a{a}"), &spec, 10 + a as u64, 200).unwrap()
        })
        .collect();
    let (models, pools) = kn_authors(&raws, 1);
    for (a, pool) in pools.iter().enumerate() {
        for s in pool.chunks(1) {
            assert_eq!(classify(&models, s, Some(a)).unwrap().predicted, a);
        }
    }
}

#[test]
fn identical_models_tie_to_first_author() {
    let (_, raw) = common::synthetic_authors(1, 20, 200, 2).remove(0);
    let split = AuthorSplit::prepare(&raw, &PipelineParams::default(), 1, [0.8, 0.1, 0.1]).unwrap();
    let kn = split.train_kn().unwrap();
    let models: Vec<AuthorModel> = (0..4)
        .map(|i| AuthorModel::new(format!("x{i}"), split.processed.vocabulary.clone(), Box::new(kn.clone())))
        .collect();
    let r = classify(&models, &split.test_words()[..3], Some(2)).unwrap();
    assert_eq!(r.predicted, 0);
    assert!(!r.is_correct());
    assert!(r.perplexities.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn synthetic_authors_classified_from_five_sentences() {
    let raws: Vec<RawCorpus> = common::synthetic_authors(8, 50, 1000, 7).into_iter().map(|(_, r)| r).collect();
    let (models, pools) = kn_authors(&raws, 3);
    let mut r = rng::seeded(5);
    let (mut hits, mut total) = (0, 0);
    for (a, pool) in pools.iter().enumerate() {
        for _ in 0..100 {
            let idx = rng::sample_without_replacement(&mut r, pool.len(), 5);
            let test: Vec<Vec<String>> = idx.iter().map(|&i| pool[i].clone()).collect();
            hits += usize::from(classify(&models, &test, Some(a)).unwrap().is_correct());
            total += 1;
        }
    }
    let acc = hits as f64 / total as f64;
    assert!(acc >= 0.90, "accuracy {acc}");
}

fn sweep_fixture() -> (Vec<AuthorModel>, Vec<Vec<Vec<String>>>) {
    let raws: Vec<RawCorpus> = common::synthetic_authors(4, 30, 400, 11).into_iter().map(|(_, r)| r).collect();
    kn_authors(&raws, 2)
}

#[test]
fn sweep_preconditions_and_empty_report() {
    let (models, pools) = sweep_fixture();
    let methods = [MethodModels { method: "kn".into(), models: &models }];
    let too_many = SweepConfig { sentence_counts: vec![1, 1000], trials: 3, ..Default::default() };
    match accuracy_sweep(&methods, &pools, &too_many) {
        Err(Error::InsufficientPool { author, requested, .. }) => {
            assert_eq!(author, "author00");
            assert_eq!(requested, 1000);
        }
        other => panic!("unexpected {other:?}"),
    }
    let zero = SweepConfig { sentence_counts: vec![0], ..Default::default() };
    assert!(accuracy_sweep(&methods, &pools, &zero).is_err());

    let none = SweepConfig { trials: 0, ..Default::default() };
    let report = accuracy_sweep(&methods, &pools, &none).unwrap();
    assert!(report.is_empty());
    assert_eq!(report.accuracy(0, 5), None);
}

#[test]
fn sweep_is_deterministic_across_workers_and_matches_classify() {
    let (models, pools) = sweep_fixture();
    let methods = [MethodModels { method: "kn".into(), models: &models }];
    let config = SweepConfig { sentence_counts: vec![1, 3, 7], trials: 15, seed: 42, ..Default::default() };
    let serial = accuracy_sweep(&methods, &pools, &config).unwrap();
    let parallel = accuracy_sweep(&methods, &pools, &SweepConfig { workers: 3, ..config.clone() }).unwrap();
    assert_eq!(serial, parallel);

    // redraw each trial's sentences from its documented stream and classify directly
    for t in serial.trials.iter().step_by(7) {
        let mut r = rng::stream(42, &[rng::label::TRIAL, t.true_author as u64, t.sentences as u64, t.trial as u64]);
        let idx = rng::sample_without_replacement(&mut r, pools[t.true_author].len(), t.sentences);
        assert_eq!(idx.iter().collect::<std::collections::BTreeSet<_>>().len(), t.sentences);
        let test: Vec<Vec<String>> = idx.iter().map(|&i| pools[t.true_author][i].clone()).collect();
        assert_eq!(classify(&models, &test, None).unwrap().predicted, t.predicted);
    }

    let other = accuracy_sweep(&methods, &pools, &SweepConfig { seed: 43, ..config }).unwrap();
    assert_ne!(serial.trials, other.trials);
}

#[test]
fn accuracy_grows_with_text_length() {
    let (models, pools) = sweep_fixture();
    let methods = [MethodModels { method: "kn".into(), models: &models }];
    let config = SweepConfig { sentence_counts: vec![1, 20], trials: 100, seed: 1, ..Default::default() };
    let report = accuracy_sweep(&methods, &pools, &config).unwrap();
    let (a1, a20) = (report.accuracy(0, 1).unwrap(), report.accuracy(0, 20).unwrap());
    assert!(a20 >= a1 - 0.02, "acc(1) = {a1}, acc(20) = {a20}");

    let excluded = SweepConfig { excluded: vec!["author00".into()], ..config };
    let report_ex = accuracy_sweep(&methods, &pools, &excluded).unwrap();
    let per: Vec<f64> = (1..4).map(|a| report_ex.author_accuracy(0, a, 1).unwrap()).collect();
    let mean = per.iter().sum::<f64>() / 3.0;
    assert!((report_ex.accuracy(0, 1).unwrap() - mean).abs() < 1e-12);
}

#[test]
fn confusion_matrix_shapes() {
    // perfect: disjoint lexicons, long texts
    let raws: Vec<RawCorpus> = (0..3)
        .map(|a| {
            let spec = MarkovSpec::random(synthetic_lexicon(12, 12 * a), 4, 0.2, 50 + a as u64).unwrap();
            generate_synthetic_corpus(&format!("d{a}"), &spec, 60 + a as u64, 200).unwrap()
        })
        .collect();
    let (models, pools) = kn_authors(&raws, 4);
    let methods = [MethodModels { method: "kn".into(), models: &models }];
    let config = SweepConfig { sentence_counts: vec![1, 2, 5], trials: 10, ..Default::default() };
    let m = accuracy_sweep(&methods, &pools, &config).unwrap().confusion_matrix(0);
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row.iter().sum::<u64>(), 30);
        assert!(row.iter().enumerate().all(|(j, &c)| (i == j) == (c == 30)));
    }

    // authors 1 and 2 share one model: 2's trials all go to 1
    let (mut models, pools) = sweep_fixture();
    let twin = AuthorModel::new("twin", models[1].vocabulary.clone(), Box::new(kn_of(&pools[1], &models[1])));
    models[2] = AuthorModel::new("twin", twin.vocabulary.clone(), Box::new(kn_of(&pools[1], &models[1])));
    models[1] = twin;
    let methods = [MethodModels { method: "kn".into(), models: &models }];
    let report = accuracy_sweep(&methods, &pools, &config).unwrap();
    let m = report.confusion_matrix(0);
    assert!(m.iter().all(|row| row[2] == 0));
    assert!(m[2][1] > 20);
    for row in &m {
        assert_eq!(row.iter().sum::<u64>(), 30);
    }
}

/// A KN model trained on a fixed pool, standing in for "the same model twice".
fn kn_of(pool: &[Vec<String>], like: &AuthorModel) -> KnModel {
    let corpus = encode(pool, like.vocabulary.clone(), PipelineParams::default());
    KnModel::train(&corpus.sentences, 4, like.vocabulary.len()).unwrap()
}

fn perturbed(spec: &MarkovSpec, seed: u64, mix: f64) -> MarkovSpec {
    let noise = MarkovSpec::random(spec.words.clone(), 6, 0.12, seed).unwrap();
    let blend = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| (1.0 - mix) * x + mix * y).collect() };
    MarkovSpec {
        words: spec.words.clone(),
        start: blend(&spec.start, &noise.start),
        transitions: spec.transitions.iter().zip(&noise.transitions).map(|(a, b)| blend(a, b)).collect(),
        max_len: spec.max_len,
    }
}

#[test]
fn near_identical_pair_confuses_within_its_block() {
    let mut authors = common::synthetic_authors(4, 30, 600, 21);
    let twin = perturbed(&authors[0].0, 999, 0.05);
    authors[1] = (twin.clone(), generate_synthetic_corpus("author01", &twin, 1234, 600).unwrap());
    let raws: Vec<RawCorpus> = authors.into_iter().map(|(_, r)| r).collect();
    let (models, pools) = kn_authors(&raws, 5);
    let methods = [MethodModels { method: "kn".into(), models: &models }];
    let config = SweepConfig { sentence_counts: vec![1, 2], trials: 50, ..Default::default() };
    let m = accuracy_sweep(&methods, &pools, &config).unwrap().confusion_matrix(0);
    let off = |i: usize, j: usize| if i == j { 0 } else { m[i][j] };
    let in_block: u64 = off(0, 1) + off(1, 0);
    let total_off: u64 = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| off(i, j)).sum();
    assert!(in_block > 20, "{m:?}");
    assert!(in_block as f64 >= 0.8 * total_off as f64, "{m:?}");
}

#[test]
fn perplexity_rule_equals_max_likelihood_with_shared_vocabulary() {
    let raws: Vec<RawCorpus> = common::synthetic_authors(5, 25, 300, 31).into_iter().map(|(_, r)| r).collect();
    let params = PipelineParams::default();
    let all: Vec<Vec<String>> = raws.iter().flat_map(|r| params.sentence_words(r)).collect();
    let vocab = Vocabulary::build(&all, 0.0).unwrap();
    let kns: Vec<KnModel> = raws
        .iter()
        .map(|r| {
            let c = encode(&params.sentence_words(r)[..250], vocab.clone(), params.clone());
            KnModel::train(&c.sentences, 4, vocab.len()).unwrap()
        })
        .collect();
    let models: Vec<AuthorModel> = kns
        .iter()
        .enumerate()
        .map(|(i, k)| AuthorModel::new(format!("m{i}"), vocab.clone(), Box::new(k.clone())))
        .collect();
    let mut r = rng::seeded(3);
    for trial in 0..60 {
        let a = trial % raws.len();
        let pool = &params.sentence_words(&raws[a])[250..];
        let idx = rng::sample_without_replacement(&mut r, pool.len(), 1 + trial % 4);
        let test: Vec<Vec<String>> = idx.iter().map(|&i| pool[i].clone()).collect();
        let ids = encode(&test, vocab.clone(), params.clone()).sentences;
        let samples = samples_from_sentences(&ids, 4);
        let mut best = (0, f64::NEG_INFINITY);
        for (k, kn) in kns.iter().enumerate() {
            let total: f64 = samples.iter().map(|s| kn.log_prob(&s.context, s.target).unwrap()).sum();
            if total > best.1 {
                best = (k, total);
            }
        }
        assert_eq!(classify(&models, &test, None).unwrap().predicted, best.0);
    }
}

proptest! {
    #[test]
    fn argmin_ignores_common_log_prob_shift(
        totals in prop::collection::vec(-500.0f64..-1.0, 1..12),
        shift in -100.0f64..100.0,
        n in 1usize..200,
    ) {
        let pp = |t: &[f64]| t.iter().map(|l| (-l / n as f64).exp()).collect::<Vec<_>>();
        let shifted: Vec<f64> = totals.iter().map(|t| t + shift).collect();
        let a = argmin(&pp(&totals));
        // ties may only move to an equal-valued index
        let b = argmin(&pp(&shifted));
        prop_assert!(a == b || (totals[a] - totals[b]).abs() < 1e-9);
    }

    #[test]
    fn argmin_picks_first_minimum(values in prop::collection::vec(0.0f64..5.0, 1..20)) {
        let i = argmin(&values);
        prop_assert!(values.iter().all(|&v| v >= values[i]));
        prop_assert!(values[..i].iter().all(|&v| v > values[i]));
    }
}

#[test]
fn mean_and_std_over_seeds() {
    let m = MeanStd::of(&[66.0, 68.0]).unwrap();
    assert_eq!(m.mean, 67.0);
    assert!((m.std - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(m.to_string(), "67.0±1.4");
    assert_eq!(format!("{:.2}", m), "67.00±1.41");
    assert_eq!(MeanStd::of(&[0.7; 10]).unwrap().std, 0.0);
    assert!(MeanStd::of(&[1.0]).is_err());

    let cells = aggregate_over_seeds(&[vec![1.0, 10.0], vec![3.0, 10.0], vec![5.0, 10.0]]).unwrap();
    assert_eq!(cells[0], MeanStd { mean: 3.0, std: 2.0 });
    assert_eq!(cells[1].std, 0.0);
    assert!(aggregate_over_seeds(&[vec![1.0], vec![1.0, 2.0]]).is_err());
}
