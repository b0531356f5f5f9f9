use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_authlm");

fn authlm(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &[&str] = &[
    "--synth-authors",
    "2",
    "--synth-sentences",
    "120",
    "--embed-dim",
    "4",
    "--hidden-dim",
    "8",
    "--max-epochs",
    "2",
    "--sentence-counts",
    "1,3",
    "--trials",
    "5",
];

fn with(extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = extra.to_vec();
    v.extend_from_slice(SMALL);
    v
}

#[test]
fn preprocess_two_authors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&authlm(dir.path(), &with(&["synth"]))), 0);
    let o = authlm(dir.path(), &with(&["preprocess"]));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for a in ["author00", "author01"] {
        for ext in ["corpus", "vocab", "stems"] {
            assert!(dir.path().join(format!("outputs/preprocess/{a}.{ext}")).is_file());
        }
    }
    let mut r = csv::Reader::from_path(dir.path().join("outputs/preprocess/vocab_stats.csv")).unwrap();
    let headers = r.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    for row in &rows {
        // a 50-word lexicon is fully covered by the top 500 words
        assert_eq!(&row[col("coverage_500")], "1.0");
        assert_eq!(&row[col("pruned_vocab")], "50");
    }
}

#[test]
fn empty_author_is_a_partial_failure() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::write(corpus.join("good.txt"), "the cat sat\non the mat\n").unwrap();
    fs::write(corpus.join("bad.txt"), "!!! ???\n--\n").unwrap();
    let o = authlm(dir.path(), &["preprocess"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad.txt"), "{}", stderr(&o));
    assert!(dir.path().join("outputs/preprocess/good.corpus").is_file());
    assert!(!dir.path().join("outputs/preprocess/bad.corpus").exists());
    let stats = fs::read_to_string(dir.path().join("outputs/preprocess/vocab_stats.csv")).unwrap();
    assert_eq!(stats.lines().count(), 2);
}

#[test]
fn config_errors_exit_1_without_side_effects() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    // missing corpus directory
    assert_eq!(code(&authlm(p, &["preprocess"])), 1);
    // training before preprocessing
    assert_eq!(code(&authlm(p, &["train-nnlm"])), 1);
    // invalid values in the file
    fs::write(p.join("bad.toml"), "split_ratios = [0.5, 0.1, 0.1]\n").unwrap();
    assert_eq!(code(&authlm(p, &["-c", "bad.toml", "synth"])), 1);
    fs::write(p.join("typo.toml"), "[nnlm]\nhiden_dim = 3\n").unwrap();
    assert_eq!(code(&authlm(p, &["-c", "typo.toml", "synth"])), 1);
    assert_eq!(code(&authlm(p, &["--seeds", "1,1", "synth"])), 1);
    assert!(!p.join("outputs").exists());
    assert!(!p.join("corpus").exists());
    // unknown excluded author is caught before the experiment writes anything
    assert_eq!(code(&authlm(p, &with(&["synth"]))), 0);
    assert_eq!(code(&authlm(p, &with(&["preprocess"]))), 0);
    assert_eq!(code(&authlm(p, &with(&["--exclude", "nobody", "experiment"]))), 1);
    assert!(!p.join("outputs/experiment").exists());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), "seeds = [5, 6]\nworkers = 2\n[nnlm]\nhidden_dim = 33\n").unwrap();
    let o = authlm(dir.path(), &["-c", "run.toml", "--workers", "3", "show-config"]);
    assert_eq!(code(&o), 0);
    let shown: toml::Value = toml::from_str(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(shown["workers"].as_integer(), Some(3));
    assert_eq!(shown["nnlm"]["hidden_dim"].as_integer(), Some(33));
    assert_eq!(shown["seeds"].as_array().unwrap().len(), 2);
}

#[test]
fn divergence_exits_3_and_other_authors_still_train() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&authlm(p, &with(&["synth"]))), 0);
    assert_eq!(code(&authlm(p, &with(&["preprocess"]))), 0);
    let o = authlm(p, &with(&["--learning-rate", "1e6", "train-nnlm"]));
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("diverged"));

    // a missing model is a partial failure for eval, not a crash
    assert_eq!(code(&authlm(p, &with(&["train-ngram"]))), 0);
    fs::remove_file(p.join("outputs/kn/author01_1.arpa")).unwrap();
    let o = authlm(p, &with(&["--methods", "kn", "eval"]));
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let rows = fs::read_to_string(p.join("outputs/eval/perplexity.csv")).unwrap();
    assert_eq!(rows.lines().count(), 2);
}

#[test]
fn full_pipeline_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    for cmd in ["synth", "preprocess", "train-nnlm", "train-ngram", "eval", "experiment", "report"] {
        let o = authlm(p, &with(&["--seeds", "1,2", cmd]));
        assert_eq!(code(&o), 0, "{cmd}: {}", stderr(&o));
    }
    let out = p.join("outputs");
    for f in [
        "nnlm/author00_2.nnlm",
        "nnlm/author01_1.log.csv",
        "kn/author01_2.arpa",
        "eval/perplexity.csv",
        "eval/summary.csv",
        "experiment/trials.csv",
        "experiment/accuracy.csv",
        "experiment/summary.csv",
        "experiment/confusion_nnlm.csv",
        "experiment/confusion_kn.csv",
        "experiment/summary.json",
        "synth/author00.json",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let summary = fs::read_to_string(out.join("experiment/summary.csv")).unwrap();
    assert_eq!(summary.lines().next(), Some("method,s,mean_acc,std_acc"));
    assert_eq!(summary.lines().count(), 1 + 2 * 2);
    // 2 seeds x 2 methods x 2 authors x 2 lengths x 5 trials
    assert_eq!(fs::read_to_string(out.join("experiment/trials.csv")).unwrap().lines().count(), 1 + 80);

    let confusion = fs::read_to_string(out.join("experiment/confusion_kn.csv")).unwrap();
    for line in confusion.lines().skip(1) {
        let total: u64 = line.split(',').skip(1).map(|c| c.parse::<u64>().unwrap()).sum();
        assert_eq!(total, 2 * 2 * 5);
    }
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("experiment/summary.json")).unwrap()).unwrap();
    assert_eq!(json["methods"]["kn"]["mean_accuracy"].as_array().unwrap().len(), 2);

    let eval = fs::read_to_string(out.join("eval/summary.csv")).unwrap();
    let all = eval.lines().find(|l| l.starts_with("kn,ALL,")).unwrap();
    let formatted = all.rsplit(',').next().unwrap();
    assert!(formatted.contains('±'), "{formatted}");
}
