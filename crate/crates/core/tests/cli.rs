use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn tweetcast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tweetcast"))
        .args(args)
        .output()
        .unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn state_args() -> Vec<String> {
    vec![
        "--census".into(),
        fixture("census_2012.csv").display().to_string(),
        "--priors".into(),
        fixture("priors_2008.csv").display().to_string(),
        "--apportionment".into(),
        fixture("apportionment_2012.csv").display().to_string(),
    ]
}

fn forecast(extra: &[&str]) -> Output {
    let mut args: Vec<String> = vec!["forecast".into()];
    args.extend(state_args());
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    tweetcast(&refs)
}

#[test]
fn forecast_json_from_tweets() {
    let tweets = fixture("tweets_sample.jsonl");
    let out = forecast(&[
        "--tweets",
        tweets.to_str().unwrap(),
        "--model",
        "2",
        "--weights",
        "normalized",
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["model_id"], 2);
    assert_eq!(v["weight_mode"], "normalized");
    assert_eq!(v["e_strategy"], "positive-share");
    assert_eq!(v["states"].as_array().unwrap().len(), 51);
    assert_eq!(v["twitter_support"][0], 0.35);
    let ev = &v["electoral_votes"];
    assert_eq!(
        ev[0].as_u64().unwrap() + ev[1].as_u64().unwrap() + v["tied_ev"].as_u64().unwrap(),
        538
    );
    assert!(text(&out.stderr).contains("read=10 kept=6"));
}

#[test]
fn forecast_csv_with_fixed_support() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let out = forecast(&[
        "--e1",
        "0.5",
        "--model",
        "1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "state,Obama,Romney,winner,margin");
    assert_eq!(lines.len(), 1 + 51 + 3);
    assert!(lines[52].starts_with("Popular Vote,"));
    assert!(lines[54].starts_with("Electoral Votes,") && lines[54].ends_with("total=538"));
}

#[test]
fn forecast_rejects_bad_model() {
    let out = forecast(&["--e1", "0.5", "--model", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("valid: 1, 2, baseline"));
}

#[test]
fn forecast_without_signal_source_is_usage_error() {
    let out = forecast(&[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("missing --tweets"));
}

#[test]
fn forecast_with_missing_state_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let census = std::fs::read_to_string(fixture("census_2012.csv")).unwrap();
    let trimmed: String = census
        .lines()
        .filter(|l| !l.starts_with("Ohio,"))
        .map(|l| format!("{l}\n"))
        .collect();
    let path = dir.path().join("census.csv");
    std::fs::write(&path, trimmed).unwrap();
    let out = tweetcast(&[
        "forecast",
        "--e1",
        "0.5",
        "--census",
        path.to_str().unwrap(),
        "--priors",
        fixture("priors_2008.csv").to_str().unwrap(),
        "--apportionment",
        fixture("apportionment_2012.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("Ohio"), "{}", text(&out.stderr));
}

#[test]
fn forecast_percent_census_is_rejected_with_hint() {
    let dir = tempfile::tempdir().unwrap();
    let census = std::fs::read_to_string(fixture("census_2012.csv"))
        .unwrap()
        .replacen("0.115", "11.5", 1);
    let path = dir.path().join("census.csv");
    std::fs::write(&path, census).unwrap();
    let out = tweetcast(&[
        "validate",
        "--census",
        path.to_str().unwrap(),
        "--priors",
        fixture("priors_2008.csv").to_str().unwrap(),
        "--apportionment",
        fixture("apportionment_2012.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["findings"][0]["field"], "twitter_frac");
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let cfg_json = serde_json::json!({
        "census": fixture("census_2012.csv"),
        "priors": fixture("priors_2008.csv"),
        "apportionment": fixture("apportionment_2012.csv"),
        "model": 1,
        "e1": 0.6
    });
    std::fs::write(&cfg, cfg_json.to_string()).unwrap();
    let out = tweetcast(&[
        "forecast",
        "--config",
        cfg.to_str().unwrap(),
        "--model",
        "2",
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["model_id"], 2);
    assert_eq!(v["twitter_support"][0], 0.6);

    std::fs::write(&cfg, r#"{"censsu": "x"}"#).unwrap();
    let out = tweetcast(&["forecast", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn forecast_json_feeds_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let report = dir.path().join("report.csv");
    let out = forecast(&["--e1", "0.52", "--output", model.to_str().unwrap()]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let out = tweetcast(&[
        "evaluate",
        "--predicted",
        model.to_str().unwrap(),
        "--actual",
        fixture("actual_2012.csv").to_str().unwrap(),
        "--priors",
        fixture("priors_2008.csv").to_str().unwrap(),
        "--output",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stdout).starts_with("MAE model="));
    let csv = std::fs::read_to_string(&report).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("MAE,")));
}

#[test]
fn evaluate_published_table() {
    let out = tweetcast(&[
        "evaluate",
        "--table",
        fixture("published_comparison.csv").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert_eq!(
        text(&out.stdout).trim(),
        "MAE model=2.60% baseline=2.75% beats_baseline=true"
    );
}

#[test]
fn evaluate_key_mismatch_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let predicted = dir.path().join("p.csv");
    std::fs::write(&predicted, "state,share\nOhio,0.5\n").unwrap();
    let out = tweetcast(&[
        "evaluate",
        "--predicted",
        predicted.to_str().unwrap(),
        "--actual",
        fixture("actual_2012.csv").to_str().unwrap(),
        "--baseline",
        predicted.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("Alabama"));
}

#[test]
fn timeseries_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("ts.svg");
    let out = tweetcast(&[
        "timeseries",
        "--tweets",
        fixture("tweets_sample.jsonl").to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert_eq!(
        text(&out.stdout),
        "date,candidate,positive,negative,tweet_count\n\
         2012-10-01,1,6,0,2\n2012-10-01,2,3,3,2\n2012-10-02,1,0,5,1\n2012-10-02,2,9,0,2\n"
    );
    let doc = std::fs::read_to_string(svg).unwrap();
    roxmltree::Document::parse(&doc).unwrap();
}

#[test]
fn timeseries_empty_corpus_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let tweets = dir.path().join("t.jsonl");
    std::fs::write(
        &tweets,
        "{\"id\":\"1\",\"created_at\":\"2012-10-01T00:00:00Z\",\"text\":\"hello\"}\n",
    )
    .unwrap();
    let out = tweetcast(&["timeseries", "--tweets", tweets.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        text(&out.stderr).contains("unmatched=1"),
        "{}",
        text(&out.stderr)
    );
}

#[test]
fn synth_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let spec = fixture("synth_spec.json");
    for path in [&a, &b] {
        let out = tweetcast(&[
            "synth",
            "--spec",
            spec.to_str().unwrap(),
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", text(&out.stderr));
        let meta: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(meta["rng"], "chacha8");
        assert_eq!(meta["n_tweets"], 1000);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = tweetcast(&[
        "synth",
        "--spec",
        spec.to_str().unwrap(),
        "--seed",
        "43",
        "--n-tweets",
        "5",
    ]);
    assert!(out.status.success());
    assert_eq!(text(&out.stdout).lines().count(), 5);
    assert!(text(&out.stderr).contains("\"seed\":43"));
}

#[test]
fn synth_rejects_vocab_outside_lexicon() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let body = std::fs::read_to_string(fixture("synth_spec.json"))
        .unwrap()
        .replace("\"love\"", "\"splendiferous\"");
    std::fs::write(&spec, body).unwrap();
    let out = tweetcast(&["synth", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("splendiferous"));
}

#[test]
fn help_and_version() {
    let out = tweetcast(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for sub in ["forecast", "evaluate", "timeseries", "synth", "validate"] {
        assert!(text(&out.stdout).contains(sub));
    }
    let out = tweetcast(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("us2012-v1"));
}
