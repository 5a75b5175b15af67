use std::path::{Path, PathBuf};

use tweetcast::corpus::{BothPolicy, IngestError, IngestOptions};
use tweetcast::pipeline::{run_pipeline, PipelineOptions};
use tweetcast::synth::{generate_corpus, reference_pipeline, SynthSpec};
use tweetcast::{Candidate, Candidates, Error, Lexicon, SupportStrategy};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn sample() -> Vec<u8> {
    std::fs::read(fixture("tweets_sample.jsonl")).unwrap()
}

fn run(opts: &PipelineOptions) -> tweetcast::pipeline::PipelineOutput {
    run_pipeline(
        sample().as_slice(),
        &Lexicon::afinn111(),
        &Candidates::us2012(),
        opts,
    )
    .unwrap()
}

// Hand tally of the sample file:
//   day 1: obama +3 (great), +3 (good, shared); romney -3 (bad), +3 (good, shared)
//   day 2: obama -5 (sad, terrible); romney +4 (wins), +5 (happy, hopeful)
#[test]
fn sample_corpus_hand_oracle() {
    let out = run(&PipelineOptions::default());
    let s = out.corpus.stats;
    assert_eq!(
        (
            s.read,
            s.kept,
            s.deduped,
            s.non_english,
            s.unmatched,
            s.unparseable
        ),
        (10, 6, 1, 1, 1, 1)
    );
    assert_eq!(s.missing_lang, 1);
    assert!(s.is_conserved());

    let cells: Vec<_> = out
        .daily
        .iter()
        .map(|d| {
            (
                d.date.to_string(),
                d.candidate,
                d.positive,
                d.negative,
                d.tweet_count,
            )
        })
        .collect();
    assert_eq!(
        cells,
        vec![
            ("2012-10-01".into(), Candidate::First, 6, 0, 2),
            ("2012-10-01".into(), Candidate::Second, 3, 3, 2),
            ("2012-10-02".into(), Candidate::First, 0, 5, 1),
            ("2012-10-02".into(), Candidate::Second, 9, 0, 2),
        ]
    );
    // positive totals 6 vs 12, add-one smoothed
    assert_eq!(out.support.e, [7.0 / 20.0, 13.0 / 20.0]);
}

#[test]
fn sample_corpus_strategies() {
    let with = |strategy, smoothing| {
        let opts = PipelineOptions {
            strategy,
            smoothing,
            ..PipelineOptions::default()
        };
        run(&opts).support.e
    };
    assert_eq!(
        with(SupportStrategy::PositiveShare, false),
        [6.0 / 18.0, 12.0 / 18.0]
    );
    // nets 1 and 9
    assert_eq!(
        with(SupportStrategy::NetShare, true),
        [2.0 / 12.0, 10.0 / 12.0]
    );
    // tweet counts 3 and 4
    assert_eq!(
        with(SupportStrategy::VolumeShare, true),
        [4.0 / 9.0, 5.0 / 9.0]
    );
}

#[test]
fn sample_corpus_drop_both_and_languages() {
    let mut opts = PipelineOptions::default();
    opts.bucket.both = BothPolicy::DropBoth;
    // without the shared tweet: 3 vs 9
    assert_eq!(run(&opts).support.e, [4.0 / 14.0, 10.0 / 14.0]);

    let opts = PipelineOptions {
        ingest: IngestOptions {
            english_only: false,
            ..IngestOptions::default()
        },
        ..PipelineOptions::default()
    };
    let out = run(&opts);
    assert_eq!(out.corpus.stats.kept, 7);
    assert_eq!(out.corpus.stats.non_english, 0);
}

#[test]
fn strict_mode_rejects_sample() {
    let opts = PipelineOptions {
        ingest: IngestOptions {
            strict: true,
            ..IngestOptions::default()
        },
        ..PipelineOptions::default()
    };
    let err = run_pipeline(
        sample().as_slice(),
        &Lexicon::afinn111(),
        &Candidates::us2012(),
        &opts,
    )
    .unwrap_err();
    match err {
        Error::Ingest(IngestError::Parse { line, .. }) => assert_eq!(line, 8),
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn matches_reference_on_sample() {
    let text = String::from_utf8(sample()).unwrap();
    let reference = reference_pipeline(
        &text,
        &Lexicon::afinn111(),
        &Candidates::us2012(),
        SupportStrategy::PositiveShare,
        true,
    )
    .unwrap();
    assert_eq!(run(&PipelineOptions::default()).support.e, reference);
}

#[test]
fn thread_count_does_not_change_results() {
    let lex = Lexicon::afinn111();
    let spec: SynthSpec =
        serde_json::from_str(&std::fs::read_to_string(fixture("synth_spec.json")).unwrap())
            .unwrap();
    let corpus = generate_corpus(
        &SynthSpec {
            n_tweets: 20_000,
            ..spec
        },
        &lex,
    )
    .unwrap();
    let baseline = run_pipeline(
        corpus.jsonl.as_bytes(),
        &lex,
        &Candidates::us2012(),
        &PipelineOptions::default(),
    )
    .unwrap();
    for threads in [2, 3, 8] {
        let opts = PipelineOptions::default().with_threads(threads);
        let out =
            run_pipeline(corpus.jsonl.as_bytes(), &lex, &Candidates::us2012(), &opts).unwrap();
        assert_eq!(out, baseline, "threads={threads}");
    }
}

#[test]
fn empty_corpus_reports_stats() {
    let input = b"{\"id\":\"1\",\"created_at\":\"2012-10-01T00:00:00Z\",\"text\":\"nothing here\",\"lang\":\"en\"}\n";
    let err = run_pipeline(
        &input[..],
        &Lexicon::afinn111(),
        &Candidates::us2012(),
        &PipelineOptions::default(),
    )
    .unwrap_err();
    assert!(
        matches!(err, Error::Ingest(IngestError::EmptyCorpus { .. })),
        "{err}"
    );
}
