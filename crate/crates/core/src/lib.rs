//! Census-corrected Twitter election forecasting.
//!
//! Tweets are scored against the AFINN valence lexicon and aggregated into a
//! per-candidate twitter support share. Per-state census data (twitter and
//! internet penetration, prior party support) then mixes that share with the
//! prior to forecast each state, the popular vote and the electoral college,
//! and [`eval`] scores the result against actual returns and a prior-only
//! baseline.

pub mod census;
pub mod cli;
pub mod corpus;
pub mod eval;
pub mod lexicon;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod synth;

pub use census::{load_state_profiles, validate_profiles, Party, StateProfile, StateTable};
pub use corpus::{
    bucket_by_day, ingest_tweets, match_candidates, Candidate, Candidates, Corpus, DailySentiment,
};
pub use eval::{absolute_errors, compare, mae, EvaluationReport, StateShares};
pub use lexicon::{tokenize, Lexicon, ScoreMode, SentimentScore};
pub use model::{
    baseline_forecast, electoral_college, estimate_twitter_support, forecast, state_support,
    two_party_share, Forecast, ForecastModel, PartyAlignment, SupportStrategy, TwitterSupport,
    WeightMode,
};
pub use pipeline::{run_pipeline, PipelineOptions, PipelineOutput};

/// Identifier of the data set shipped under `fixtures/`.
pub const FIXTURE_SET: &str = "us2012-v1";

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Lexicon(#[from] lexicon::LexiconError),
    #[error(transparent)]
    Ingest(#[from] corpus::IngestError),
    #[error(transparent)]
    Census(#[from] census::CensusError),
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
    #[error(transparent)]
    Synth(#[from] synth::SynthError),
}
