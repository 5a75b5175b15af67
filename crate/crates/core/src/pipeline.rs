//! Tweets to twitter support: ingest, score, bucket, estimate.

use std::io::BufRead;

use crate::corpus::{
    bucket_by_day, ingest_tweets, BucketOptions, Candidates, Corpus, DailySentiment, IngestOptions,
};
use crate::lexicon::Lexicon;
use crate::model::{estimate_twitter_support, SupportStrategy, TwitterSupport};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineOptions {
    pub ingest: IngestOptions,
    pub bucket: BucketOptions,
    pub strategy: SupportStrategy,
    pub smoothing: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            ingest: IngestOptions::default(),
            bucket: BucketOptions::default(),
            strategy: SupportStrategy::PositiveShare,
            smoothing: true,
        }
    }
}

impl PipelineOptions {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.ingest.threads = threads;
        self.bucket.threads = threads;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub corpus: Corpus,
    pub daily: Vec<DailySentiment>,
    pub support: TwitterSupport,
}

pub fn run_pipeline(
    tweets: impl BufRead,
    lexicon: &Lexicon,
    candidates: &Candidates,
    opts: &PipelineOptions,
) -> Result<PipelineOutput, Error> {
    let corpus = ingest_tweets(tweets, candidates, &opts.ingest)?;
    let daily = bucket_by_day(&corpus, lexicon, &opts.bucket)?;
    let support = estimate_twitter_support(&daily, opts.strategy, opts.smoothing)?;
    Ok(PipelineOutput {
        corpus,
        daily,
        support,
    })
}
