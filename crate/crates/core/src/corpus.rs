//! Tweet ingestion, candidate attribution and daily sentiment buckets.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use chrono::{DateTime, NaiveDate, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{for_each_token, tokenize, Lexicon, ScoreMode, SentimentScore};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("empty corpus: no tweets left after filtering ({stats})")]
    EmptyCorpus { stats: IngestStats },
    #[error("invalid candidate spec: {0}")]
    Candidates(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("reading tweets: {0}")]
    Io(#[from] std::io::Error),
}

/// Candidate index `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Candidate {
    First,
    Second,
}

impl Candidate {
    pub const BOTH: [Candidate; 2] = [Candidate::First, Candidate::Second];

    pub fn id(self) -> u8 {
        match self {
            Candidate::First => 1,
            Candidate::Second => 2,
        }
    }

    pub fn index(self) -> usize {
        self.id() as usize - 1
    }

    pub fn from_id(id: u8) -> Option<Candidate> {
        match id {
            1 => Some(Candidate::First),
            2 => Some(Candidate::Second),
            _ => None,
        }
    }
}

impl From<Candidate> for u8 {
    fn from(c: Candidate) -> u8 {
        c.id()
    }
}

impl TryFrom<u8> for Candidate {
    type Error = String;
    fn try_from(id: u8) -> Result<Self, Self::Error> {
        Candidate::from_id(id).ok_or_else(|| format!("candidate id must be 1 or 2, got {id}"))
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSpec {
    pub name: String,
    /// Whole-token match terms, lowercase.
    pub match_terms: Vec<String>,
}

impl CandidateSpec {
    pub fn new(name: impl Into<String>, terms: &[&str]) -> CandidateSpec {
        CandidateSpec {
            name: name.into(),
            match_terms: terms.iter().map(|t| t.to_string()).collect(),
        }
    }
}

/// The two validated candidate specs, indexed by [`Candidate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidates {
    specs: [CandidateSpec; 2],
}

impl Candidates {
    pub fn new(first: CandidateSpec, second: CandidateSpec) -> Result<Candidates, IngestError> {
        let mut specs = [first, second];
        for spec in specs.iter_mut() {
            if spec.match_terms.is_empty() {
                return Err(IngestError::Candidates(format!(
                    "`{}` has no match terms",
                    spec.name
                )));
            }
            for term in spec.match_terms.iter_mut() {
                let tokens = tokenize(term);
                if tokens.len() != 1 {
                    return Err(IngestError::Candidates(format!(
                        "match term `{term}` must be a single token"
                    )));
                }
                *term = tokens.into_iter().next().unwrap();
            }
        }
        if let Some(shared) = specs[0]
            .match_terms
            .iter()
            .find(|t| specs[1].match_terms.contains(t))
        {
            return Err(IngestError::Candidates(format!(
                "match term `{shared}` used by both candidates"
            )));
        }
        Ok(Candidates { specs })
    }

    /// Obama / Romney, the 2012 race.
    pub fn us2012() -> Candidates {
        Candidates::new(
            CandidateSpec::new("Obama", &["obama", "barack"]),
            CandidateSpec::new("Romney", &["romney", "mitt"]),
        )
        .expect("static specs are valid")
    }

    pub fn spec(&self, c: Candidate) -> &CandidateSpec {
        &self.specs[c.index()]
    }

    pub fn names(&self) -> [&str; 2] {
        [self.specs[0].name.as_str(), self.specs[1].name.as_str()]
    }

    fn which(&self, token: &str) -> Option<Candidate> {
        Candidate::BOTH
            .into_iter()
            .find(|&c| self.specs[c.index()].match_terms.iter().any(|t| t == token))
    }
}

/// Set of candidates a tweet mentions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Mentions(u8);

impl Mentions {
    pub fn insert(&mut self, c: Candidate) {
        self.0 |= 1 << c.index();
    }

    pub fn contains(self, c: Candidate) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_both(self) -> bool {
        self.0 == 0b11
    }

    pub fn iter(self) -> impl Iterator<Item = Candidate> {
        Candidate::BOTH
            .into_iter()
            .filter(move |&c| self.contains(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    pub text: String,
    pub lang: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawTweet {
    id: String,
    created_at: String,
    text: String,
    #[serde(default)]
    lang: Option<String>,
}

impl Tweet {
    /// Parses one JSON Lines record.
    pub fn from_json(line: &str) -> Result<Tweet, String> {
        let raw: RawTweet = serde_json::from_str(line).map_err(|e| e.to_string())?;
        if raw.id.is_empty() {
            return Err("empty id".into());
        }
        if raw.text.trim().is_empty() {
            return Err(format!("tweet {}: empty text", raw.id));
        }
        let timestamp = DateTime::parse_from_rfc3339(&raw.created_at)
            .map_err(|e| format!("tweet {}: bad created_at `{}`: {e}", raw.id, raw.created_at))?
            .with_timezone(&Utc);
        Ok(Tweet {
            id: raw.id,
            timestamp,
            text: raw.text,
            lang: raw.lang,
        })
    }

    fn is_english_or_unknown(&self) -> bool {
        self.lang
            .as_deref()
            .is_none_or(|l| l.eq_ignore_ascii_case("en"))
    }
}

/// Candidates whose match terms appear as whole tokens of the tweet text.
pub fn match_candidates(tweet: &Tweet, candidates: &Candidates) -> Mentions {
    mentions_in(&tweet.text, candidates)
}

fn mentions_in(text: &str, candidates: &Candidates) -> Mentions {
    let mut mentions = Mentions::default();
    let mut buf = String::new();
    for_each_token(text, &mut buf, |token| {
        if let Some(c) = candidates.which(token) {
            mentions.insert(c);
        }
    });
    mentions
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributedTweet {
    pub tweet: Tweet,
    pub mentions: Mentions,
}

/// Counts covering every nonblank input line exactly once.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IngestStats {
    pub read: u64,
    pub kept: u64,
    pub deduped: u64,
    pub non_english: u64,
    pub unmatched: u64,
    pub unparseable: u64,
    /// Kept tweets that carried no `lang` field.
    pub missing_lang: u64,
}

impl IngestStats {
    pub fn is_conserved(&self) -> bool {
        self.read == self.kept + self.deduped + self.non_english + self.unmatched + self.unparseable
    }
}

impl fmt::Display for IngestStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "read={} kept={} deduped={} non_english={} unmatched={} unparseable={} missing_lang={}",
            self.read,
            self.kept,
            self.deduped,
            self.non_english,
            self.unmatched,
            self.unparseable,
            self.missing_lang
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestOptions {
    pub english_only: bool,
    /// Abort on the first unparseable line instead of counting it.
    pub strict: bool,
    /// Worker threads for parsing; 1 is sequential, 0 uses the global pool.
    pub threads: usize,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            english_only: true,
            strict: false,
            threads: 1,
        }
    }
}

/// Cleaned, deduplicated tweets in `(timestamp, id)` order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub tweets: Vec<AttributedTweet>,
    pub stats: IngestStats,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }
}

pub(crate) fn run_with_threads<T: Send>(
    threads: usize,
    f: impl FnOnce() -> T + Send,
) -> Result<T, IngestError> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| IngestError::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}

/// Reads JSON Lines tweets, dropping duplicates, non-English and unattributed
/// records. Blank lines are skipped and not counted.
pub fn ingest_tweets(
    reader: impl BufRead,
    candidates: &Candidates,
    opts: &IngestOptions,
) -> Result<Corpus, IngestError> {
    let mut lines = Vec::new();
    for (idx, raw) in reader.split(b'\n').enumerate() {
        let raw = raw?;
        if raw.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        lines.push((idx + 1, raw));
    }

    let parse = |(line_no, raw): &(usize, Vec<u8>)| -> (usize, Result<(Tweet, Mentions), String>) {
        let parsed = std::str::from_utf8(raw)
            .map_err(|_| "not valid UTF-8".to_string())
            .and_then(Tweet::from_json)
            .map(|t| {
                let m = mentions_in(&t.text, candidates);
                (t, m)
            });
        (*line_no, parsed)
    };
    let parsed: Vec<_> = if opts.threads == 1 {
        lines.iter().map(parse).collect()
    } else {
        run_with_threads(opts.threads, || lines.par_iter().map(parse).collect())?
    };
    drop(lines);

    let mut stats = IngestStats::default();
    let mut seen: HashSet<String> = HashSet::with_capacity(parsed.len());
    let mut tweets = Vec::with_capacity(parsed.len());
    for (line_no, record) in parsed {
        stats.read += 1;
        let (tweet, mentions) = match record {
            Ok(r) => r,
            Err(message) if opts.strict => {
                return Err(IngestError::Parse {
                    line: line_no,
                    message,
                })
            }
            Err(_) => {
                stats.unparseable += 1;
                continue;
            }
        };
        if !seen.insert(tweet.id.clone()) {
            stats.deduped += 1;
        } else if opts.english_only && !tweet.is_english_or_unknown() {
            stats.non_english += 1;
        } else if mentions.is_empty() {
            stats.unmatched += 1;
        } else {
            stats.kept += 1;
            if tweet.lang.is_none() {
                stats.missing_lang += 1;
            }
            tweets.push(AttributedTweet { tweet, mentions });
        }
    }
    if tweets.is_empty() {
        return Err(IngestError::EmptyCorpus { stats });
    }
    tweets.sort_by(|a, b| {
        a.tweet
            .timestamp
            .cmp(&b.tweet.timestamp)
            .then_with(|| a.tweet.id.cmp(&b.tweet.id))
    });
    Ok(Corpus { tweets, stats })
}

/// How a tweet mentioning both candidates is counted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BothPolicy {
    /// Full score to each candidate.
    #[default]
    CountBoth,
    DropBoth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BucketOptions {
    pub mode: ScoreMode,
    pub both: BothPolicy,
    pub threads: usize,
}

impl Default for BucketOptions {
    fn default() -> Self {
        BucketOptions {
            mode: ScoreMode::Unigram,
            both: BothPolicy::CountBoth,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DailySentiment {
    pub date: NaiveDate,
    pub candidate: Candidate,
    pub positive: u64,
    pub negative: u64,
    pub tweet_count: u64,
}

type DayBuckets = BTreeMap<(NaiveDate, Candidate), (u64, u64, u64)>;

fn add_tweet(
    buckets: &mut DayBuckets,
    t: &AttributedTweet,
    score: SentimentScore,
    both: BothPolicy,
) {
    if both == BothPolicy::DropBoth && t.mentions.is_both() {
        return;
    }
    let date = t.tweet.timestamp.date_naive();
    for c in t.mentions.iter() {
        let acc = buckets.entry((date, c)).or_default();
        acc.0 += score.positive;
        acc.1 += score.negative;
        acc.2 += 1;
    }
}

fn merge(mut a: DayBuckets, b: DayBuckets) -> DayBuckets {
    for (k, v) in b {
        let acc = a.entry(k).or_default();
        acc.0 += v.0;
        acc.1 += v.1;
        acc.2 += v.2;
    }
    a
}

/// Per-(UTC day, candidate) sentiment sums, ordered by day then candidate.
pub fn bucket_by_day(
    corpus: &Corpus,
    lexicon: &Lexicon,
    opts: &BucketOptions,
) -> Result<Vec<DailySentiment>, IngestError> {
    let buckets = if opts.threads == 1 {
        let mut b = DayBuckets::new();
        for t in &corpus.tweets {
            add_tweet(
                &mut b,
                t,
                lexicon.score_with(&t.tweet.text, opts.mode),
                opts.both,
            );
        }
        b
    } else {
        run_with_threads(opts.threads, || {
            corpus
                .tweets
                .par_iter()
                .fold(DayBuckets::new, |mut b, t| {
                    add_tweet(
                        &mut b,
                        t,
                        lexicon.score_with(&t.tweet.text, opts.mode),
                        opts.both,
                    );
                    b
                })
                .reduce(DayBuckets::new, merge)
        })?
    };
    Ok(buckets
        .into_iter()
        .map(
            |((date, candidate), (positive, negative, tweet_count))| DailySentiment {
                date,
                candidate,
                positive,
                negative,
                tweet_count,
            },
        )
        .collect())
}

pub fn write_daily_csv(rows: &[DailySentiment], writer: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "candidate", "positive", "negative", "tweet_count"])?;
    for r in rows {
        w.write_record([
            r.date.format("%Y-%m-%d").to_string(),
            r.candidate.id().to_string(),
            r.positive.to_string(),
            r.negative.to_string(),
            r.tweet_count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(id: &str, ts: &str, text: &str, lang: Option<&str>) -> String {
        let mut v = serde_json::json!({ "id": id, "created_at": ts, "text": text });
        if let Some(l) = lang {
            v["lang"] = l.into();
        }
        v.to_string()
    }

    fn ingest(lines: &[String]) -> Result<Corpus, IngestError> {
        ingest_tweets(
            lines.join("\n").as_bytes(),
            &Candidates::us2012(),
            &IngestOptions::default(),
        )
    }

    fn tweet(text: &str) -> Tweet {
        Tweet {
            id: "1".into(),
            timestamp: Utc::now(),
            text: text.into(),
            lang: None,
        }
    }

    #[test]
    fn match_examples() {
        let c = Candidates::us2012();
        let ids = |t: &str| {
            match_candidates(&tweet(t), &c)
                .iter()
                .map(Candidate::id)
                .collect::<Vec<_>>()
        };
        assert_eq!(ids("Obama wins"), vec![1]);
        assert_eq!(ids("Obama vs Romney debate"), vec![1, 2]);
        assert!(ids("Obamacare").is_empty());
        assert_eq!(ids("@MittRomney go MITT"), vec![2]);
    }

    #[test]
    fn candidate_specs_validated() {
        let err = Candidates::new(
            CandidateSpec::new("a", &["x"]),
            CandidateSpec::new("b", &["X"]),
        )
        .unwrap_err();
        assert!(err.to_string().contains("both"));
        assert!(Candidates::new(
            CandidateSpec::new("a", &[]),
            CandidateSpec::new("b", &["y"])
        )
        .is_err());
        assert!(Candidates::new(
            CandidateSpec::new("a", &["new york"]),
            CandidateSpec::new("b", &["y"])
        )
        .is_err());
    }

    #[test]
    fn dedup_keeps_first() {
        let c = ingest(&[
            line("1", "2012-10-01T10:00:00Z", "Obama first", Some("en")),
            line("1", "2012-10-01T09:00:00Z", "Obama second", Some("en")),
        ])
        .unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.stats.deduped, 1);
        assert_eq!(c.tweets[0].tweet.text, "Obama first");
    }

    #[test]
    fn non_english_dropped() {
        let c = ingest(&[
            line("1", "2012-10-01T10:00:00Z", "Obama gana", Some("es")),
            line("2", "2012-10-01T10:00:00Z", "Obama wins", Some("en")),
        ])
        .unwrap();
        assert_eq!(c.stats.non_english, 1);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn missing_lang_kept() {
        let c = ingest(&[line("1", "2012-10-01T10:00:00Z", "Romney speaks", None)]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.stats.missing_lang, 1);
    }

    #[test]
    fn three_matched_records() {
        let c = ingest(&[
            line("a", "2012-09-01T00:00:00Z", "Obama good", Some("en")),
            line("b", "2012-09-02T00:00:00Z", "Romney bad", Some("en")),
            line("c", "2012-09-03T00:00:00Z", "Obama Romney", Some("en")),
        ])
        .unwrap();
        assert_eq!(c.len(), 3);
        let s = c.stats;
        assert_eq!(
            (s.read, s.kept, s.deduped, s.non_english, s.unmatched),
            (3, 3, 0, 0, 0)
        );
    }

    #[test]
    fn sorted_by_time_then_id() {
        let c = ingest(&[
            line("b", "2012-09-02T00:00:00Z", "Obama", None),
            line("c", "2012-09-01T00:00:00+02:00", "Obama", None),
            line("a", "2012-09-02T00:00:00Z", "Obama", None),
        ])
        .unwrap();
        let ids: Vec<_> = c.tweets.iter().map(|t| t.tweet.id.as_str()).collect();
        assert_eq!(ids, ["c", "a", "b"]);
    }

    #[test]
    fn lenient_vs_strict() {
        let lines = [
            "not json".to_string(),
            line("1", "yesterday", "Obama", None),
            line("2", "2012-09-01T00:00:00Z", "   ", None),
            r#"{"id": 5, "created_at": "2012-09-01T00:00:00Z", "text": "Obama"}"#.to_string(),
            line("3", "2012-09-01T00:00:00Z", "nobody here", None),
            line("4", "2012-09-01T00:00:00Z", "Obama", None),
        ];
        let c = ingest(&lines).unwrap();
        assert_eq!(c.stats.unparseable, 4);
        assert_eq!(c.stats.unmatched, 1);
        assert!(c.stats.is_conserved());

        let strict = IngestOptions {
            strict: true,
            ..Default::default()
        };
        let err =
            ingest_tweets(lines.join("\n").as_bytes(), &Candidates::us2012(), &strict).unwrap_err();
        assert!(matches!(err, IngestError::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_result_is_error() {
        let err = ingest(&[line("1", "2012-09-01T00:00:00Z", "nothing", None)]).unwrap_err();
        assert!(matches!(err, IngestError::EmptyCorpus { .. }));
        assert!(matches!(
            ingest(&[]).unwrap_err(),
            IngestError::EmptyCorpus { .. }
        ));
    }

    #[test]
    fn bucket_single_tweet() {
        let lex = Lexicon::parse("good\t3\n").unwrap();
        let c = ingest(&[line("1", "2012-09-01T23:59:59-00:00", "Obama good", None)]).unwrap();
        let rows = bucket_by_day(&c, &lex, &BucketOptions::default()).unwrap();
        assert_eq!(rows.len(), 1);
        let r = rows[0];
        assert_eq!(
            (r.date, r.candidate, r.positive, r.negative, r.tweet_count),
            (
                NaiveDate::from_ymd_opt(2012, 9, 1).unwrap(),
                Candidate::First,
                3,
                0,
                1
            )
        );
    }

    #[test]
    fn bucket_empty_corpus() {
        let rows = bucket_by_day(
            &Corpus::default(),
            &Lexicon::afinn111(),
            &BucketOptions::default(),
        )
        .unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn both_policy() {
        let lex = Lexicon::parse("good\t3\n").unwrap();
        let c = ingest(&[line("1", "2012-09-01T12:00:00Z", "Obama Romney good", None)]).unwrap();
        let rows = bucket_by_day(&c, &lex, &BucketOptions::default()).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.positive == 3 && r.tweet_count == 1));
        let drop = BucketOptions {
            both: BothPolicy::DropBoth,
            ..Default::default()
        };
        assert!(bucket_by_day(&c, &lex, &drop).unwrap().is_empty());
    }

    #[test]
    fn day_boundaries_in_utc() {
        let lex = Lexicon::afinn111();
        let c = ingest(&[
            line("1", "2012-09-01T23:30:00-05:00", "Obama good", None),
            line("2", "2012-09-02T01:00:00Z", "Obama good", None),
        ])
        .unwrap();
        let rows = bucket_by_day(&c, &lex, &BucketOptions::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].date, NaiveDate::from_ymd_opt(2012, 9, 2).unwrap());
        assert_eq!(rows[0].tweet_count, 2);
    }

    #[test]
    fn daily_csv_format() {
        let rows = [DailySentiment {
            date: NaiveDate::from_ymd_opt(2012, 8, 12).unwrap(),
            candidate: Candidate::Second,
            positive: 4,
            negative: 2,
            tweet_count: 3,
        }];
        let mut out = Vec::new();
        write_daily_csv(&rows, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "date,candidate,positive,negative,tweet_count\n2012-08-12,2,4,2,3\n"
        );
    }
}
