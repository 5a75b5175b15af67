//! Seeded synthetic tweet corpora with a planted twitter support, and a
//! deliberately naive reference pipeline used as an oracle for the main one.

use std::collections::HashSet;

use chrono::{DateTime, Duration, NaiveDate, SecondsFormat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Candidates;
use crate::lexicon::Lexicon;
use crate::model::SupportStrategy;

pub const RNG_ALGORITHM: &str = "chacha8";
pub const GENERATOR_VERSION: &str = "tweetcast-synth/1";

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("invalid synth spec: {0}")]
    Spec(String),
    #[error("reference pipeline: {0}")]
    Reference(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

fn default_terms() -> [String; 2] {
    ["obama".into(), "romney".into()]
}

fn default_filler() -> Vec<String> {
    [
        "campaign", "rally", "today", "debate", "speech", "tonight", "voters", "ohio", "watching",
        "election",
    ]
    .map(String::from)
    .to_vec()
}

fn default_positive_rate() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub planted_e: [f64; 2],
    pub n_tweets: u64,
    pub date_range: DateRange,
    pub seed: u64,
    pub positive_vocab: Vec<String>,
    pub negative_vocab: Vec<String>,
    /// Probability that a tweet carries a positive word.
    #[serde(default = "default_positive_rate")]
    pub positive_rate: f64,
    /// One mention term per candidate.
    #[serde(default = "default_terms")]
    pub candidate_terms: [String; 2],
    /// Sentiment-neutral padding words.
    #[serde(default = "default_filler")]
    pub filler: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthMetadata {
    pub generator: String,
    pub rng: String,
    pub seed: u64,
    pub planted_e: [f64; 2],
    pub n_tweets: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub jsonl: String,
    pub metadata: SynthMetadata,
}

impl SynthSpec {
    pub fn validate(&self, lexicon: &Lexicon) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Spec(m));
        let [e1, e2] = self.planted_e;
        if !(e1 > 0.0 && e1 < 1.0 && e2 > 0.0 && e2 < 1.0) || (e1 + e2 - 1.0).abs() > 1e-9 {
            return bad(format!(
                "planted_e must be two shares in (0, 1) summing to 1, got [{e1}, {e2}]"
            ));
        }
        if !(0.0..=1.0).contains(&self.positive_rate) {
            return bad(format!(
                "positive_rate {} outside [0, 1]",
                self.positive_rate
            ));
        }
        if self.date_range.end < self.date_range.start {
            return bad("date_range.end precedes date_range.start".into());
        }
        if self.positive_vocab.is_empty() || self.negative_vocab.is_empty() {
            return bad("positive_vocab and negative_vocab must be nonempty".into());
        }
        for (vocab, positive) in [(&self.positive_vocab, true), (&self.negative_vocab, false)] {
            for w in vocab.iter() {
                match lexicon.get(w) {
                    None => return bad(format!("vocab token `{w}` is not in the lexicon")),
                    Some(v) if (v > 0) != positive || v == 0 => {
                        return bad(format!(
                            "vocab token `{w}` has valence {v}, wrong sign for its list"
                        ))
                    }
                    Some(_) if crate::lexicon::tokenize(w) != [w.as_str()] => {
                        return bad(format!("vocab token `{w}` is not a single lowercase token"))
                    }
                    Some(_) => {}
                }
            }
        }
        for w in self.candidate_terms.iter().chain(&self.filler) {
            if lexicon.get(w).is_some() {
                return bad(format!("`{w}` carries sentiment in the lexicon"));
            }
            if crate::lexicon::tokenize(w) != [w.to_lowercase()] {
                return bad(format!("`{w}` is not a single token"));
            }
        }
        if self.filler.is_empty() {
            return bad("filler must be nonempty".into());
        }
        if self.candidate_terms[0].eq_ignore_ascii_case(&self.candidate_terms[1]) {
            return bad("candidate terms must differ".into());
        }
        Ok(())
    }
}

fn capitalize(w: &str) -> String {
    let mut chars = w.chars();
    match chars.next() {
        Some(f) => f.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[derive(Serialize)]
struct OutTweet<'a> {
    id: String,
    created_at: String,
    text: String,
    lang: &'a str,
}

/// Each tweet mentions one candidate and carries one sentiment word. A
/// positive tweet goes to candidate 1 with probability `planted_e[0]`, a
/// negative one with probability `planted_e[1]`, so candidate 1's share of
/// positive sentiment converges to `planted_e[0]`.
pub fn generate_corpus(spec: &SynthSpec, lexicon: &Lexicon) -> Result<SynthCorpus, SynthError> {
    spec.validate(lexicon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let start = spec
        .date_range
        .start
        .and_hms_opt(0, 0, 0)
        .expect("midnight exists")
        .and_utc();
    let days = (spec.date_range.end - spec.date_range.start).num_days();
    let names = spec.candidate_terms.each_ref().map(|t| capitalize(t));

    let mut jsonl = String::new();
    for i in 0..spec.n_tweets {
        let positive = rng.gen::<f64>() < spec.positive_rate;
        let to_first = rng.gen::<f64>()
            < if positive {
                spec.planted_e[0]
            } else {
                spec.planted_e[1]
            };
        let vocab = if positive {
            &spec.positive_vocab
        } else {
            &spec.negative_vocab
        };
        let word = &vocab[rng.gen_range(0..vocab.len())];
        let f1 = &spec.filler[rng.gen_range(0..spec.filler.len())];
        let f2 = &spec.filler[rng.gen_range(0..spec.filler.len())];
        let offset =
            Duration::days(rng.gen_range(0..=days)) + Duration::seconds(rng.gen_range(0..86_400));
        let ts: DateTime<_> = start + offset;
        let who = &names[if to_first { 0 } else { 1 }];
        let tweet = OutTweet {
            id: format!("{:016x}-{i:09}", spec.seed),
            created_at: ts.to_rfc3339_opts(SecondsFormat::Secs, true),
            text: format!("{who} {f1} {word} {f2}!"),
            lang: "en",
        };
        jsonl.push_str(&serde_json::to_string(&tweet).expect("plain struct serializes"));
        jsonl.push('\n');
    }
    Ok(SynthCorpus {
        jsonl,
        metadata: SynthMetadata {
            generator: GENERATOR_VERSION.into(),
            rng: RNG_ALGORITHM.into(),
            seed: spec.seed,
            planted_e: spec.planted_e,
            n_tweets: spec.n_tweets,
        },
    })
}

/// Recomputes twitter support from raw JSON Lines in one naive pass with
/// none of the main pipeline's machinery: generic JSON values, whole-string
/// lowercasing, a fresh token split, per-candidate running sums. English-only,
/// both-candidate tweets count for each.
pub fn reference_pipeline(
    jsonl: &str,
    lexicon: &Lexicon,
    candidates: &Candidates,
    strategy: SupportStrategy,
    smoothing: bool,
) -> Result<[f64; 2], SynthError> {
    let terms: [HashSet<&str>; 2] = [0, 1].map(|j| {
        let c = crate::corpus::Candidate::BOTH[j];
        candidates
            .spec(c)
            .match_terms
            .iter()
            .map(String::as_str)
            .collect()
    });
    let mut seen_ids: HashSet<String> = HashSet::new();
    let mut pos = [0i64; 2];
    let mut neg = [0i64; 2];
    let mut count = [0i64; 2];
    let mut kept = 0usize;

    for line in jsonl.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let Ok(v) = serde_json::from_str::<serde_json::Value>(line) else {
            continue;
        };
        let (Some(id), Some(created), Some(text)) = (
            v["id"].as_str(),
            v["created_at"].as_str(),
            v["text"].as_str(),
        ) else {
            continue;
        };
        if id.is_empty() || text.trim().is_empty() || DateTime::parse_from_rfc3339(created).is_err()
        {
            continue;
        }
        if !v["lang"].is_null() && v["lang"].as_str().is_none() {
            continue;
        }
        if !seen_ids.insert(id.to_string()) {
            continue;
        }
        if let Some(lang) = v["lang"].as_str() {
            if !lang.eq_ignore_ascii_case("en") {
                continue;
            }
        }

        let lowered: String = text.chars().flat_map(char::to_lowercase).collect();
        let words: Vec<&str> = lowered
            .split(|c: char| !(c.is_alphanumeric() || c == '\''))
            .filter(|w| !w.is_empty())
            .collect();
        let mentions = [0, 1].map(|j| words.iter().any(|w| terms[j].contains(w)));
        if !mentions[0] && !mentions[1] {
            continue;
        }
        kept += 1;
        let (mut p, mut n) = (0i64, 0i64);
        for w in &words {
            if let Some(val) = lexicon.get(w) {
                if val > 0 {
                    p += val as i64;
                } else {
                    n -= val as i64;
                }
            }
        }
        for j in 0..2 {
            if mentions[j] {
                pos[j] += p;
                neg[j] += n;
                count[j] += 1;
            }
        }
    }
    if kept == 0 {
        return Err(SynthError::Reference("empty corpus".into()));
    }

    let x: [i64; 2] = match strategy {
        SupportStrategy::PositiveShare => pos,
        SupportStrategy::NetShare => [(pos[0] - neg[0]).max(0), (pos[1] - neg[1]).max(0)],
        SupportStrategy::VolumeShare => count,
    };
    let add = if smoothing { 1 } else { 0 };
    let total = x[0] + x[1] + 2 * add;
    if total == 0 {
        return Err(SynthError::Reference(format!("no {strategy} signal")));
    }
    Ok([
        (x[0] + add) as f64 / total as f64,
        (x[1] + add) as f64 / total as f64,
    ])
}
