//! Valence lexicon loading and text scoring.
//!
//! The lexicon file is the AFINN format: one `term<TAB>valence` entry per
//! line, valences in `[-5, 5]`. Scoring is unigram by default; phrase mode
//! adds greedy longest-match over the lexicon's multi-token entries.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub const MIN_VALENCE: i8 = -5;
pub const MAX_VALENCE: i8 = 5;

/// The AFINN-111 word list, shipped unmodified.
const AFINN_111: &str = include_str!("../../../fixtures/AFINN-111.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: expected `term<TAB>valence`")]
    MissingTab { line: usize },
    #[error("line {line}: empty term")]
    EmptyTerm { line: usize },
    #[error("line {line}: valence `{value}` is not an integer")]
    BadValence { line: usize, value: String },
    #[error("line {line}: valence {value} outside [-5, 5]")]
    OutOfRange { line: usize, value: i64 },
    #[error("line {line}: duplicate term `{term}` (first defined on line {first})")]
    Duplicate {
        line: usize,
        term: String,
        first: usize,
    },
    #[error("line {line}: not valid UTF-8")]
    Encoding { line: usize },
    #[error("reading lexicon: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub term: String,
    pub valence: i8,
}

/// Unigram or phrase-aware matching.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreMode {
    #[default]
    Unigram,
    Phrase,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SentimentScore {
    /// Sum of positive valences.
    pub positive: u64,
    /// Sum of absolute negative valences.
    pub negative: u64,
    pub net: i64,
    /// Tokens covered by a lexicon hit (a phrase hit covers all its tokens).
    pub matched_tokens: u64,
}

impl SentimentScore {
    fn add_valence(&mut self, valence: i8, tokens: u64) {
        if valence > 0 {
            self.positive += valence as u64;
        } else {
            self.negative += valence.unsigned_abs() as u64;
        }
        self.net += valence as i64;
        self.matched_tokens += tokens;
    }
}

/// Immutable term → valence map.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    terms: HashMap<String, i8>,
    // Multi-token entries keyed by their space-joined token form.
    phrases: HashMap<String, i8>,
    max_phrase_tokens: usize,
}

impl Lexicon {
    /// Bundled AFINN-111 list.
    pub fn afinn111() -> Lexicon {
        Lexicon::parse(AFINN_111).expect("bundled AFINN-111 is well formed")
    }

    pub fn parse(source: &str) -> Result<Lexicon, LexiconError> {
        Lexicon::from_reader(source.as_bytes())
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
        let file = std::fs::File::open(path)?;
        Lexicon::from_reader(file)
    }

    pub fn from_reader(reader: impl Read) -> Result<Lexicon, LexiconError> {
        let mut lexicon = Lexicon::default();
        let mut first_seen: HashMap<String, usize> = HashMap::new();

        for (idx, raw) in BufReader::new(reader).split(b'\n').enumerate() {
            let line_no = idx + 1;
            let raw = raw?;
            let line =
                std::str::from_utf8(&raw).map_err(|_| LexiconError::Encoding { line: line_no })?;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() {
                continue;
            }
            let (term, value) = line
                .split_once('\t')
                .ok_or(LexiconError::MissingTab { line: line_no })?;
            let term = term.trim().to_lowercase();
            if term.is_empty() {
                return Err(LexiconError::EmptyTerm { line: line_no });
            }
            let value = value.trim();
            let parsed: i64 = value.parse().map_err(|_| LexiconError::BadValence {
                line: line_no,
                value: value.to_string(),
            })?;
            if parsed < MIN_VALENCE as i64 || parsed > MAX_VALENCE as i64 {
                return Err(LexiconError::OutOfRange {
                    line: line_no,
                    value: parsed,
                });
            }
            if let Some(&first) = first_seen.get(&term) {
                return Err(LexiconError::Duplicate {
                    line: line_no,
                    term,
                    first,
                });
            }
            first_seen.insert(term.clone(), line_no);
            lexicon.insert(term, parsed as i8);
        }
        Ok(lexicon)
    }

    fn insert(&mut self, term: String, valence: i8) {
        let tokens = tokenize(&term);
        if tokens.len() > 1 {
            self.max_phrase_tokens = self.max_phrase_tokens.max(tokens.len());
            // "green-wash" and "green wash" share a token form; the first one wins.
            self.phrases.entry(tokens.join(" ")).or_insert(valence);
        }
        self.terms.insert(term, valence);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of entries that tokenize to more than one token.
    pub fn phrase_count(&self) -> usize {
        self.terms.keys().filter(|t| tokenize(t).len() > 1).count()
    }

    /// Case-insensitive lookup of an exact term.
    pub fn get(&self, term: &str) -> Option<i8> {
        match self.terms.get(term) {
            Some(v) => Some(*v),
            None => self.terms.get(&term.to_lowercase()).copied(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = LexiconEntry> + '_ {
        self.terms.iter().map(|(term, &valence)| LexiconEntry {
            term: term.clone(),
            valence,
        })
    }

    pub fn score(&self, text: &str) -> SentimentScore {
        self.score_with(text, ScoreMode::Unigram)
    }

    pub fn score_with(&self, text: &str, mode: ScoreMode) -> SentimentScore {
        match mode {
            ScoreMode::Unigram => self.score_unigrams(text),
            ScoreMode::Phrase => self.score_phrases(text),
        }
    }

    fn score_unigrams(&self, text: &str) -> SentimentScore {
        let mut score = SentimentScore::default();
        let mut buf = String::new();
        for_each_token(text, &mut buf, |token| {
            if let Some(&v) = self.terms.get(token) {
                score.add_valence(v, 1);
            }
        });
        score
    }

    fn score_phrases(&self, text: &str) -> SentimentScore {
        let tokens = tokenize(text);
        let mut score = SentimentScore::default();
        let mut i = 0;
        let mut key = String::new();
        'outer: while i < tokens.len() {
            let longest = self.max_phrase_tokens.min(tokens.len() - i);
            for n in (2..=longest).rev() {
                key.clear();
                for (k, t) in tokens[i..i + n].iter().enumerate() {
                    if k > 0 {
                        key.push(' ');
                    }
                    key.push_str(t);
                }
                if let Some(&v) = self.phrases.get(&key) {
                    score.add_valence(v, n as u64);
                    i += n;
                    continue 'outer;
                }
            }
            if let Some(&v) = self.terms.get(&tokens[i]) {
                score.add_valence(v, 1);
            }
            i += 1;
        }
        score
    }
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

/// Calls `f` with each lowercased token of `text`, reusing `buf`.
///
/// A character whose lowercase form expands to a non-token character (for
/// example the combining dot produced by `İ`) acts as a separator, which keeps
/// tokenization idempotent.
pub(crate) fn for_each_token(text: &str, buf: &mut String, mut f: impl FnMut(&str)) {
    buf.clear();
    for c in text.chars() {
        if c.is_ascii() {
            if c.is_ascii_alphanumeric() || c == '\'' {
                buf.push(c.to_ascii_lowercase());
                continue;
            }
        } else if is_token_char(c) {
            for lc in c.to_lowercase() {
                if is_token_char(lc) {
                    buf.push(lc);
                } else if !buf.is_empty() {
                    f(buf);
                    buf.clear();
                }
            }
            continue;
        }
        if !buf.is_empty() {
            f(buf);
            buf.clear();
        }
    }
    if !buf.is_empty() {
        f(buf);
        buf.clear();
    }
}

/// Lowercased tokens split on anything that is not a letter, digit or apostrophe.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut buf = String::new();
    for_each_token(text, &mut buf, |t| tokens.push(t.to_owned()));
    tokens
}
