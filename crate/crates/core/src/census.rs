//! Per-state demographic inputs: twitter and internet penetration, prior
//! two-party support, electoral votes and turnout weights.
//!
//! All fractions are in `[0, 1]`. Values above 1 are rejected as probable
//! percents rather than rescaled.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PRIOR_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("{file}: {source}")]
    Csv {
        file: &'static str,
        #[source]
        source: csv::Error,
    },
    #[error("{file}: cannot open {path}: {source}")]
    Open {
        file: &'static str,
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: state `{state}` listed more than once")]
    DuplicateState { file: &'static str, state: String },
    #[error("state keys differ across files: {}", .0.join("; "))]
    KeyMismatch(Vec<String>),
    #[error("no states in census file")]
    Empty,
    #[error("invalid state profiles: {}", .0.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Finding>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    #[serde(alias = "democrat", alias = "democratic")]
    Dem,
    #[serde(alias = "republican")]
    Rep,
}

impl Party {
    pub fn index(self) -> usize {
        match self {
            Party::Dem => 0,
            Party::Rep => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateProfile {
    pub state: String,
    /// Share of the state's population on twitter.
    pub twitter_frac: f64,
    /// Share using the internet but not twitter.
    pub internet_not_twitter_frac: f64,
    /// Prior support indexed by [`Party::index`].
    pub prior_share: [f64; 2],
    pub electoral_votes: u32,
    pub turnout_weight: f64,
}

impl StateProfile {
    pub fn prior(&self, party: Party) -> f64 {
        self.prior_share[party.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateTable {
    /// In census-file order; aggregation sums run in this order.
    pub profiles: Vec<StateProfile>,
    /// Set when no weights file was given and every state got weight 1.
    pub weights_fallback: bool,
}

impl StateTable {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn get(&self, state: &str) -> Option<&StateProfile> {
        self.profiles.iter().find(|p| p.state == state)
    }

    pub fn total_electoral_votes(&self) -> u64 {
        self.profiles.iter().map(|p| p.electoral_votes as u64).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub state: String,
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.state, self.field, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n_states: usize,
    pub findings: Vec<Finding>,
    pub weights_fallback: bool,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

fn check_fraction(findings: &mut Vec<Finding>, state: &str, field: &'static str, value: f64) {
    let message = if !value.is_finite() {
        format!("{value} is not a finite number")
    } else if value > 1.0 {
        format!(
            "{value} exceeds 1; this looks like a percent, supply a fraction in [0, 1] (e.g. {})",
            value / 100.0
        )
    } else if value < 0.0 {
        format!("{value} is negative")
    } else {
        return;
    };
    findings.push(Finding {
        state: state.to_string(),
        field,
        message,
    });
}

/// Re-checks every profile invariant; never fails, only reports.
pub fn validate_profiles(table: &StateTable) -> ValidationReport {
    let mut findings = Vec::new();
    let mut seen: HashSet<&str> = HashSet::new();
    if table.profiles.is_empty() {
        findings.push(Finding {
            state: "-".into(),
            field: "state",
            message: "table has no states".into(),
        });
    }
    for p in &table.profiles {
        let s = p.state.as_str();
        if !seen.insert(s) {
            findings.push(Finding {
                state: s.into(),
                field: "state",
                message: "duplicate state id".into(),
            });
        }
        check_fraction(&mut findings, s, "twitter_frac", p.twitter_frac);
        check_fraction(
            &mut findings,
            s,
            "internet_not_twitter_frac",
            p.internet_not_twitter_frac,
        );
        let online = p.twitter_frac + p.internet_not_twitter_frac;
        if online > 1.0 + 1e-12 {
            findings.push(Finding {
                state: s.into(),
                field: "internet_not_twitter_frac",
                message: format!("twitter_frac + internet_not_twitter_frac = {online} exceeds 1"),
            });
        }
        check_fraction(&mut findings, s, "dem_share", p.prior_share[0]);
        check_fraction(&mut findings, s, "rep_share", p.prior_share[1]);
        let prior_sum = p.prior_share[0] + p.prior_share[1];
        if (prior_sum - 1.0).abs() > PRIOR_SUM_TOLERANCE {
            findings.push(Finding {
                state: s.into(),
                field: "rep_share",
                message: format!("dem_share + rep_share = {prior_sum}, expected 1"),
            });
        }
        if p.electoral_votes < 1 {
            findings.push(Finding {
                state: s.into(),
                field: "electoral_votes",
                message: "must be at least 1".into(),
            });
        }
        if !p.turnout_weight.is_finite() || p.turnout_weight < 0.0 {
            findings.push(Finding {
                state: s.into(),
                field: "turnout_weight",
                message: format!("{} must be a nonnegative number", p.turnout_weight),
            });
        }
    }
    ValidationReport {
        n_states: table.len(),
        findings,
        weights_fallback: table.weights_fallback,
    }
}

#[derive(Debug, Deserialize)]
struct CensusRow {
    state: String,
    twitter_frac: f64,
    internet_not_twitter_frac: f64,
}

#[derive(Debug, Deserialize)]
pub(crate) struct PriorRow {
    state: String,
    dem_share: f64,
    rep_share: f64,
}

#[derive(Debug, Deserialize)]
struct ApportionmentRow {
    state: String,
    electoral_votes: u32,
}

#[derive(Debug, Deserialize)]
struct WeightRow {
    state: String,
    turnout_weight: f64,
}

trait Keyed {
    fn key(&self) -> &str;
}

macro_rules! keyed {
    ($($t:ty),*) => { $(impl Keyed for $t { fn key(&self) -> &str { &self.state } })* };
}
keyed!(CensusRow, PriorRow, ApportionmentRow, WeightRow);

fn read_rows<T: for<'de> Deserialize<'de> + Keyed>(
    file: &'static str,
    reader: impl Read,
) -> Result<IndexMap<String, T>, CensusError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = IndexMap::new();
    for rec in rdr.deserialize::<T>() {
        let row = rec.map_err(|source| CensusError::Csv { file, source })?;
        let state = row.key().to_string();
        if rows.insert(state.clone(), row).is_some() {
            return Err(CensusError::DuplicateState { file, state });
        }
    }
    Ok(rows)
}

fn key_diff<A, B>(
    reference: &IndexMap<String, A>,
    file: &str,
    other: &IndexMap<String, B>,
    out: &mut Vec<String>,
) {
    let missing: Vec<&str> = reference
        .keys()
        .filter(|k| !other.contains_key(*k))
        .map(String::as_str)
        .collect();
    let extra: Vec<&str> = other
        .keys()
        .filter(|k| !reference.contains_key(*k))
        .map(String::as_str)
        .collect();
    if !missing.is_empty() {
        out.push(format!("{file} missing [{}]", missing.join(", ")));
    }
    if !extra.is_empty() {
        out.push(format!(
            "census missing [{}] present in {file}",
            extra.join(", ")
        ));
    }
}

/// Priors file alone, keyed by state.
pub fn read_priors(reader: impl Read) -> Result<IndexMap<String, [f64; 2]>, CensusError> {
    Ok(read_rows::<PriorRow>("priors", reader)?
        .into_iter()
        .map(|(k, r)| (k, [r.dem_share, r.rep_share]))
        .collect())
}

/// Joins the four inputs without checking value invariants.
pub fn read_state_profiles(
    census: impl Read,
    priors: impl Read,
    apportionment: impl Read,
    weights: Option<impl Read>,
) -> Result<StateTable, CensusError> {
    let census = read_rows::<CensusRow>("census", census)?;
    let priors = read_rows::<PriorRow>("priors", priors)?;
    let apportionment = read_rows::<ApportionmentRow>("apportionment", apportionment)?;
    let weights = weights
        .map(|w| read_rows::<WeightRow>("weights", w))
        .transpose()?;
    if census.is_empty() {
        return Err(CensusError::Empty);
    }

    let mut mismatch = Vec::new();
    key_diff(&census, "priors", &priors, &mut mismatch);
    key_diff(&census, "apportionment", &apportionment, &mut mismatch);
    if let Some(w) = &weights {
        key_diff(&census, "weights", w, &mut mismatch);
    }
    if !mismatch.is_empty() {
        return Err(CensusError::KeyMismatch(mismatch));
    }

    let profiles = census
        .into_values()
        .map(|c| {
            let p = &priors[&c.state];
            StateProfile {
                twitter_frac: c.twitter_frac,
                internet_not_twitter_frac: c.internet_not_twitter_frac,
                prior_share: [p.dem_share, p.rep_share],
                electoral_votes: apportionment[&c.state].electoral_votes,
                turnout_weight: weights.as_ref().map_or(1.0, |w| w[&c.state].turnout_weight),
                state: c.state,
            }
        })
        .collect();
    Ok(StateTable {
        profiles,
        weights_fallback: weights.is_none(),
    })
}

/// Joins and validates; any invariant violation is an error.
pub fn load_state_profiles(
    census: impl Read,
    priors: impl Read,
    apportionment: impl Read,
    weights: Option<impl Read>,
) -> Result<StateTable, CensusError> {
    let table = read_state_profiles(census, priors, apportionment, weights)?;
    let report = validate_profiles(&table);
    if !report.is_clean() {
        return Err(CensusError::Invalid(report.findings));
    }
    Ok(table)
}

fn open(file: &'static str, path: &Path) -> Result<File, CensusError> {
    File::open(path).map_err(|source| CensusError::Open {
        file,
        path: path.display().to_string(),
        source,
    })
}

/// Paths to the per-state input files.
#[derive(Debug, Clone)]
pub struct CensusPaths<'a> {
    pub census: &'a Path,
    pub priors: &'a Path,
    pub apportionment: &'a Path,
    pub weights: Option<&'a Path>,
}

impl CensusPaths<'_> {
    pub fn read(&self) -> Result<StateTable, CensusError> {
        read_state_profiles(
            open("census", self.census)?,
            open("priors", self.priors)?,
            open("apportionment", self.apportionment)?,
            self.weights.map(|p| open("weights", p)).transpose()?,
        )
    }

    pub fn load(&self) -> Result<StateTable, CensusError> {
        load_state_profiles(
            open("census", self.census)?,
            open("priors", self.priors)?,
            open("apportionment", self.apportionment)?,
            self.weights.map(|p| open("weights", p)).transpose()?,
        )
    }
}
