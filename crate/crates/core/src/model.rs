//! Twitter support estimation and census-corrected state forecasts.
//!
//! Each state's population splits into twitter users (`S_i`), internet users
//! not on twitter (`C_i`) and everyone else. Model 1 gives all online users the
//! twitter support `E_j`; model 2 gives it to twitter users only. Everyone
//! else keeps the prior party support `P_ik`.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::census::{Party, StateProfile, StateTable};
use crate::corpus::{Candidate, DailySentiment};

/// Below this margin a state is a tie.
pub const TIE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("no {0} signal for either candidate; enable smoothing or supply data")]
    NoSignal(SupportStrategy),
    #[error("twitter support must be a pair of shares in [0, 1] summing to 1, got ({0}, {1})")]
    InvalidSupport(f64, f64),
    #[error("two-party share needs nonnegative inputs with a positive sum, got ({0}, {1})")]
    InvalidShares(f64, f64),
    #[error("states missing from the state table: {}", .0.join(", "))]
    MissingStates(Vec<String>),
    #[error("turnout weights sum to zero")]
    ZeroTurnout,
    #[error("both candidates are aligned to the same party")]
    SameParty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportStrategy {
    /// Share of total positive sentiment.
    PositiveShare,
    /// Share of positive-minus-negative, floored at zero.
    NetShare,
    /// Share of attributed tweets.
    VolumeShare,
}

impl SupportStrategy {
    pub const ALL: [SupportStrategy; 3] = [
        SupportStrategy::PositiveShare,
        SupportStrategy::NetShare,
        SupportStrategy::VolumeShare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SupportStrategy::PositiveShare => "positive-share",
            SupportStrategy::NetShare => "net-share",
            SupportStrategy::VolumeShare => "volume-share",
        }
    }
}

impl fmt::Display for SupportStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SupportStrategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SupportStrategy::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| {
                format!("invalid strategy `{s}` (valid: positive-share, net-share, volume-share)")
            })
    }
}

/// Estimated share of twitter users backing each candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwitterSupport {
    pub e: [f64; 2],
    /// `None` when the shares were supplied directly.
    pub strategy: Option<SupportStrategy>,
    pub smoothing: bool,
}

impl TwitterSupport {
    /// Support given directly as candidate 1's share.
    pub fn fixed(e1: f64) -> Result<TwitterSupport, ModelError> {
        if !(0.0..=1.0).contains(&e1) {
            return Err(ModelError::InvalidSupport(e1, 1.0 - e1));
        }
        Ok(TwitterSupport {
            e: [e1, 1.0 - e1],
            strategy: None,
            smoothing: false,
        })
    }

    pub fn get(&self, c: Candidate) -> f64 {
        self.e[c.index()]
    }
}

/// Sentiment totals per candidate over a whole campaign.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SentimentTotals {
    pub positive: [u64; 2],
    pub negative: [u64; 2],
    pub tweets: [u64; 2],
}

impl SentimentTotals {
    pub fn from_daily(daily: &[DailySentiment]) -> SentimentTotals {
        let mut t = SentimentTotals::default();
        for d in daily {
            let j = d.candidate.index();
            t.positive[j] += d.positive;
            t.negative[j] += d.negative;
            t.tweets[j] += d.tweet_count;
        }
        t
    }

    pub fn signal(&self, strategy: SupportStrategy) -> [u64; 2] {
        match strategy {
            SupportStrategy::PositiveShare => self.positive,
            SupportStrategy::NetShare => {
                [0, 1].map(|j| self.positive[j].saturating_sub(self.negative[j]))
            }
            SupportStrategy::VolumeShare => self.tweets,
        }
    }
}

/// `x_j / (x_1 + x_2)`, or `(1 + x_j) / (2 + x_1 + x_2)` with add-one smoothing.
pub fn shares_from_signal(signal: [u64; 2], smoothing: bool) -> Option<[f64; 2]> {
    let (num, den) = if smoothing {
        ([signal[0] + 1, signal[1] + 1], signal[0] + signal[1] + 2)
    } else {
        (signal, signal[0] + signal[1])
    };
    if den == 0 {
        return None;
    }
    Some(num.map(|n| n as f64 / den as f64))
}

pub fn estimate_twitter_support(
    daily: &[DailySentiment],
    strategy: SupportStrategy,
    smoothing: bool,
) -> Result<TwitterSupport, ModelError> {
    let signal = SentimentTotals::from_daily(daily).signal(strategy);
    let e = shares_from_signal(signal, smoothing).ok_or(ModelError::NoSignal(strategy))?;
    Ok(TwitterSupport {
        e,
        strategy: Some(strategy),
        smoothing,
    })
}

/// Which party each candidate's prior support comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartyAlignment([Party; 2]);

impl PartyAlignment {
    pub fn new(first: Party, second: Party) -> Result<PartyAlignment, ModelError> {
        if first == second {
            return Err(ModelError::SameParty);
        }
        Ok(PartyAlignment([first, second]))
    }

    pub fn party(&self, c: Candidate) -> Party {
        self.0[c.index()]
    }
}

impl Default for PartyAlignment {
    fn default() -> Self {
        PartyAlignment([Party::Dem, Party::Rep])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForecastModel {
    /// Twitter sentiment stands for the whole online population.
    Model1,
    /// Twitter sentiment stands for twitter users only.
    Model2,
    /// Prior shares unchanged.
    Baseline,
}

impl ForecastModel {
    pub fn id(self) -> u8 {
        match self {
            ForecastModel::Model1 => 1,
            ForecastModel::Model2 => 2,
            ForecastModel::Baseline => 0,
        }
    }
}

impl FromStr for ForecastModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" | "model1" => Ok(ForecastModel::Model1),
            "2" | "model2" => Ok(ForecastModel::Model2),
            "baseline" => Ok(ForecastModel::Baseline),
            _ => Err(format!("invalid model `{s}` (valid: 1, 2, baseline)")),
        }
    }
}

/// Segment weights: taken literally (segments sum to
/// `1 + S_i`) or rescaled so they sum to 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    Literal,
    #[default]
    Normalized,
}

impl FromStr for WeightMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(WeightMode::Literal),
            "normalized" => Ok(WeightMode::Normalized),
            _ => Err(format!(
                "invalid weight mode `{s}` (valid: literal, normalized)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateForecast {
    pub state: String,
    #[serde(rename = "share_1")]
    pub share_1: f64,
    #[serde(rename = "share_2")]
    pub share_2: f64,
    /// `None` on a tie.
    pub winner: Option<Candidate>,
    pub margin: f64,
}

impl StateForecast {
    pub fn from_shares(state: impl Into<String>, share: [f64; 2]) -> StateForecast {
        let diff = share[0] - share[1];
        let winner = if diff.abs() < TIE_THRESHOLD {
            None
        } else if diff > 0.0 {
            Some(Candidate::First)
        } else {
            Some(Candidate::Second)
        };
        StateForecast {
            state: state.into(),
            share_1: share[0],
            share_2: share[1],
            winner,
            margin: diff.abs(),
        }
    }

    pub fn share(&self, c: Candidate) -> f64 {
        match c {
            Candidate::First => self.share_1,
            Candidate::Second => self.share_2,
        }
    }
}

fn segment_share(
    p: &StateProfile,
    e: f64,
    prior: f64,
    model: ForecastModel,
    mode: WeightMode,
) -> f64 {
    let s = p.twitter_frac;
    let c = p.internet_not_twitter_frac;
    match (model, mode) {
        (ForecastModel::Model1, WeightMode::Literal) => s * e + c * e + (1.0 - c) * prior,
        (ForecastModel::Model1, WeightMode::Normalized) => (s + c) * e + (1.0 - s - c) * prior,
        (ForecastModel::Model2, WeightMode::Literal) => s * e + c * prior + (1.0 - c) * prior,
        (ForecastModel::Model2, WeightMode::Normalized) => s * e + (1.0 - s) * prior,
        (ForecastModel::Baseline, _) => prior,
    }
}

/// Support for both candidates in one state.
pub fn state_support(
    profile: &StateProfile,
    support: &TwitterSupport,
    alignment: &PartyAlignment,
    model: ForecastModel,
    mode: WeightMode,
) -> StateForecast {
    let share = Candidate::BOTH.map(|c| {
        segment_share(
            profile,
            support.get(c),
            profile.prior(alignment.party(c)),
            model,
            mode,
        )
    });
    StateForecast::from_shares(profile.state.clone(), share)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectoralTally {
    pub votes: [u64; 2],
    pub share: [f64; 2],
    pub tied_ev: u64,
    pub total: u64,
}

/// Winner-take-all allocation; tied states' votes go to neither candidate.
pub fn electoral_college(
    states: &[StateForecast],
    table: &StateTable,
) -> Result<ElectoralTally, ModelError> {
    let mut votes = [0u64; 2];
    let mut tied_ev = 0u64;
    let mut missing = Vec::new();
    for f in states {
        let Some(profile) = table.get(&f.state) else {
            missing.push(f.state.clone());
            continue;
        };
        let ev = profile.electoral_votes as u64;
        match f.winner {
            Some(c) => votes[c.index()] += ev,
            None => tied_ev += ev,
        }
    }
    if !missing.is_empty() {
        return Err(ModelError::MissingStates(missing));
    }
    let total = votes[0] + votes[1] + tied_ev;
    let share = if total == 0 {
        [0.0, 0.0]
    } else {
        votes.map(|v| v as f64 / total as f64)
    };
    Ok(ElectoralTally {
        votes,
        share,
        tied_ev,
        total,
    })
}

/// `(a / (a + b), b / (a + b))`.
pub fn two_party_share(a: f64, b: f64) -> Result<(f64, f64), ModelError> {
    let sum = a + b;
    if !(a >= 0.0 && b >= 0.0 && sum > 0.0 && sum.is_finite()) {
        return Err(ModelError::InvalidShares(a, b));
    }
    Ok((a / sum, b / sum))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    pub model_id: u8,
    pub model: ForecastModel,
    pub weight_mode: WeightMode,
    pub e_strategy: Option<SupportStrategy>,
    pub smoothing: bool,
    pub twitter_support: Option<[f64; 2]>,
    pub states: Vec<StateForecast>,
    pub popular_vote: [f64; 2],
    pub electoral_votes: [u64; 2],
    pub electoral_share: [f64; 2],
    pub tied_ev: u64,
    pub total_electoral_votes: u64,
    pub equal_turnout_weights: bool,
    pub warnings: Vec<String>,
}

impl Forecast {
    /// Candidate-1 share per state after two-party conversion.
    pub fn two_party_shares(&self) -> Result<IndexMap<String, f64>, ModelError> {
        self.states
            .iter()
            .map(|s| Ok((s.state.clone(), two_party_share(s.share_1, s.share_2)?.0)))
            .collect()
    }
}

fn popular_vote(states: &[StateForecast], table: &StateTable) -> Result<[f64; 2], ModelError> {
    let mut weighted = [0.0f64; 2];
    let mut total = 0.0f64;
    for (f, p) in states.iter().zip(&table.profiles) {
        weighted[0] += p.turnout_weight * f.share_1;
        weighted[1] += p.turnout_weight * f.share_2;
        total += p.turnout_weight;
    }
    if total <= 0.0 {
        return Err(ModelError::ZeroTurnout);
    }
    Ok(weighted.map(|w| w / total))
}

fn assemble(
    table: &StateTable,
    states: Vec<StateForecast>,
    model: ForecastModel,
    mode: WeightMode,
    support: Option<&TwitterSupport>,
) -> Result<Forecast, ModelError> {
    let popular_vote = popular_vote(&states, table)?;
    let tally = electoral_college(&states, table)?;
    let mut warnings = Vec::new();
    if mode == WeightMode::Literal && model != ForecastModel::Baseline {
        warnings.push("literal weights: each state's shares sum to 1 + twitter_frac".to_string());
    }
    if table.weights_fallback {
        warnings.push(
            "no turnout weights supplied: popular vote is an unweighted state mean".to_string(),
        );
    }
    Ok(Forecast {
        model_id: model.id(),
        model,
        weight_mode: mode,
        e_strategy: support.and_then(|s| s.strategy),
        smoothing: support.is_some_and(|s| s.smoothing),
        twitter_support: support.map(|s| s.e),
        states,
        popular_vote,
        electoral_votes: tally.votes,
        electoral_share: tally.share,
        tied_ev: tally.tied_ev,
        total_electoral_votes: tally.total,
        equal_turnout_weights: table.weights_fallback,
        warnings,
    })
}

/// Runs a model over every state, then aggregates in table order.
pub fn forecast(
    table: &StateTable,
    support: &TwitterSupport,
    alignment: &PartyAlignment,
    model: ForecastModel,
    mode: WeightMode,
) -> Result<Forecast, ModelError> {
    if model == ForecastModel::Baseline {
        return baseline_forecast(table, alignment);
    }
    let states = table
        .profiles
        .iter()
        .map(|p| state_support(p, support, alignment, model, mode))
        .collect();
    assemble(table, states, model, mode, Some(support))
}

/// Prior shares passed through unchanged.
pub fn baseline_forecast(
    table: &StateTable,
    alignment: &PartyAlignment,
) -> Result<Forecast, ModelError> {
    let states = table
        .profiles
        .iter()
        .map(|p| {
            StateForecast::from_shares(
                p.state.clone(),
                Candidate::BOTH.map(|c| p.prior(alignment.party(c))),
            )
        })
        .collect();
    assemble(
        table,
        states,
        ForecastModel::Baseline,
        WeightMode::Normalized,
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn profile(s: f64, c: f64, dem: f64) -> StateProfile {
        StateProfile {
            state: "X".into(),
            twitter_frac: s,
            internet_not_twitter_frac: c,
            prior_share: [dem, 1.0 - dem],
            electoral_votes: 3,
            turnout_weight: 1.0,
        }
    }

    fn table(rows: &[(&str, f64, u32, f64)]) -> StateTable {
        StateTable {
            profiles: rows
                .iter()
                .map(|&(name, dem, ev, w)| StateProfile {
                    state: name.into(),
                    twitter_frac: 0.1,
                    internet_not_twitter_frac: 0.5,
                    prior_share: [dem, 1.0 - dem],
                    electoral_votes: ev,
                    turnout_weight: w,
                })
                .collect(),
            weights_fallback: false,
        }
    }

    fn daily(c: Candidate, pos: u64, neg: u64, n: u64) -> DailySentiment {
        DailySentiment {
            date: NaiveDate::from_ymd_opt(2012, 9, 1).unwrap(),
            candidate: c,
            positive: pos,
            negative: neg,
            tweet_count: n,
        }
    }

    fn e(e1: f64) -> TwitterSupport {
        TwitterSupport::fixed(e1).unwrap()
    }

    #[test]
    fn positive_share_ratio() {
        let d = [
            daily(Candidate::First, 600, 10, 5),
            daily(Candidate::Second, 400, 0, 5),
        ];
        let s = estimate_twitter_support(&d, SupportStrategy::PositiveShare, false).unwrap();
        assert_eq!(s.e, [0.6, 0.4]);
    }

    #[test]
    fn smoothing_on_zero_signal() {
        let s = estimate_twitter_support(&[], SupportStrategy::PositiveShare, true).unwrap();
        assert_eq!(s.e, [0.5, 0.5]);
        let err = estimate_twitter_support(&[], SupportStrategy::PositiveShare, false).unwrap_err();
        assert_eq!(err, ModelError::NoSignal(SupportStrategy::PositiveShare));
    }

    #[test]
    fn symmetric_signal() {
        for k in [0u64, 1, 7, 1_000_000] {
            for smoothing in [true, false] {
                let d = [
                    daily(Candidate::First, k, 0, k),
                    daily(Candidate::Second, k, 0, k),
                ];
                if k == 0 && !smoothing {
                    continue;
                }
                let s = estimate_twitter_support(&d, SupportStrategy::PositiveShare, smoothing)
                    .unwrap();
                assert_eq!(s.e, [0.5, 0.5]);
            }
        }
    }

    #[test]
    fn net_and_volume_strategies() {
        let d = [
            daily(Candidate::First, 10, 4, 3),
            daily(Candidate::First, 5, 3, 1),
            daily(Candidate::Second, 2, 9, 4),
        ];
        let net = estimate_twitter_support(&d, SupportStrategy::NetShare, false).unwrap();
        assert_eq!(net.e, [1.0, 0.0]);
        let vol = estimate_twitter_support(&d, SupportStrategy::VolumeShare, false).unwrap();
        assert_eq!(vol.e, [0.5, 0.5]);
        let smoothed = estimate_twitter_support(&d, SupportStrategy::NetShare, true).unwrap();
        assert_eq!(smoothed.e, [9.0 / 10.0, 1.0 / 10.0]);
    }

    #[test]
    fn model2_normalized_hand_value() {
        let f = state_support(
            &profile(0.2, 0.3, 0.5),
            &e(0.6),
            &PartyAlignment::default(),
            ForecastModel::Model2,
            WeightMode::Normalized,
        );
        assert!((f.share_1 - 0.52).abs() < 1e-15);
        assert!((f.share_1 + f.share_2 - 1.0).abs() < 1e-12);
        assert_eq!(f.winner, Some(Candidate::First));
    }

    #[test]
    fn model2_without_twitter_is_prior() {
        for mode in [WeightMode::Literal, WeightMode::Normalized] {
            let f = state_support(
                &profile(0.0, 0.6, 0.37),
                &e(0.9),
                &PartyAlignment::default(),
                ForecastModel::Model2,
                mode,
            );
            assert_eq!(f.share_1, 0.37);
        }
    }

    #[test]
    fn model1_fixed_point() {
        let p = 0.43;
        let f = state_support(
            &profile(0.1, 0.5, p),
            &e(p),
            &PartyAlignment::default(),
            ForecastModel::Model1,
            WeightMode::Normalized,
        );
        assert!((f.share_1 - p).abs() < 1e-15);
    }

    #[test]
    fn model1_normalized_hand_value() {
        let f = state_support(
            &profile(0.1, 0.4, 0.4),
            &e(0.6),
            &PartyAlignment::default(),
            ForecastModel::Model1,
            WeightMode::Normalized,
        );
        assert!((f.share_1 - 0.5).abs() < 1e-15);
        assert!((f.share_2 - 0.5).abs() < 1e-15);
        assert_eq!(f.winner, None);
    }

    #[test]
    fn literal_mass() {
        let prof = profile(0.2, 0.5, 0.45);
        for model in [ForecastModel::Model1, ForecastModel::Model2] {
            let f = state_support(
                &prof,
                &e(0.3),
                &PartyAlignment::default(),
                model,
                WeightMode::Literal,
            );
            assert!((f.share_1 + f.share_2 - 1.2).abs() < 1e-12);
        }
    }

    #[test]
    fn alignment_swaps_priors() {
        let rev = PartyAlignment::new(Party::Rep, Party::Dem).unwrap();
        let f = state_support(
            &profile(0.0, 0.0, 0.3),
            &e(0.5),
            &rev,
            ForecastModel::Model2,
            WeightMode::Normalized,
        );
        assert_eq!((f.share_1, f.share_2), (0.7, 0.3));
        assert_eq!(
            PartyAlignment::new(Party::Dem, Party::Dem).unwrap_err(),
            ModelError::SameParty
        );
    }

    #[test]
    fn popular_vote_weighted_mean() {
        let t = table(&[("A", 0.6, 10, 2.0), ("B", 0.5, 20, 1.0), ("C", 0.4, 5, 1.0)]);
        let f = baseline_forecast(&t, &PartyAlignment::default()).unwrap();
        assert!((f.popular_vote[0] - 0.525).abs() < 1e-15);
        assert!((f.popular_vote[0] + f.popular_vote[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_state_popular_vote() {
        let t = table(&[("A", 0.58, 3, 7.0)]);
        let f = forecast(
            &t,
            &e(0.4),
            &PartyAlignment::default(),
            ForecastModel::Model2,
            WeightMode::Normalized,
        )
        .unwrap();
        assert_eq!(f.popular_vote[0], f.states[0].share_1);
    }

    #[test]
    fn zero_turnout_rejected() {
        let t = table(&[("A", 0.58, 3, 0.0)]);
        assert_eq!(
            baseline_forecast(&t, &PartyAlignment::default()).unwrap_err(),
            ModelError::ZeroTurnout
        );
    }

    #[test]
    fn electoral_counts() {
        let t = table(&[
            ("A", 0.6, 10, 1.0),
            ("B", 0.4, 20, 1.0),
            ("C", 0.55, 5, 1.0),
        ]);
        let states = vec![
            StateForecast::from_shares("A", [0.6, 0.4]),
            StateForecast::from_shares("B", [0.4, 0.6]),
            StateForecast::from_shares("C", [0.55, 0.45]),
        ];
        let tally = electoral_college(&states, &t).unwrap();
        assert_eq!(tally.votes, [15, 20]);
        assert_eq!(tally.share, [3.0 / 7.0, 4.0 / 7.0]);
        assert_eq!(tally.tied_ev, 0);

        let sweep: Vec<_> = ["A", "B", "C"]
            .iter()
            .map(|s| StateForecast::from_shares(*s, [0.7, 0.3]))
            .collect();
        assert_eq!(electoral_college(&sweep, &t).unwrap().share, [1.0, 0.0]);
    }

    #[test]
    fn ties_go_to_neither() {
        let t = table(&[("A", 0.5, 10, 1.0), ("B", 0.6, 4, 1.0)]);
        let f = baseline_forecast(&t, &PartyAlignment::default()).unwrap();
        assert_eq!(f.states[0].winner, None);
        assert_eq!((f.electoral_votes, f.tied_ev), ([4, 0], 10));
    }

    #[test]
    fn unknown_state_in_tally() {
        let t = table(&[("A", 0.5, 10, 1.0)]);
        let err =
            electoral_college(&[StateForecast::from_shares("Z", [0.6, 0.4])], &t).unwrap_err();
        assert_eq!(err, ModelError::MissingStates(vec!["Z".into()]));
    }

    #[test]
    fn two_party_examples() {
        assert_eq!(two_party_share(0.52, 0.48).unwrap(), (0.52, 0.48));
        assert_eq!(two_party_share(0.40, 0.40).unwrap(), (0.5, 0.5));
        let (a, b) = two_party_share(0.506, 0.4784).unwrap();
        assert!((a - 0.5140).abs() < 5e-5 && (b - 0.4860).abs() < 5e-5);
        assert!(two_party_share(0.0, 0.0).is_err());
        assert!(two_party_share(-0.1, 0.5).is_err());
    }

    #[test]
    fn baseline_ignores_support() {
        let t = table(&[("A", 0.6, 10, 1.0), ("B", 0.45, 20, 3.0)]);
        let base = baseline_forecast(&t, &PartyAlignment::default()).unwrap();
        for e1 in [0.0, 0.3, 0.99] {
            let f = forecast(
                &t,
                &e(e1),
                &PartyAlignment::default(),
                ForecastModel::Baseline,
                WeightMode::Literal,
            )
            .unwrap();
            assert_eq!(f, base);
        }
        assert_eq!(base.states[1].share_1, 0.45);
    }

    #[test]
    fn forecast_json_roundtrip() {
        let t = table(&[("A", 0.6, 10, 1.0), ("B", 0.45, 20, 3.0)]);
        let f = forecast(
            &t,
            &e(0.55),
            &PartyAlignment::default(),
            ForecastModel::Model1,
            WeightMode::Literal,
        )
        .unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"model_id\":1") && json.contains("\"weight_mode\":\"literal\""));
        assert_eq!(serde_json::from_str::<Forecast>(&json).unwrap(), f);
        assert_eq!(f.warnings.len(), 1);
    }
}
