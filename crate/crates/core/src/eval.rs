//! Per-state absolute error and MAE against actual results and a baseline.

use std::io::{Read, Write};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{format_percent, parse_share};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("state keys differ: {}", .0.join("; "))]
    KeyMismatch(Vec<String>),
    #[error("MAE of an empty set of states")]
    Empty,
    #[error("swing state `{0}` not in the forecast")]
    UnknownSwingState(String),
    #[error("{file}: {message}")]
    Parse { file: String, message: String },
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

/// Candidate-1 share per state, in input order.
pub type StateShares = IndexMap<String, f64>;

fn check_keys(left: &str, a: &StateShares, right: &str, b: &StateShares) -> Result<(), EvalError> {
    let mut problems = Vec::new();
    let missing: Vec<&str> = a
        .keys()
        .filter(|k| !b.contains_key(*k))
        .map(String::as_str)
        .collect();
    if !missing.is_empty() {
        problems.push(format!("{right} missing [{}]", missing.join(", ")));
    }
    let extra: Vec<&str> = b
        .keys()
        .filter(|k| !a.contains_key(*k))
        .map(String::as_str)
        .collect();
    if !extra.is_empty() {
        problems.push(format!("{left} missing [{}]", extra.join(", ")));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(EvalError::KeyMismatch(problems))
    }
}

/// `|predicted_i - actual_i|` per state, in predicted order.
pub fn absolute_errors(
    predicted: &StateShares,
    actual: &StateShares,
) -> Result<StateShares, EvalError> {
    check_keys("predicted", predicted, "actual", actual)?;
    Ok(predicted
        .iter()
        .map(|(k, p)| (k.clone(), (p - actual[k]).abs()))
        .collect())
}

pub fn mae(values: &[f64]) -> Result<f64, EvalError> {
    if values.is_empty() {
        return Err(EvalError::Empty);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationRow {
    pub state: String,
    pub predicted: f64,
    pub actual: f64,
    pub ae: f64,
    pub baseline: f64,
    pub ae_baseline: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwingRow {
    pub state: String,
    /// `|2p - 1|` of the model's two-party share.
    pub margin: f64,
    pub ae: f64,
    pub ae_baseline: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub rows: Vec<EvaluationRow>,
    pub mae: f64,
    pub mae_baseline: f64,
    pub n_states: usize,
    pub beats_baseline: bool,
    pub swing_states: Vec<SwingRow>,
}

/// Scores a model and a baseline against the same actual results.
pub fn compare(
    model: &StateShares,
    baseline: &StateShares,
    actual: &StateShares,
    swing_states: &[String],
) -> Result<EvaluationReport, EvalError> {
    check_keys("model", model, "baseline", baseline)?;
    let ae = absolute_errors(model, actual)?;
    let ae_base = absolute_errors(baseline, actual)?;
    let rows: Vec<EvaluationRow> = model
        .iter()
        .map(|(state, &predicted)| EvaluationRow {
            state: state.clone(),
            predicted,
            actual: actual[state],
            ae: ae[state],
            baseline: baseline[state],
            ae_baseline: ae_base[state],
        })
        .collect();
    let mae_model = mae(&rows.iter().map(|r| r.ae).collect::<Vec<_>>())?;
    let mae_baseline = mae(&rows.iter().map(|r| r.ae_baseline).collect::<Vec<_>>())?;
    let swing = swing_states
        .iter()
        .map(|s| {
            let p = *model
                .get(s)
                .ok_or_else(|| EvalError::UnknownSwingState(s.clone()))?;
            Ok(SwingRow {
                state: s.clone(),
                margin: (2.0 * p - 1.0).abs(),
                ae: ae[s],
                ae_baseline: ae_base[s],
            })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(EvaluationReport {
        n_states: rows.len(),
        rows,
        mae: mae_model,
        mae_baseline,
        beats_baseline: mae_model < mae_baseline,
        swing_states: swing,
    })
}

impl EvaluationReport {
    pub fn summary_line(&self) -> String {
        format!(
            "MAE model={} baseline={} beats_baseline={}",
            format_percent(self.mae),
            format_percent(self.mae_baseline),
            self.beats_baseline
        )
    }

    /// Percent table in the layout of the published comparison, followed by
    /// a summary block.
    pub fn write_csv(&self, writer: impl Write) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(writer);
        w.write_record([
            "state",
            "predicted",
            "actual",
            "ae",
            "baseline",
            "ae_baseline",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.state.clone(),
                format_percent(r.predicted),
                format_percent(r.actual),
                format_percent(r.ae),
                format_percent(r.baseline),
                format_percent(r.ae_baseline),
            ])?;
        }
        w.write_record([
            "MAE",
            "",
            "",
            &format_percent(self.mae),
            "",
            &format_percent(self.mae_baseline),
        ])?;
        w.write_record(["n_states", &self.n_states.to_string(), "", "", "", ""])?;
        w.write_record([
            "beats_baseline",
            &self.beats_baseline.to_string(),
            "",
            "",
            "",
            "",
        ])?;
        w.flush()?;
        Ok(())
    }
}

/// Reads a `state,share` file; shares may be fractions or `NN.NN%` strings.
pub fn read_shares(file: &str, reader: impl Read) -> Result<StateShares, EvalError> {
    #[derive(Deserialize)]
    struct Row {
        state: String,
        share: String,
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = StateShares::new();
    for rec in rdr.deserialize::<Row>() {
        let row = rec?;
        let share = parse_share(&row.share).map_err(|message| EvalError::Parse {
            file: file.into(),
            message: format!("{}: {message}", row.state),
        })?;
        if out.insert(row.state.clone(), share).is_some() {
            return Err(EvalError::Parse {
                file: file.into(),
                message: format!("duplicate state `{}`", row.state),
            });
        }
    }
    Ok(out)
}

/// A published comparison table: predicted, actual and baseline shares with
/// their rounded absolute errors, plus an optional trailing `MAE` row.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
    pub published_mae: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub state: String,
    pub predicted: f64,
    pub actual: f64,
    pub ae_actual: f64,
    pub baseline: f64,
    pub ae_baseline: f64,
}

impl ComparisonTable {
    /// Header `state,predicted,actual,ae_actual,baseline,ae_baseline`.
    pub fn from_csv(file: &str, reader: impl Read) -> Result<ComparisonTable, EvalError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let expected = [
            "state",
            "predicted",
            "actual",
            "ae_actual",
            "baseline",
            "ae_baseline",
        ];
        if rdr.headers()?.iter().ne(expected) {
            return Err(EvalError::Parse {
                file: file.into(),
                message: format!("header must be `{}`", expected.join(",")),
            });
        }
        let parse = |state: &str, cell: &str| {
            parse_share(cell).map_err(|m| EvalError::Parse {
                file: file.into(),
                message: format!("{state}: {m}"),
            })
        };
        let mut rows = Vec::new();
        let mut published_mae = None;
        for rec in rdr.records() {
            let rec = rec?;
            let state = &rec[0];
            if state == "MAE" {
                published_mae = Some((parse(state, &rec[3])?, parse(state, &rec[5])?));
                continue;
            }
            rows.push(ComparisonRow {
                state: state.to_string(),
                predicted: parse(state, &rec[1])?,
                actual: parse(state, &rec[2])?,
                ae_actual: parse(state, &rec[3])?,
                baseline: parse(state, &rec[4])?,
                ae_baseline: parse(state, &rec[5])?,
            });
        }
        Ok(ComparisonTable {
            rows,
            published_mae,
        })
    }

    fn column(&self, f: impl Fn(&ComparisonRow) -> f64) -> StateShares {
        self.rows.iter().map(|r| (r.state.clone(), f(r))).collect()
    }

    pub fn predicted(&self) -> StateShares {
        self.column(|r| r.predicted)
    }

    pub fn actual(&self) -> StateShares {
        self.column(|r| r.actual)
    }

    pub fn baseline(&self) -> StateShares {
        self.column(|r| r.baseline)
    }
}
