//! Output formatting: percent strings, forecast tables and the sentiment chart.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;

use chrono::NaiveDate;

use crate::corpus::{Candidate, DailySentiment};
use crate::model::Forecast;

/// Two-decimal percent, half-up: `0.51395 -> "51.40%"`.
pub fn format_percent(x: f64) -> String {
    // The epsilon absorbs binary representation error on exact halves.
    let hundredths = (x.abs() * 10_000.0 + 0.5 + 1e-7).floor();
    let sign = if x < 0.0 && hundredths > 0.0 { "-" } else { "" };
    format!(
        "{sign}{}.{:02}%",
        (hundredths / 100.0).floor() as u64,
        (hundredths % 100.0) as u64
    )
}

/// Parses `0.3991` or `39.91%` into a fraction in `[0, 1]`.
pub fn parse_share(cell: &str) -> Result<f64, String> {
    let cell = cell.trim();
    let value = match cell.strip_suffix('%') {
        Some(pct) => pct.trim().parse::<f64>().map(|v| v / 100.0),
        None => cell.parse::<f64>(),
    }
    .map_err(|_| format!("`{cell}` is not a number"))?;
    if !(0.0..=1.0).contains(&value) {
        return Err(format!(
            "`{cell}` is outside [0, 1]; write percents with a trailing `%`"
        ));
    }
    Ok(value)
}

/// Percent table with one row per state plus popular and electoral totals.
pub fn write_forecast_csv(
    forecast: &Forecast,
    names: [&str; 2],
    writer: impl Write,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["state", names[0], names[1], "winner", "margin"])?;
    for s in &forecast.states {
        let winner = match s.winner {
            Some(c) => names[c.index()].to_string(),
            None => "tie".to_string(),
        };
        w.write_record([
            s.state.clone(),
            format_percent(s.share_1),
            format_percent(s.share_2),
            winner,
            format_percent(s.margin),
        ])?;
    }
    let pv = forecast.popular_vote;
    w.write_record([
        "Popular Vote",
        &format_percent(pv[0]),
        &format_percent(pv[1]),
        "",
        "",
    ])?;
    let es = forecast.electoral_share;
    w.write_record([
        "Electoral Vote",
        &format_percent(es[0]),
        &format_percent(es[1]),
        "",
        "",
    ])?;
    let ev = forecast.electoral_votes;
    w.write_record([
        "Electoral Votes".to_string(),
        ev[0].to_string(),
        ev[1].to_string(),
        format!("tied={}", forecast.tied_ev),
        format!("total={}", forecast.total_electoral_votes),
    ])?;
    w.flush()?;
    Ok(())
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 420.0;
const PAD_LEFT: f64 = 70.0;
const PAD_RIGHT: f64 = 170.0;
const PAD_Y: f64 = 40.0;

/// Line chart of daily positive and negative sentiment for both candidates.
pub fn render_timeseries_svg(rows: &[DailySentiment], names: [&str; 2]) -> String {
    let days: BTreeSet<NaiveDate> = rows.iter().map(|r| r.date).collect();
    let days: Vec<NaiveDate> = days.into_iter().collect();
    let max = rows
        .iter()
        .map(|r| r.positive.max(r.negative))
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let plot_w = WIDTH - PAD_LEFT - PAD_RIGHT;
    let plot_h = HEIGHT - 2.0 * PAD_Y;
    let x_of = |d: NaiveDate| {
        let i = days.binary_search(&d).unwrap_or(0) as f64;
        let span = (days.len().max(2) - 1) as f64;
        PAD_LEFT + plot_w * i / span
    };
    let y_of = |v: u64| PAD_Y + plot_h * (1.0 - v as f64 / max);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, y0, y1) = (PAD_LEFT, PAD_LEFT + plot_w, PAD_Y, PAD_Y + plot_h);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{max}</text>"#,
        x0 - 6.0,
        y0 + 4.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="end">0</text>"#,
        x0 - 6.0,
        y1 + 4.0
    );
    if let (Some(first), Some(last)) = (days.first(), days.last()) {
        let _ = writeln!(
            svg,
            r#"<text x="{x0}" y="{}" font-size="11">{first}</text>"#,
            y1 + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x1}" y="{}" font-size="11" text-anchor="end">{last}</text>"#,
            y1 + 18.0
        );
    }

    let series = [
        (Candidate::First, true, "#1f4e9c", ""),
        (
            Candidate::First,
            false,
            "#1f4e9c",
            r#" stroke-dasharray="5,3""#,
        ),
        (Candidate::Second, true, "#b8262b", ""),
        (
            Candidate::Second,
            false,
            "#b8262b",
            r#" stroke-dasharray="5,3""#,
        ),
    ];
    for (k, (cand, positive, color, dash)) in series.iter().enumerate() {
        let points: Vec<String> = rows
            .iter()
            .filter(|r| r.candidate == *cand)
            .map(|r| {
                let v = if *positive { r.positive } else { r.negative };
                format!("{:.2},{:.2}", x_of(r.date), y_of(v))
            })
            .collect();
        let label = format!(
            "{} {}",
            names[cand.index()],
            if *positive { "positive" } else { "negative" }
        );
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"><title>{}</title></polyline>"#,
            points.join(" "),
            escape_xml(&label)
        );
        let ly = PAD_Y + 18.0 * k as f64;
        let lx = x1 + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash}/>"#,
            lx + 24.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="11">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            escape_xml(&label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
