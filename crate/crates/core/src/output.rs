//! Tables and reports rendered as CSV or JSON.
//!
//! CSV numbers use `{:.16e}` (17 significant digits, round-trips `f64`). Every
//! file starts with comment lines recording the version, the run
//! configuration and the seed. No timestamps are written, so identical
//! inputs give byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bell::{angles_of, BellCorrelation, BellSetting, ChshRow, TwoParticleSystem};
use crate::even_spin::LimitRow;
use crate::extended::RingPoint;
use crate::little_algebra::{ContractionRow, FrameTriad};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Provenance written at the top of every output.
#[derive(Debug, Clone, PartialEq)]
pub struct Preamble {
    pub version: String,
    /// Serialized run configuration.
    pub config: Value,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) if v.is_nan() => "nan".into(),
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width differs from the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    /// Mutates every numeric cell of the named column.
    pub fn scale_column(&mut self, name: &str, factor: f64) {
        if let Some(k) = self.header.iter().position(|h| *h == name) {
            for row in &mut self.rows {
                if let Cell::Num(v) = &mut row[k] {
                    *v *= factor;
                }
            }
        }
    }
}

fn csv_preamble(p: &Preamble) -> String {
    format!(
        "# evenspin {}\n# config: {}\n# seed: {}\n",
        p.version,
        serde_json::to_string(&p.config).expect("config serializes"),
        p.seed
    )
}

pub fn render_csv(p: &Preamble, table: &Table) -> String {
    let mut out = csv_preamble(p);
    out.push_str(&table.header.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(p: &Preamble, table: &Table) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .header
                .iter()
                .zip(row)
                .map(|(h, c)| (h.to_string(), c.json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "version": p.version,
        "config": p.config,
        "seed": p.seed,
        "columns": table.header,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
    s.push('\n');
    s
}

pub fn render(p: &Preamble, table: &Table, format: Format) -> String {
    match format {
        Format::Csv => render_csv(p, table),
        Format::Json => render_json(p, table),
    }
}

/// Check rows as a table with columns `id,equation,quote_tag,residual,tolerance,pass`.
pub fn report_table(report: &Report) -> Table {
    let mut t = Table::new(&["id", "equation", "quote_tag", "residual", "tolerance", "pass"]);
    for c in &report.checks {
        t.push(vec![
            Cell::Text(c.id.clone()),
            Cell::Text(format!("\"{}\"", c.equation.replace('"', "\"\""))),
            Cell::Text(c.quote_tag.clone()),
            Cell::Num(c.residual),
            Cell::Num(c.tolerance),
            Cell::Text(c.pass.to_string()),
        ]);
    }
    t
}

/// Report as JSON: provenance, overall verdict and every check row.
pub fn render_report(p: &Preamble, report: &Report, format: Format) -> String {
    match format {
        Format::Csv => render_csv(p, &report_table(report)),
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "equation": c.equation,
                        "quote_tag": c.quote_tag,
                        "residual": if c.residual.is_finite() { json!(c.residual) } else { Value::Null },
                        "tolerance": c.tolerance,
                        "pass": c.pass,
                    })
                })
                .collect();
            let doc = json!({
                "version": p.version,
                "config": p.config,
                "seed": p.seed,
                "passed": report.passed(),
                "checks": checks,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

/// Writes to `path`, or to stdout when `None`.
pub fn write_output(path: Option<&Path>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()
        }
    }
}

pub fn contraction_table(rows: &[ContractionRow]) -> Table {
    let mut t = Table::new(&["m", "p_mag", "contraction_param", "bracket_ratio"]);
    for r in rows {
        t.push(vec![
            Cell::Num(r.m),
            Cell::Num(r.p_mag),
            Cell::Num(r.contraction_param),
            Cell::Num(r.bracket_ratio),
        ]);
    }
    t
}

pub fn limit_table(rows: &[LimitRow]) -> Table {
    let mut t = Table::new(&["m", "p_mag", "s_perp", "w_perp"]);
    for r in rows {
        t.push(vec![Cell::Num(r.m), Cell::Num(r.p_mag), Cell::Num(r.s_perp), Cell::Num(r.w_perp)]);
    }
    t
}

/// Ring samples; `length_scale` multiplies `t, x, y, z`.
pub fn ring_table(points: &[RingPoint], length_scale: f64) -> Table {
    let mut t = Table::new(&["frame", "t", "x", "y", "z", "phase"]);
    for q in points {
        t.push(vec![
            Cell::Int(q.frame as u64),
            Cell::Num(q.t * length_scale),
            Cell::Num(q.x * length_scale),
            Cell::Num(q.y * length_scale),
            Cell::Num(q.z * length_scale),
            Cell::Num(q.phase),
        ]);
    }
    t
}

/// One row per setting; angles in degrees relative to particle 1's triad.
pub fn bell_table(sys: &TwoParticleSystem, rows: &[(BellSetting, BellCorrelation)]) -> Table {
    let mut t = Table::new(&[
        "m", "p_mag", "a_theta", "a_phi", "b_theta", "b_phi", "E_formula", "E_numeric", "abs_diff",
    ]);
    let triad = sys.triad;
    for (s, c) in rows {
        let (at, ap) = angles_of(&triad, s.a);
        let (bt, bp) = angles_of(&triad, s.b);
        t.push(vec![
            Cell::Num(sys.momentum.mass()),
            Cell::Num(sys.momentum.p_mag()),
            Cell::Num(at),
            Cell::Num(ap),
            Cell::Num(bt),
            Cell::Num(bp),
            Cell::Num(c.e_formula),
            Cell::Num(c.e_numeric),
            Cell::Num(c.abs_diff()),
        ]);
    }
    t
}

/// CHSH rows; invalid rows carry `S = nan` and `violation = invalid`.
pub fn chsh_table(sys: &TwoParticleSystem, rows: &[ChshRow]) -> Table {
    let mut t = Table::new(&[
        "m", "p_mag", "a_theta", "a_phi", "b_theta", "b_phi", "ap_theta", "ap_phi", "bp_theta", "bp_phi", "S",
        "violation",
    ]);
    let triad: FrameTriad = sys.triad;
    for r in rows {
        let mut row = vec![Cell::Num(sys.momentum.mass()), Cell::Num(sys.momentum.p_mag())];
        for v in [r.setting.a, r.setting.b, r.setting.a_prime, r.setting.b_prime] {
            let (th, ph) = angles_of(&triad, v);
            row.push(Cell::Num(th));
            row.push(Cell::Num(ph));
        }
        row.push(Cell::Num(r.s.unwrap_or(f64::NAN)));
        row.push(Cell::Text(match r.violation() {
            Some(v) => v.to_string(),
            None => "invalid".into(),
        }));
        t.push(row);
    }
    t
}

/// Parses the data rows of a CSV produced by [`render_csv`] (comment lines
/// and header skipped) into numbers; non-numeric cells become `NaN`.
pub fn parse_csv_numbers(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

/// Human-readable summary of a report, one line per failed check.
pub fn failure_summary(report: &Report) -> String {
    let mut s = String::new();
    let failures: Vec<_> = report.failures().collect();
    let _ = writeln!(s, "{} checks, {} failed", report.checks.len(), failures.len());
    for c in failures {
        let _ = writeln!(
            s,
            "FAIL {} [{}]: residual {:e} > tolerance {:e}",
            c.id, c.equation, c.residual, c.tolerance
        );
    }
    s
}
