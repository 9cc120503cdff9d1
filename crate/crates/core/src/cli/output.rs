//! CSV/JSON writers and the run manifest.
//!
//! Numbers are written with 9 significant digits in lowercase scientific
//! notation (`3.36901000e1`). Missing values (flagged points) are empty
//! cells in CSV and `null` in JSON.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::sweep_engine::{SweepRow, SweepTable};

/// Bumped whenever a column is added, removed, renamed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

pub const SWEEP_COLUMNS: &[&str] = &[
    "theta_deg",
    "detuning_gamma",
    "eta_gamma",
    "omega1",
    "omega2",
    "omega3",
    "omega4",
    "chi1",
    "chi2",
    "rp_abs",
    "rs_abs",
    "rs_over_rp",
    "delta_plus_lambda",
    "theta_minus",
    "flags",
];

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.8e}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// Generic table: named columns of optional numbers plus an optional
/// trailing text column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(Option<f64>),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_opt(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(Some(v)) if v.is_finite() => json!(v),
            Cell::Num(_) => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|v| Cell::Num(Some(*v))).collect());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn flagged(&self) -> usize {
        let Some(idx) = self.columns.iter().position(|c| c == "flags") else {
            return 0;
        };
        self.rows.iter().filter(|r| matches!(&r[idx], Cell::Text(s) if !s.is_empty())).count()
    }

    pub fn write_csv<W: Write>(&self, out: W, header: Option<&str>) -> std::io::Result<()> {
        let mut out = out;
        if let Some(h) = header {
            for line in h.lines() {
                writeln!(out, "# {line}")?;
            }
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

fn row_cells(r: &SweepRow) -> Vec<Cell> {
    let amps = r.amplitudes.map_or([None; 4], |a| a.map(Some));
    let mut cells = vec![Cell::Num(Some(r.theta_deg)), Cell::Num(Some(r.detuning)), Cell::Num(Some(r.eta))];
    cells.extend(amps.iter().map(|a| Cell::Num(*a)));
    cells.extend([
        Cell::Num(r.chi.map(|c| c.re)),
        Cell::Num(r.chi.map(|c| c.im)),
        Cell::Num(r.rp_abs),
        Cell::Num(r.rs_abs),
        Cell::Num(r.ratio),
        Cell::Num(r.delta_plus_lambda),
        Cell::Num(r.theta_minus),
        Cell::Text(r.flag.as_str().to_string()),
    ]);
    cells
}

impl From<&SweepTable> for Table {
    fn from(t: &SweepTable) -> Self {
        let mut table = Table::new(SWEEP_COLUMNS);
        table.rows = t.rows.iter().map(row_cells).collect();
        table
    }
}

/// Run record written next to every data file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
    pub timestamp: String,
    pub command: String,
    pub columns: Vec<String>,
    pub rows: usize,
    pub flagged: usize,
    pub tolerances: Tolerances,
    pub config: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub brewster_floor_rp: f64,
    pub derivative_step_rad: f64,
    pub angle_refinement_deg: f64,
    pub detuning_refinement_gamma: f64,
    pub quadrature_relative: f64,
    pub classify_relative: f64,
    pub resonant_denominator_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            brewster_floor_rp: crate::beam_shifts::BREWSTER_FLOOR,
            derivative_step_rad: crate::multilayer_optics::DERIVATIVE_STEP,
            angle_refinement_deg: crate::sweep_engine::ANGLE_TOLERANCE_DEG,
            detuning_refinement_gamma: crate::sweep_engine::DETUNING_TOLERANCE,
            quadrature_relative: crate::beam_shifts::QUADRATURE_TOLERANCE,
            classify_relative: crate::atomic_medium::DEFAULT_CLASSIFY_TOL,
            resonant_denominator_floor: 1e-14,
        }
    }
}

impl RunManifest {
    pub fn new(command: &str, table: &Table, config: Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            schema_version: SCHEMA_VERSION,
            timestamp: chrono::Utc::now().to_rfc3339(),
            command: command.to_string(),
            columns: table.columns.clone(),
            rows: table.len(),
            flagged: table.flagged(),
            tolerances: Tolerances::default(),
            config,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}
