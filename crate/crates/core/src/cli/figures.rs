//! Data sets behind each reference plot (`fig2a` … `fig5d`).
//!
//! Every panel is computed from its own named preset; only the stack, beam
//! and output settings of the caller's config are carried over.

use crate::atomic_medium::{permittivity, susceptibility, ControlFieldSet};
use crate::cli::config::RunConfig;
use crate::cli::output::{Cell, Table};
use crate::error::{Error, Result};
use crate::sweep_engine::{max_shift_vs_detuning, sweep, AxisRange, Scenario, ShiftKind, SweepGrid, SweepTable};

pub const FIGURES: &[&str] = &[
    "fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c",
    "fig4d", "fig4e", "fig4f", "fig5a", "fig5b", "fig5c", "fig5d",
];

pub const SPECTRUM_COLUMNS: &[&str] = &["detuning_gamma", "chi1", "chi2", "eps2_re", "eps2_im"];

/// χ and ε2 at each detuning.
pub fn spectrum_table(scenario: &Scenario, detunings: &[f64]) -> Result<Table> {
    let mut t = Table::new(SPECTRUM_COLUMNS);
    for &dp in detunings {
        let chi = susceptibility(dp, &scenario.medium)?;
        let eps = permittivity(dp, &scenario.medium)?;
        t.push_numbers(&[dp, chi.re, chi.im, eps.re, eps.im]);
    }
    Ok(t)
}

fn scenario_for(preset: &str, base: &RunConfig) -> Result<Scenario> {
    let mut cfg = RunConfig::preset(preset).map_err(|e| Error::Validation(e.to_string()))?;
    cfg.stack = base.stack.clone();
    cfg.beam = base.beam.clone();
    cfg.scenario().map_err(|e| Error::Validation(e.to_string()))
}

fn axis(min: f64, max: f64, count: usize) -> AxisRange {
    AxisRange { min, max, count }
}

/// θ cuts at a handful of detunings, concatenated in the order given.
fn theta_cuts(scenario: &Scenario, thetas: &AxisRange, detunings: &[f64]) -> Table {
    let rows =
        detunings.iter().flat_map(|&dp| thetas.values().into_iter().map(move |t| scenario.evaluate(t, dp))).collect();
    Table::from(&SweepTable { rows })
}

fn map(scenario: &Scenario, grid: SweepGrid) -> Result<Table> {
    Ok(Table::from(&sweep(&grid, scenario)?))
}

fn max_curve(kind: ShiftKind, scenario: &Scenario, detunings: &AxisRange, thetas: &AxisRange) -> Result<Table> {
    let mut t = Table::new(&["detuning_gamma", "theta_at_max_deg", "max_value"]);
    for p in max_shift_vs_detuning(kind, &detunings.values(), thetas, scenario)? {
        t.push_numbers(&[p.detuning, p.theta_deg, p.value]);
    }
    Ok(t)
}

/// θ cuts at Δp = 0 for each replacement set of amplitudes (phases kept).
fn amplitude_cuts(scenario: &Scenario, cases: &[[f64; 4]], thetas: &AxisRange) -> Result<Table> {
    let fields = scenario.fields.ok_or_else(|| Error::Validation("amplitude scan needs control fields".into()))?;
    let mut t = Table::from(&SweepTable { rows: Vec::new() });
    for amps in cases {
        let f = fields.fields();
        let set = ControlFieldSet::from_polar(std::array::from_fn(|i| (amps[i], f[i].phase())))?;
        t.rows.extend(theta_cuts(&scenario.with_fields(set)?, thetas, &[0.0]).rows);
    }
    Ok(t)
}

/// Builds the table for one panel id.
pub fn figure_table(id: &str, base: &RunConfig) -> Result<Table> {
    let wide = axis(1.0, 89.0, 881);
    let window = axis(30.0, 38.0, 801);
    let spectrum = axis(-6.0, 6.0, 1201).values();
    let lambda_narrow = axis(-1.0, 1.0, 201).values();
    match id {
        "fig2a" => spectrum_table(&scenario_for("fig2-ctl", base)?, &spectrum),
        "fig2b" | "fig2c" => Ok(theta_cuts(&scenario_for("fig2-ctl", base)?, &wide, &[0.0])),
        "fig2d" => Ok(theta_cuts(&scenario_for("fig2-ctl", base)?, &window, &[0.0])),
        "fig2e" => map(&scenario_for("fig2-ctl", base)?, SweepGrid::default()),
        "fig2f" => map(&scenario_for("fig2f-ctl", base)?, SweepGrid::default()),
        "fig3a" => spectrum_table(&scenario_for("fig3-lambda", base)?, &lambda_narrow),
        "fig3b" => Ok(theta_cuts(&scenario_for("fig3-lambda", base)?, &window, &[-0.1, 0.0, 0.1])),
        "fig3c" => map(
            &scenario_for("fig3-lambda", base)?,
            SweepGrid { detuning: axis(-1.0, 1.0, 201), ..SweepGrid::default() },
        ),
        "fig4a" => spectrum_table(&scenario_for("fig4-n", base)?, &spectrum),
        "fig4b" => {
            let s = scenario_for("fig4-n", base)?;
            let mut t = theta_cuts(&s, &window, &[0.0]);
            t.rows.extend(theta_cuts(&s.with_eta(0.05)?, &window, &[0.0]).rows);
            Ok(t)
        }
        "fig4c" => density_table(base),
        "fig4d" => {
            let s = scenario_for("fig4-n-low-density", base)?;
            amplitude_cuts(&s, &[[0.25, 0.25, 0.7, 0.7], [0.5, 0.5, 0.7, 0.7], [0.75, 0.75, 0.7, 0.7]], &window)
        }
        "fig4e" => {
            let s = scenario_for("fig4-n-low-density", base)?;
            amplitude_cuts(&s, &[[0.5, 0.5, 0.4, 0.4], [0.5, 0.5, 0.7, 0.7], [0.5, 0.5, 1.0, 1.0]], &window)
        }
        "fig4f" => map(&scenario_for("fig4-n-low-density", base)?, SweepGrid::default()),
        "fig5a" => Ok(theta_cuts(&scenario_for("fig3-lambda", base)?, &window, &[0.05, 0.1, 0.2])),
        "fig5b" => max_curve(ShiftKind::Angular, &scenario_for("fig3-lambda", base)?, &axis(0.0, 0.5, 51), &window),
        "fig5c" => Ok(theta_cuts(&scenario_for("fig4-n", base)?, &window, &[0.05, 0.1, 0.2])),
        "fig5d" => max_curve(ShiftKind::Angular, &scenario_for("fig4-n", base)?, &axis(0.0, 0.5, 51), &window),
        other => Err(Error::Validation(format!("unknown figure '{other}'"))),
    }
}

/// δp+ at Δp = 0 versus η for the three configurations at two angles.
fn density_table(base: &RunConfig) -> Result<Table> {
    let etas = axis(0.0, 0.1, 101).values();
    let cases = [("fig4-n", "n_type"), ("fig3-lambda", "lambda"), ("fig2-ctl", "ctl")];
    let scenarios: Vec<Scenario> = cases.iter().map(|(p, _)| scenario_for(p, base)).collect::<Result<_>>()?;
    let mut columns = vec!["eta_gamma", "theta_deg"];
    columns.extend(cases.iter().map(|(_, c)| *c));
    let mut t = Table::new(&columns);
    for theta in [33.6, 33.7] {
        for &eta in &etas {
            let mut cells = vec![Cell::Num(Some(eta)), Cell::Num(Some(theta))];
            for s in &scenarios {
                let v = s.with_eta(eta).and_then(|s| s.delta_plus_in_lambda(theta, 0.0)).ok();
                cells.push(Cell::Num(v));
            }
            t.rows.push(cells);
        }
    }
    Ok(t)
}
