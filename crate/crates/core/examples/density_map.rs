//! Full θ × Δp map of δp+ written as CSV, with a summary on stderr.
//!
//! cargo run --release --example density_map > map.csv

use spinhall::cli::config::RunConfig;
use spinhall::cli::output::Table;
use spinhall::sweep_engine::sweep;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::preset("fig2f-ctl")?;
    let table = sweep(&cfg.sweep, &cfg.scenario()?)?;
    let peak = table
        .rows
        .iter()
        .filter_map(|r| r.delta_plus_lambda.map(|d| (d.abs(), r.theta_deg, r.detuning)))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or_default();
    eprintln!(
        "{} points, {} flagged; largest |delta+| = {:.3} lambda at theta {:.2}, dp {:.2}",
        table.rows.len(),
        table.flagged_count(),
        peak.0,
        peak.1,
        peak.2
    );
    Table::from(&table).write_csv(std::io::stdout().lock(), None)?;
    Ok(())
}
