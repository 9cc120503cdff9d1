//! Writes every figure data set into a directory.
//!
//! cargo run --release --example reproduce_figures -- out/

use std::path::PathBuf;

use spinhall::cli::config::RunConfig;
use spinhall::cli::figures::{figure_table, FIGURES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    let cfg = RunConfig::preset("fig2-ctl")?;
    for id in FIGURES {
        let table = figure_table(id, &cfg)?;
        let path = dir.join(format!("{id}.csv"));
        table.write_csv(std::fs::File::create(&path)?, None)?;
        println!("{id}: {} rows, {} flagged -> {}", table.len(), table.flagged(), path.display());
    }
    Ok(())
}
