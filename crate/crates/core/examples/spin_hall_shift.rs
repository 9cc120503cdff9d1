//! Transverse spin-dependent displacement δp+ near the Brewster angle.
//!
//! cargo run --example spin_hall_shift -- [detuning]

use spinhall::cli::config::RunConfig;
use spinhall::sweep_engine::AxisRange;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dp: f64 = std::env::args().nth(1).map_or(Ok(0.0), |s| s.parse())?;
    let scenario = RunConfig::preset("fig2-ctl")?.scenario()?;
    let w0 = scenario.beam.w0 / scenario.beam.lambda;
    println!("CTL cell, eta = 0.1, detuning {dp}; waist {w0:.1} lambda, bound +-{:.1} lambda", w0 / 2.0);
    for theta in AxisRange::new(33.0, 34.4, 29)?.values() {
        match scenario.shifts(theta.to_radians(), dp) {
            Ok(s) => {
                let d = s.delta_plus / scenario.beam.lambda;
                let bar = "#".repeat((d.abs() * 2.0).round() as usize);
                println!("{theta:7.3}  {d:+9.4}  |rs/rp| = {:8.3}  {bar}", s.ratio_sp.norm());
            }
            Err(e) => println!("{theta:7.3}  flagged: {e}"),
        }
    }
    Ok(())
}
