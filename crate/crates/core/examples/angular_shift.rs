//! Angular spin shift Θ− for the Λ and N regimes off resonance.
//!
//! cargo run --example angular_shift

use spinhall::cli::config::RunConfig;
use spinhall::sweep_engine::{max_shift_vs_detuning, AxisRange, ShiftKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let window = AxisRange::new(30.0, 38.0, 801)?;
    let detunings = [0.05, 0.1, 0.2, 0.5, 1.0];
    for preset in ["fig3-lambda", "fig4-n"] {
        let s = RunConfig::preset(preset)?.scenario()?;
        println!("{preset} ({})", s.medium.configuration());
        for p in max_shift_vs_detuning(ShiftKind::Angular, &detunings, &window, &s)? {
            println!("  dp = {:5.2}: max Theta- = {:.4e} at {:.3} deg", p.detuning, p.value, p.theta_deg);
        }
    }
    Ok(())
}
