//! Brewster angle and δp+ sign flip as the probe is detuned.
//!
//! cargo run --example brewster_angle

use spinhall::cli::config::RunConfig;
use spinhall::sweep_engine::{find_brewster_at, find_shift_sign_flip, AxisRange};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = RunConfig::preset("fig2-ctl")?.scenario()?;
    let window = AxisRange::new(30.0, 38.0, 801)?;
    println!("{:>6} {:>12} {:>12} {:>14}", "dp", "brewster", "sign flip", "slope lam/deg");
    for k in 0..=12 {
        let dp = -3.0 + 0.5 * k as f64;
        let theta_b = find_brewster_at((window.min, window.max), &s, dp);
        let flip = find_shift_sign_flip(&s, &window, dp);
        match (theta_b, flip) {
            (Ok(b), Ok(f)) => println!("{dp:>6.2} {b:>12.5} {:>12.5} {:>14.3}", f.theta_deg, f.slope),
            (b, f) => println!(
                "{dp:>6.2} {:>12} {:>12}",
                b.map_or("-".into(), |v| format!("{v:.5}")),
                f.map_or("-".into(), |v| format!("{:.5}", v.theta_deg))
            ),
        }
    }
    Ok(())
}
