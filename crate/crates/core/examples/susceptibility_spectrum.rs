//! Probe absorption and dispersion of the three coupling regimes.
//!
//! cargo run --example susceptibility_spectrum

use spinhall::atomic_medium::{effective_couplings, susceptibility};
use spinhall::presets;

fn main() -> spinhall::Result<()> {
    let media = [("CTL", presets::ctl_fields()), ("Lambda", presets::lambda_fields()), ("N", presets::n_type_fields())];
    for (name, fields) in &media {
        let c = effective_couplings(fields)?;
        let m = presets::medium(fields, 0.1);
        println!(
            "{name:<7} |alpha| = {:.6}  |beta| = {:.6}  Omega = {:.6}  classified as {}",
            c.alpha.norm(),
            c.beta.norm(),
            c.omega_total,
            m.configuration()
        );
    }
    println!(
        "\n{:>8} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}",
        "dp", "CTL chi1", "CTL chi2", "L chi1", "L chi2", "N chi1", "N chi2"
    );
    for k in 0..=24 {
        let dp = -6.0 + 0.5 * k as f64;
        print!("{dp:>8.2}");
        for (_, fields) in &media {
            let chi = susceptibility(dp, &presets::medium(fields, 0.1))?;
            print!(" {:>13.5e} {:>13.5e}", chi.re, chi.im);
        }
        println!();
    }
    Ok(())
}
