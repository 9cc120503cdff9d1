//! Local absorption minima of each regime.
//!
//! cargo run --example transparency_windows

use spinhall::atomic_medium::susceptibility;
use spinhall::presets;
use spinhall::sweep_engine::{find_transparency_windows, AxisRange};

fn main() -> spinhall::Result<()> {
    let axis = AxisRange::new(-6.0, 6.0, 601)?;
    for (name, medium) in
        [("CTL", presets::ctl_medium(0.1)), ("Lambda", presets::lambda_medium(0.1)), ("N", presets::n_type_medium(0.1))]
    {
        println!("{name}:");
        for dp in find_transparency_windows(&medium, &axis)? {
            println!("  dp = {dp:+.4}  chi2 = {:.4e}", susceptibility(dp, &medium)?.im);
        }
    }
    Ok(())
}
