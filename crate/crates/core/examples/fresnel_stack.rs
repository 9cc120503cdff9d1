//! Reflection from the glass / vapor / glass cell versus incidence angle,
//! with the medium at resonance and slightly detuned.
//!
//! cargo run --example fresnel_stack

use spinhall::atomic_medium::permittivity;
use spinhall::multilayer_optics::{stack_reflection, LayerStack, DEFAULT_WAVELENGTH};
use spinhall::presets;

fn main() -> spinhall::Result<()> {
    let medium = presets::ctl_medium(0.1);
    let detunings = [0.0, 1.0, 2.7];
    println!(
        "{:>6} {}",
        "theta",
        detunings
            .map(|d| format!("{:>11} {:>11} {:>11}", format!("|rp|@{d}"), format!("|rs|@{d}"), "arg rs-rp"))
            .join(" ")
    );
    for deg in (5..=85).step_by(5) {
        print!("{deg:>6}");
        for dp in detunings {
            let stack = LayerStack::glass_cell(permittivity(dp, &medium)?);
            let r = stack_reflection(f64::from(deg).to_radians(), DEFAULT_WAVELENGTH, &stack)?;
            print!(" {:>11.6} {:>11.6} {:>11.6}", r.rp.norm(), r.rs.norm(), r.phase_s() - r.phase_p());
        }
        println!();
    }
    Ok(())
}
