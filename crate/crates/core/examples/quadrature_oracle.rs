//! Beam-centroid integration against the closed-form spatial shift.
//!
//! cargo run --release --example quadrature_oracle

use spinhall::beam_shifts::{beam_centroid, spatial_shift, GridSpec};
use spinhall::cli::config::RunConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = RunConfig::preset("fig2-ctl")?.scenario()?;
    let lambda = s.beam.lambda;
    println!("{:>7} {:>6} {:>14} {:>14} {:>10}", "theta", "dp", "closed form", "quadrature", "rel diff");
    for (theta, dp) in [(31.0, 0.0), (33.5, 0.0), (33.9, 0.0), (33.0, 2.6), (34.2, -1.0), (36.0, 4.0)] {
        let refl = s.reflection(f64::to_radians(theta), dp)?;
        let (closed, _) = spatial_shift(f64::to_radians(theta), &refl, &s.beam)?;
        let (quad, _) = beam_centroid(f64::to_radians(theta), &refl, &s.beam, &GridSpec::default())?;
        println!(
            "{theta:>7.2} {dp:>6.2} {:>14.8} {:>14.8} {:>10.2e}",
            closed / lambda,
            quad / lambda,
            ((quad - closed) / closed).abs()
        );
    }
    Ok(())
}
