//! Spin-dependent transverse shifts of the reflected Gaussian probe.
//!
//! The closed form gives the spatial shift δp± (real part of the complex
//! shift) and the angular shift Θ∓ (imaginary part, divided by the Rayleigh
//! range). [`beam_centroid`] computes δp± independently as the intensity
//! centroid of the first-order reflected field, by 2-D Gauss–Legendre
//! quadrature at the waist plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multilayer_optics::{stack_reflection, LayerStack, ReflectionPair};
use crate::quadrature::{pairwise_sum, GaussLegendre};

/// Below this |rp| the first-order expansion is not trusted.
pub const BREWSTER_FLOOR: f64 = 1e-12;

/// Default beam waist in wavelengths.
pub const DEFAULT_WAIST_IN_WAVELENGTHS: f64 = 50.0;

/// Angle unit in which `∂ ln rp / ∂θ` enters the shift denominator.
///
/// `Degree` gives the reference peak δ = w0/2 at the resonant Brewster dip;
/// `Radian` is the literal first-order expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlopeUnit {
    #[default]
    Degree,
    Radian,
}

impl SlopeUnit {
    /// Factor converting a per-radian derivative into this unit.
    pub fn per_radian_factor(self) -> f64 {
        match self {
            SlopeUnit::Degree => PI / 180.0,
            SlopeUnit::Radian => 1.0,
        }
    }
}

/// Gaussian probe: waist, wavelength and incident-medium index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamParams {
    pub w0: f64,
    pub lambda: f64,
    /// Refractive index of the incident medium, `k1 = n1 k0`.
    pub n1: f64,
    pub slope_unit: SlopeUnit,
}

impl BeamParams {
    pub fn new(w0: f64, lambda: f64, n1: f64) -> Result<Self> {
        let b = Self { w0, lambda, n1, slope_unit: SlopeUnit::default() };
        b.validate()?;
        Ok(b)
    }

    /// `w0 = 50 λ` in the glass of `stack`.
    pub fn standard(lambda: f64, stack: &LayerStack) -> Self {
        Self {
            w0: DEFAULT_WAIST_IN_WAVELENGTHS * lambda,
            lambda,
            n1: stack.eps1.sqrt().re,
            slope_unit: SlopeUnit::default(),
        }
    }

    pub fn with_slope_unit(self, slope_unit: SlopeUnit) -> Self {
        Self { slope_unit, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("w0", self.w0), ("lambda", self.lambda), ("n1", self.n1)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Validation(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn k0(&self) -> f64 {
        2.0 * PI / self.lambda
    }

    pub fn k1(&self) -> f64 {
        self.n1 * self.k0()
    }

    /// `Λr = π w0² / λ`.
    pub fn rayleigh(&self) -> f64 {
        PI * self.w0 * self.w0 / self.lambda
    }
}

/// Spatial and angular spin shifts at one incidence angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftResult {
    /// δp+ (meters).
    pub delta_plus: f64,
    /// δp−, always `-delta_plus`.
    pub delta_minus: f64,
    /// Θ− (dimensionless).
    pub theta_minus: f64,
    /// Θ+, always `-theta_minus`.
    pub theta_plus: f64,
    /// rs / rp.
    pub ratio_sp: Complex64,
    /// ∂ ln rp / ∂θ in the beam's slope unit.
    pub log_derivative: Complex64,
}

struct ShiftTerms {
    re_part: f64,
    im_part: f64,
    scale: f64,
    ratio: Complex64,
    log_derivative: Complex64,
}

fn shift_terms(theta_i: f64, refl: &ReflectionPair, beam: &BeamParams) -> Result<ShiftTerms> {
    let rp_abs = refl.rp.norm();
    if rp_abs.is_nan() || rp_abs < BREWSTER_FLOOR {
        return Err(Error::BrewsterSingularity { rp_abs });
    }
    let ratio_abs = refl.rs.norm() / rp_abs;
    let dphi = refl.phase_s() - refl.phase_p();
    // Re and Im of 1 + rs/rp in polar form
    let re_part = 1.0 + ratio_abs * dphi.cos();
    let im_part = ratio_abs * dphi.sin();
    let ratio = refl.rs / refl.rp;
    let log_derivative = refl.dp_dtheta / refl.rp * beam.slope_unit.per_radian_factor();
    let cot = 1.0 / theta_i.tan();
    let k1w0 = beam.k1() * beam.w0;
    let den = k1w0 * k1w0 + log_derivative.norm_sqr() + ((1.0 + ratio) * cot).norm_sqr();
    Ok(ShiftTerms { re_part, im_part, scale: beam.k1() * beam.w0 * beam.w0 * cot / den, ratio, log_derivative })
}

/// `(δp+, δp−)` in meters.
pub fn spatial_shift(theta_i: f64, refl: &ReflectionPair, beam: &BeamParams) -> Result<(f64, f64)> {
    let t = shift_terms(theta_i, refl, beam)?;
    let plus = -t.scale * t.re_part;
    Ok((plus, -plus))
}

/// `(Θ−, Θ+)`, dimensionless.
pub fn angular_shift(theta_i: f64, refl: &ReflectionPair, beam: &BeamParams) -> Result<(f64, f64)> {
    let t = shift_terms(theta_i, refl, beam)?;
    let minus = t.scale * t.im_part / beam.rayleigh();
    Ok((minus, -minus))
}

pub fn spin_shifts(theta_i: f64, refl: &ReflectionPair, beam: &BeamParams) -> Result<ShiftResult> {
    let t = shift_terms(theta_i, refl, beam)?;
    let delta_plus = -t.scale * t.re_part;
    let theta_minus = t.scale * t.im_part / beam.rayleigh();
    Ok(ShiftResult {
        delta_plus,
        delta_minus: -delta_plus,
        theta_minus,
        theta_plus: -theta_minus,
        ratio_sp: t.ratio,
        log_derivative: t.log_derivative,
    })
}

/// Tensor-product quadrature grid for the centroid oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Gauss–Legendre nodes per axis.
    pub nodes: usize,
    /// Integration window is `±half_width · w0` on both axes.
    pub half_width: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { nodes: 201, half_width: 4.0 }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::Validation("quadrature needs at least 2 nodes per axis".into()));
        }
        if self.half_width.is_nan() || self.half_width < 3.0 {
            return Err(Error::Validation(format!(
                "quadrature window must span at least 6 waists, got ±{} w0",
                self.half_width
            )));
        }
        Ok(())
    }
}

/// Relative change tolerated when the grid is doubled.
pub const QUADRATURE_TOLERANCE: f64 = 1e-3;

/// Centroid `(δ+, δ−)` of the reflected spin components, in meters.
///
/// Field at the waist plane:
/// `E± ∝ exp(−(x²+y²)/w0²) [rp − 2ix/(k1 w0²) ∂rp/∂θ ∓ 2y cot θ/(k1 w0²) (rp + rs)]`.
/// Evaluated on `grid` and on a grid with twice the nodes; the finer result
/// is returned.
pub fn beam_centroid(theta_i: f64, refl: &ReflectionPair, beam: &BeamParams, grid: &GridSpec) -> Result<(f64, f64)> {
    grid.validate()?;
    beam.validate()?;
    let coarse = centroid_on_grid(theta_i, refl, beam, grid.nodes, grid.half_width);
    let fine = centroid_on_grid(theta_i, refl, beam, 2 * grid.nodes, grid.half_width);
    let floor = 1e-9 * beam.w0;
    let change = (fine.0 - coarse.0).abs() / fine.0.abs().max(floor);
    if change.is_nan() || change > QUADRATURE_TOLERANCE {
        return Err(Error::QuadratureNotConverged { relative_change: change });
    }
    Ok(fine)
}

fn centroid_on_grid(theta_i: f64, refl: &ReflectionPair, beam: &BeamParams, n: usize, half_width: f64) -> (f64, f64) {
    let gl = GaussLegendre::new(n);
    let extent = half_width * beam.w0;
    let (pts, wts) = gl.mapped(-extent, extent);
    let w0_sq = beam.w0 * beam.w0;
    let k1 = beam.k1();
    let cot = 1.0 / theta_i.tan();
    let slope = refl.dp_dtheta * beam.slope_unit.per_radian_factor();
    let x_coeff = -Complex64::i() * 2.0 / (k1 * w0_sq) * slope;
    let y_coeff = 2.0 * cot / (k1 * w0_sq) * (refl.rp + refl.rs);

    let centroid = |sign: f64| -> f64 {
        // per-row partial sums, assembled in row order
        let rows: Vec<(f64, f64)> = pts
            .par_iter()
            .zip(wts.par_iter())
            .map(|(&y, &wy)| {
                let mut num = Vec::with_capacity(pts.len());
                let mut den = Vec::with_capacity(pts.len());
                for (&x, &wx) in pts.iter().zip(&wts) {
                    let envelope = (-2.0 * (x * x + y * y) / w0_sq).exp();
                    let amp = refl.rp + x_coeff * x - sign * y_coeff * y;
                    let intensity = envelope * amp.norm_sqr() * wx * wy;
                    num.push(y * intensity);
                    den.push(intensity);
                }
                (pairwise_sum(&num), pairwise_sum(&den))
            })
            .collect();
        let num: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let den: Vec<f64> = rows.iter().map(|r| r.1).collect();
        pairwise_sum(&num) / pairwise_sum(&den)
    };
    (centroid(1.0), centroid(-1.0))
}

/// Centroid oracle for the stack at `theta_i`, with `rp`, `rs` and
/// `∂rp/∂θ` taken from the multilayer model.
pub fn shift_from_beam_integral(
    theta_i: f64,
    stack: &LayerStack,
    beam: &BeamParams,
    grid: &GridSpec,
) -> Result<(f64, f64)> {
    let refl = stack_reflection(theta_i, beam.lambda, stack)?;
    beam_centroid(theta_i, &refl, beam, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilayer_optics::DEFAULT_WAVELENGTH;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn beam() -> BeamParams {
        BeamParams::standard(DEFAULT_WAVELENGTH, &LayerStack::glass_cell(c(1.0, 0.0)))
    }

    fn pair(rp: Complex64, rs: Complex64, drp: Complex64) -> ReflectionPair {
        ReflectionPair { rp, rs, dp_dtheta: drp, ds_dtheta: c(0.0, 0.0) }
    }

    #[test]
    fn beam_derived_quantities() {
        let b = beam();
        assert_eq!(b.rayleigh(), PI * b.w0 * b.w0 / b.lambda);
        assert!((b.k1() - 1.5 * b.k0()).abs() < 1e-9 * b.k0());
        assert!(BeamParams::new(0.0, 1e-6, 1.0).is_err());
    }

    #[test]
    fn destructive_ratio_gives_no_shift() {
        let r = pair(c(0.3, 0.1), c(-0.3, -0.1), c(0.2, 0.0));
        let (p, m) = spatial_shift(0.6, &r, &beam()).unwrap();
        assert!(p.abs() < 1e-15 * beam().w0 && m.abs() < 1e-15 * beam().w0);
    }

    #[test]
    fn grazing_incidence_vanishes() {
        let r = pair(c(0.1, 0.0), c(0.9, 0.2), c(0.5, 0.5));
        let (p, _) = spatial_shift(PI / 2.0 - 1e-12, &r, &beam()).unwrap();
        assert!(p.abs() < 1e-9 * beam().lambda);
    }

    #[test]
    fn real_ratio_has_no_angular_shift() {
        let r = pair(c(-0.2, 0.0), c(0.6, 0.0), c(0.3, 0.0));
        let (minus, plus) = angular_shift(0.5, &r, &beam()).unwrap();
        assert!(minus.abs() < 1e-18 && plus.abs() < 1e-18);
    }

    #[test]
    fn brewster_floor_is_flagged() {
        let r = pair(c(1e-13, 0.0), c(0.6, 0.0), c(0.3, 0.0));
        assert!(matches!(spin_shifts(0.5, &r, &beam()), Err(Error::BrewsterSingularity { .. })));
    }

    #[test]
    fn antisymmetric_components() {
        let r = pair(c(0.01, -0.02), c(0.6, 0.3), c(0.4, -1.0));
        let s = spin_shifts(0.58, &r, &beam()).unwrap();
        assert_eq!(s.delta_plus + s.delta_minus, 0.0);
        assert_eq!(s.theta_plus + s.theta_minus, 0.0);
        assert_eq!(s.ratio_sp, r.rs / r.rp);
    }

    #[test]
    fn slope_unit_only_rescales_the_log_derivative() {
        let r = pair(c(0.01, -0.02), c(0.6, 0.3), c(0.4, -1.0));
        let deg = spin_shifts(0.58, &r, &beam()).unwrap();
        let rad = spin_shifts(0.58, &r, &beam().with_slope_unit(SlopeUnit::Radian)).unwrap();
        assert!((deg.log_derivative * (180.0 / PI) - rad.log_derivative).norm() < 1e-12 * rad.log_derivative.norm());
        assert!(deg.delta_plus.abs() >= rad.delta_plus.abs());
    }

    #[test]
    fn flat_coefficients_match_closed_form() {
        let r = pair(c(0.4, 0.1), c(0.4, 0.1), c(0.0, 0.0));
        let theta = 0.6;
        let b = beam();
        let (op, om) = beam_centroid(theta, &r, &b, &GridSpec::default()).unwrap();
        let (cp, _) = spatial_shift(theta, &r, &b).unwrap();
        assert!(((op - cp) / cp).abs() < 1e-2);
        assert!((op + om).abs() <= 1e-9 * op.abs());
    }

    #[test]
    fn narrow_window_rejected() {
        let r = pair(c(0.4, 0.1), c(0.4, 0.1), c(0.0, 0.0));
        let g = GridSpec { nodes: 201, half_width: 2.0 };
        assert!(beam_centroid(0.6, &r, &beam(), &g).is_err());
    }

    #[test]
    fn coarse_grid_fails_convergence() {
        let r = pair(c(0.4, 0.1), c(0.4, 0.1), c(0.0, 0.0));
        let g = GridSpec { nodes: 3, half_width: 4.0 };
        assert!(matches!(beam_centroid(0.6, &r, &beam(), &g), Err(Error::QuadratureNotConverged { .. })));
    }
}
