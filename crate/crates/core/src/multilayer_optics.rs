//! Reflection from the three-layer glass / atomic medium / glass stack.
//!
//! Angles are in radians and lengths in meters. Normal wave-vector
//! components are taken on the branch `Im k_z ≥ 0` so that evanescent and
//! absorbed waves decay away from each interface.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GLASS_PERMITTIVITY: f64 = 2.25;
pub const DEFAULT_THICKNESS: f64 = 0.4e-6;
/// 87Rb D2 line.
pub const DEFAULT_WAVELENGTH: f64 = 780e-9;

/// Central-difference step for angular derivatives (rad).
pub const DERIVATIVE_STEP: f64 = 1e-6;

const RESONANT_FLOOR: f64 = 1e-14;

/// Upper glass (1), atomic medium (2), lower glass (3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerStack {
    pub eps1: Complex64,
    pub eps2: Complex64,
    pub eps3: Complex64,
    /// Inner thickness `d` in meters. `d = 0` collapses the stack to the 1→3 interface.
    pub thickness: f64,
}

impl LayerStack {
    pub fn new(eps1: Complex64, eps2: Complex64, eps3: Complex64, thickness: f64) -> Result<Self> {
        let s = Self { eps1, eps2, eps3, thickness };
        s.validate()?;
        Ok(s)
    }

    /// Pyrex cell (ε1 = ε3 = 2.25, d = 0.4 µm) around a medium of permittivity `eps2`.
    pub fn glass_cell(eps2: Complex64) -> Self {
        Self {
            eps1: Complex64::new(GLASS_PERMITTIVITY, 0.0),
            eps2,
            eps3: Complex64::new(GLASS_PERMITTIVITY, 0.0),
            thickness: DEFAULT_THICKNESS,
        }
    }

    pub fn with_eps2(self, eps2: Complex64) -> Self {
        Self { eps2, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness.is_finite() && self.thickness >= 0.0) {
            return Err(Error::Validation(format!("thickness must be >= 0, got {}", self.thickness)));
        }
        if !(self.eps1.re > 0.0 && self.eps3.re > 0.0) {
            return Err(Error::Validation("Re eps1 and Re eps3 must be > 0".into()));
        }
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !(finite(self.eps1) && finite(self.eps2) && finite(self.eps3)) {
            return Err(Error::Validation("permittivities must be finite".into()));
        }
        Ok(())
    }

    fn eps(&self, layer: Layer) -> Complex64 {
        match layer {
            Layer::Upper => self.eps1,
            Layer::Medium => self.eps2,
            Layer::Lower => self.eps3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Upper,
    Medium,
    Lower,
}

impl Layer {
    fn index(self) -> usize {
        match self {
            Layer::Upper => 0,
            Layer::Medium => 1,
            Layer::Lower => 2,
        }
    }
}

/// Tangential and normal wave-vector components for one incidence angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveGeometry {
    pub theta_i: f64,
    pub lambda: f64,
    pub k0: f64,
    pub kx: Complex64,
    pub kz: [Complex64; 3],
}

impl WaveGeometry {
    pub fn kz(&self, layer: Layer) -> Complex64 {
        self.kz[layer.index()]
    }
}

/// `√(k0² ε − kx²)` on the decaying branch.
fn normal_component(k0: f64, eps: Complex64, kx: Complex64) -> Complex64 {
    let k = (eps * (k0 * k0) - kx * kx).sqrt();
    if k.im < 0.0 || (k.im == 0.0 && k.re < 0.0) {
        -k
    } else {
        k
    }
}

fn geometry_unchecked(theta_i: f64, lambda: f64, stack: &LayerStack) -> WaveGeometry {
    let k0 = 2.0 * PI / lambda;
    let kx = stack.eps1.sqrt() * (k0 * theta_i.sin());
    let kz = [stack.eps1, stack.eps2, stack.eps3].map(|e| normal_component(k0, e, kx));
    WaveGeometry { theta_i, lambda, k0, kx, kz }
}

pub fn wave_geometry(theta_i: f64, lambda: f64, stack: &LayerStack) -> Result<WaveGeometry> {
    check_angle(theta_i)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Validation(format!("wavelength must be > 0, got {lambda}")));
    }
    Ok(geometry_unchecked(theta_i, lambda, stack))
}

fn check_angle(theta_i: f64) -> Result<()> {
    if theta_i > 0.0 && theta_i < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidAngle { theta: theta_i })
    }
}

/// Single-interface `(rp_ij, rs_ij)`.
pub fn fresnel_interface(
    from: Layer,
    to: Layer,
    g: &WaveGeometry,
    stack: &LayerStack,
) -> Result<(Complex64, Complex64)> {
    interface(g.kz(from), stack.eps(from), g.kz(to), stack.eps(to))
        .ok_or(Error::DegenerateInterface { from: from.index() + 1, to: to.index() + 1 })
}

fn interface(ki: Complex64, ei: Complex64, kj: Complex64, ej: Complex64) -> Option<(Complex64, Complex64)> {
    let (pi, pj) = (ki / ei, kj / ej);
    let dp = pi + pj;
    let ds = ki + kj;
    if dp.norm() == 0.0 || ds.norm() == 0.0 {
        return None;
    }
    Some(((pi - pj) / dp, (ki - kj) / ds))
}

/// Three-layer `(rp, rs)` without derivatives.
pub fn reflection_coefficients(theta_i: f64, lambda: f64, stack: &LayerStack) -> Result<(Complex64, Complex64)> {
    check_angle(theta_i)?;
    coefficients_unchecked(theta_i, lambda, stack)
}

fn coefficients_unchecked(theta_i: f64, lambda: f64, stack: &LayerStack) -> Result<(Complex64, Complex64)> {
    let g = geometry_unchecked(theta_i, lambda, stack);
    let (p12, s12) = fresnel_interface(Layer::Upper, Layer::Medium, &g, stack)?;
    let (p23, s23) = fresnel_interface(Layer::Medium, Layer::Lower, &g, stack)?;
    let phase = (Complex64::i() * 2.0 * g.kz(Layer::Medium) * stack.thickness).exp();
    let combine = |r12: Complex64, r23: Complex64| {
        let den = 1.0 + r12 * r23 * phase;
        if den.norm() < RESONANT_FLOOR {
            return Err(Error::ResonantDenominator { magnitude: den.norm() });
        }
        Ok((r12 + r23 * phase) / den)
    };
    Ok((combine(p12, p23)?, combine(s12, s23)?))
}

/// Reflection coefficients with their angular derivatives (per radian).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub rp: Complex64,
    pub rs: Complex64,
    pub dp_dtheta: Complex64,
    pub ds_dtheta: Complex64,
}

impl ReflectionPair {
    /// `φp = arg rp`.
    pub fn phase_p(&self) -> f64 {
        self.rp.arg()
    }

    pub fn phase_s(&self) -> f64 {
        self.rs.arg()
    }

    pub fn intensity_ratio(&self) -> f64 {
        self.rs.norm() / self.rp.norm()
    }
}

pub fn stack_reflection(theta_i: f64, lambda: f64, stack: &LayerStack) -> Result<ReflectionPair> {
    check_angle(theta_i)?;
    let (rp, rs) = coefficients_unchecked(theta_i, lambda, stack)?;
    let (dp_dtheta, ds_dtheta) = derivative_unchecked(theta_i, lambda, stack)?;
    Ok(ReflectionPair { rp, rs, dp_dtheta, ds_dtheta })
}

/// `(∂rp/∂θ, ∂rs/∂θ)` per radian: central differences at `h` and `h/2`
/// combined by one Richardson step.
pub fn stack_reflection_derivative(theta_i: f64, lambda: f64, stack: &LayerStack) -> Result<(Complex64, Complex64)> {
    check_angle(theta_i)?;
    derivative_unchecked(theta_i, lambda, stack)
}

fn derivative_unchecked(theta_i: f64, lambda: f64, stack: &LayerStack) -> Result<(Complex64, Complex64)> {
    let central = |h: f64| -> Result<(Complex64, Complex64)> {
        let (pp, sp) = coefficients_unchecked(theta_i + h, lambda, stack)?;
        let (pm, sm) = coefficients_unchecked(theta_i - h, lambda, stack)?;
        Ok(((pp - pm) / (2.0 * h), (sp - sm) / (2.0 * h)))
    };
    let (p1, s1) = central(DERIVATIVE_STEP)?;
    let (p2, s2) = central(DERIVATIVE_STEP / 2.0)?;
    Ok(((4.0 * p2 - p1) / 3.0, (4.0 * s2 - s1) / 3.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lossless(eps2: f64) -> LayerStack {
        LayerStack::glass_cell(Complex64::new(eps2, 0.0))
    }

    #[test]
    fn normal_incidence_geometry() {
        let g = wave_geometry(1e-12, DEFAULT_WAVELENGTH, &lossless(1.0)).unwrap();
        assert!(g.kx.norm() < 1e-3);
        assert!((g.kz(Layer::Upper) - 1.5 * g.k0).norm() < 1e-6 * g.k0);
    }

    #[test]
    fn critical_angle_and_evanescent_branch() {
        let theta_c = (1.0f64 / 1.5).asin();
        let g = wave_geometry(theta_c, DEFAULT_WAVELENGTH, &lossless(1.0)).unwrap();
        assert!(g.kz(Layer::Medium).norm() < 1e-6 * g.k0);
        let g = wave_geometry(60f64.to_radians(), DEFAULT_WAVELENGTH, &lossless(1.0)).unwrap();
        let k2 = g.kz(Layer::Medium);
        assert!(k2.re.abs() < 1e-9 * g.k0);
        assert!(k2.im > 0.0);
    }

    #[test]
    fn invalid_angles() {
        let s = lossless(1.0);
        for t in [0.0, -0.1, FRAC_PI_2, 2.0] {
            assert_eq!(wave_geometry(t, DEFAULT_WAVELENGTH, &s), Err(Error::InvalidAngle { theta: t }));
            assert!(stack_reflection(t, DEFAULT_WAVELENGTH, &s).is_err());
        }
    }

    #[test]
    fn normal_incidence_interface() {
        let s = lossless(1.0);
        let g = wave_geometry(1e-9, DEFAULT_WAVELENGTH, &s).unwrap();
        let (rp, rs) = fresnel_interface(Layer::Upper, Layer::Medium, &g, &s).unwrap();
        assert!((rs - Complex64::new(0.2, 0.0)).norm() < 1e-12);
        assert!((rp - Complex64::new(-0.2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn matched_interface_is_transparent() {
        let s = lossless(2.25);
        let g = wave_geometry(0.4, DEFAULT_WAVELENGTH, &s).unwrap();
        let (rp, rs) = fresnel_interface(Layer::Upper, Layer::Medium, &g, &s).unwrap();
        assert_eq!(rp.norm(), 0.0);
        assert_eq!(rs.norm(), 0.0);
    }

    #[test]
    fn single_interface_brewster_zero() {
        let s = lossless(1.0);
        let g = wave_geometry((1.0f64 / 1.5).atan(), DEFAULT_WAVELENGTH, &s).unwrap();
        let (rp, _) = fresnel_interface(Layer::Upper, Layer::Medium, &g, &s).unwrap();
        assert!(rp.norm() < 1e-15);
    }

    #[test]
    fn vanishing_layer_between_identical_glass() {
        let s = LayerStack { thickness: 0.0, ..LayerStack::glass_cell(Complex64::new(1.3, 0.2)) };
        let (rp, rs) = reflection_coefficients(0.5, DEFAULT_WAVELENGTH, &s).unwrap();
        assert!(rp.norm() < 1e-15 && rs.norm() < 1e-15);
    }

    #[test]
    fn matched_upper_layer_is_phase_only() {
        let s = LayerStack::new(
            Complex64::new(2.25, 0.0),
            Complex64::new(2.25, 0.0),
            Complex64::new(1.0, 0.0),
            DEFAULT_THICKNESS,
        )
        .unwrap();
        let theta = 0.5;
        let g = wave_geometry(theta, DEFAULT_WAVELENGTH, &s).unwrap();
        let (p23, s23) = fresnel_interface(Layer::Medium, Layer::Lower, &g, &s).unwrap();
        let r = stack_reflection(theta, DEFAULT_WAVELENGTH, &s).unwrap();
        assert!((r.rp.norm() - p23.norm()).abs() < 1e-14);
        assert!((r.rs.norm() - s23.norm()).abs() < 1e-14);
    }

    #[test]
    fn derivative_stencil_is_symmetric() {
        let s = lossless(1.0);
        let theta = 0.55;
        let forward = stack_reflection_derivative(theta, DEFAULT_WAVELENGTH, &s).unwrap();
        // the same stencil mirrored about θ: evaluate d/dθ of r(2θ0 − θ) and negate
        let h = DERIVATIVE_STEP;
        let (pp, _) = reflection_coefficients(theta - h, DEFAULT_WAVELENGTH, &s).unwrap();
        let (pm, _) = reflection_coefficients(theta + h, DEFAULT_WAVELENGTH, &s).unwrap();
        let (pp2, _) = reflection_coefficients(theta - h / 2.0, DEFAULT_WAVELENGTH, &s).unwrap();
        let (pm2, _) = reflection_coefficients(theta + h / 2.0, DEFAULT_WAVELENGTH, &s).unwrap();
        let mirrored = -(4.0 * (pp2 - pm2) / h - (pp - pm) / (2.0 * h)) / 3.0;
        assert!((forward.0 - mirrored).norm() <= 1e-9 * forward.0.norm());
    }

    #[test]
    fn brewster_dip_of_the_vacuum_gap() {
        let s = lossless(1.0);
        let mut best = (0.0, f64::INFINITY);
        for k in 0..=800 {
            let deg = 30.0 + 0.01 * k as f64;
            let (rp, _) = reflection_coefficients(deg.to_radians(), DEFAULT_WAVELENGTH, &s).unwrap();
            if rp.norm() < best.1 {
                best = (deg, rp.norm());
            }
        }
        assert!((best.0 - 33.69).abs() < 0.05, "{best:?}");
        // Thin-film interference nulls |rs| near 8.5°; beyond that it rises
        // monotonically towards grazing incidence.
        let mut prev = 0.0;
        for k in 10..89 {
            let (_, rs) = reflection_coefficients((k as f64).to_radians(), DEFAULT_WAVELENGTH, &s).unwrap();
            assert!(rs.norm() >= prev);
            prev = rs.norm();
        }
        let (_, rs50) = reflection_coefficients(50f64.to_radians(), DEFAULT_WAVELENGTH, &s).unwrap();
        assert!((rs50.norm() - 0.96057355).abs() < 1e-6, "{}", rs50.norm());
    }

    #[test]
    fn stack_validation() {
        let one = Complex64::new(1.0, 0.0);
        assert!(LayerStack::new(one, one, one, -1e-9).is_err());
        assert!(LayerStack::new(Complex64::new(-1.0, 0.0), one, one, 1e-7).is_err());
        assert!(LayerStack::new(one, one, one, 0.0).is_ok());
    }
}
