//! Steady-state optical response of the five-level combined tripod-and-Λ medium.
//!
//! Four resonant control fields couple the excited state |b> to the ground
//! states |c>, |d> and the second excited state |e> to the same pair. In the
//! internal dark/bright basis of {|c>, |d>} the probe only sees the effective
//! couplings α (b–B), β (b–D) and the total Rabi frequency Ω (B–e). All
//! frequencies are in units of γ; the susceptibility is dimensionless and
//! absorption corresponds to `Im χ > 0`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default classification tolerance, relative to Ω.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-6;

/// A single control field `Ω_j = |Ω_j| e^{iφ_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlField {
    amplitude: f64,
    phase: f64,
}

impl ControlField {
    /// Phase is wrapped into `[0, 2π)`.
    pub fn new(amplitude: f64, phase: f64) -> Result<Self> {
        if !amplitude.is_finite() || amplitude < 0.0 {
            return Err(Error::Validation(format!("control field amplitude must be finite and >= 0, got {amplitude}")));
        }
        if !phase.is_finite() {
            return Err(Error::Validation(format!("control field phase must be finite, got {phase}")));
        }
        let mut phase = phase.rem_euclid(TAU);
        if phase >= TAU {
            phase = 0.0;
        }
        Ok(Self { amplitude, phase })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Complex Rabi frequency.
    pub fn rabi(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }
}

/// The four control fields Ω1..Ω4 (b–c, b–d, e–c, e–d).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlFieldSet {
    fields: [ControlField; 4],
}

impl ControlFieldSet {
    pub fn new(fields: [ControlField; 4]) -> Self {
        Self { fields }
    }

    /// Builds the set from `(amplitude, phase)` pairs.
    pub fn from_polar(pairs: [(f64, f64); 4]) -> Result<Self> {
        let mut fields = [ControlField { amplitude: 0.0, phase: 0.0 }; 4];
        for (slot, (amp, phase)) in fields.iter_mut().zip(pairs) {
            *slot = ControlField::new(amp, phase)?;
        }
        Ok(Self { fields })
    }

    pub fn fields(&self) -> &[ControlField; 4] {
        &self.fields
    }

    /// `φ = (φ1 − φ2) − (φ3 − φ4)`, always derived from the stored phases.
    pub fn relative_phase(&self) -> f64 {
        let [f1, f2, f3, f4] = self.fields;
        (f1.phase - f2.phase) - (f3.phase - f4.phase)
    }

    /// Returns a copy with `offset` added to every phase.
    pub fn with_common_phase_offset(&self, offset: f64) -> Result<Self> {
        let mut fields = self.fields;
        for f in fields.iter_mut() {
            *f = ControlField::new(f.amplitude, f.phase + offset)?;
        }
        Ok(Self { fields })
    }
}

/// Effective couplings of the probe-excited state in the dark/bright basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCouplings {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub omega_total: f64,
    pub zeta: f64,
}

impl EffectiveCouplings {
    /// Couplings supplied directly, e.g. when Ω = 0 makes the dark/bright
    /// decomposition ambiguous.
    pub fn direct(alpha: Complex64, beta: Complex64, omega_total: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::Validation("alpha and beta must be finite".into()));
        }
        if !omega_total.is_finite() || omega_total < 0.0 {
            return Err(Error::Validation(format!("omega_total must be finite and >= 0, got {omega_total}")));
        }
        Ok(Self { alpha, beta, omega_total, zeta: alpha.norm_sqr() + beta.norm_sqr() })
    }

    /// Natural Λ limit (Ω2 = Ω3 = Ω4 = 0): α = Ω1*, β = 0 and the |e> branch decoupled.
    pub fn natural_lambda(omega1: ControlField) -> Self {
        let alpha = omega1.rabi().conj();
        Self { alpha, beta: Complex64::new(0.0, 0.0), omega_total: 0.0, zeta: alpha.norm_sqr() }
    }
}

/// α = (Ω1*Ω3* + Ω2*Ω4*)/Ω, β = (Ω1*Ω4* − Ω2*Ω3*)/Ω with Ω = √(|Ω3|² + |Ω4|²).
pub fn effective_couplings(cf: &ControlFieldSet) -> Result<EffectiveCouplings> {
    let [o1, o2, o3, o4] = cf.fields.map(|f| f.rabi());
    let omega = (o3.norm_sqr() + o4.norm_sqr()).sqrt();
    if omega == 0.0 {
        if o1.norm() > 0.0 || o2.norm() > 0.0 {
            return Err(Error::DegenerateBrightState);
        }
        let zero = Complex64::new(0.0, 0.0);
        return Ok(EffectiveCouplings { alpha: zero, beta: zero, omega_total: 0.0, zeta: 0.0 });
    }
    let alpha = (o1.conj() * o3.conj() + o2.conj() * o4.conj()) / omega;
    let beta = (o1.conj() * o4.conj() - o2.conj() * o3.conj()) / omega;
    Ok(EffectiveCouplings { alpha, beta, omega_total: omega, zeta: alpha.norm_sqr() + beta.norm_sqr() })
}

/// Effective level scheme selected by the control fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Configuration {
    /// α ≠ 0 and β ≠ 0.
    Ctl,
    /// α = 0, β ≠ 0.
    Lambda,
    /// α ≠ 0, β = 0.
    NType,
    Degenerate,
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Configuration::Ctl => "CTL",
            Configuration::Lambda => "Lambda",
            Configuration::NType => "N",
            Configuration::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

/// Threshold classification of `(|α|, |β|)` relative to `tol · Ω`.
///
/// With Ω = 0 the |e> branch is absent and a single nonzero coupling
/// leaves a three-level Λ; the scale then falls back to √ζ.
pub fn classify(c: &EffectiveCouplings, tol: f64) -> Configuration {
    let a = c.alpha.norm();
    let b = c.beta.norm();
    if c.omega_total == 0.0 {
        let cut = tol * c.zeta.sqrt();
        return if a > cut || b > cut { Configuration::Lambda } else { Configuration::Degenerate };
    }
    let cut = tol * c.omega_total;
    match (a > cut, b > cut) {
        (true, true) => Configuration::Ctl,
        (false, true) => Configuration::Lambda,
        (true, false) => Configuration::NType,
        (false, false) => Configuration::Degenerate,
    }
}

/// Decay rates, density parameter and couplings of the intracavity medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    pub gamma_b: f64,
    pub gamma_e: f64,
    pub eta: f64,
    pub couplings: EffectiveCouplings,
}

impl MediumParams {
    pub fn new(gamma_b: f64, gamma_e: f64, eta: f64, couplings: EffectiveCouplings) -> Result<Self> {
        let m = Self { gamma_b, gamma_e, eta, couplings };
        m.validate()?;
        Ok(m)
    }

    /// γb = γe = 1 (units of γ).
    pub fn with_unit_decay(eta: f64, couplings: EffectiveCouplings) -> Result<Self> {
        Self::new(1.0, 1.0, eta, couplings)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_b.is_finite() && self.gamma_b > 0.0) {
            return Err(Error::Validation(format!("gamma_b must be > 0, got {}", self.gamma_b)));
        }
        if !(self.gamma_e.is_finite() && self.gamma_e > 0.0) {
            return Err(Error::Validation(format!("gamma_e must be > 0, got {}", self.gamma_e)));
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::Validation("eta must be ≥ 0".into()));
        }
        Ok(())
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(self.gamma_b, self.gamma_e, eta, self.couplings)
    }

    pub fn configuration(&self) -> Configuration {
        classify(&self.couplings, DEFAULT_CLASSIFY_TOL)
    }
}

/// Steady-state `ρ_ba / Ω_p` at probe detuning `delta_p`.
///
/// The single removable singularity at Δp = 0 (β = 0 or Ω = 0) is replaced
/// by its closed-form limit.
pub fn coherence_ratio(delta_p: f64, m: &MediumParams) -> Result<Complex64> {
    let i = Complex64::i();
    let c = &m.couplings;
    let omega_sq = c.omega_total * c.omega_total;
    let beta_sq = c.beta.norm_sqr();
    let dp = Complex64::new(delta_p, 0.0);
    let lb = m.gamma_b / 2.0 - i * delta_p;
    let le = m.gamma_e / 2.0 - i * delta_p;

    let num = dp * (-omega_sq + i * dp * le);
    let den = i * dp * le * c.zeta + i * omega_sq * dp * lb + lb * le * dp * dp - omega_sq * beta_sq;

    if den.norm() == 0.0 {
        if delta_p == 0.0 {
            return Ok(resonant_limit(m));
        }
        return Err(Error::SingularDenominator { delta_p });
    }
    Ok(num / den)
}

/// Limit of the coherence ratio as Δp → 0 when the denominator vanishes there.
fn resonant_limit(m: &MediumParams) -> Complex64 {
    let c = &m.couplings;
    let omega_sq = c.omega_total * c.omega_total;
    if omega_sq > 0.0 {
        // β = 0: i|Ω|² / ((γe/2)|α|² + (γb/2)|Ω|²)
        let den = 0.5 * m.gamma_e * c.alpha.norm_sqr() + 0.5 * m.gamma_b * omega_sq;
        return Complex64::new(0.0, omega_sq / den);
    }
    if c.zeta > 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        // bare two-level transition
        Complex64::new(0.0, 2.0 / m.gamma_b)
    }
}

/// `χ = η ρ_ba/Ω_p`; `re` is dispersion, `im` is absorption.
pub fn susceptibility(delta_p: f64, m: &MediumParams) -> Result<Complex64> {
    Ok(coherence_ratio(delta_p, m)? * m.eta)
}

/// `ε2 = 1 + χ`.
pub fn permittivity(delta_p: f64, m: &MediumParams) -> Result<Complex64> {
    Ok(susceptibility(delta_p, m)? + 1.0)
}

/// `n = √(1 + χ)` on the branch with `Im n ≥ 0`.
pub fn refractive_index(delta_p: f64, m: &MediumParams) -> Result<Complex64> {
    let n = permittivity(delta_p, m)?.sqrt();
    Ok(if n.im < 0.0 { -n } else { n })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::presets;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn lambda_preset_couplings() {
        let c = effective_couplings(&presets::lambda_fields()).unwrap();
        assert!(c.alpha.norm() < 1e-15);
        assert!(close(c.beta.re, -std::f64::consts::FRAC_1_SQRT_2, 1e-8));
        assert!(c.beta.im.abs() < 1e-15);
        assert!(close(c.omega_total, 0.989_949_49, 1e-8));
    }

    #[test]
    fn n_type_preset_couplings() {
        let c = effective_couplings(&presets::n_type_fields()).unwrap();
        assert_eq!(c.beta.norm(), 0.0);
        assert!(close(c.alpha.re, std::f64::consts::FRAC_1_SQRT_2, 1e-8));
    }

    #[test]
    fn ctl_preset_couplings() {
        let c = effective_couplings(&presets::ctl_fields()).unwrap();
        let omega = (6.25f64 + 0.81).sqrt();
        assert!(close(c.omega_total, 2.657_066_05, 1e-8));
        assert!(close(c.alpha.re, 6.45 / omega, 1e-12));
        assert!(close(c.alpha.re, 2.427_489_52, 1e-8));
        assert!(close(c.beta.re, -2.314_583_03, 1e-8));
        assert_eq!(classify(&c, DEFAULT_CLASSIFY_TOL), Configuration::Ctl);
    }

    #[test]
    fn classify_examples() {
        let z = Complex64::new(0.0, 0.0);
        let l = EffectiveCouplings::direct(z, Complex64::new(-0.707, 0.0), 0.98995).unwrap();
        assert_eq!(classify(&l, 1e-9), Configuration::Lambda);
        let n = EffectiveCouplings::direct(Complex64::new(0.707, 0.0), z, 0.98995).unwrap();
        assert_eq!(classify(&n, 1e-9), Configuration::NType);
        let d = EffectiveCouplings::direct(z, z, 1.0).unwrap();
        assert_eq!(classify(&d, 1e-9), Configuration::Degenerate);
        let nat = EffectiveCouplings::natural_lambda(ControlField::new(1.0, 0.3).unwrap());
        assert_eq!(classify(&nat, 1e-6), Configuration::Lambda);
    }

    #[test]
    fn degenerate_bright_state() {
        let cf = ControlFieldSet::from_polar([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]).unwrap();
        assert_eq!(effective_couplings(&cf), Err(Error::DegenerateBrightState));
        let none = ControlFieldSet::from_polar([(0.0, 0.0); 4]).unwrap();
        assert_eq!(effective_couplings(&none).unwrap().zeta, 0.0);
    }

    #[test]
    fn relative_phase_is_derived() {
        let cf = ControlFieldSet::from_polar([(1.0, PI), (1.0, 0.2), (1.0, 0.5), (1.0, 0.1)]).unwrap();
        assert!(close(cf.relative_phase(), (PI - 0.2) - (0.5 - 0.1), 1e-15));
    }

    #[test]
    fn invalid_field_rejected() {
        assert!(ControlField::new(-1.0, 0.0).is_err());
        assert!(ControlField::new(f64::NAN, 0.0).is_err());
        assert!(ControlField::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn medium_validation() {
        let c = effective_couplings(&presets::ctl_fields()).unwrap();
        assert!(MediumParams::new(0.0, 1.0, 0.1, c).is_err());
        assert!(MediumParams::new(1.0, -1.0, 0.1, c).is_err());
        let err = MediumParams::new(1.0, 1.0, -0.1, c).unwrap_err();
        assert_eq!(err, Error::Validation("eta must be ≥ 0".into()));
    }

    #[test]
    fn resonance_values() {
        let lam = presets::lambda_medium(0.1);
        assert_eq!(coherence_ratio(0.0, &lam).unwrap().norm(), 0.0);
        let ctl = presets::ctl_medium(0.1);
        assert_eq!(susceptibility(0.0, &ctl).unwrap().norm(), 0.0);
        let n = presets::n_type_medium(0.1);
        let r = coherence_ratio(0.0, &n).unwrap();
        assert_eq!(r.re, 0.0);
        assert!(close(r.im, 0.98 / 0.74, 1e-12));
        let chi = susceptibility(0.0, &n).unwrap();
        assert!(close(chi.im, 0.132_432_432, 1e-9));
    }

    #[test]
    fn n_type_limit_is_continuous() {
        let n = presets::n_type_medium(0.1);
        let at0 = susceptibility(0.0, &n).unwrap();
        for dp in [1e-6, -1e-6] {
            let near = susceptibility(dp, &n).unwrap();
            assert!((near - at0).norm() < 1e-4 * at0.norm());
        }
    }

    #[test]
    fn natural_lambda_limit() {
        let c = EffectiveCouplings::natural_lambda(ControlField::new(1.0, 0.0).unwrap());
        let m = MediumParams::with_unit_decay(0.1, c).unwrap();
        assert_eq!(susceptibility(0.0, &m).unwrap().norm(), 0.0);
        // three-level Λ: iΔ / (i|Ω1|² + (γb/2 − iΔ)Δ)
        let dp = 0.3;
        let i = Complex64::i();
        let expect = i * dp / (i * 1.0 + (0.5 - i * dp) * dp);
        assert!((coherence_ratio(dp, &m).unwrap() - expect).norm() < 1e-12);
    }

    #[test]
    fn two_level_limit() {
        let z = Complex64::new(0.0, 0.0);
        let m = MediumParams::with_unit_decay(1.0, EffectiveCouplings::direct(z, z, 0.0).unwrap()).unwrap();
        let at0 = coherence_ratio(0.0, &m).unwrap();
        assert!((at0 - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        let near = coherence_ratio(1e-7, &m).unwrap();
        assert!((near - at0).norm() < 1e-6);
    }

    #[test]
    fn far_detuned_decay() {
        for m in [presets::ctl_medium(0.1), presets::lambda_medium(0.1), presets::n_type_medium(0.1)] {
            for dp in [1e3, -1e3] {
                assert!(coherence_ratio(dp, &m).unwrap().norm() < 2e-3);
            }
            let mut prev = f64::INFINITY;
            for k in 0..20 {
                let dp = 1e3 * (1.0 + k as f64);
                let v = susceptibility(dp, &m).unwrap().norm();
                assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn permittivity_and_index() {
        let n = presets::n_type_medium(0.1);
        let eps = permittivity(0.0, &n).unwrap();
        assert_eq!(eps.re, 1.0);
        assert!(close(eps.im, 0.132_432_432, 1e-9));
        let idx = refractive_index(0.0, &n).unwrap();
        assert!(idx.im >= 0.0);
        assert!((idx * idx - eps).norm() < 1e-14);
        assert_eq!(permittivity(0.0, &presets::ctl_medium(0.1)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn passivity_on_figure_presets() {
        for m in [presets::ctl_medium(0.1), presets::lambda_medium(0.1), presets::n_type_medium(0.1)] {
            for k in 0..=1200 {
                let dp = -6.0 + 0.01 * k as f64;
                assert!(susceptibility(dp, &m).unwrap().im >= -1e-12, "dp={dp}");
            }
        }
    }
}
