//! Parameter sets of the three figure regimes.
//!
//! All use γb = γe = γ. The Λ set reaches φ = π through φ1 = π.

use std::f64::consts::PI;

use crate::atomic_medium::{effective_couplings, ControlFieldSet, EffectiveCouplings, MediumParams};

/// |Ω1| = 1.5, |Ω2| = 3, |Ω3| = 2.5, |Ω4| = 0.9, φ = 0.
pub fn ctl_fields() -> ControlFieldSet {
    ControlFieldSet::from_polar([(1.5, 0.0), (3.0, 0.0), (2.5, 0.0), (0.9, 0.0)]).expect("valid preset")
}

/// |Ω1| = |Ω2| = 0.5, |Ω3| = |Ω4| = 0.7, φ = π (α = 0).
pub fn lambda_fields() -> ControlFieldSet {
    ControlFieldSet::from_polar([(0.5, PI), (0.5, 0.0), (0.7, 0.0), (0.7, 0.0)]).expect("valid preset")
}

/// |Ω1| = |Ω2| = 0.5, |Ω3| = |Ω4| = 0.7, φ = 0 (β = 0).
pub fn n_type_fields() -> ControlFieldSet {
    symmetric_fields(0.5, 0.7)
}

/// |Ω1| = |Ω2| = `outer`, |Ω3| = |Ω4| = `inner`, all phases zero.
pub fn symmetric_fields(outer: f64, inner: f64) -> ControlFieldSet {
    ControlFieldSet::from_polar([(outer, 0.0), (outer, 0.0), (inner, 0.0), (inner, 0.0)])
        .expect("amplitudes must be finite and non-negative")
}

pub fn medium(fields: &ControlFieldSet, eta: f64) -> MediumParams {
    medium_from_couplings(effective_couplings(fields).expect("preset fields have Ω > 0"), eta)
}

/// Unit decay rates (γb = γe = 1) around the given couplings.
pub fn medium_from_couplings(couplings: EffectiveCouplings, eta: f64) -> MediumParams {
    MediumParams::with_unit_decay(eta, couplings).expect("eta must be finite and non-negative")
}

pub fn ctl_medium(eta: f64) -> MediumParams {
    medium(&ctl_fields(), eta)
}

pub fn lambda_medium(eta: f64) -> MediumParams {
    medium(&lambda_fields(), eta)
}

pub fn n_type_medium(eta: f64) -> MediumParams {
    medium(&n_type_fields(), eta)
}
