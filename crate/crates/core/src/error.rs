use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("total Rabi frequency of the |e> branch is zero while |Ω1| or |Ω2| is not; supply α, β, Ω directly")]
    DegenerateBrightState,

    #[error("coherence denominator vanishes at Δp = {delta_p}")]
    SingularDenominator { delta_p: f64 },

    #[error("incident angle {theta} rad is outside (0, π/2)")]
    InvalidAngle { theta: f64 },

    #[error("both Fresnel denominators vanish at interface {from}->{to}")]
    DegenerateInterface { from: usize, to: usize },

    #[error("multilayer denominator |1 + r12 r23 e^(2ik2z d)| = {magnitude:e} is below 1e-14")]
    ResonantDenominator { magnitude: f64 },

    #[error("|rp| = {rp_abs:e} is below the Brewster singularity threshold")]
    BrewsterSingularity { rp_abs: f64 },

    #[error("beam-centroid quadrature did not converge (relative change {relative_change:e})")]
    QuadratureNotConverged { relative_change: f64 },

    #[error("no interior minimum of |rp| in [{lo}, {hi}] deg")]
    NoMinimumInWindow { lo: f64, hi: f64 },

    #[error("no sign change of δp+ in the supplied samples")]
    NoSignChange,

    #[error("invalid parameter: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
