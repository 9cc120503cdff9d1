//! Photonic spin Hall effect of a Gaussian beam reflected from a glass cell
//! filled with a four-level atomic vapor.
//!
//! The pipeline is: control fields → effective couplings → probe
//! susceptibility ([`atomic_medium`]) → three-layer Fresnel coefficients
//! ([`multilayer_optics`]) → spatial and angular spin shifts
//! ([`beam_shifts`]) → parameter scans ([`sweep_engine`]).

pub mod atomic_medium;
pub mod beam_shifts;
pub mod cli;
pub mod error;
pub mod multilayer_optics;
pub mod presets;
pub mod quadrature;
pub mod search;
pub mod sweep_engine;

pub use error::{Error, Result};
