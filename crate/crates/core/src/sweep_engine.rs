//! Grid sweeps over incidence angle, detuning, density and control-field
//! amplitudes, plus the extremum and root searches used to read features
//! off the resulting curves.
//!
//! Every grid point is evaluated independently and written to its own slot,
//! so tables are bit-identical for any worker count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atomic_medium::{effective_couplings, permittivity, ControlFieldSet, MediumParams};
use crate::beam_shifts::{spin_shifts, BeamParams, ShiftResult};
use crate::error::{Error, Result};
use crate::multilayer_optics::{reflection_coefficients, stack_reflection, LayerStack, ReflectionPair};
use crate::search::{bisect_sign, golden_section, parabolic_vertex};

/// Tolerance of angle refinements (degrees).
pub const ANGLE_TOLERANCE_DEG: f64 = 1e-4;
/// Tolerance of detuning refinements (γ).
pub const DETUNING_TOLERANCE: f64 = 1e-3;

/// Inclusive, evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let r = Self { min, max, count };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Validation(format!("grid count must be >= 2, got {}", self.count)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::Validation(format!("grid needs min < max, got [{}, {}]", self.min, self.max)));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }
}

/// Medium, stack and beam shared by every point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub medium: MediumParams,
    pub stack: LayerStack,
    pub beam: BeamParams,
    /// Control fields behind `medium`, needed only for amplitude sweeps.
    pub fields: Option<ControlFieldSet>,
}

impl Scenario {
    pub fn new(medium: MediumParams, stack: LayerStack, beam: BeamParams) -> Self {
        Self { medium, stack, beam, fields: None }
    }

    pub fn with_fields(self, fields: ControlFieldSet) -> Result<Self> {
        let couplings = effective_couplings(&fields)?;
        let medium = MediumParams::new(self.medium.gamma_b, self.medium.gamma_e, self.medium.eta, couplings)?;
        Ok(Self { medium, fields: Some(fields), ..self })
    }

    pub fn with_eta(self, eta: f64) -> Result<Self> {
        Ok(Self { medium: self.medium.with_eta(eta)?, ..self })
    }

    /// Stack with the medium layer set to `ε2(Δp)`.
    pub fn stack_at(&self, delta_p: f64) -> Result<LayerStack> {
        Ok(self.stack.with_eps2(permittivity(delta_p, &self.medium)?))
    }

    pub fn reflection(&self, theta_rad: f64, delta_p: f64) -> Result<ReflectionPair> {
        stack_reflection(theta_rad, self.beam.lambda, &self.stack_at(delta_p)?)
    }

    pub fn shifts(&self, theta_rad: f64, delta_p: f64) -> Result<ShiftResult> {
        spin_shifts(theta_rad, &self.reflection(theta_rad, delta_p)?, &self.beam)
    }

    /// δp+ in wavelengths at an angle in degrees.
    pub fn delta_plus_in_lambda(&self, theta_deg: f64, delta_p: f64) -> Result<f64> {
        Ok(self.shifts(theta_deg.to_radians(), delta_p)?.delta_plus / self.beam.lambda)
    }

    pub fn theta_minus(&self, theta_deg: f64, delta_p: f64) -> Result<f64> {
        Ok(self.shifts(theta_deg.to_radians(), delta_p)?.theta_minus)
    }

    /// Full table row for one point.
    pub fn evaluate(&self, theta_deg: f64, delta_p: f64) -> SweepRow {
        let amplitudes = self.fields.map(|f| f.fields().map(|c| c.amplitude()));
        let mut row = SweepRow {
            theta_deg,
            detuning: delta_p,
            eta: self.medium.eta,
            amplitudes,
            chi: None,
            rp_abs: None,
            rs_abs: None,
            ratio: None,
            delta_plus_lambda: None,
            theta_minus: None,
            flag: PointFlag::Ok,
        };
        let eps2 = match permittivity(delta_p, &self.medium) {
            Ok(e) => e,
            Err(e) => {
                row.flag = PointFlag::from_error(&e);
                return row;
            }
        };
        row.chi = Some(eps2 - 1.0);
        let refl = match stack_reflection(theta_deg.to_radians(), self.beam.lambda, &self.stack.with_eps2(eps2)) {
            Ok(r) => r,
            Err(e) => {
                row.flag = PointFlag::from_error(&e);
                return row;
            }
        };
        row.rp_abs = Some(refl.rp.norm());
        row.rs_abs = Some(refl.rs.norm());
        row.ratio = Some(refl.rs.norm() / refl.rp.norm());
        match spin_shifts(theta_deg.to_radians(), &refl, &self.beam) {
            Ok(s) => {
                row.delta_plus_lambda = Some(s.delta_plus / self.beam.lambda);
                row.theta_minus = Some(s.theta_minus);
            }
            Err(e) => {
                row.ratio = None;
                row.flag = PointFlag::from_error(&e);
            }
        }
        row
    }
}

/// Outcome marker for one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFlag {
    Ok,
    BrewsterSingularity,
    SingularDenominator,
    ResonantDenominator,
    NumericalFailure,
}

impl PointFlag {
    fn from_error(e: &Error) -> Self {
        match e {
            Error::BrewsterSingularity { .. } => PointFlag::BrewsterSingularity,
            Error::SingularDenominator { .. } => PointFlag::SingularDenominator,
            Error::ResonantDenominator { .. } => PointFlag::ResonantDenominator,
            _ => PointFlag::NumericalFailure,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PointFlag::Ok => "",
            PointFlag::BrewsterSingularity => "brewster_singularity",
            PointFlag::SingularDenominator => "singular_denominator",
            PointFlag::ResonantDenominator => "resonant_denominator",
            PointFlag::NumericalFailure => "numerical_failure",
        }
    }

    pub fn is_flagged(&self) -> bool {
        *self != PointFlag::Ok
    }
}

/// One evaluated grid point. Values that could not be computed are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta_deg: f64,
    pub detuning: f64,
    pub eta: f64,
    /// |Ω1..Ω4| when the scenario was built from control fields.
    pub amplitudes: Option<[f64; 4]>,
    pub chi: Option<Complex64>,
    pub rp_abs: Option<f64>,
    pub rs_abs: Option<f64>,
    pub ratio: Option<f64>,
    pub delta_plus_lambda: Option<f64>,
    pub theta_minus: Option<f64>,
    pub flag: PointFlag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub theta_deg: AxisRange,
    pub detuning: AxisRange,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_list: Option<Vec<f64>>,
    /// Replacement amplitudes |Ω1..Ω4| (phases kept).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude_list: Option<Vec<[f64; 4]>>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            theta_deg: AxisRange { min: 30.0, max: 38.0, count: 801 },
            detuning: AxisRange { min: -6.0, max: 6.0, count: 601 },
            eta_list: None,
            amplitude_list: None,
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        self.theta_deg.validate()?;
        self.detuning.validate()?;
        if !(self.theta_deg.min > 0.0 && self.theta_deg.max < 90.0) {
            return Err(Error::Validation("theta grid must lie inside (0, 90) degrees".into()));
        }
        if let Some(etas) = &self.eta_list {
            if etas.is_empty() || etas.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
                return Err(Error::Validation("eta_list entries must be ≥ 0".into()));
            }
        }
        if let Some(amps) = &self.amplitude_list {
            if amps.is_empty() || amps.iter().flatten().any(|a| !(a.is_finite() && *a >= 0.0)) {
                return Err(Error::Validation("amplitude_list entries must be ≥ 0".into()));
            }
        }
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        self.theta_deg.count
            * self.detuning.count
            * self.eta_list.as_ref().map_or(1, Vec::len)
            * self.amplitude_list.as_ref().map_or(1, Vec::len)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn flagged_count(&self) -> usize {
        self.rows.iter().filter(|r| r.flag.is_flagged()).count()
    }

    /// Rows at one detuning (exact match), in θ order.
    pub fn slice_at_detuning(&self, detuning: f64) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.detuning == detuning).collect()
    }
}

/// Evaluates every grid point. Order: amplitude set, η, Δp, θ (fastest).
pub fn sweep(grid: &SweepGrid, scenario: &Scenario) -> Result<SweepTable> {
    grid.validate()?;
    let scenarios = expand_scenarios(grid, scenario)?;
    let per_case = grid.theta_deg.count * grid.detuning.count;
    let rows = (0..scenarios.len() * per_case)
        .into_par_iter()
        .map(|idx| {
            let case = &scenarios[idx / per_case];
            let local = idx % per_case;
            let theta = grid.theta_deg.value(local % grid.theta_deg.count);
            let dp = grid.detuning.value(local / grid.theta_deg.count);
            case.evaluate(theta, dp)
        })
        .collect();
    Ok(SweepTable { rows })
}

fn expand_scenarios(grid: &SweepGrid, base: &Scenario) -> Result<Vec<Scenario>> {
    let field_cases: Vec<Scenario> = match &grid.amplitude_list {
        None => vec![*base],
        Some(list) => {
            let fields = base.fields.ok_or_else(|| {
                Error::Validation("amplitude sweeps need control fields, not direct couplings".into())
            })?;
            list.iter()
                .map(|amps| {
                    let mut pairs = [(0.0, 0.0); 4];
                    for (slot, (a, f)) in pairs.iter_mut().zip(amps.iter().zip(fields.fields())) {
                        *slot = (*a, f.phase());
                    }
                    base.with_fields(ControlFieldSet::from_polar(pairs)?)
                })
                .collect::<Result<_>>()?
        }
    };
    let mut out = Vec::new();
    for case in field_cases {
        match &grid.eta_list {
            None => out.push(case),
            Some(etas) => {
                for &eta in etas {
                    out.push(case.with_eta(eta)?);
                }
            }
        }
    }
    Ok(out)
}

/// Coarse points used to bracket minima before golden-section refinement.
const BRACKET_POINTS: usize = 401;

/// Angle (degrees) minimizing |rp| inside `window_deg`.
pub fn find_brewster(window_deg: (f64, f64), stack: &LayerStack, lambda: f64) -> Result<f64> {
    let (lo, hi) = window_deg;
    let no_min = Error::NoMinimumInWindow { lo, hi };
    let axis = AxisRange::new(lo, hi, BRACKET_POINTS)?;
    let rp_abs = |deg: f64| -> f64 {
        reflection_coefficients(deg.to_radians(), lambda, stack).map_or(f64::INFINITY, |(rp, _)| rp.norm())
    };
    let samples: Vec<f64> = axis.values().into_iter().map(rp_abs).collect();
    let (k, &best) = samples.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).ok_or(no_min.clone())?;
    let worst = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if k == 0 || k + 1 == samples.len() || best.is_nan() || best >= worst || !worst.is_finite() {
        return Err(no_min);
    }
    let (theta, _) = golden_section(rp_abs, axis.value(k - 1), axis.value(k + 1), ANGLE_TOLERANCE_DEG * 1e-2);
    Ok(theta)
}

/// Brewster angle of the scenario's stack at detuning `delta_p`.
pub fn find_brewster_at(window_deg: (f64, f64), scenario: &Scenario, delta_p: f64) -> Result<f64> {
    find_brewster(window_deg, &scenario.stack_at(delta_p)?, scenario.beam.lambda)
}

/// A located sign change of δp+(θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignFlip {
    pub theta_deg: f64,
    /// Secant slope of δp+ across the bracketing samples (λ per degree).
    pub slope: f64,
}

/// Refines the sharpest sign change in `samples` (θ in degrees, value) by
/// bisection on `f`. Non-finite samples are skipped; a failed evaluation
/// inside the bracket (the Brewster singularity) is taken as the crossing.
pub fn find_sign_flip<F>(samples: &[(f64, f64)], mut f: F) -> Result<SignFlip>
where
    F: FnMut(f64) -> Option<f64>,
{
    let finite: Vec<(f64, f64)> = samples.iter().copied().filter(|(_, v)| v.is_finite()).collect();
    let bracket = finite
        .windows(2)
        .filter(|w| w[0].1 * w[1].1 < 0.0 || (w[0].1 == 0.0) != (w[1].1 == 0.0))
        .max_by(|a, b| (a[0].1 - a[1].1).abs().total_cmp(&(b[0].1 - b[1].1).abs()))
        .ok_or(Error::NoSignChange)?;
    let (lo, hi) = (bracket[0], bracket[1]);
    let slope = (hi.1 - lo.1) / (hi.0 - lo.0);
    for p in [lo, hi] {
        if p.1 == 0.0 {
            return Ok(SignFlip { theta_deg: p.0, slope });
        }
    }
    let theta = bisect_sign(|x| f(x).unwrap_or(0.0), lo.0, hi.0, ANGLE_TOLERANCE_DEG * 1e-2);
    Ok(SignFlip { theta_deg: theta, slope })
}

/// δp+ (in λ) along a θ axis at fixed detuning; flagged points are NaN.
pub fn shift_curve(scenario: &Scenario, theta_deg: &AxisRange, delta_p: f64) -> Vec<(f64, f64)> {
    theta_deg
        .values()
        .into_par_iter()
        .map(|t| (t, scenario.delta_plus_in_lambda(t, delta_p).unwrap_or(f64::NAN)))
        .collect()
}

/// Sign flip of δp+(θ) for the scenario at `delta_p`.
pub fn find_shift_sign_flip(scenario: &Scenario, theta_deg: &AxisRange, delta_p: f64) -> Result<SignFlip> {
    let samples = shift_curve(scenario, theta_deg, delta_p);
    find_sign_flip(&samples, |t| scenario.delta_plus_in_lambda(t, delta_p).ok())
}

/// Local minima of χ2(Δp), refined by successive parabolic interpolation.
pub fn find_transparency_windows(medium: &MediumParams, detuning: &AxisRange) -> Result<Vec<f64>> {
    detuning.validate()?;
    let absorption =
        |dp: f64| -> f64 { crate::atomic_medium::susceptibility(dp, medium).map_or(f64::NAN, |chi| chi.im) };
    let xs = detuning.values();
    let ys: Vec<f64> = xs.iter().map(|&x| absorption(x)).collect();
    let mut windows = Vec::new();
    for k in 1..xs.len() - 1 {
        if ys[k] < ys[k - 1] && ys[k] <= ys[k + 1] {
            windows.push(refine_minimum(&absorption, (xs[k - 1], ys[k - 1]), (xs[k], ys[k]), (xs[k + 1], ys[k + 1])));
        }
    }
    Ok(windows)
}

fn refine_minimum<F: Fn(f64) -> f64>(f: &F, mut a: (f64, f64), mut b: (f64, f64), mut c: (f64, f64)) -> f64 {
    for _ in 0..200 {
        if (c.0 - a.0) < DETUNING_TOLERANCE {
            break;
        }
        let v = match parabolic_vertex(a, b, c) {
            Some(v) if v > a.0 && v < c.0 && (v - b.0).abs() > 1e-12 => v,
            _ => {
                // golden step into the larger sub-interval
                if b.0 - a.0 > c.0 - b.0 {
                    b.0 - 0.381_966 * (b.0 - a.0)
                } else {
                    b.0 + 0.381_966 * (c.0 - b.0)
                }
            }
        };
        let fv = f(v);
        if fv < b.1 {
            if v < b.0 {
                c = b;
            } else {
                a = b;
            }
            b = (v, fv);
        } else if v < b.0 {
            a = (v, fv);
        } else {
            c = (v, fv);
        }
    }
    b.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftKind {
    /// max over θ of |δp+| (in λ).
    Spatial,
    /// max over θ of Θ−.
    Angular,
}

/// Per-detuning maximum over θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxShiftPoint {
    pub detuning: f64,
    pub theta_deg: f64,
    pub value: f64,
}

/// Grid maximization over `theta_deg`, refined by golden section in the
/// bracketing cells.
pub fn max_shift_vs_detuning(
    kind: ShiftKind,
    detunings: &[f64],
    theta_deg: &AxisRange,
    scenario: &Scenario,
) -> Result<Vec<MaxShiftPoint>> {
    theta_deg.validate()?;
    let thetas = theta_deg.values();
    Ok(detunings
        .par_iter()
        .map(|&dp| {
            let objective = |t: f64| -> f64 {
                let v = match kind {
                    ShiftKind::Spatial => scenario.delta_plus_in_lambda(t, dp).map(f64::abs),
                    ShiftKind::Angular => scenario.theta_minus(t, dp),
                };
                v.unwrap_or(f64::NEG_INFINITY)
            };
            let values: Vec<f64> = thetas.iter().map(|&t| objective(t)).collect();
            let (k, &best) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("count >= 2");
            let lo = thetas[k.saturating_sub(1)];
            let hi = thetas[(k + 1).min(thetas.len() - 1)];
            let (t, v) = golden_section(|t| -objective(t), lo, hi, ANGLE_TOLERANCE_DEG);
            if -v > best {
                MaxShiftPoint { detuning: dp, theta_deg: t, value: -v }
            } else {
                MaxShiftPoint { detuning: dp, theta_deg: thetas[k], value: best }
            }
        })
        .collect())
}

/// δp+ (in λ) versus η at a fixed angle and detuning.
pub fn shift_vs_density(etas: &[f64], theta_deg: f64, delta_p: f64, scenario: &Scenario) -> Result<Vec<(f64, f64)>> {
    etas.iter()
        .map(|&eta| {
            let s = scenario.with_eta(eta)?;
            Ok((eta, s.delta_plus_in_lambda(theta_deg, delta_p)?))
        })
        .collect()
}
