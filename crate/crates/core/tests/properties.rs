use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use spinhall::atomic_medium::{effective_couplings, susceptibility, ControlField, ControlFieldSet};
use spinhall::beam_shifts::BeamParams;
use spinhall::multilayer_optics::{reflection_coefficients, LayerStack, DEFAULT_WAVELENGTH};
use spinhall::presets;
use spinhall::sweep_engine::{sweep, AxisRange, Scenario, SweepGrid};

fn fields() -> impl Strategy<Value = [(f64, f64); 4]> {
    prop::array::uniform4((0.0..4.0f64, 0.0..2.0 * PI))
}

fn scenario(eta: f64, fields: &ControlFieldSet, d: f64) -> Option<Scenario> {
    let c = effective_couplings(fields).ok()?;
    let stack = LayerStack { thickness: d, ..LayerStack::glass_cell(Complex64::new(1.0, 0.0)) };
    Some(Scenario::new(presets::medium_from_couplings(c, eta), stack, BeamParams::standard(DEFAULT_WAVELENGTH, &stack)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn zeta_identity_with_phase_cross_term(f in fields()) {
        let set = ControlFieldSet::from_polar(f).unwrap();
        let Ok(c) = effective_couplings(&set) else { return Ok(()) };
        let o = set.fields().map(|x| x.rabi());
        let a = f.map(|x| x.0 * x.0);
        let rhs = (a[0] + a[1]) * (a[2] + a[3]) - 4.0 * (o[0] * o[1].conj()).im * (o[2] * o[3].conj()).im;
        let lhs = c.zeta * c.omega_total * c.omega_total;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (a[0] + a[1]) * (a[2] + a[3]));
        prop_assert!((c.zeta - c.alpha.norm_sqr() - c.beta.norm_sqr()).abs() <= 1e-15 * c.zeta.max(1.0));
    }

    #[test]
    fn real_fields_satisfy_the_lagrange_identity(a in prop::array::uniform4(0.0..4.0f64), flip in 0usize..4) {
        let mut pairs = a.map(|x| (x, 0.0));
        pairs[flip].1 = PI;
        let Ok(c) = effective_couplings(&ControlFieldSet::from_polar(pairs).unwrap()) else { return Ok(()) };
        let rhs = (a[0] * a[0] + a[1] * a[1]) * (a[2] * a[2] + a[3] * a[3]);
        prop_assert!((c.zeta * c.omega_total * c.omega_total - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn susceptibility_ignores_a_common_phase(f in fields(), offset in 0.0..2.0 * PI, dp in -6.0..6.0f64, eta in 0.0..0.5f64) {
        let set = ControlFieldSet::from_polar(f).unwrap();
        let Some(a) = scenario(eta, &set, 0.4e-6) else { return Ok(()) };
        let b = scenario(eta, &set.with_common_phase_offset(offset).unwrap(), 0.4e-6).unwrap();
        let (Ok(x), Ok(y)) = (susceptibility(dp, &a.medium), susceptibility(dp, &b.medium)) else { return Ok(()) };
        prop_assert!((x - y).norm() <= 1e-10 * x.norm().max(1e-12));
    }

    #[test]
    fn phases_wrap_into_one_turn(amp in 0.0..10.0f64, phase in -50.0..50.0f64) {
        let f = ControlField::new(amp, phase).unwrap();
        prop_assert!((0.0..2.0 * PI).contains(&f.phase()));
        prop_assert!((f.rabi() - Complex64::from_polar(amp, phase)).norm() <= 1e-12 * amp.max(1.0));
    }

    #[test]
    fn lossless_stacks_never_amplify(e2 in 0.5..6.0f64, e3 in 1.0..6.0f64, d in 0.0..3e-6f64, deg in 0.1..89.9f64) {
        let stack = LayerStack::new(Complex64::new(2.25, 0.0), Complex64::new(e2, 0.0), Complex64::new(e3, 0.0), d).unwrap();
        if let Ok((rp, rs)) = reflection_coefficients(deg.to_radians(), DEFAULT_WAVELENGTH, &stack) {
            prop_assert!(rp.norm() <= 1.0 + 1e-12 && rs.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn absorbing_layers_never_amplify(e2 in 0.5..3.0f64, loss in 0.0..0.5f64, d in 0.0..3e-6f64, deg in 0.1..89.9f64) {
        let stack = LayerStack { thickness: d, ..LayerStack::glass_cell(Complex64::new(e2, loss)) };
        if let Ok((rp, rs)) = reflection_coefficients(deg.to_radians(), DEFAULT_WAVELENGTH, &stack) {
            prop_assert!(rp.norm() <= 1.0 + 1e-12 && rs.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn zero_thickness_is_a_single_interface(e2 in 0.5..4.0f64, loss in 0.0..0.3f64, e3 in 1.0..4.0f64, deg in 1.0..89.0f64) {
        let glass = Complex64::new(2.25, 0.0);
        let e3 = Complex64::new(e3, 0.0);
        let three = LayerStack::new(glass, Complex64::new(e2, loss), e3, 0.0).unwrap();
        let two = LayerStack::new(glass, e3, e3, 0.0).unwrap();
        let theta = deg.to_radians();
        if let (Ok(a), Ok(b)) = (reflection_coefficients(theta, DEFAULT_WAVELENGTH, &three), reflection_coefficients(theta, DEFAULT_WAVELENGTH, &two)) {
            prop_assert!((a.0 - b.0).norm() <= 1e-9 && (a.1 - b.1).norm() <= 1e-9, "{a:?} {b:?}");
        }
    }

    #[test]
    fn shifts_are_bounded_by_half_the_waist(f in fields(), deg in 0.5..89.5f64, dp in -6.0..6.0f64, eta in 0.0..0.3f64, d in 0.0..2e-6f64) {
        let Some(s) = scenario(eta, &ControlFieldSet::from_polar(f).unwrap(), d) else { return Ok(()) };
        if let Ok(r) = s.shifts(deg.to_radians(), dp) {
            let half = s.beam.w0 / 2.0;
            prop_assert!(r.delta_plus.abs() <= half * (1.0 + 1e-12));
            prop_assert!((r.delta_plus + r.delta_minus).abs() == 0.0);
        }
    }

    #[test]
    fn shifts_in_wavelengths_are_scale_free(scale in 0.5..2.0f64, deg in 30.0..38.0f64, dp in -3.0..3.0f64) {
        let base = scaled_ctl(1.0);
        let scaled = scaled_ctl(scale);
        let (Ok(a), Ok(b)) = (base.delta_plus_in_lambda(deg, dp), scaled.delta_plus_in_lambda(deg, dp)) else { return Ok(()) };
        prop_assert!((a - b).abs() <= 1e-6 * a.abs().max(1e-3), "{a} vs {b}");
    }
}

/// CTL scenario with wavelength, thickness and waist all scaled together.
fn scaled_ctl(scale: f64) -> Scenario {
    let stack = LayerStack { thickness: 0.4e-6 * scale, ..LayerStack::glass_cell(Complex64::new(1.0, 0.0)) };
    let lambda = DEFAULT_WAVELENGTH * scale;
    Scenario::new(presets::ctl_medium(0.1), stack, BeamParams::standard(lambda, &stack))
}

#[test]
fn sweeps_are_identical_for_any_thread_count() {
    let grid = SweepGrid {
        theta_deg: AxisRange::new(32.0, 36.0, 41).unwrap(),
        detuning: AxisRange::new(-3.0, 3.0, 31).unwrap(),
        eta_list: Some(vec![0.01, 0.1]),
        amplitude_list: None,
    };
    let s = scaled_ctl(1.0);
    let run = |n: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(|| sweep(&grid, &s).unwrap())
    };
    let one = run(1);
    assert_eq!(one.rows.len(), grid.point_count());
    for n in [2, 3, 8] {
        assert_eq!(run(n), one);
    }
}
