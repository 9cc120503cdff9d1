//! One-dimensional bracketing searches.

/// 1/φ.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f` on `[a, b]` until the bracket is
/// narrower than `tol`. Returns `(x_min, f(x_min))`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Bisection on the sign of `f` over a bracket with `f(lo)·f(hi) < 0`.
/// An exact zero at a midpoint ends the search early.
pub fn bisect_sign<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Vertex of the parabola through three points, if it is a minimum.
pub fn parabolic_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> Option<f64> {
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den == 0.0 {
        return None;
    }
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let second_difference = ((y2 - y1) / (x2 - x1) - (y1 - y0) / (x1 - x0)) / (x2 - x0);
    if second_difference <= 0.0 {
        return None;
    }
    Some(x1 - 0.5 * num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_quadratic_minimum() {
        let (x, fx) = golden_section(|x| (x - 1.234).powi(2) + 3.0, 0.0, 5.0, 1e-9);
        // A flat minimum limits the location to about sqrt(machine epsilon).
        assert!((x - 1.234).abs() < 1e-7);
        assert!((fx - 3.0).abs() < 1e-12);
    }

    #[test]
    fn golden_handles_v_shape() {
        let (x, _) = golden_section(|x: f64| (x - 0.3).abs(), -1.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
    }

    #[test]
    fn bisection_on_sign() {
        let r = bisect_sign(|x| x.powi(3) - 2.0, 0.0, 2.0, 1e-12);
        assert!((r - 2f64.cbrt()).abs() < 1e-11);
        let r = bisect_sign(|x| 1.0 - x, 0.0, 3.0, 1e-12);
        assert!((r - 1.0).abs() < 1e-11);
    }

    #[test]
    fn parabola_vertex() {
        let f = |x: f64| 2.0 * (x - 0.7).powi(2) + 1.0;
        let v = parabolic_vertex((0.0, f(0.0)), (0.5, f(0.5)), (2.0, f(2.0))).unwrap();
        assert!((v - 0.7).abs() < 1e-12);
        let g = |x: f64| -(x * x);
        assert!(parabolic_vertex((-1.0, g(-1.0)), (0.1, g(0.1)), (1.0, g(1.0))).is_none());
    }
}
