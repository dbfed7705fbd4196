//! Adaptive Simpson quadrature with absolute-error control.

/// Integrate `f` over [a, b] to absolute tolerance `tol`.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64 + Copy>(
        f: F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let err = left + right - whole;
        if depth > 48 || err.abs() <= 15.0 * tol {
            left + right + err / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12);
        assert!((v - 0.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = adaptive_simpson(|x| (5.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 0.4).abs() < 1e-10);
    }
}
