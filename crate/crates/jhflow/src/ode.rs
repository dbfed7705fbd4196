//! Classical fourth-order Runge-Kutta stepping for small fixed-size systems.

/// One RK4 step of y' = f(t, y) with step h.
pub(crate) fn rk4_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &add_scaled(y, &k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &add_scaled(y, &k2, 0.5 * h));
    let k4 = f(t + h, &add_scaled(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn add_scaled<const N: usize>(y: &[f64; N], k: &[f64; N], s: f64) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += s * k[i];
    }
    out
}
