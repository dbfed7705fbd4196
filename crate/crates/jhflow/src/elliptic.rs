//! Elliptic integrals, the Jacobi amplitude, and the Weierstrass ℘ function
//! with invariants (0, g3), for real arguments.
//!
//! These are exactly the special functions the closed-form solution families
//! need: F(φ, k) and K(k), am(m, k) = F⁻¹(·, k) together with its derivative
//! dn, and ℘(τ; 0, g3) with its derivative on the real line.

use crate::error::{Error, Result};

/// Largest modulus accepted before K(k) is considered divergent.
const MODULUS_MAX: f64 = 1.0 - 1e-12;

/// Real half-period of ℘(·; 0, 1), i.e. Γ(1/3)³/(4π).
///
/// Cross-checked in the tests against quadrature of ∫ dt/√(4t³ − 1).
const EQUIANHARMONIC_HALF_PERIOD: f64 = 1.529_954_037_057_193;

/// How close to a real lattice point of ℘ an argument may get.
pub const POLE_PROXIMITY: f64 = 1e-10;

/// Elliptic modulus k with 0 ≤ k < 1.
///
/// k = 1 (and anything within 1e-12 of it) is rejected rather than clamped:
/// a modulus that close to 1 signals invalid upstream parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || !(0.0..=MODULUS_MAX).contains(&k) {
            return Err(Error::domain(format!(
                "modulus k must satisfy 0 <= k <= 1 - 1e-12, got {k}"
            )));
        }
        Ok(Modulus(k))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// k², the parameter m in the scipy/Mathematica convention.
    pub fn m(self) -> f64 {
        self.0 * self.0
    }
}

/// Invariants (g2, g3) of the Weierstrass ℘ function. Only g2 = 0 is
/// supported; that is the only lattice the solution families use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassInvariants {
    g2: f64,
    g3: f64,
}

impl WeierstrassInvariants {
    pub fn new(g2: f64, g3: f64) -> Result<Self> {
        if g2 != 0.0 {
            return Err(Error::domain(format!("only g2 = 0 is supported, got {g2}")));
        }
        if !g3.is_finite() {
            return Err(Error::domain("g3 must be finite"));
        }
        Ok(WeierstrassInvariants { g2, g3 })
    }

    pub fn with_g3(g3: f64) -> Result<Self> {
        Self::new(0.0, g3)
    }

    pub fn g2(self) -> f64 {
        self.g2
    }

    pub fn g3(self) -> f64 {
        self.g3
    }

    /// Real half-period ω of ℘(·; 0, g3): the poles on the real line sit at
    /// 2ωℤ. Returns `None` for g3 = 0, whose only real pole is τ = 0.
    ///
    /// For g3 > 0 the lattice is the equianharmonic one scaled by g3^(-1/6);
    /// for g3 < 0 it is that lattice rotated by 90°, whose real points are
    /// √3 times as far apart.
    pub fn real_half_period(self) -> Option<f64> {
        if self.g3 == 0.0 {
            None
        } else if self.g3 > 0.0 {
            Some(EQUIANHARMONIC_HALF_PERIOD * self.g3.powf(-1.0 / 6.0))
        } else {
            Some(3.0_f64.sqrt() * EQUIANHARMONIC_HALF_PERIOD * (-self.g3).powf(-1.0 / 6.0))
        }
    }
}

/// Carlson symmetric integral R_F(x, y, z).
///
/// ```text
///                   ∞
///                1 ⌠               dt
/// R_F(x,y,z)  =  ─ │  ─────────────────────────────
///                2 ⌡  √(t + x) √(t + y) √(t + z)
///                 0
/// ```
///
/// Duplication iterated until the relative spread of the arguments is below
/// 1e-3, which puts the fifth-order tail expansion well under 1e-15.
fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    const ERRTOL: f64 = 1e-3;
    const C1: f64 = 1.0 / 24.0;
    const C2: f64 = 0.1;
    const C3: f64 = 3.0 / 44.0;
    const C4: f64 = 1.0 / 14.0;

    let tiny = 5.0 * f64::MIN_POSITIVE;
    if x.min(y).min(z) < 0.0 || (x + y).min(x + z).min(y + z) < tiny {
        return Err(Error::domain(
            "carlson_rf: arguments must be non-negative with at most one zero",
        ));
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let mut ave;
    let (mut dx, mut dy, mut dz);
    let mut it = 0;
    loop {
        let sx = xt.sqrt();
        let sy = yt.sqrt();
        let sz = zt.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        ave = (xt + yt + zt) / 3.0;
        dx = (ave - xt) / ave;
        dy = (ave - yt) / ave;
        dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            break;
        }
        it += 1;
        if it > 100 {
            return Err(Error::domain("carlson_rf failed to converge"));
        }
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    Ok((1.0 + (C1 * e2 - C2 - C3 * e3) * e2 + C4 * e3) / ave.sqrt())
}

/// Incomplete elliptic integral of the first kind,
///
/// ```text
///              φ
///             ⌠          dθ
/// F(φ, k)  =  │  ───────────────────
///             ⌡  √(1 - k² sin²(θ))
///            0
/// ```
///
/// extended to all real φ through F(φ + π, k) = F(φ, k) + 2K(k).
pub fn ellint_f(phi: f64, k: Modulus) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::domain(format!("phi must be finite, got {phi}")));
    }
    let n = (phi / std::f64::consts::PI).round();
    let phi_r = phi - n * std::f64::consts::PI;
    let base = if n == 0.0 {
        0.0
    } else {
        2.0 * n * ellint_k(k)?
    };
    Ok(base + ellint_f_principal(phi_r, k)?)
}

/// F(φ, k) on the principal range |φ| ≤ π/2 (plus rounding slack).
fn ellint_f_principal(phi: f64, k: Modulus) -> Result<f64> {
    debug_assert!(phi.abs() <= std::f64::consts::FRAC_PI_2 + 1e-9);
    if phi == 0.0 {
        return Ok(0.0);
    }
    let s = phi.sin();
    let c2 = phi.cos().powi(2);
    let q = (1.0 - s * k.get()) * (1.0 + s * k.get());
    Ok(s * carlson_rf(c2, q, 1.0)?)
}

/// Complete elliptic integral of the first kind K(k) = F(π/2, k).
pub fn ellint_k(k: Modulus) -> Result<f64> {
    let kk = k.get();
    carlson_rf(0.0, (1.0 - kk) * (1.0 + kk), 1.0)
}

/// Jacobi amplitude am(m, k), the inverse of F(·, k): F(am(m, k), k) = m.
///
/// Odd in m, strictly increasing, and quasi-periodic:
/// am(m + 2K(k), k) = am(m, k) + π.
///
/// m is reduced modulo 2K(k), then F is Newton-inverted with dn as the
/// derivative of the amplitude; bisection takes over if Newton strays.
pub fn jacobi_am(m: f64, k: Modulus) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::domain(format!("m must be finite, got {m}")));
    }
    let big_k = ellint_k(k)?;
    let n = (m / (2.0 * big_k)).round();
    let m_r = m - 2.0 * n * big_k;
    Ok(n * std::f64::consts::PI + invert_f_principal(m_r, k, big_k)?)
}

/// Solve F(φ, k) = m for φ ∈ [-π/2, π/2], given m ∈ [-K, K].
fn invert_f_principal(m: f64, k: Modulus, big_k: f64) -> Result<f64> {
    const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;
    if m == 0.0 {
        return Ok(0.0);
    }
    let tol = 1e-15 * m.abs().max(1.0);
    let mut phi = (HALF_PI * m / big_k).clamp(-HALF_PI, HALF_PI);
    for _ in 0..30 {
        let f = ellint_f_principal(phi, k)? - m;
        if f.abs() <= tol {
            return Ok(phi);
        }
        let s = phi.sin();
        let dn = (1.0 - k.m() * s * s).sqrt();
        phi -= f * dn;
        if !(-HALF_PI - 0.05..=HALF_PI + 0.05).contains(&phi) {
            break;
        }
        phi = phi.clamp(-HALF_PI, HALF_PI);
    }
    // Bisection fallback: F(·, k) is strictly increasing on [-π/2, π/2].
    let (mut lo, mut hi) = (-HALF_PI, HALF_PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            return Ok(mid);
        }
        let f = ellint_f_principal(mid, k)? - m;
        if f.abs() <= tol {
            return Ok(mid);
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// dn(m, k) = ∂am(m, k)/∂m = √(1 - k² sin²(am(m, k))).
///
/// Strictly positive, with values in (√(1 - k²), 1], and 2K(k)-periodic.
pub fn jacobi_dn(m: f64, k: Modulus) -> Result<f64> {
    let s = jacobi_am(m, k)?.sin();
    Ok((1.0 - k.m() * s * s).sqrt())
}

/// ℘(τ; 0, g3) for real τ.
///
/// For g3 = 0 this is exactly τ⁻². Otherwise τ is reduced modulo the real
/// period, halved into the convergence region of the Laurent series, and the
/// value is propagated back with the duplication formula. Arguments within
/// 1e-10 of a real lattice point are rejected.
pub fn weierstrass_p(tau: f64, inv: WeierstrassInvariants) -> Result<f64> {
    Ok(weierstrass_pair(tau, inv)?.0)
}

/// ℘'(τ; 0, g3), computed alongside ℘ from the Laurent series of both and
/// point doubling on the curve y² = 4x³ − g3 (it is not derived from
/// √(4℘³ − g3), so the ODE residual remains an independent check).
pub fn weierstrass_p_prime(tau: f64, inv: WeierstrassInvariants) -> Result<f64> {
    Ok(weierstrass_pair(tau, inv)?.1)
}

/// (℘, ℘') at a real argument.
pub fn weierstrass_pair(tau: f64, inv: WeierstrassInvariants) -> Result<(f64, f64)> {
    if !tau.is_finite() {
        return Err(Error::domain(format!("tau must be finite, got {tau}")));
    }
    let g3 = inv.g3();
    if g3 == 0.0 {
        if tau.abs() < POLE_PROXIMITY {
            return Err(Error::PoleProximity {
                tau,
                dist: tau.abs(),
            });
        }
        let t2 = tau * tau;
        return Ok((1.0 / t2, -2.0 / (t2 * tau)));
    }

    // Reduce into [-ω, ω]; ℘ is even and ℘' odd, so work with |τ_r|.
    let omega = inv.real_half_period().expect("g3 != 0 has a real period");
    let period = 2.0 * omega;
    let tau_r = tau - period * (tau / period).round();
    if tau_r.abs() < POLE_PROXIMITY {
        return Err(Error::PoleProximity {
            tau,
            dist: tau_r.abs(),
        });
    }
    let sign = if tau_r < 0.0 { -1.0 } else { 1.0 };
    let t = tau_r.abs();

    // Halve until the Laurent series at z = t/2^j is accurate to full
    // precision (|g3| z^6 <= 1e-2 keeps the 12-coefficient tail < 1e-16).
    let z_small = (1e-2 / g3.abs()).powf(1.0 / 6.0);
    let mut halvings = 0u32;
    let mut z = t;
    while z > z_small {
        z *= 0.5;
        halvings += 1;
    }
    let (mut p, mut dp) = laurent_pair(z, g3);
    for _ in 0..halvings {
        // Point doubling on y² = 4x³ - g3: the tangent slope is 6x²/y.
        let slope = 6.0 * p * p / dp;
        let p2 = 0.25 * slope * slope - 2.0 * p;
        dp = slope * (p - p2) - dp;
        p = p2;
    }
    Ok((p, sign * dp))
}

/// Laurent series of ℘ and ℘' about 0 with g2 = 0:
/// ℘(z) = z⁻² + Σ c_k z^(2k-2), c3 = g3/28,
/// c_k = 3 Σ c_m c_(k-m) / ((2k+1)(k-3)).
fn laurent_pair(z: f64, g3: f64) -> (f64, f64) {
    const TERMS: usize = 14;
    let mut c = [0.0_f64; TERMS + 1];
    c[3] = g3 / 28.0;
    for k in 4..=TERMS {
        let mut s = 0.0;
        for m in 2..=(k - 2) {
            s += c[m] * c[k - m];
        }
        c[k] = 3.0 * s / (((2 * k + 1) * (k - 3)) as f64);
    }
    let z2 = z * z;
    let mut p = 1.0 / z2;
    let mut dp = -2.0 / (z2 * z);
    let mut zpow = z2; // z^(2k-2) for k = 2
    for (k, &ck) in c.iter().enumerate().take(TERMS + 1).skip(2) {
        p += ck * zpow;
        dp += (2 * k - 2) as f64 * ck * zpow / z;
        zpow *= z2;
    }
    (p, dp)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen oracle values keep all digits
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Adaptive Simpson quadrature, used as the independent oracle for the
    /// defining integrals.
    fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
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
            if depth > 50 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
                    + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
            }
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 0)
    }

    fn f_quadrature(phi: f64, k: f64) -> f64 {
        simpson(
            |t| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(),
            0.0,
            phi,
            1e-14,
        )
    }

    #[test]
    fn modulus_rejects_bad_k() {
        assert!(Modulus::new(1.0).is_err());
        assert!(Modulus::new(1.0 - 1e-13).is_err());
        assert!(Modulus::new(-0.1).is_err());
        assert!(Modulus::new(f64::NAN).is_err());
        assert!(Modulus::new(0.0).is_ok());
        assert!(Modulus::new(0.999).is_ok());
    }

    #[test]
    fn ellint_f_zero_modulus_is_identity() {
        let k = Modulus::new(0.0).unwrap();
        assert!((ellint_f(0.7, k).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn ellint_f_at_half_pi_is_k() {
        for kk in [0.1, 0.5, 0.9, 0.99] {
            let k = Modulus::new(kk).unwrap();
            let f = ellint_f(FRAC_PI_2, k).unwrap();
            let big_k = ellint_k(k).unwrap();
            assert!((f - big_k).abs() < 1e-14 * big_k);
        }
    }

    #[test]
    fn ellint_f_against_quadrature_oracle() {
        // Frozen from the quadrature oracle (25-digit arithmetic agrees).
        let k = Modulus::new(0.5).unwrap();
        let v = ellint_f(0.9, k).unwrap();
        assert!((v - 0.9278957051710267).abs() < 1e-13);
        assert!((v - f_quadrature(0.9, 0.5)).abs() < 1e-12);

        for (phi, kk) in [(0.3, 0.2), (1.2, 0.8), (1.5, 0.95), (0.05, 0.6)] {
            let v = ellint_f(phi, Modulus::new(kk).unwrap()).unwrap();
            assert!(
                (v - f_quadrature(phi, kk)).abs() < 1e-12 * v.abs().max(1.0),
                "phi={phi} k={kk}"
            );
        }
    }

    #[test]
    fn ellint_f_is_odd_and_quasi_periodic() {
        let k = Modulus::new(0.7).unwrap();
        let f = ellint_f(0.6, k).unwrap();
        assert!((ellint_f(-0.6, k).unwrap() + f).abs() < 1e-14);
        let big_k = ellint_k(k).unwrap();
        let shifted = ellint_f(0.6 + PI, k).unwrap();
        assert!((shifted - f - 2.0 * big_k).abs() < 1e-13);
    }

    #[test]
    fn ellint_k_small_modulus() {
        let k0 = ellint_k(Modulus::new(0.0).unwrap()).unwrap();
        assert!((k0 - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn ellint_k_frozen_value() {
        // K(sqrt(1/3)) from the quadrature oracle.
        let k = Modulus::new((1.0_f64 / 3.0).sqrt()).unwrap();
        let v = ellint_k(k).unwrap();
        assert!((v - 1.733916885257935).abs() < 1e-13);
        assert!((v - f_quadrature(FRAC_PI_2, k.get())).abs() < 1e-12);
    }

    #[test]
    fn ellint_k_increasing() {
        let mut prev = 0.0;
        for kk in [0.0, 0.2, 0.4, 0.6, 0.8, 0.95, 0.999] {
            let v = ellint_k(Modulus::new(kk).unwrap()).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn jacobi_am_basics() {
        let k = Modulus::new(0.6).unwrap();
        assert_eq!(jacobi_am(0.0, k).unwrap(), 0.0);
        let big_k = ellint_k(k).unwrap();
        assert!((jacobi_am(big_k, k).unwrap() - FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn jacobi_am_roundtrip_and_frozen() {
        let k = Modulus::new(0.6).unwrap();
        let phi = jacobi_am(1.3, k).unwrap();
        assert!((phi - 1.205896211443140).abs() < 1e-12);
        assert!((ellint_f(phi, k).unwrap() - 1.3).abs() < 1e-12);
    }

    #[test]
    fn jacobi_am_monotone() {
        let k = Modulus::new(0.9).unwrap();
        let mut prev = f64::NEG_INFINITY;
        let mut m = -6.0;
        while m <= 6.0 {
            let a = jacobi_am(m, k).unwrap();
            assert!(a > prev, "am must be strictly increasing");
            prev = a;
            m += 0.1;
        }
    }

    #[test]
    fn jacobi_dn_basics_and_frozen() {
        let k0 = Modulus::new(0.0).unwrap();
        assert!((jacobi_dn(1.7, k0).unwrap() - 1.0).abs() < 1e-15);
        let k = Modulus::new(0.8).unwrap();
        assert!((jacobi_dn(0.0, k).unwrap() - 1.0).abs() < 1e-15);
        let k7 = Modulus::new(0.7).unwrap();
        assert!((jacobi_dn(0.8, k7).unwrap() - 0.8750526055321549).abs() < 1e-12);
    }

    #[test]
    fn jacobi_dn_matches_am_derivative() {
        let k = Modulus::new(0.7).unwrap();
        let h = 1e-5;
        let fd = (jacobi_am(0.8 + h, k).unwrap() - jacobi_am(0.8 - h, k).unwrap()) / (2.0 * h);
        assert!((jacobi_dn(0.8, k).unwrap() - fd).abs() < 1e-8);
    }

    #[test]
    fn weierstrass_invariants_reject_nonzero_g2() {
        assert!(WeierstrassInvariants::new(0.1, 1.0).is_err());
        assert!(WeierstrassInvariants::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn half_period_matches_defining_integral() {
        // ω = ∫_0^∞ du/√(u⁴ + 3 e u² + 3 e²), e = cbrt(g3/4), after t = e + u².
        for g3 in [1.0, 4.0, -1.0, -4.0, 0.37] {
            let e = (g3 / 4.0_f64).cbrt();
            let omega = WeierstrassInvariants::with_g3(g3)
                .unwrap()
                .real_half_period()
                .unwrap();
            let integrand = |u: f64| 1.0 / (u.powi(4) + 3.0 * e * u * u + 3.0 * e * e).sqrt();
            // Split the infinite tail with u -> 1/s.
            let head = simpson(integrand, 0.0, 10.0, 1e-13);
            let tail = simpson(
                |s| {
                    let u = 1.0 / s;
                    integrand(u) * u * u
                },
                1e-6,
                0.1,
                1e-13,
            ) + 1e-6; // ∫_10^1e6 ≈ tail piece, remainder ∫_1e6^∞ u^-2 du = 1e-6
            let quad = head + tail;
            assert!(
                (omega - quad).abs() < 1e-5,
                "g3={g3}: omega={omega} quad={quad}"
            );
        }
    }

    #[test]
    fn weierstrass_degenerate_is_exact_inverse_square() {
        let inv = WeierstrassInvariants::with_g3(0.0).unwrap();
        assert_eq!(weierstrass_p(2.0, inv).unwrap(), 0.25);
        assert_eq!(weierstrass_p(0.5, inv).unwrap(), 4.0);
        assert_eq!(weierstrass_p_prime(2.0, inv).unwrap(), -0.25);
        assert_eq!(weierstrass_p_prime(1.0, inv).unwrap(), -2.0);
        let mut tau = 0.1;
        while tau <= 10.0 {
            assert_eq!(weierstrass_p(tau, inv).unwrap(), 1.0 / (tau * tau));
            tau += 0.1;
        }
    }

    #[test]
    fn weierstrass_frozen_value() {
        let inv = WeierstrassInvariants::with_g3(4.0).unwrap();
        let p = weierstrass_p(1.1, inv).unwrap();
        assert!((p - 1.0397301100624710).abs() < 1e-11);
        let dp = weierstrass_p_prime(1.1, inv).unwrap();
        assert!((dp - (-0.7042399828855257)).abs() < 1e-10);
    }

    #[test]
    fn weierstrass_ode_residual() {
        for g3 in [4.0, 1.0, -2.5, 17.0, -0.03] {
            let inv = WeierstrassInvariants::with_g3(g3).unwrap();
            let omega = inv.real_half_period().unwrap();
            for i in 1..40 {
                let tau = 2.0 * omega * i as f64 / 41.0;
                if (tau - omega).abs() < 1e-3 || tau < 0.05 * omega {
                    continue;
                }
                let (p, dp) = weierstrass_pair(tau, inv).unwrap();
                let resid = (dp * dp - 4.0 * p * p * p + g3).abs();
                assert!(
                    resid < 1e-9 * (1.0 + p.abs().powi(3)),
                    "g3={g3} tau={tau}: resid={resid:e}"
                );
            }
        }
    }

    #[test]
    fn weierstrass_p_prime_matches_finite_difference() {
        let inv = WeierstrassInvariants::with_g3(4.0).unwrap();
        let h = 1e-6;
        for tau in [0.6, 1.1, 1.9, 3.1, -0.8] {
            let fd = (weierstrass_p(tau + h, inv).unwrap() - weierstrass_p(tau - h, inv).unwrap())
                / (2.0 * h);
            let dp = weierstrass_p_prime(tau, inv).unwrap();
            assert!((dp - fd).abs() < 1e-6 * (1.0 + dp.abs()), "tau={tau}");
        }
    }

    #[test]
    fn weierstrass_periodicity_and_evenness() {
        let inv = WeierstrassInvariants::with_g3(-3.0).unwrap();
        let period = 2.0 * inv.real_half_period().unwrap();
        let p0 = weierstrass_p(0.7, inv).unwrap();
        assert!((weierstrass_p(0.7 + period, inv).unwrap() - p0).abs() < 1e-10 * p0.abs());
        assert!((weierstrass_p(-0.7, inv).unwrap() - p0).abs() < 1e-12 * p0.abs());
        let dp0 = weierstrass_p_prime(0.7, inv).unwrap();
        assert!((weierstrass_p_prime(-0.7, inv).unwrap() + dp0).abs() < 1e-12 * dp0.abs());
    }

    #[test]
    fn weierstrass_pole_rejection() {
        let inv = WeierstrassInvariants::with_g3(4.0).unwrap();
        let period = 2.0 * inv.real_half_period().unwrap();
        assert!(matches!(
            weierstrass_p(period + 1e-12, inv),
            Err(Error::PoleProximity { .. })
        ));
        assert!(matches!(
            weierstrass_p(1e-11, inv),
            Err(Error::PoleProximity { .. })
        ));
        let inv0 = WeierstrassInvariants::with_g3(0.0).unwrap();
        assert!(weierstrass_p(1e-11, inv0).is_err());
    }
}
