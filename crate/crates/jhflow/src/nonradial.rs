//! Non-radial solutions: fields with constant swirl xv - yu = C₀ ≠ 0.
//!
//! Every such field is a rigid "linear" part (the constant-profile solution
//! with coefficients C̃₁, C₀) plus a radial correction H(θ)/r, where H solves
//! the Liénard equation
//!
//! ```text
//! H'' - C₀ H' + H² + 2(C̃₁ + 2) H = 0.
//! ```
//!
//! The equation is integrable exactly when C̃₁ = -2 + 3C₀²/25; then it is a
//! Painlevé-Gambier type-II equation solved by Weierstrass ℘ functions, and
//! for g₃ = 0 by elementary functions. Outside the integrable case only the
//! numerical integrator is available.

use crate::elliptic::{weierstrass_pair, WeierstrassInvariants};
use crate::error::{Error, Result};
use crate::ode::rk4_step;
use crate::FieldSample;

/// Trajectories are aborted once |H| or |H'| exceeds this.
const BLOWUP_LIMIT: f64 = 1e12;

/// Which closed form (if any) the angular profile H uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NonRadialVariant {
    /// H ≡ 0: the field is exactly the constant-profile solution.
    LinearOnly,
    /// Integrable case, H from ℘(·; 0, g₃).
    Weierstrass,
    /// Integrable case with g₃ = 0: elementary angular factor.
    Degenerate,
    /// Arbitrary C̃₁; no closed form, numerical integration only.
    NumericLienard,
}

/// Sign branch of C̃₁ = -2 ± √(4 - C₀² - 2C₁).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// A non-radial solution selection: swirl constant C₀, linear coefficient
/// C̃₁, Weierstrass invariant g₃ and shift C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonRadialSpec {
    c0: f64,
    ctilde1: f64,
    g3: f64,
    c: f64,
    variant: NonRadialVariant,
}

impl NonRadialSpec {
    /// Linear solution from the reduced-ODE constants (C₀, C₁): requires
    /// C₀² ≤ 4 - 2C₁ for the square root in C̃₁ to exist.
    pub fn linear(c0: f64, c1: f64, branch: Branch) -> Result<Self> {
        let ctilde1 = linear_coefficient(c0, c1, branch)?;
        Self::linear_with_coefficient(c0, ctilde1)
    }

    /// Linear solution with C̃₁ given directly (every real C̃₁ arises from
    /// some admissible C₁).
    pub fn linear_with_coefficient(c0: f64, ctilde1: f64) -> Result<Self> {
        check_c0(c0)?;
        if !ctilde1.is_finite() {
            return Err(Error::invalid_spec("Ctilde1 must be finite"));
        }
        Ok(NonRadialSpec {
            c0,
            ctilde1,
            g3: 0.0,
            c: 0.0,
            variant: NonRadialVariant::LinearOnly,
        })
    }

    /// Integrable Weierstrass solution: C̃₁ is pinned to -2 + 3C₀²/25.
    pub fn weierstrass(c0: f64, g3: f64, c: f64) -> Result<Self> {
        check_c0(c0)?;
        if !g3.is_finite() || !c.is_finite() {
            return Err(Error::invalid_spec("g3 and C must be finite"));
        }
        Ok(NonRadialSpec {
            c0,
            ctilde1: integrable_ctilde1(c0),
            g3,
            c,
            variant: NonRadialVariant::Weierstrass,
        })
    }

    /// The g₃ = 0 elementary field.
    pub fn degenerate(c0: f64, c: f64) -> Result<Self> {
        check_c0(c0)?;
        if !c.is_finite() {
            return Err(Error::invalid_spec("C must be finite"));
        }
        Ok(NonRadialSpec {
            c0,
            ctilde1: integrable_ctilde1(c0),
            g3: 0.0,
            c,
            variant: NonRadialVariant::Degenerate,
        })
    }

    /// Generic (typically non-integrable) Liénard profile; only
    /// [`lienard_integrate`] applies to it.
    pub fn numeric(c0: f64, ctilde1: f64) -> Result<Self> {
        check_c0(c0)?;
        if !ctilde1.is_finite() {
            return Err(Error::invalid_spec("Ctilde1 must be finite"));
        }
        Ok(NonRadialSpec {
            c0,
            ctilde1,
            g3: 0.0,
            c: 0.0,
            variant: NonRadialVariant::NumericLienard,
        })
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn ctilde1(&self) -> f64 {
        self.ctilde1
    }

    pub fn g3(&self) -> f64 {
        self.g3
    }

    /// The ℘ shift C.
    pub fn shift(&self) -> f64 {
        self.c
    }

    pub fn variant(&self) -> NonRadialVariant {
        self.variant
    }

    /// Whether C̃₁ satisfies the integrability relation.
    pub fn is_integrable(&self) -> bool {
        (self.ctilde1 - integrable_ctilde1(self.c0)).abs() <= 1e-12 * (1.0 + self.ctilde1.abs())
    }

    /// The ℘ argument τ(θ) = exp(C₀θ/5) + C.
    fn tau(&self, theta: f64) -> f64 {
        (self.c0 * theta / 5.0).exp() + self.c
    }

    /// Maximal pole-free θ-window containing `anchor`.
    ///
    /// The solution is local: the ℘ argument crosses lattice points at
    /// finitely many angles, and the evaluator refuses to cross them. For
    /// the linear and numeric variants the window is the whole line.
    pub fn pole_free_theta_window(&self, anchor: f64) -> Result<(f64, f64)> {
        match self.variant {
            NonRadialVariant::LinearOnly | NonRadialVariant::NumericLienard => {
                Ok((f64::NEG_INFINITY, f64::INFINITY))
            }
            NonRadialVariant::Weierstrass | NonRadialVariant::Degenerate => {
                let tau_a = self.tau(anchor);
                let inv = WeierstrassInvariants::with_g3(self.g3)?;
                // Pole-free τ-interval containing τ(anchor).
                let (tau_lo, tau_hi) = match inv.real_half_period() {
                    Some(omega) => {
                        let period = 2.0 * omega;
                        let j = (tau_a / period).floor();
                        (j * period, (j + 1.0) * period)
                    }
                    None => {
                        if tau_a > 0.0 {
                            (0.0, f64::INFINITY)
                        } else {
                            (f64::NEG_INFINITY, 0.0)
                        }
                    }
                };
                if tau_a <= tau_lo || tau_a >= tau_hi {
                    return Err(Error::PoleProximity {
                        tau: tau_a,
                        dist: 0.0,
                    });
                }
                // Map back through θ = (5/C₀) ln(τ - C), defined for τ > C.
                let theta_of = |tau: f64| -> f64 {
                    if tau - self.c <= 0.0 {
                        if self.c0 > 0.0 {
                            f64::NEG_INFINITY
                        } else {
                            f64::INFINITY
                        }
                    } else if tau.is_infinite() {
                        if self.c0 > 0.0 {
                            f64::INFINITY
                        } else {
                            f64::NEG_INFINITY
                        }
                    } else {
                        5.0 / self.c0 * (tau - self.c).ln()
                    }
                };
                let (a, b) = (theta_of(tau_lo), theta_of(tau_hi));
                Ok(if a <= b { (a, b) } else { (b, a) })
            }
        }
    }
}

fn check_c0(c0: f64) -> Result<()> {
    if !c0.is_finite() || c0 == 0.0 {
        return Err(Error::invalid_spec(format!(
            "non-radial solutions require a finite C0 != 0, got {c0}"
        )));
    }
    Ok(())
}

/// The integrable linear coefficient C̃₁ = -2 + 3C₀²/25.
pub fn integrable_ctilde1(c0: f64) -> f64 {
    -2.0 + 3.0 * c0 * c0 / 25.0
}

/// C̃₁ = -2 ± √(4 - C₀² - 2C₁), defined when C₀² ≤ 4 - 2C₁.
pub fn linear_coefficient(c0: f64, c1: f64, branch: Branch) -> Result<f64> {
    let disc = 4.0 - c0 * c0 - 2.0 * c1;
    if disc < 0.0 {
        return Err(Error::domain(format!(
            "linear solution requires C0^2 <= 4 - 2 C1 (violated by {disc:e})"
        )));
    }
    Ok(match branch {
        Branch::Plus => -2.0 + disc.sqrt(),
        Branch::Minus => -2.0 - disc.sqrt(),
    })
}

/// State of the angular profile: (θ, H, H').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LienardState {
    pub theta: f64,
    pub h: f64,
    pub h_prime: f64,
}

impl LienardState {
    pub fn new(theta: f64, h: f64, h_prime: f64) -> Result<Self> {
        if !(theta.is_finite() && h.is_finite() && h_prime.is_finite()) {
            return Err(Error::domain("Lienard state must be finite"));
        }
        Ok(LienardState { theta, h, h_prime })
    }
}

/// H'' from the Liénard equation: H'' = C₀ H' - H² - 2(C̃₁ + 2) H.
pub fn lienard_rhs(state: &LienardState, c0: f64, ctilde1: f64) -> f64 {
    c0 * state.h_prime - state.h * state.h - 2.0 * (ctilde1 + 2.0) * state.h
}

/// Integrate the Liénard equation with classical RK4 from `init` to
/// `theta_end` (either direction) with step size `step` > 0.
///
/// The returned trajectory starts at `init`; the final point lands exactly
/// on `theta_end`. Errors with [`Error::Blowup`] if |H| or |H'| exceeds 1e12.
pub fn lienard_integrate(
    spec: &NonRadialSpec,
    init: LienardState,
    theta_end: f64,
    step: f64,
) -> Result<Vec<LienardState>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    if !theta_end.is_finite() {
        return Err(Error::domain("theta_end must be finite"));
    }
    let (c0, ctilde1) = (spec.c0, spec.ctilde1);
    let f =
        move |_t: f64, y: &[f64; 2]| [y[1], c0 * y[1] - y[0] * y[0] - 2.0 * (ctilde1 + 2.0) * y[0]];
    let span = theta_end - init.theta;
    let n = (span.abs() / step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    out.push(init);
    let mut y = [init.h, init.h_prime];
    let mut t = init.theta;
    for i in 0..n {
        y = rk4_step(&f, t, &y, h);
        t = init.theta + (i + 1) as f64 * h;
        if y[0].abs() > BLOWUP_LIMIT || y[1].abs() > BLOWUP_LIMIT {
            return Err(Error::Blowup {
                theta: t,
                limit: BLOWUP_LIMIT,
            });
        }
        out.push(LienardState {
            theta: t,
            h: y[0],
            h_prime: y[1],
        });
    }
    Ok(out)
}

/// Estimate the first-integral constant of the integrable equation:
/// C₂ = [(H' - (2C₀/5) H)² + (2/3) H³] · exp(-(6C₀/5) θ).
pub fn first_integral(state: &LienardState, c0: f64) -> f64 {
    let bracket = (state.h_prime - 0.4 * c0 * state.h).powi(2) + 2.0 / 3.0 * state.h.powi(3);
    bracket * (-1.2 * c0 * state.theta).exp()
}

/// The Weierstrass solution of the integrable Liénard equation:
/// H(θ) = -(6C₀²/25) exp(2C₀θ/5) ℘(exp(C₀θ/5) + C; 0, g₃).
pub fn weierstrass_h(theta: f64, c0: f64, g3: f64, c: f64) -> Result<f64> {
    Ok(weierstrass_h_derivatives(theta, c0, g3, c)?.0)
}

/// (H, H', H'') of the Weierstrass solution, via the ℘/℘' chain rule:
///
/// ```text
/// H   = A E² ℘                     A = -6C₀²/25, E = exp(C₀θ/5)
/// H'  = A (C₀/5) E² (2℘ + E℘')
/// H'' = A (C₀/5)² E² (4℘ + 5E℘' + 6E²℘²)     (using ℘'' = 6℘²)
/// ```
pub fn weierstrass_h_derivatives(theta: f64, c0: f64, g3: f64, c: f64) -> Result<(f64, f64, f64)> {
    check_c0(c0)?;
    let inv = WeierstrassInvariants::with_g3(g3)?;
    let e = (c0 * theta / 5.0).exp();
    let (p, dp) = weierstrass_pair(e + c, inv)?;
    let a = -6.0 * c0 * c0 / 25.0;
    let rate = c0 / 5.0;
    let h = a * e * e * p;
    let h1 = a * rate * e * e * (2.0 * p + e * dp);
    let h2 = a * rate * rate * e * e * (4.0 * p + 5.0 * e * dp + 6.0 * e * e * p * p);
    Ok((h, h1, h2))
}

/// The elementary angular factor of the degenerate (g₃ = 0) solution:
/// H(θ) = -(6C₀²/25) / (1 + C exp(-C₀θ/5))².
pub fn degenerate_h(theta: f64, c0: f64, c: f64) -> Result<f64> {
    let denom = 1.0 + c * (-c0 * theta / 5.0).exp();
    if denom.abs() < 1e-12 {
        return Err(Error::domain(format!(
            "degenerate angular factor has a zero denominator at theta = {theta}"
        )));
    }
    Ok(-6.0 * c0 * c0 / 25.0 / (denom * denom))
}

/// Evaluate the non-radial field at (x, y) on the cone x > 0:
/// u = u_L + xH/r², v = v_L + yH/r², p = p_L + 2H/r².
pub fn nonradial_field(spec: &NonRadialSpec, x: f64, y: f64) -> Result<FieldSample> {
    if x <= 0.0 {
        return Err(Error::domain(
            "non-radial evaluation requires x > 0 (cone off the y-axis)",
        ));
    }
    let theta = (y / x).atan();
    let h = match spec.variant {
        NonRadialVariant::LinearOnly => 0.0,
        NonRadialVariant::Weierstrass => weierstrass_h(theta, spec.c0, spec.g3, spec.c)?,
        NonRadialVariant::Degenerate => degenerate_h(theta, spec.c0, spec.c)?,
        NonRadialVariant::NumericLienard => {
            return Err(Error::invalid_spec(
                "no closed-form field for the numeric Lienard variant; \
                 use lienard_integrate",
            ))
        }
    };
    Ok(assemble_nonradial(spec.c0, spec.ctilde1, h, x, y))
}

/// The degenerate field directly from elementary functions (g₃ = 0 case of
/// the general solution, with C̃₁ = -2 + 3C₀²/25).
pub fn degenerate_field(c0: f64, c: f64, x: f64, y: f64) -> Result<FieldSample> {
    check_c0(c0)?;
    if x <= 0.0 {
        return Err(Error::domain(
            "non-radial evaluation requires x > 0 (cone off the y-axis)",
        ));
    }
    let theta = (y / x).atan();
    let h = degenerate_h(theta, c0, c)?;
    Ok(assemble_nonradial(c0, integrable_ctilde1(c0), h, x, y))
}

fn assemble_nonradial(c0: f64, ctilde1: f64, h: f64, x: f64, y: f64) -> FieldSample {
    let r2 = x * x + y * y;
    let q = h / r2;
    FieldSample {
        u: (ctilde1 * x - c0 * y) / r2 + x * q,
        v: (ctilde1 * y + c0 * x) / r2 + y * q,
        p: -(ctilde1 * ctilde1 + c0 * c0) / (2.0 * r2) + 2.0 * q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_coefficient_examples() {
        // C0 -> 0 limit with C1 = 0: -2 + √4 = 0.
        assert_eq!(linear_coefficient(1e-300, 0.0, Branch::Plus).unwrap(), 0.0);
        // Integrable relation: C1 = 2 - C0²/2 - 9C0⁴/1250 gives C̃1 = 1 at C0 = 5.
        let c1 = 2.0 - 12.5 - 9.0 * 625.0 / 1250.0;
        assert!((linear_coefficient(5.0, c1, Branch::Plus).unwrap() - 1.0).abs() < 1e-12);
        assert!(linear_coefficient(5.0, 0.0, Branch::Plus).is_err());
        assert!(
            (linear_coefficient(1.0, 0.0, Branch::Minus).unwrap() - (-2.0 - 3.0_f64.sqrt())).abs()
                < 1e-14
        );
    }

    #[test]
    fn linear_solution_zeroes_reduced_ode() {
        // h_L(z) = -C0 z + C̃1 must satisfy the reduced equation exactly.
        let (c0, c1) = (1.2, 0.3);
        for branch in [Branch::Plus, Branch::Minus] {
            let ct = linear_coefficient(c0, c1, branch).unwrap();
            for i in 0..20 {
                let z = -3.0 + 6.0 * i as f64 / 19.0;
                let h = -c0 * z + ct;
                let hz = -c0;
                let resid = (2.0 * z - c0) * (z * z + 1.0) * hz
                    + h * h
                    + (2.0 * c0 * z + 4.0) * h
                    + 2.0 * c0 * z.powi(3)
                    + 6.0 * c0 * z
                    + 2.0 * c1;
                assert!(resid.abs() < 1e-10, "z={z}: {resid:e}");
            }
        }
    }

    #[test]
    fn lienard_rhs_equilibria() {
        let s = LienardState::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(lienard_rhs(&s, 2.0, 0.5), 0.0);
        let h_eq = -2.0 * (0.5 + 2.0);
        let s = LienardState::new(0.0, h_eq, 0.0).unwrap();
        assert!(lienard_rhs(&s, 2.0, 0.5).abs() < 1e-14);
        let s = LienardState::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(lienard_rhs(&s, 2.0, 0.0), 2.0 - 1.0 - 4.0);
    }

    #[test]
    fn integrate_fixed_point_is_constant() {
        let spec = NonRadialSpec::numeric(2.0, 0.5).unwrap();
        let h_eq = -2.0 * (0.5 + 2.0);
        let init = LienardState::new(0.0, h_eq, 0.0).unwrap();
        let traj = lienard_integrate(&spec, init, 3.0, 1e-2).unwrap();
        for s in &traj {
            assert!((s.h - h_eq).abs() < 1e-10);
            assert!(s.h_prime.abs() < 1e-10);
        }
        assert_eq!(traj.last().unwrap().theta, 3.0);
    }

    #[test]
    fn integrate_matches_weierstrass_closed_form() {
        let (c0, g3, c) = (5.0, 4.0, 0.3);
        let spec = NonRadialSpec::weierstrass(c0, g3, c).unwrap();
        let theta0 = -0.5;
        let (h, h1, _) = weierstrass_h_derivatives(theta0, c0, g3, c).unwrap();
        let init = LienardState::new(theta0, h, h1).unwrap();
        let traj = lienard_integrate(&spec, init, theta0 + 0.5, 1e-4).unwrap();
        for s in traj.iter().step_by(200) {
            let expect = weierstrass_h(s.theta, c0, g3, c).unwrap();
            assert!(
                (s.h - expect).abs() < 1e-6 * (1.0 + expect.abs()),
                "theta={}: rk4={} closed={}",
                s.theta,
                s.h,
                expect
            );
        }
    }

    #[test]
    fn integrate_step_halving_is_fourth_order() {
        let spec = NonRadialSpec::numeric(1.0, 0.2).unwrap();
        let init = LienardState::new(0.0, 0.5, -0.3).unwrap();
        let reference = lienard_integrate(&spec, init, 1.0, 1e-6).unwrap();
        let h_ref = reference.last().unwrap().h;
        let err = |step: f64| {
            let traj = lienard_integrate(&spec, init, 1.0, step).unwrap();
            (traj.last().unwrap().h - h_ref).abs()
        };
        let ratio = err(2e-3) / err(1e-3);
        assert!((ratio - 16.0).abs() < 2.0, "expected ~16, got {ratio}");
    }

    #[test]
    fn integrate_detects_blowup() {
        // Large positive initial data drives H'' ~ -H² to -inf in finite θ.
        let spec = NonRadialSpec::numeric(1.0, 0.0).unwrap();
        let init = LienardState::new(0.0, -1e9, -1e9).unwrap();
        assert!(matches!(
            lienard_integrate(&spec, init, 10.0, 1e-3),
            Err(Error::Blowup { .. })
        ));
    }

    #[test]
    fn first_integral_zero_solution() {
        let s = LienardState::new(1.7, 0.0, 0.0).unwrap();
        assert_eq!(first_integral(&s, 3.0), 0.0);
    }

    #[test]
    fn first_integral_vanishes_for_constant_solution() {
        // H = -6C0²/25 is the C2 = 0 orbit: the bracket cancels identically.
        let c0 = 5.0;
        let h = -6.0 * c0 * c0 / 25.0;
        for theta in [-1.0, 0.0, 2.0] {
            let s = LienardState::new(theta, h, 0.0).unwrap();
            assert!(first_integral(&s, c0).abs() < 1e-9);
        }
    }

    #[test]
    fn first_integral_constant_along_weierstrass_orbit() {
        let (c0, g3, c) = (5.0, 4.0, 0.3);
        let mut values = vec![];
        let mut theta = -1.0;
        while theta <= 0.5 {
            let (h, h1, _) = weierstrass_h_derivatives(theta, c0, g3, c).unwrap();
            let s = LienardState::new(theta, h, h1).unwrap();
            values.push(first_integral(&s, c0));
            theta += 0.05;
        }
        let c2 = values[0];
        // C2 = -36 C0^6 g3 / 15625 = -36 g3 at C0 = 5.
        assert!((c2 - (-36.0 * g3)).abs() < 1e-6 * c2.abs());
        for v in &values {
            assert!((v - c2).abs() < 1e-8 * c2.abs().max(1.0));
        }
    }

    #[test]
    fn weierstrass_h_degenerate_constant() {
        // g3 = 0, C = 0: the exponentials cancel and H = -6C0²/25.
        for c0 in [5.0, -3.0, 0.7] {
            for theta in [-0.6, 0.0, 1.1] {
                let h = weierstrass_h(theta, c0, 0.0, 0.0).unwrap();
                assert!((h - (-6.0 * c0 * c0 / 25.0)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn weierstrass_h_matches_degenerate_form() {
        let (c0, c) = (5.0, 0.4);
        for theta in [-0.4, 0.0, 0.3, 0.9] {
            let a = weierstrass_h(theta, c0, 0.0, c).unwrap();
            let b = degenerate_h(theta, c0, c).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn weierstrass_h_frozen_value() {
        let h = weierstrass_h(0.2, 5.0, 4.0, 0.3).unwrap();
        assert!((h - (-11.746339744091043)).abs() < 1e-9);
    }

    #[test]
    fn weierstrass_h_satisfies_lienard() {
        let (c0, g3, c) = (5.0, 4.0, 0.3);
        for theta in [-0.8, -0.2, 0.2, 0.4] {
            let (h, h1, h2) = weierstrass_h_derivatives(theta, c0, g3, c).unwrap();
            let resid = h2 - c0 * h1 + h * h + 6.0 * c0 * c0 / 25.0 * h;
            assert!(
                resid.abs() < 1e-8 * (1.0 + h.abs().powi(2)),
                "theta={theta}: {resid:e}"
            );
        }
    }

    #[test]
    fn shifted_solution_satisfies_second_normal_form() {
        // Substituting H -> H - 6C0²/25 turns the first normal form into the
        // second, so solutions map the other way: H + 6C0²/25 solves
        // H'' - C0H' + H² - (6C0²/25)H = 0.
        let (c0, g3, c) = (5.0, 1.0, 0.0);
        let shift = 6.0 * c0 * c0 / 25.0;
        for theta in [-0.6, -0.1, 0.3] {
            let (h, h1, h2) = weierstrass_h_derivatives(theta, c0, g3, c).unwrap();
            let hs = h + shift;
            let resid = h2 - c0 * h1 + hs * hs - shift * hs;
            assert!(
                resid.abs() < 1e-8 * (1.0 + hs.abs().powi(2)),
                "theta={theta}: {resid:e}"
            );
        }
    }

    #[test]
    fn nonradial_field_swirl_constant() {
        let spec = NonRadialSpec::weierstrass(5.0, 1.0, 0.2).unwrap();
        for (x, y) in [(1.0, 0.0), (0.8, 0.45), (2.0, -1.0)] {
            let s = nonradial_field(&spec, x, y).unwrap();
            assert!((x * s.v - y * s.u - 5.0).abs() < 1e-13);
        }
        assert!(nonradial_field(&spec, -1.0, 0.2).is_err());
    }

    #[test]
    fn linear_only_is_constant_profile_field() {
        // LinearOnly reproduces the two-constant exact solution.
        let (ct, c0) = (1.0, 1.0);
        let spec = NonRadialSpec::linear_with_coefficient(c0, ct).unwrap();
        let (x, y) = (2.0, 1.0);
        let s = nonradial_field(&spec, x, y).unwrap();
        let r2 = x * x + y * y;
        assert!((s.u - (ct * x - c0 * y) / r2).abs() < 1e-16);
        assert!((s.v - (ct * y + c0 * x) / r2).abs() < 1e-16);
        assert!((s.p - (-(ct * ct + c0 * c0) / (2.0 * r2))).abs() < 1e-16);
    }

    #[test]
    fn degenerate_field_matches_general_g3_zero() {
        let (c0, c) = (5.0, 0.3);
        let spec = NonRadialSpec::weierstrass(c0, 0.0, c).unwrap();
        for i in 0..100 {
            let x = 0.3 + 0.02 * i as f64;
            let y = -1.0 + 0.02 * i as f64;
            let a = degenerate_field(c0, c, x, y).unwrap();
            let b = nonradial_field(&spec, x, y).unwrap();
            assert!((a.u - b.u).abs() < 1e-12 * (1.0 + b.u.abs()));
            assert!((a.v - b.v).abs() < 1e-12 * (1.0 + b.v.abs()));
            assert!((a.p - b.p).abs() < 1e-12 * (1.0 + b.p.abs()));
        }
    }

    #[test]
    fn degenerate_field_c_zero() {
        // C = 0: u = u_L - 6C0²x/(25 r²).
        let c0 = 2.0;
        let (x, y) = (1.0, 0.7);
        let s = degenerate_field(c0, 0.0, x, y).unwrap();
        let r2 = x * x + y * y;
        let ct = integrable_ctilde1(c0);
        let expect = (ct * x - c0 * y) / r2 - 6.0 * c0 * c0 * x / (25.0 * r2);
        assert!((s.u - expect).abs() < 1e-15);
    }

    #[test]
    fn degenerate_denominator_rejected() {
        // 1 + C e^{-θ C0/5} = 0 at θ = 0 for C = -1.
        assert!(degenerate_h(0.0, 5.0, -1.0).is_err());
    }

    #[test]
    fn pole_free_window_contains_anchor() {
        let spec = NonRadialSpec::weierstrass(5.0, 4.0, 0.0).unwrap();
        let (lo, hi) = spec.pole_free_theta_window(0.0).unwrap();
        assert!(lo < 0.0 && hi > 0.0);
        // τ = e^θ hits the first pole 2ω(g3=4) ≈ 2.4287 at θ = ln(2ω).
        let two_omega: f64 = 2.0 * 1.2143253239437908;
        assert!((hi - two_omega.ln()).abs() < 1e-12);
        assert_eq!(lo, f64::NEG_INFINITY);

        let spec = NonRadialSpec::weierstrass(-3.0, 1.0, 0.3).unwrap();
        let (lo, hi) = spec.pole_free_theta_window(0.0).unwrap();
        assert!(lo < 0.0 && hi > 0.0);

        let spec = NonRadialSpec::linear_with_coefficient(2.0, 0.5).unwrap();
        assert_eq!(
            spec.pole_free_theta_window(0.0).unwrap(),
            (f64::NEG_INFINITY, f64::INFINITY)
        );
    }

    #[test]
    fn spec_invariants() {
        assert!(NonRadialSpec::weierstrass(0.0, 1.0, 0.0).is_err());
        assert!(NonRadialSpec::linear(5.0, 0.0, Branch::Plus).is_err());
        let spec = NonRadialSpec::weierstrass(5.0, 1.0, 0.0).unwrap();
        assert!(spec.is_integrable());
        assert_eq!(spec.ctilde1(), 1.0);
        let spec = NonRadialSpec::numeric(5.0, 0.3).unwrap();
        assert!(!spec.is_integrable());
        assert!(nonradial_field(&spec, 1.0, 0.0).is_err());
    }
}
