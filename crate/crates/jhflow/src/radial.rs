//! Radial solution families: the profiles f₀…f₇, their validity windows,
//! field evaluation in small and large cones, the reciprocal-invariant path,
//! and globally periodic solutions.
//!
//! Every radial field has the form
//!
//! ```text
//! u = x κ / r²,   v = y κ / r²,   p = (2κ + C₁) / r²,   r² = x² + y²
//! ```
//!
//! with κ = f(θ) an angular profile selected by the bifurcation region of
//! (C₁, C₂). The profile solves f'' + f² + 4f + 2C₁ = 0 with first integral
//! (f')² + (2/3)f³ + 4f² + 4C₁f + (2/3)C₂ = 0.

use crate::cubic::{self, classify, p3_eval, CubicRoots, ParameterPoint, RegionTag};
use crate::elliptic::{ellint_k, jacobi_am, jacobi_dn, Modulus};
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;
use crate::FieldSample;
use std::f64::consts::{FRAC_PI_2, PI};

/// Distance in θ below which evaluation next to a profile pole is refused.
const POLE_MARGIN: f64 = 1e-9;

/// An open cone sector, encoded by its angle window. The punctured plane
/// minus the positive x-axis is (0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeDomain {
    pub theta_min: f64,
    pub theta_max: f64,
}

impl ConeDomain {
    pub fn new(theta_min: f64, theta_max: f64) -> Result<Self> {
        let width = theta_max - theta_min;
        if !(width > 0.0 && width <= 2.0 * PI + 1e-15) {
            return Err(Error::domain(format!(
                "cone must have opening angle in (0, 2pi], got {width}"
            )));
        }
        Ok(ConeDomain {
            theta_min,
            theta_max,
        })
    }

    /// Opening angle α(Ω).
    pub fn opening_angle(&self) -> f64 {
        self.theta_max - self.theta_min
    }

    /// Whether a point lies inside the sector (angles taken modulo 2π).
    pub fn contains(&self, x: f64, y: f64) -> bool {
        if x == 0.0 && y == 0.0 {
            return false;
        }
        let theta = y.atan2(x); // (-π, π]
        let mut t = theta - self.theta_min;
        t -= (2.0 * PI) * (t / (2.0 * PI)).floor();
        t > 0.0 && t < self.opening_angle()
    }
}

/// The eight profile families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    F0,
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::F0 => "f0",
            Family::F1 => "f1",
            Family::F2 => "f2",
            Family::F3 => "f3",
            Family::F4 => "f4",
            Family::F5 => "f5",
            Family::F6 => "f6",
            Family::F7 => "f7",
        }
    }
}

/// Family-specific derived parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Params {
    /// Constant profile κ = C with 𝒫₃(C) = 0.
    Constant { c_const: f64 },
    /// Region I: real root α, conjugate pair m ± n i, β = √((m-α)² + n²).
    ConjugatePair {
        alpha: f64,
        m: f64,
        beta: f64,
        k: Modulus,
    },
    /// P₀ = (2, 8): rational profile, no extra parameters.
    Triple,
    /// Region II: three real roots a < b < c, modulus √((c-b)/(c-a)).
    ThreeReal { a: f64, b: f64, c: f64, k: Modulus },
    /// Γ±: w = √(2(2 - C₁)).
    DoubleRoot { w: f64 },
}

/// A fully constructed radial profile: family, derived parameters, the free
/// integration constant C, and the parameter point it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfileSpec {
    family: Family,
    params: Params,
    c: f64,
    source: ParameterPoint,
    /// C₁ entering the pressure law. Equal to `source.c1` for f₁…f₇; for the
    /// constant branch it is -C²/2 - 2C, the unique value for which
    /// p = -C²/(2r²) solves the momentum equations.
    pressure_c1: f64,
}

impl RadialProfileSpec {
    /// Construct a non-constant family at a parameter point. The family must
    /// be admissible for the region of `source`:
    /// f₁ ⟺ region I, f₂ ⟺ P₀, f₃/f₄ ⟺ II, f₅ ⟺ Γ₊, f₆/f₇ ⟺ Γ₋.
    pub fn new(family: Family, source: ParameterPoint, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::invalid_spec("integration constant C must be finite"));
        }
        let region = classify(source);
        let params = match family {
            Family::F0 => {
                return Err(Error::invalid_spec(
                    "use RadialProfileSpec::constant for the constant branch",
                ))
            }
            Family::F1 => {
                if !region.in_region_one() {
                    return Err(Error::invalid_spec(format!(
                        "f1 requires region I, point is in {}",
                        region.name()
                    )));
                }
                match cubic::solve_cubic(source) {
                    CubicRoots::OneRealPlusConjugate { alpha, m, n } => {
                        let beta = (m - alpha).hypot(n);
                        if beta <= 0.0 {
                            return Err(Error::invalid_spec("f1 requires beta > 0"));
                        }
                        let k = Modulus::new(((beta - m + alpha) / (2.0 * beta)).sqrt())?;
                        Params::ConjugatePair { alpha, m, beta, k }
                    }
                    other => {
                        return Err(Error::invalid_spec(format!(
                            "region I must yield a conjugate pair, got {other:?}"
                        )))
                    }
                }
            }
            Family::F2 => {
                if region != RegionTag::P0 {
                    return Err(Error::invalid_spec(format!(
                        "f2 requires P0 = (2, 8), point is in {}",
                        region.name()
                    )));
                }
                Params::Triple
            }
            Family::F3 | Family::F4 => {
                if region != RegionTag::II {
                    return Err(Error::invalid_spec(format!(
                        "{} requires region II, point is in {}",
                        family.name(),
                        region.name()
                    )));
                }
                match cubic::solve_cubic(source) {
                    CubicRoots::ThreeDistinctReal { a, b, c: croot } => {
                        let k = Modulus::new(((croot - b) / (croot - a)).sqrt())?;
                        Params::ThreeReal { a, b, c: croot, k }
                    }
                    other => {
                        return Err(Error::invalid_spec(format!(
                            "region II must yield three real roots, got {other:?}"
                        )))
                    }
                }
            }
            Family::F5 => {
                if region != RegionTag::GammaPlus {
                    return Err(Error::invalid_spec(format!(
                        "f5 requires Gamma+, point is in {}",
                        region.name()
                    )));
                }
                Params::DoubleRoot {
                    w: (2.0 * (2.0 - source.c1)).sqrt(),
                }
            }
            Family::F6 | Family::F7 => {
                if region != RegionTag::GammaMinus {
                    return Err(Error::invalid_spec(format!(
                        "{} requires Gamma-, point is in {}",
                        family.name(),
                        region.name()
                    )));
                }
                Params::DoubleRoot {
                    w: (2.0 * (2.0 - source.c1)).sqrt(),
                }
            }
        };
        Ok(RadialProfileSpec {
            family,
            params,
            c,
            source,
            pressure_c1: source.c1,
        })
    }

    /// The constant branch κ ≡ C, admissible whenever 𝒫₃(C) = 0 at `source`.
    pub fn constant(source: ParameterPoint, c_const: f64) -> Result<Self> {
        let res = p3_eval(c_const, source).abs();
        if res > 1e-9 * (1.0 + c_const.abs().powi(3)) {
            return Err(Error::invalid_spec(format!(
                "constant profile requires P3(C) = 0, residual {res:e}"
            )));
        }
        Ok(RadialProfileSpec {
            family: Family::F0,
            params: Params::Constant { c_const },
            c: 0.0,
            source,
            pressure_c1: -0.5 * c_const * c_const - 2.0 * c_const,
        })
    }

    /// Region-II spec built directly from three real roots a < b < c; the
    /// parameter point follows from Vieta (the roots must sum to -6).
    pub fn from_three_roots(family: Family, a: f64, b: f64, c_root: f64, c: f64) -> Result<Self> {
        if !(matches!(family, Family::F3 | Family::F4)) {
            return Err(Error::invalid_spec("from_three_roots builds f3 or f4"));
        }
        if !(a < b && b < c_root) {
            return Err(Error::invalid_spec("roots must satisfy a < b < c"));
        }
        if (a + b + c_root + 6.0).abs() > 1e-9 * (1.0 + a.abs() + b.abs() + c_root.abs()) {
            return Err(Error::invalid_spec("roots must sum to -6"));
        }
        let source = ParameterPoint::new((a * b + a * c_root + b * c_root) / 6.0, -a * b * c_root)?;
        let k = Modulus::new(((c_root - b) / (c_root - a)).sqrt())?;
        Ok(RadialProfileSpec {
            family,
            params: Params::ThreeReal { a, b, c: c_root, k },
            c,
            source,
            pressure_c1: source.c1,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn source(&self) -> ParameterPoint {
        self.source
    }

    /// The free integration constant C.
    pub fn shift(&self) -> f64 {
        self.c
    }

    /// C₁ used in the pressure law p = (2κ + C₁)/r².
    pub fn pressure_c1(&self) -> f64 {
        self.pressure_c1
    }

    /// Poles of the profile in θ, described analytically.
    fn pole_set(&self) -> Result<PoleSet> {
        Ok(match self.params {
            Params::Constant { .. } => PoleSet::None,
            // cot²(am(g)/2) diverges at am(g) ∈ 2πZ, i.e. g ∈ 4K Z.
            Params::ConjugatePair { beta, k, .. } => {
                let rate = (6.0 * beta).sqrt() / 3.0;
                let shift = beta.sqrt() * self.c;
                let big_k = ellint_k(k)?;
                PoleSet::Lattice {
                    base: -shift / rate,
                    spacing: 4.0 * big_k / rate,
                }
            }
            Params::Triple => PoleSet::Single(-self.c),
            Params::ThreeReal { a, c, k, .. } => match self.family {
                Family::F3 => PoleSet::None,
                // tan(am(g)) diverges at am(g) = π/2 + πZ, i.e. g ∈ K + 2K Z.
                _ => {
                    let rate = ((c - a) / 6.0).sqrt();
                    let shift = (c - a).sqrt() * self.c;
                    let big_k = ellint_k(k)?;
                    PoleSet::Lattice {
                        base: (big_k - shift) / rate,
                        spacing: 2.0 * big_k / rate,
                    }
                }
            },
            Params::DoubleRoot { .. } => {
                let c1 = self.source.c1;
                match self.family {
                    Family::F5 => {
                        let rate = ((2.0 - c1) / 2.0).powf(0.25);
                        PoleSet::Lattice {
                            base: (FRAC_PI_2 - self.c) / rate,
                            spacing: PI / rate,
                        }
                    }
                    Family::F6 => PoleSet::None,
                    // coth diverges where its argument vanishes.
                    _ => PoleSet::Single(-self.c / 8.0_f64.powf(0.25)),
                }
            }
        })
    }

    /// Distance from θ to the nearest pole (infinite when there are none).
    pub fn pole_distance(&self, theta: f64) -> Result<f64> {
        Ok(self.pole_set()?.distance(theta))
    }

    fn guard_pole(&self, theta: f64) -> Result<()> {
        if !theta.is_finite() {
            return Err(Error::domain(format!("theta must be finite, got {theta}")));
        }
        let dist = self.pole_distance(theta)?;
        if dist < POLE_MARGIN {
            let (lo, hi) = match self.pole_set()? {
                PoleSet::None => unreachable!("pole-free profile has infinite distance"),
                PoleSet::Single(p) => (p, p),
                PoleSet::Lattice { base, spacing } => {
                    let j = ((theta - base) / spacing).round();
                    let p = base + j * spacing;
                    (p, p)
                }
            };
            return Err(Error::OutOfValidity { theta, lo, hi });
        }
        Ok(())
    }
}

/// Analytic pole locations of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
enum PoleSet {
    None,
    Single(f64),
    /// Poles at base + spacing · Z.
    Lattice {
        base: f64,
        spacing: f64,
    },
}

impl PoleSet {
    fn distance(&self, theta: f64) -> f64 {
        match *self {
            PoleSet::None => f64::INFINITY,
            PoleSet::Single(p) => (theta - p).abs(),
            PoleSet::Lattice { base, spacing } => {
                let t = theta - base;
                (t - spacing * (t / spacing).round()).abs()
            }
        }
    }

    /// Poles inside the open window (lo, hi), ascending.
    fn poles_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        match *self {
            PoleSet::None => vec![],
            PoleSet::Single(p) => {
                if p > lo && p < hi {
                    vec![p]
                } else {
                    vec![]
                }
            }
            PoleSet::Lattice { base, spacing } => {
                let mut out = vec![];
                let mut j = ((lo - base) / spacing).ceil();
                loop {
                    let p = base + j * spacing;
                    if p >= hi {
                        break;
                    }
                    if p > lo {
                        out.push(p);
                    }
                    j += 1.0;
                }
                out
            }
        }
    }
}

/// A maximal pole-free open interval of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaInterval {
    pub lo: f64,
    pub hi: f64,
    /// True when the endpoint is a genuine pole; false when it is only the
    /// clip of the requested window (the profile continues beyond it).
    pub lo_is_pole: bool,
    pub hi_is_pole: bool,
}

impl ThetaInterval {
    pub fn contains(&self, theta: f64) -> bool {
        theta > self.lo && theta < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Evaluate the profile f(θ).
pub fn eval_f(spec: &RadialProfileSpec, theta: f64) -> Result<f64> {
    spec.guard_pole(theta)?;
    let c = spec.c;
    Ok(match spec.params {
        Params::Constant { c_const } => c_const,
        Params::ConjugatePair { alpha, beta, k, .. } => {
            let g = (6.0 * beta).sqrt() / 3.0 * theta + beta.sqrt() * c;
            let half_am = 0.5 * jacobi_am(g, k)?;
            let cot = half_am.cos() / half_am.sin();
            alpha - beta * cot * cot
        }
        Params::Triple => -2.0 - 6.0 / (theta + c).powi(2),
        Params::ThreeReal { a, b, c: croot, k } => {
            let g = ((croot - a) / 6.0).sqrt() * theta + (croot - a).sqrt() * c;
            let am = jacobi_am(g, k)?;
            match spec.family {
                Family::F3 => croot - (croot - b) * am.sin().powi(2),
                _ => a - (b - a) * am.tan().powi(2),
            }
        }
        Params::DoubleRoot { w } => {
            let c1 = spec.source.c1;
            match spec.family {
                Family::F5 => {
                    let t = (((2.0 - c1) / 2.0).powf(0.25) * theta + c).tan();
                    -2.0 - 2.0 * w - 3.0 * w * t * t
                }
                Family::F6 => {
                    let t = ((2.0 - c1).powf(0.25) / 2.0 * (8.0_f64.powf(0.25) * theta + c)).tanh();
                    -2.0 + 2.0 * w - 3.0 * w * t * t
                }
                _ => {
                    let t = ((2.0 - c1).powf(0.25) / 2.0 * (8.0_f64.powf(0.25) * theta + c)).tanh();
                    -2.0 + 2.0 * w - 3.0 * w / (t * t)
                }
            }
        }
    })
}

/// Analytic derivative f'(θ), with d am/dm = dn.
pub fn eval_f_prime(spec: &RadialProfileSpec, theta: f64) -> Result<f64> {
    spec.guard_pole(theta)?;
    let c = spec.c;
    Ok(match spec.params {
        Params::Constant { .. } => 0.0,
        Params::ConjugatePair { beta, k, .. } => {
            let rate = (6.0 * beta).sqrt() / 3.0;
            let g = rate * theta + beta.sqrt() * c;
            let half_am = 0.5 * jacobi_am(g, k)?;
            let dn = jacobi_dn(g, k)?;
            let s = half_am.sin();
            beta * (half_am.cos() / (s * s * s)) * dn * rate
        }
        Params::Triple => 12.0 / (theta + c).powi(3),
        Params::ThreeReal { a, b, c: croot, k } => {
            let rate = ((croot - a) / 6.0).sqrt();
            let g = rate * theta + (croot - a).sqrt() * c;
            let am = jacobi_am(g, k)?;
            let dn = jacobi_dn(g, k)?;
            match spec.family {
                Family::F3 => -(croot - b) * (2.0 * am).sin() * dn * rate,
                _ => {
                    let t = am.tan();
                    -(b - a) * 2.0 * t * (1.0 + t * t) * dn * rate
                }
            }
        }
        Params::DoubleRoot { w } => {
            let c1 = spec.source.c1;
            match spec.family {
                Family::F5 => {
                    let rate = ((2.0 - c1) / 2.0).powf(0.25);
                    let t = (rate * theta + c).tan();
                    -6.0 * w * t * (1.0 + t * t) * rate
                }
                Family::F6 => {
                    let rate = (2.0 - c1).powf(0.25) / 2.0 * 8.0_f64.powf(0.25);
                    let t = ((2.0 - c1).powf(0.25) / 2.0 * (8.0_f64.powf(0.25) * theta + c)).tanh();
                    -6.0 * w * t * (1.0 - t * t) * rate
                }
                _ => {
                    let rate = (2.0 - c1).powf(0.25) / 2.0 * 8.0_f64.powf(0.25);
                    let t = ((2.0 - c1).powf(0.25) / 2.0 * (8.0_f64.powf(0.25) * theta + c)).tanh();
                    // d/dg coth² = -2 coth · csch², cancelling the -3w.
                    let coth = 1.0 / t;
                    let csch2 = coth * coth - 1.0;
                    6.0 * w * coth * csch2 * rate
                }
            }
        }
    })
}

/// Maximal pole-free intervals inside an arbitrary window (lo, hi).
pub fn validity_in(spec: &RadialProfileSpec, lo: f64, hi: f64) -> Result<Vec<ThetaInterval>> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::domain("validity window must satisfy lo < hi"));
    }
    let set = spec.pole_set()?;
    let poles = set.poles_in(lo, hi);
    let mut cuts = Vec::with_capacity(poles.len() + 2);
    cuts.push((lo, set.distance(lo) < POLE_MARGIN));
    for p in &poles {
        cuts.push((*p, true));
    }
    cuts.push((hi, set.distance(hi) < POLE_MARGIN));
    let mut out = vec![];
    for pair in cuts.windows(2) {
        let (a, a_pole) = pair[0];
        let (b, b_pole) = pair[1];
        if b - a > 2.0 * POLE_MARGIN {
            out.push(ThetaInterval {
                lo: a,
                hi: b,
                lo_is_pole: a_pole,
                hi_is_pole: b_pole,
            });
        }
    }
    Ok(out)
}

/// Maximal pole-free intervals on the principal window (-π/2, π/2), the
/// range of arctan(y/x) for x > 0.
pub fn validity(spec: &RadialProfileSpec) -> Result<Vec<ThetaInterval>> {
    validity_in(spec, -FRAC_PI_2, FRAC_PI_2)
}

/// The auxiliary angle θ̃(x, y) ∈ [0, 2π), continuous on the punctured plane
/// minus the positive x-axis, equal to arctan(y/x) on the first quadrant.
pub fn tilde_theta(x: f64, y: f64) -> Result<f64> {
    if x == 0.0 && y == 0.0 {
        return Err(Error::domain("tilde_theta is undefined at the origin"));
    }
    Ok(if x > 0.0 && y >= 0.0 {
        (y / x).atan()
    } else if x <= 0.0 && y > 0.0 {
        FRAC_PI_2 - (x / y).atan()
    } else if x < 0.0 && y <= 0.0 {
        PI + (y / x).atan()
    } else {
        1.5 * PI - (x / y).atan()
    })
}

/// Evaluate the radial field at (x, y).
///
/// Non-extended evaluation lives on the cone x > 0 with θ = arctan(y/x);
/// extended evaluation uses θ̃ and covers the punctured plane minus the
/// positive x-axis (and crosses it smoothly for globally periodic profiles).
pub fn eval_field_radial(
    spec: &RadialProfileSpec,
    x: f64,
    y: f64,
    extended: bool,
) -> Result<FieldSample> {
    if x == 0.0 && y == 0.0 {
        return Err(Error::domain("field evaluation at the origin"));
    }
    let theta = if extended {
        tilde_theta(x, y)?
    } else {
        if x <= 0.0 {
            return Err(Error::domain(
                "non-extended radial evaluation requires x > 0",
            ));
        }
        (y / x).atan()
    };
    let kappa = eval_f(spec, theta)?;
    Ok(assemble_radial(spec, kappa, x, y))
}

/// Evaluate through the reciprocal invariants x/y: the same profile composed
/// with arctan(x/y), valid off the x-axis.
pub fn eval_field_reciprocal(spec: &RadialProfileSpec, x: f64, y: f64) -> Result<FieldSample> {
    if y == 0.0 {
        return Err(Error::domain(
            "reciprocal evaluation requires y != 0 (cone off the x-axis)",
        ));
    }
    let kappa = eval_f(spec, (x / y).atan())?;
    Ok(assemble_radial(spec, kappa, x, y))
}

fn assemble_radial(spec: &RadialProfileSpec, kappa: f64, x: f64, y: f64) -> FieldSample {
    let r2 = x * x + y * y;
    let q = kappa / r2;
    FieldSample {
        u: x * q,
        v: y * q,
        p: (2.0 * kappa + spec.pressure_c1) / r2,
    }
}

/// A globally periodic radial solution: an f₃ profile whose roots satisfy
/// the period-matching condition π√((c-a)/6) = n K(√((c-b)/(c-a))).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalSolution {
    pub n_periods: u32,
    /// Roots a < b < c of 𝒫₃.
    pub roots: (f64, f64, f64),
    pub source: ParameterPoint,
    /// Phase constant of the profile.
    pub c: f64,
    /// Flux Φ = ∫ f dθ over the unit circle.
    pub flux: f64,
    /// |π√((c-a)/6) - n K(k)| at the returned roots.
    pub condition_residual: f64,
    /// Whether 4 + Φ/π < n².
    pub flux_inequality_ok: bool,
}

impl GlobalSolution {
    /// The f₃ profile of this solution.
    pub fn profile_spec(&self) -> Result<RadialProfileSpec> {
        let (a, b, c) = self.roots;
        RadialProfileSpec::from_three_roots(Family::F3, a, b, c, self.c)
    }

    /// Residual of the period-matching condition recomputed from the roots.
    pub fn condition_value(&self) -> Result<f64> {
        let (a, b, c) = self.roots;
        let k = Modulus::new(((c - b) / (c - a)).sqrt())?;
        Ok(PI * ((c - a) / 6.0).sqrt() - self.n_periods as f64 * ellint_k(k)?)
    }
}

/// Solve the period-matching condition for a given number of periods.
///
/// The search path fixes c - b = seed and a = -6 - 2c + seed (so Vieta holds
/// identically and the modulus stays inside (0, 1)), and Brent-solves the
/// condition residual along c. The residual is strictly increasing on the
/// path, so the first sign change brackets the unique root.
pub fn global_periodic_solve(n_periods: u32, seed: f64) -> Result<GlobalSolution> {
    if n_periods == 0 {
        return Err(Error::domain("number of periods must be >= 1"));
    }
    if !(seed.is_finite() && seed > 0.0) {
        return Err(Error::domain(format!("seed must be positive, got {seed}")));
    }
    let n = n_periods as f64;

    // On the path: d = c - a = 3c + 6 - seed, k² = seed / d.
    let residual = |c: f64| -> Result<f64> {
        let d = 3.0 * c + 6.0 - seed;
        let k = Modulus::new((seed / d).sqrt())?;
        Ok(PI * (d / 6.0).sqrt() - n * ellint_k(k)?)
    };

    let c_min = (2.0 * seed - 6.0) / 3.0;
    let mut lo = c_min + 1e-7 * seed.max(1.0) / 3.0;
    let f_lo = residual(lo)?;
    if f_lo > 0.0 {
        return Err(Error::NoBracket(format!(
            "condition residual already positive at the left end of the path \
             (seed {seed} too large for n = {n_periods})"
        )));
    }
    let mut hi = lo;
    let mut f_hi = f_lo;
    let mut step = seed.max(1.0);
    for _ in 0..200 {
        hi += step;
        f_hi = residual(hi)?;
        if f_hi > 0.0 {
            break;
        }
        lo = hi;
        step *= 1.5;
    }
    if f_hi <= 0.0 {
        return Err(Error::NoBracket(
            "condition residual never changed sign along the path".into(),
        ));
    }
    let c = brent(&residual, lo, hi, 1e-14)?;

    let a = -6.0 - 2.0 * c + seed;
    let b = c - seed;
    let source = ParameterPoint::new((a * b + a * c + b * c) / 6.0, -(a * b * c))?;
    let mut sol = GlobalSolution {
        n_periods,
        roots: (a, b, c),
        source,
        c: 0.0,
        flux: 0.0,
        condition_residual: 0.0,
        flux_inequality_ok: false,
    };
    sol.condition_residual = sol.condition_value()?.abs();
    sol.flux = flux(&sol)?;
    sol.flux_inequality_ok = 4.0 + sol.flux / PI < n * n;
    Ok(sol)
}

/// Flux Φ = ∫₀^{2π} f₃(θ) dθ by adaptive quadrature (absolute tol 1e-10).
pub fn flux(sol: &GlobalSolution) -> Result<f64> {
    let spec = sol.profile_spec()?;
    // f₃ is bounded and pole-free; quadrature over the full circle.
    Ok(adaptive_simpson(
        |theta| eval_f(&spec, theta).expect("f3 is pole-free"),
        0.0,
        2.0 * PI,
        1e-10,
    ))
}

/// Brent's method on a bracketing interval [a, b] with f(a) f(b) < 0.
fn brent<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut a = a;
    let mut b = b;
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa * fb > 0.0 {
        return Err(Error::NoBracket("brent requires a sign change".into()));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation / secant.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Ok(b)
}
