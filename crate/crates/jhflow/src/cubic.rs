//! The cubic 𝒫₃(h) = h³ + 6h² + 6C₁h + C₂ and the bifurcation regions of the
//! (C₁, C₂) parameter plane.
//!
//! The root structure of 𝒫₃ decides which closed-form radial profile exists
//! at a parameter point: three distinct real roots inside region II, a double
//! root on the boundary curves Γ±, a triple root at P₀ = (2, 8), and one real
//! root with a conjugate pair everywhere else (region I).

use crate::error::{Error, Result};

/// Relative tolerance for deciding membership of the boundary curves.
///
/// A point this close to a Γ curve is classified onto the curve: the closed
/// forms on the curves differ structurally from the neighbouring regions, so
/// silent misclassification would evaluate the wrong family.
const BOUNDARY_TOL: f64 = 1e-12;

/// A point (C₁, C₂) of the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterPoint {
    pub c1: f64,
    pub c2: f64,
}

impl ParameterPoint {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !c1.is_finite() || !c2.is_finite() {
            return Err(Error::domain(format!(
                "parameter point must be finite, got ({c1}, {c2})"
            )));
        }
        Ok(ParameterPoint { c1, c2 })
    }
}

/// Bifurcation region of a parameter point.
///
/// `I1`, `Gamma0` and `I2` together form region I (one real root plus a
/// conjugate pair); `II` is the open region with three distinct real roots;
/// `GammaPlus`/`GammaMinus` are its boundary curves C₂ = L±(C₁) for C₁ < 2,
/// and `P0` is the triple-root point (2, 8).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionTag {
    I1,
    Gamma0,
    I2,
    P0,
    II,
    GammaPlus,
    GammaMinus,
}

impl RegionTag {
    /// True for the subregions making up region I.
    pub fn in_region_one(self) -> bool {
        matches!(self, RegionTag::I1 | RegionTag::Gamma0 | RegionTag::I2)
    }

    pub fn name(self) -> &'static str {
        match self {
            RegionTag::I1 => "I1",
            RegionTag::Gamma0 => "Gamma0",
            RegionTag::I2 => "I2",
            RegionTag::P0 => "P0",
            RegionTag::II => "II",
            RegionTag::GammaPlus => "Gamma+",
            RegionTag::GammaMinus => "Gamma-",
        }
    }
}

/// Root structure of 𝒫₃. Real roots are sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubicRoots {
    ThreeDistinctReal {
        a: f64,
        b: f64,
        c: f64,
    },
    DoubleAndSimple {
        double: f64,
        simple: f64,
    },
    TripleReal {
        root: f64,
    },
    /// One real root α and the conjugate pair m ± n i (n > 0).
    OneRealPlusConjugate {
        alpha: f64,
        m: f64,
        n: f64,
    },
}

impl CubicRoots {
    /// All roots with multiplicity; complex pairs contribute their real part
    /// twice (used for Vieta checks on the real symmetric functions).
    pub fn real_roots(&self) -> Vec<f64> {
        match *self {
            CubicRoots::ThreeDistinctReal { a, b, c } => vec![a, b, c],
            CubicRoots::DoubleAndSimple { double, simple } => {
                let mut v = vec![double, double, simple];
                v.sort_by(f64::total_cmp);
                v
            }
            CubicRoots::TripleReal { root } => vec![root, root, root],
            CubicRoots::OneRealPlusConjugate { alpha, .. } => vec![alpha],
        }
    }
}

/// The discriminants and boundary ordinates at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discriminants {
    /// Discriminant of 𝒫₃:
    /// Δ_cubic = -27 (C₂² + (32 - 24C₁) C₂ + 32C₁³ - 48C₁²).
    pub delta_cubic: f64,
    /// Discriminant of the quadratic in C₂: Δ_square = -128 (C₁ - 2)³.
    pub delta_square: f64,
    /// L₊(C₁) = 12C₁ - 16 + 4(2 - C₁)√(2(2 - C₁)); `None` for C₁ > 2.
    pub l_plus: Option<f64>,
    /// L₋(C₁) = 12C₁ - 16 - 4(2 - C₁)√(2(2 - C₁)); `None` for C₁ > 2.
    pub l_minus: Option<f64>,
}

/// Evaluate 𝒫₃(h) = h³ + 6h² + 6C₁h + C₂.
pub fn p3_eval(h: f64, p: ParameterPoint) -> f64 {
    ((h + 6.0) * h + 6.0 * p.c1) * h + p.c2
}

/// d𝒫₃/dh = 3h² + 12h + 6C₁.
fn p3_deriv(h: f64, p: ParameterPoint) -> f64 {
    (3.0 * h + 12.0) * h + 6.0 * p.c1
}

/// Compute Δ_cubic, Δ_square and the boundary ordinates L±(C₁).
pub fn discriminants(p: ParameterPoint) -> Discriminants {
    let (c1, c2) = (p.c1, p.c2);
    let delta_cubic =
        -27.0 * (c2 * c2 + (32.0 - 24.0 * c1) * c2 + 32.0 * c1.powi(3) - 48.0 * c1 * c1);
    let delta_square = -128.0 * (c1 - 2.0).powi(3);
    let (l_plus, l_minus) = if c1 <= 2.0 {
        let w = 4.0 * (2.0 - c1) * (2.0 * (2.0 - c1)).sqrt();
        (Some(12.0 * c1 - 16.0 + w), Some(12.0 * c1 - 16.0 - w))
    } else {
        (None, None)
    };
    Discriminants {
        delta_cubic,
        delta_square,
        l_plus,
        l_minus,
    }
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Classify a parameter point into its bifurcation region.
///
/// Boundary membership (Γ₀, Γ±, P₀) is decided with relative tolerance
/// 1e-12. The contact point (0, 0) falls on Γ₊, following the region
/// definitions literally.
pub fn classify(p: ParameterPoint) -> RegionTag {
    let on_c1_2 = rel_close(p.c1, 2.0);
    if on_c1_2 {
        return if rel_close(p.c2, 8.0) {
            RegionTag::P0
        } else {
            RegionTag::Gamma0
        };
    }
    if p.c1 > 2.0 {
        return RegionTag::I1;
    }
    let d = discriminants(p);
    let l_plus = d.l_plus.expect("C1 < 2");
    let l_minus = d.l_minus.expect("C1 < 2");
    if rel_close(p.c2, l_plus) {
        RegionTag::GammaPlus
    } else if rel_close(p.c2, l_minus) {
        RegionTag::GammaMinus
    } else if p.c2 > l_plus || p.c2 < l_minus {
        RegionTag::I2
    } else {
        RegionTag::II
    }
}

/// Solve 𝒫₃(h) = 0, classifying the root structure by region.
///
/// Cardano with the trigonometric branch for three real roots, one Newton
/// polish per simple root; on the boundary curves the exact factorizations
/// (h - a)(h - b)² are used instead, avoiding cancellation near the repeated
/// roots.
pub fn solve_cubic(p: ParameterPoint) -> CubicRoots {
    // Depressed form: h = t - 2 gives t³ + pt + q.
    let pp = 6.0 * (p.c1 - 2.0);
    let q = p.c2 - 12.0 * p.c1 + 16.0;

    match classify(p) {
        RegionTag::P0 => CubicRoots::TripleReal { root: -2.0 },
        RegionTag::GammaPlus => {
            // 𝒫₃ = (h + 2 + 2w)(h + 2 - w)² with w = √(2(2 - C₁)).
            let w = (2.0 * (2.0 - p.c1)).sqrt();
            CubicRoots::DoubleAndSimple {
                double: -2.0 + w,
                simple: newton_polish(-2.0 - 2.0 * w, p),
            }
        }
        RegionTag::GammaMinus => {
            // 𝒫₃ = (h + 2 - 2w)(h + 2 + w)².
            let w = (2.0 * (2.0 - p.c1)).sqrt();
            CubicRoots::DoubleAndSimple {
                double: -2.0 - w,
                simple: newton_polish(-2.0 + 2.0 * w, p),
            }
        }
        RegionTag::II => {
            // Three distinct real roots: trigonometric Cardano (p < 0 here).
            let mp3 = (-pp / 3.0).sqrt();
            let arg = (3.0 * q / (2.0 * pp) * (-3.0 / pp).sqrt()).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            let mut roots = [0.0_f64; 3];
            for (k, r) in roots.iter_mut().enumerate() {
                let t = 2.0 * mp3 * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
                *r = newton_polish(t - 2.0, p);
            }
            roots.sort_by(f64::total_cmp);
            CubicRoots::ThreeDistinctReal {
                a: roots[0],
                b: roots[1],
                c: roots[2],
            }
        }
        _ => {
            // One real root + conjugate pair (Δ_cubic < 0).
            let half_q = 0.5 * q;
            let disc = half_q * half_q + (pp / 3.0).powi(3);
            let sqrt_disc = disc.max(0.0).sqrt();
            // Pick the cube root that avoids cancellation.
            let u = if q >= 0.0 {
                (-half_q - sqrt_disc).cbrt()
            } else {
                (-half_q + sqrt_disc).cbrt()
            };
            let t = if u == 0.0 { 0.0 } else { u - pp / (3.0 * u) };
            let alpha = newton_polish(t - 2.0, p);
            // Remaining quadratic: t² + αt t + (p + αt²); in h-coordinates the
            // pair is m ± n i with 2m = -6 - α.
            let t_alpha = alpha + 2.0;
            let m = -0.5 * t_alpha - 2.0;
            let n2 = pp + 0.75 * t_alpha * t_alpha;
            CubicRoots::OneRealPlusConjugate {
                alpha,
                m,
                n: n2.max(0.0).sqrt(),
            }
        }
    }
}

fn newton_polish(h: f64, p: ParameterPoint) -> f64 {
    let d = p3_deriv(h, p);
    if d == 0.0 {
        return h;
    }
    let step = p3_eval(h, p) / d;
    if step.is_finite() && step.abs() < 1.0 + h.abs() {
        h - step
    } else {
        h
    }
}
