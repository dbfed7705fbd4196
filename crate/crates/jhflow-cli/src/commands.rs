//! Implementations of the CLI subcommands.

use std::path::{Path, PathBuf};

use jhflow::cubic::{
    classify as classify_point, discriminants, solve_cubic, CubicRoots, ParameterPoint,
};
use jhflow::nonradial::{
    lienard_integrate, weierstrass_h_derivatives, Branch, LienardState, NonRadialSpec,
    NonRadialVariant,
};
use jhflow::radial::{
    eval_field_radial, global_periodic_solve, validity_in, Family, RadialProfileSpec,
};
use jhflow::verify::{
    constraint_check, lienard_residual, pde_residual, scaling_check, FieldEvaluator, RadialField,
};
use jhflow::FieldSample;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use crate::config::ConfigMap;
use crate::output::{emit, fmt_f64, json_report};
use crate::{BranchArg, CliError, ConeArg, Format, GridArg, OutputFlags, SpecFlags, ThetaRangeArg};

const FIELD_CSV_HEADER: &str = "x,y,u,v,p,valid";
const SWEEP_CSV_HEADER: &str = "theta,H,dH,residual,valid";

/// A fully constructed solution selection.
enum SpecKind {
    Radial {
        spec: RadialProfileSpec,
        extended: bool,
    },
    NonRadial(NonRadialSpec),
}

fn require<T: Copy>(slot: Option<T>, flag: &str) -> Result<T, CliError> {
    slot.ok_or_else(|| CliError::Parse(format!("--{flag} is required")))
}

fn load_config(output: &OutputFlags, allowed: &[&str]) -> Result<ConfigMap, CliError> {
    match &output.config {
        Some(path) => ConfigMap::load(path, allowed),
        None => Ok(ConfigMap::empty()),
    }
}

fn apply_spec_config(cfg: &ConfigMap, spec: &mut SpecFlags) -> Result<(), CliError> {
    cfg.fill("family", &mut spec.family)?;
    cfg.fill("c1", &mut spec.c1)?;
    cfg.fill("c2", &mut spec.c2)?;
    cfg.fill("const-c", &mut spec.const_c)?;
    cfg.fill("c0", &mut spec.c0)?;
    cfg.fill("g3", &mut spec.g3)?;
    cfg.fill("wp-shift", &mut spec.wp_shift)?;
    cfg.fill("ctilde1", &mut spec.ctilde1)?;
    cfg.fill("branch", &mut spec.branch)?;
    if !spec.extended {
        let mut extended: Option<bool> = None;
        cfg.fill("extended", &mut extended)?;
        spec.extended = extended.unwrap_or(false);
    }
    Ok(())
}

fn apply_output_config(cfg: &ConfigMap, output: &mut OutputFlags) -> Result<(), CliError> {
    cfg.fill("format", &mut output.format)?;
    cfg.fill("out", &mut output.out)?;
    Ok(())
}

fn parameter_point(flags: &SpecFlags) -> Result<ParameterPoint, CliError> {
    let c1 = require(flags.c1, "c1")?;
    let c2 = require(flags.c2, "c2")?;
    Ok(ParameterPoint::new(c1, c2)?)
}

fn build_spec(flags: &SpecFlags) -> Result<SpecKind, CliError> {
    let family = flags
        .family
        .as_deref()
        .ok_or_else(|| CliError::Parse("--family is required".into()))?;
    let radial = |fam: Family| -> Result<SpecKind, CliError> {
        let point = parameter_point(flags)?;
        let spec = if fam == Family::F0 {
            RadialProfileSpec::constant(point, require(flags.const_c, "const-c")?)?
        } else {
            RadialProfileSpec::new(fam, point, flags.const_c.unwrap_or(0.0))?
        };
        Ok(SpecKind::Radial {
            spec,
            extended: flags.extended,
        })
    };
    match family {
        "f0" => radial(Family::F0),
        "f1" => radial(Family::F1),
        "f2" => radial(Family::F2),
        "f3" => radial(Family::F3),
        "f4" => radial(Family::F4),
        "f5" => radial(Family::F5),
        "f6" => radial(Family::F6),
        "f7" => radial(Family::F7),
        "linear" => {
            let c0 = require(flags.c0, "c0")?;
            let spec = if let Some(ct) = flags.ctilde1 {
                NonRadialSpec::linear_with_coefficient(c0, ct)?
            } else {
                let c1 = require(flags.c1, "c1")?;
                let branch = match flags.branch.unwrap_or(BranchArg::Plus) {
                    BranchArg::Plus => Branch::Plus,
                    BranchArg::Minus => Branch::Minus,
                };
                NonRadialSpec::linear(c0, c1, branch)?
            };
            Ok(SpecKind::NonRadial(spec))
        }
        "weierstrass" => {
            let c0 = require(flags.c0, "c0")?;
            Ok(SpecKind::NonRadial(NonRadialSpec::weierstrass(
                c0,
                flags.g3.unwrap_or(0.0),
                flags.wp_shift.unwrap_or(0.0),
            )?))
        }
        "degenerate" => {
            let c0 = require(flags.c0, "c0")?;
            Ok(SpecKind::NonRadial(NonRadialSpec::degenerate(
                c0,
                flags.wp_shift.unwrap_or(0.0),
            )?))
        }
        "numeric" => {
            let c0 = require(flags.c0, "c0")?;
            let ct = require(flags.ctilde1, "ctilde1")?;
            Ok(SpecKind::NonRadial(NonRadialSpec::numeric(c0, ct)?))
        }
        other => Err(CliError::Parse(format!(
            "unknown family {other:?}: expected f0..f7, linear, weierstrass, degenerate or numeric"
        ))),
    }
}

fn spec_inputs_json(flags: &SpecFlags) -> serde_json::Value {
    json!({
        "family": flags.family,
        "c1": flags.c1,
        "c2": flags.c2,
        "const_c": flags.const_c,
        "c0": flags.c0,
        "g3": flags.g3,
        "wp_shift": flags.wp_shift,
        "ctilde1": flags.ctilde1,
        "extended": flags.extended,
    })
}

// ---------------------------------------------------------------- classify

pub fn classify(mut spec: SpecFlags, mut output: OutputFlags) -> Result<(), CliError> {
    let cfg = load_config(&output, &["c1", "c2", "format", "out"])?;
    apply_spec_config(&cfg, &mut spec)?;
    apply_output_config(&cfg, &mut output)?;
    let point = parameter_point(&spec)?;
    let region = classify_point(point);
    let d = discriminants(point);
    let roots = solve_cubic(point);
    log::info!(
        "({}, {}) classified as {}",
        point.c1,
        point.c2,
        region.name()
    );

    let roots_json = match roots {
        CubicRoots::ThreeDistinctReal { a, b, c } => json!({
            "kind": "three_distinct_real", "a": a, "b": b, "c": c,
        }),
        CubicRoots::DoubleAndSimple { double, simple } => json!({
            "kind": "double_and_simple", "double": double, "simple": simple,
        }),
        CubicRoots::TripleReal { root } => json!({ "kind": "triple_real", "root": root }),
        CubicRoots::OneRealPlusConjugate { alpha, m, n } => json!({
            "kind": "one_real_plus_conjugate", "alpha": alpha, "m": m, "n": n,
        }),
    };

    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json_report(
            "classify",
            json!({ "c1": point.c1, "c2": point.c2 }),
            json!({
                "region": region.name(),
                "delta_cubic": d.delta_cubic,
                "delta_square": d.delta_square,
                "l_plus": d.l_plus,
                "l_minus": d.l_minus,
                "roots": roots_json,
            }),
            serde_json::Value::Null,
        ),
        Format::Csv => {
            let fmt_opt = |v: Option<f64>| match v {
                Some(x) => fmt_f64(x),
                None => "undefined".into(),
            };
            let roots_text = match roots {
                CubicRoots::ThreeDistinctReal { a, b, c } => {
                    format!(
                        "three distinct real: {}, {}, {}",
                        fmt_f64(a),
                        fmt_f64(b),
                        fmt_f64(c)
                    )
                }
                CubicRoots::DoubleAndSimple { double, simple } => {
                    format!("double {} and simple {}", fmt_f64(double), fmt_f64(simple))
                }
                CubicRoots::TripleReal { root } => format!("triple {}", fmt_f64(root)),
                CubicRoots::OneRealPlusConjugate { alpha, m, n } => format!(
                    "real {} and pair {} +/- {} i",
                    fmt_f64(alpha),
                    fmt_f64(m),
                    fmt_f64(n)
                ),
            };
            format!(
                "region: {}\ndelta_cubic: {}\ndelta_square: {}\nl_plus: {}\nl_minus: {}\nroots: {}\n",
                region.name(),
                fmt_f64(d.delta_cubic),
                fmt_f64(d.delta_square),
                fmt_opt(d.l_plus),
                fmt_opt(d.l_minus),
                roots_text
            )
        }
    };
    emit(output.out.as_deref(), &text)
}

// -------------------------------------------------------------------- eval

struct GridPoints {
    grid: GridArg,
}

impl GridPoints {
    fn len(&self) -> usize {
        self.grid.nx * self.grid.ny
    }

    /// Row-major: x varies fastest.
    fn point(&self, idx: usize) -> (f64, f64) {
        let g = &self.grid;
        let ix = idx % g.nx;
        let iy = idx / g.nx;
        let fx = if g.nx > 1 {
            ix as f64 / (g.nx - 1) as f64
        } else {
            0.0
        };
        let fy = if g.ny > 1 {
            iy as f64 / (g.ny - 1) as f64
        } else {
            0.0
        };
        (
            g.x_min + fx * (g.x_max - g.x_min),
            g.y_min + fy * (g.y_max - g.y_min),
        )
    }
}

fn field_rows<F>(
    points: &GridPoints,
    threads: Option<usize>,
    eval: F,
) -> Result<Vec<(f64, f64, Option<FieldSample>)>, CliError>
where
    F: Fn(f64, f64) -> Option<FieldSample> + Sync,
{
    let n = points.len();
    let compute = |idx: usize| {
        let (x, y) = points.point(idx);
        (x, y, eval(x, y))
    };
    match threads {
        Some(t) if t > 1 => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Parse(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(|| (0..n).into_par_iter().map(compute).collect()))
        }
        _ => Ok((0..n).map(compute).collect()),
    }
}

fn field_csv(rows: &[(f64, f64, Option<FieldSample>)]) -> String {
    let mut text = String::with_capacity(rows.len() * 96 + 32);
    text.push_str(FIELD_CSV_HEADER);
    text.push('\n');
    for (x, y, sample) in rows {
        match sample {
            Some(s) => {
                text.push_str(&format!(
                    "{},{},{},{},{},1\n",
                    fmt_f64(*x),
                    fmt_f64(*y),
                    fmt_f64(s.u),
                    fmt_f64(s.v),
                    fmt_f64(s.p)
                ));
            }
            None => {
                text.push_str(&format!("{},{},nan,nan,nan,0\n", fmt_f64(*x), fmt_f64(*y)));
            }
        }
    }
    text
}

fn field_rows_json(rows: &[(f64, f64, Option<FieldSample>)]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|(x, y, sample)| match sample {
                Some(s) => json!({
                    "x": x, "y": y, "u": s.u, "v": s.v, "p": s.p, "valid": 1,
                }),
                None => json!({
                    "x": x, "y": y, "u": null, "v": null, "p": null, "valid": 0,
                }),
            })
            .collect(),
    )
}

const EVAL_KEYS: &[&str] = &[
    "family", "c1", "c2", "const-c", "extended", "grid", "cone", "threads", "format", "out",
];

pub fn eval(
    mut spec: SpecFlags,
    mut grid: Option<GridArg>,
    mut cone: Option<ConeArg>,
    mut threads: Option<usize>,
    mut output: OutputFlags,
) -> Result<(), CliError> {
    let cfg = load_config(&output, EVAL_KEYS)?;
    apply_spec_config(&cfg, &mut spec)?;
    apply_output_config(&cfg, &mut output)?;
    cfg.fill("grid", &mut grid)?;
    cfg.fill("cone", &mut cone)?;
    cfg.fill("threads", &mut threads)?;

    let SpecKind::Radial {
        spec: profile,
        extended,
    } = build_spec(&spec)?
    else {
        return Err(CliError::Parse(
            "eval samples radial families; use the nonradial subcommand".into(),
        ));
    };
    let grid = require(grid, "grid")?;
    let cone_domain = cone
        .map(|c| jhflow::radial::ConeDomain::new(c.theta_min, c.theta_max))
        .transpose()?;

    let points = GridPoints { grid };
    log::info!(
        "sampling {} x {} grid, extended = {extended}",
        grid.nx,
        grid.ny
    );
    let rows = field_rows(&points, threads, |x, y| {
        if let Some(cone) = &cone_domain {
            if !cone.contains(x, y) {
                return None;
            }
        }
        eval_field_radial(&profile, x, y, extended).ok()
    })?;

    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => field_csv(&rows),
        Format::Json => json_report(
            "eval",
            spec_inputs_json(&spec),
            json!({ "rows": field_rows_json(&rows) }),
            serde_json::Value::Null,
        ),
    };
    emit(output.out.as_deref(), &text)
}

// ------------------------------------------------------------------ verify

struct CorruptField {
    inner: Box<dyn FieldEvaluator>,
    factor: f64,
}

impl FieldEvaluator for CorruptField {
    fn eval(&self, x: f64, y: f64) -> jhflow::Result<FieldSample> {
        let mut s = self.inner.eval(x, y)?;
        s.u *= self.factor;
        Ok(s)
    }

    fn swirl_constant(&self) -> f64 {
        self.inner.swirl_constant()
    }
}

/// Deterministic sample angles inside the spec's own validity region.
fn verification_thetas(kind: &SpecKind, count: usize) -> Result<Vec<f64>, CliError> {
    let mut rng = StdRng::seed_from_u64(0x4a48_464c_4f57);
    let (lo, hi) = match kind {
        SpecKind::Radial { spec, extended } => {
            let window = if *extended {
                (0.05, 2.0 * std::f64::consts::PI - 0.05)
            } else {
                (-1.45, 1.45)
            };
            let intervals = validity_in(spec, window.0, window.1)?;
            let widest = intervals
                .iter()
                .max_by(|a, b| a.width().total_cmp(&b.width()))
                .ok_or(CliError::Spec(jhflow::Error::OutOfValidity {
                    theta: 0.0,
                    lo: window.0,
                    hi: window.1,
                }))?;
            (
                widest.lo + 0.15 * widest.width(),
                widest.hi - 0.15 * widest.width(),
            )
        }
        SpecKind::NonRadial(spec) => {
            let anchor = 0.0;
            let (lo, hi) = spec.pole_free_theta_window(anchor)?;
            let lo = lo.max(-1.45);
            let hi = hi.min(1.45);
            let margin = 0.1 * (hi - lo);
            (lo + margin, hi - margin)
        }
    };
    let ordered = lo < hi;
    if !ordered {
        return Err(CliError::Parse("empty validity window".into()));
    }
    Ok((0..count).map(|_| rng.gen_range(lo..hi)).collect())
}

const VERIFY_KEYS: &[&str] = &[
    "family", "c1", "c2", "const-c", "c0", "g3", "wp-shift", "ctilde1", "branch", "extended",
    "input", "samples", "tol", "corrupt", "format", "out",
];

pub fn verify(
    mut spec: SpecFlags,
    mut input: Option<PathBuf>,
    mut samples: Option<usize>,
    mut tol: Option<f64>,
    mut corrupt: Option<f64>,
    mut output: OutputFlags,
) -> Result<(), CliError> {
    let cfg = load_config(&output, VERIFY_KEYS)?;
    apply_spec_config(&cfg, &mut spec)?;
    apply_output_config(&cfg, &mut output)?;
    cfg.fill("input", &mut input)?;
    cfg.fill("samples", &mut samples)?;
    cfg.fill("tol", &mut tol)?;
    cfg.fill("corrupt", &mut corrupt)?;
    let tol = tol.unwrap_or(1e-6);

    if let Some(path) = input {
        return verify_from_file(&path, spec.c0, tol, output);
    }

    let kind = build_spec(&spec)?;
    let samples = samples.unwrap_or(100);
    let thetas = verification_thetas(&kind, samples)?;
    let c0_expected = match &kind {
        SpecKind::Radial { .. } => 0.0,
        SpecKind::NonRadial(s) => s.c0(),
    };
    let base: Box<dyn FieldEvaluator> = match kind {
        SpecKind::Radial { spec, extended } => Box::new(RadialField { spec, extended }),
        SpecKind::NonRadial(spec) => Box::new(spec),
    };
    let fe: Box<dyn FieldEvaluator> = match corrupt {
        Some(factor) => Box::new(CorruptField {
            inner: base,
            factor,
        }),
        None => base,
    };

    let mut rng = StdRng::seed_from_u64(0x52_4144_4949);
    let mut max_resid = 0.0_f64;
    let mut sum_resid = 0.0_f64;
    let mut max_constraint = 0.0_f64;
    let mut max_scaling = 0.0_f64;
    for theta in &thetas {
        let r = rng.gen_range(0.5..2.0);
        let (x, y) = (r * theta.cos(), r * theta.sin());
        let report = pde_residual(fe.as_ref(), x, y, 1e-3 * r)?;
        let m = report.max_normalized();
        max_resid = max_resid.max(m);
        sum_resid += m;
        max_constraint = max_constraint.max(constraint_check(fe.as_ref(), c0_expected, x, y)?);
        max_scaling = max_scaling.max(scaling_check(fe.as_ref(), 2.0, x, y)?);
    }
    let mean_resid = sum_resid / thetas.len().max(1) as f64;

    let text = json_report(
        "verify",
        spec_inputs_json(&spec),
        json!({
            "samples": thetas.len(),
            "tolerance": tol,
        }),
        json!({
            "max_normalized": max_resid,
            "mean_normalized": mean_resid,
            "max_constraint": max_constraint,
            "max_scaling": max_scaling,
        }),
    );
    emit(output.out.as_deref(), &text)?;
    if max_resid > tol || max_constraint > tol || max_scaling > tol {
        return Err(CliError::Threshold(format!(
            "max normalized residual {max_resid:e}, constraint {max_constraint:e}, \
             scaling {max_scaling:e} against tolerance {tol:e}"
        )));
    }
    Ok(())
}

fn verify_from_file(
    path: &Path,
    c0: Option<f64>,
    tol: f64,
    output: OutputFlags,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != FIELD_CSV_HEADER {
        return Err(CliError::Parse(format!(
            "{}: expected header {FIELD_CSV_HEADER:?}, got {header:?}",
            path.display()
        )));
    }
    let mut rows: Vec<(f64, f64, f64, f64, f64, bool)> = vec![];
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 6 {
            return Err(CliError::Parse(format!(
                "{}:{}: expected 6 columns",
                path.display(),
                lineno + 2
            )));
        }
        let num = |i: usize| -> Result<f64, CliError> {
            parts[i].parse::<f64>().map_err(|e| {
                CliError::Parse(format!(
                    "{}:{}: column {}: {e}",
                    path.display(),
                    lineno + 2,
                    i + 1
                ))
            })
        };
        rows.push((
            num(0)?,
            num(1)?,
            num(2)?,
            num(3)?,
            num(4)?,
            parts[5].trim() == "1",
        ));
    }
    if rows.len() < 25 {
        return Err(CliError::Parse(
            "grid too small for interior residuals".into(),
        ));
    }
    // Infer the grid shape: x varies fastest.
    let nx = rows
        .iter()
        .position(|r| r.1 != rows[0].1)
        .unwrap_or(rows.len());
    if nx < 5 || !rows.len().is_multiple_of(nx) {
        return Err(CliError::Parse(
            "input is not a row-major rectangular grid".into(),
        ));
    }
    let ny = rows.len() / nx;
    if ny < 5 {
        return Err(CliError::Parse(
            "grid too small for interior residuals".into(),
        ));
    }
    let hx = rows[1].0 - rows[0].0;
    let hy = rows[nx].1 - rows[0].1;

    let at = |ix: usize, iy: usize| rows[iy * nx + ix];
    let mut max_resid = 0.0_f64;
    let mut sum_resid = 0.0_f64;
    let mut max_constraint = 0.0_f64;
    let mut counted = 0usize;
    for iy in 2..ny - 2 {
        for ix in 2..nx - 2 {
            let stencil_valid = (0..5).all(|k| at(ix - 2 + k, iy).5 && at(ix, iy - 2 + k).5);
            if !stencil_valid {
                continue;
            }
            let c = at(ix, iy);
            let d1 =
                |a: f64, b: f64, d: f64, e: f64, h: f64| (-e + 8.0 * d - 8.0 * b + a) / (12.0 * h);
            let d2 = |a: f64, b: f64, m: f64, d: f64, e: f64, h: f64| {
                (-e + 16.0 * d - 30.0 * m + 16.0 * b - a) / (12.0 * h * h)
            };
            let (xm2, xm1, xp1, xp2) = (
                at(ix - 2, iy),
                at(ix - 1, iy),
                at(ix + 1, iy),
                at(ix + 2, iy),
            );
            let (ym2, ym1, yp1, yp2) = (
                at(ix, iy - 2),
                at(ix, iy - 1),
                at(ix, iy + 1),
                at(ix, iy + 2),
            );
            let u_x = d1(xm2.2, xm1.2, xp1.2, xp2.2, hx);
            let v_x = d1(xm2.3, xm1.3, xp1.3, xp2.3, hx);
            let p_x = d1(xm2.4, xm1.4, xp1.4, xp2.4, hx);
            let u_y = d1(ym2.2, ym1.2, yp1.2, yp2.2, hy);
            let v_y = d1(ym2.3, ym1.3, yp1.3, yp2.3, hy);
            let p_y = d1(ym2.4, ym1.4, yp1.4, yp2.4, hy);
            let u_xx = d2(xm2.2, xm1.2, c.2, xp1.2, xp2.2, hx);
            let u_yy = d2(ym2.2, ym1.2, c.2, yp1.2, yp2.2, hy);
            let v_xx = d2(xm2.3, xm1.3, c.3, xp1.3, xp2.3, hx);
            let v_yy = d2(ym2.3, ym1.3, c.3, yp1.3, yp2.3, hy);
            let mom_x = -(u_xx + u_yy) + c.2 * u_x + c.3 * u_y + p_x;
            let mom_y = -(v_xx + v_yy) + c.2 * v_x + c.3 * v_y + p_y;
            let div = u_x + v_y;
            let r = (c.0 * c.0 + c.1 * c.1).sqrt();
            let norm = (1.0_f64).max((c.2 * c.2 + c.3 * c.3) / r);
            let resid = mom_x.abs().max(mom_y.abs()).max(div.abs()) / norm;
            max_resid = max_resid.max(resid);
            sum_resid += resid;
            counted += 1;
            if let Some(c0) = c0 {
                max_constraint = max_constraint.max((c.0 * c.3 - c.1 * c.2 - c0).abs());
            }
        }
    }
    if counted == 0 {
        return Err(CliError::Parse(
            "no interior points with a fully valid stencil".into(),
        ));
    }

    let text = json_report(
        "verify",
        json!({ "input": path.display().to_string(), "c0": c0 }),
        json!({
            "grid": { "nx": nx, "ny": ny, "hx": hx, "hy": hy },
            "interior_points": counted,
            "tolerance": tol,
        }),
        json!({
            "max_normalized": max_resid,
            "mean_normalized": sum_resid / counted as f64,
            "max_constraint": if c0.is_some() { json!(max_constraint) } else { serde_json::Value::Null },
        }),
    );
    emit(output.out.as_deref(), &text)?;
    if max_resid > tol {
        return Err(CliError::Threshold(format!(
            "max normalized residual {max_resid:e} against tolerance {tol:e}"
        )));
    }
    Ok(())
}

// ------------------------------------------------------------ global-solve

pub fn global_solve(
    mut n: Option<u32>,
    mut seed: Option<f64>,
    mut output: OutputFlags,
) -> Result<(), CliError> {
    let cfg = load_config(&output, &["n", "seed", "format", "out"])?;
    cfg.fill("n", &mut n)?;
    cfg.fill("seed", &mut seed)?;
    apply_output_config(&cfg, &mut output)?;
    let n = require(n, "n")?;
    if n == 0 {
        return Err(CliError::Parse("--n must be a positive integer".into()));
    }
    let seed = seed.unwrap_or(1.0);
    if !(seed > 0.0 && seed.is_finite()) {
        return Err(CliError::Parse("--seed must be positive".into()));
    }

    let sol = global_periodic_solve(n, seed)?;
    let (a, b, c) = sol.roots;
    log::info!(
        "n = {n}: roots ({a}, {b}, {c}), condition residual {:e}",
        sol.condition_residual
    );
    let n_sq = (n as f64) * (n as f64);
    let text = json_report(
        "global-solve",
        json!({ "n": n, "seed": seed }),
        json!({
            "roots": { "a": a, "b": b, "c": c },
            "c1": sol.source.c1,
            "c2": sol.source.c2,
            "flux": sol.flux,
            "flux_inequality": {
                "lhs": 4.0 + sol.flux / std::f64::consts::PI,
                "rhs": n_sq,
                "satisfied": sol.flux_inequality_ok,
            },
        }),
        json!({ "condition_residual": sol.condition_residual }),
    );
    emit(output.out.as_deref(), &text)
}

// --------------------------------------------------------------- nonradial

/// One sweep row: (theta, H, H', residual, valid).
type SweepRow = (f64, Option<(f64, f64, f64)>);

fn sweep_rows_closed_form(
    spec: &NonRadialSpec,
    range: ThetaRangeArg,
    samples: usize,
) -> Vec<SweepRow> {
    (0..samples)
        .map(|i| {
            let theta = range.lo + (range.hi - range.lo) * i as f64 / (samples.max(2) - 1) as f64;
            let row = match spec.variant() {
                NonRadialVariant::LinearOnly => Some((0.0, 0.0, 0.0)),
                _ => weierstrass_h_derivatives(theta, spec.c0(), spec.g3(), spec.shift())
                    .ok()
                    .and_then(|(h, h1, _)| {
                        lienard_residual(spec, theta).ok().map(|res| (h, h1, res))
                    }),
            };
            (theta, row)
        })
        .collect()
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut text = String::from(SWEEP_CSV_HEADER);
    text.push('\n');
    for (theta, row) in rows {
        match row {
            Some((h, dh, res)) => text.push_str(&format!(
                "{},{},{},{},1\n",
                fmt_f64(*theta),
                fmt_f64(*h),
                fmt_f64(*dh),
                fmt_f64(*res)
            )),
            None => text.push_str(&format!("{},nan,nan,nan,0\n", fmt_f64(*theta))),
        }
    }
    text
}

fn sweep_rows_json(rows: &[SweepRow]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|(theta, row)| match row {
                Some((h, dh, res)) => json!({
                    "theta": theta, "H": h, "dH": dh,
                    "residual": if res.is_nan() { serde_json::Value::Null } else { json!(res) },
                    "valid": 1,
                }),
                None => json!({
                    "theta": theta, "H": null, "dH": null, "residual": null, "valid": 0,
                }),
            })
            .collect(),
    )
}

const NONRADIAL_KEYS: &[&str] = &[
    "family",
    "c0",
    "c1",
    "g3",
    "wp-shift",
    "ctilde1",
    "branch",
    "grid",
    "theta-range",
    "samples",
    "h0",
    "h0-prime",
    "step",
    "threads",
    "format",
    "out",
];

#[allow(clippy::too_many_arguments)]
pub fn nonradial(
    mut spec: SpecFlags,
    mut grid: Option<GridArg>,
    mut theta_range: Option<ThetaRangeArg>,
    mut samples: Option<usize>,
    mut h0: Option<f64>,
    mut h0_prime: Option<f64>,
    mut step: Option<f64>,
    mut threads: Option<usize>,
    mut output: OutputFlags,
) -> Result<(), CliError> {
    let cfg = load_config(&output, NONRADIAL_KEYS)?;
    apply_spec_config(&cfg, &mut spec)?;
    apply_output_config(&cfg, &mut output)?;
    cfg.fill("grid", &mut grid)?;
    cfg.fill("theta-range", &mut theta_range)?;
    cfg.fill("samples", &mut samples)?;
    cfg.fill("h0", &mut h0)?;
    cfg.fill("h0-prime", &mut h0_prime)?;
    cfg.fill("step", &mut step)?;
    cfg.fill("threads", &mut threads)?;

    if spec.family.is_none() {
        spec.family = Some("weierstrass".into());
    }
    let SpecKind::NonRadial(nr) = build_spec(&spec)? else {
        return Err(CliError::Parse(
            "nonradial evaluates the non-radial families; use eval for f0..f7".into(),
        ));
    };

    match (grid, theta_range) {
        (Some(grid), None) => {
            let points = GridPoints { grid };
            let rows = field_rows(&points, threads, |x, y| {
                jhflow::nonradial::nonradial_field(&nr, x, y).ok()
            })?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => field_csv(&rows),
                Format::Json => json_report(
                    "nonradial",
                    spec_inputs_json(&spec),
                    json!({ "rows": field_rows_json(&rows) }),
                    serde_json::Value::Null,
                ),
            };
            emit(output.out.as_deref(), &text)
        }
        (None, Some(range)) => {
            let samples = samples.unwrap_or(201).max(2);
            let rows = if nr.variant() == NonRadialVariant::NumericLienard {
                let h0 = require(h0, "h0")?;
                let h0p = require(h0_prime, "h0-prime")?;
                let step = step.unwrap_or(1e-4);
                let init = LienardState::new(range.lo, h0, h0p)?;
                let traj = lienard_integrate(&nr, init, range.hi, step)?;
                let every = (traj.len() / samples).max(1);
                traj.iter()
                    .step_by(every)
                    .map(|s| (s.theta, Some((s.h, s.h_prime, f64::NAN))))
                    .collect()
            } else {
                sweep_rows_closed_form(&nr, range, samples)
            };
            // Pole-free window metadata around the middle of the range.
            let window = nr
                .pole_free_theta_window(0.5 * (range.lo + range.hi))
                .ok()
                .map(|(lo, hi)| {
                    json!({
                        "lo": if lo.is_finite() { json!(lo) } else { serde_json::Value::Null },
                        "hi": if hi.is_finite() { json!(hi) } else { serde_json::Value::Null },
                    })
                })
                .unwrap_or(serde_json::Value::Null);
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => sweep_csv(&rows),
                Format::Json => json_report(
                    "nonradial",
                    spec_inputs_json(&spec),
                    json!({
                        "pole_free_window": window,
                        "rows": sweep_rows_json(&rows),
                    }),
                    serde_json::Value::Null,
                ),
            };
            emit(output.out.as_deref(), &text)
        }
        _ => Err(CliError::Parse(
            "provide exactly one of --grid (field mode) or --theta-range (sweep mode)".into(),
        )),
    }
}

// ------------------------------------------------------------------ oracle

pub fn oracle(
    mut spec: SpecFlags,
    mut theta_range: Option<ThetaRangeArg>,
    mut step: Option<f64>,
    mut output: OutputFlags,
) -> Result<(), CliError> {
    let cfg = load_config(
        &output,
        &[
            "family",
            "c1",
            "c2",
            "const-c",
            "theta-range",
            "step",
            "format",
            "out",
        ],
    )?;
    apply_spec_config(&cfg, &mut spec)?;
    apply_output_config(&cfg, &mut output)?;
    cfg.fill("theta-range", &mut theta_range)?;
    cfg.fill("step", &mut step)?;

    let SpecKind::Radial { spec: profile, .. } = build_spec(&spec)? else {
        return Err(CliError::Parse(
            "oracle applies to the radial families".into(),
        ));
    };
    let range = require(theta_range, "theta-range")?;
    let step = step.unwrap_or(1e-4);
    let deviation = jhflow::verify::ode_oracle_compare(&profile, range.lo, range.hi, step)?;
    let text = json_report(
        "oracle",
        json!({
            "family": spec.family,
            "c1": spec.c1,
            "c2": spec.c2,
            "const_c": spec.const_c,
            "theta_range": { "lo": range.lo, "hi": range.hi },
            "step": step,
        }),
        json!({ "max_deviation": deviation }),
        serde_json::Value::Null,
    );
    emit(output.out.as_deref(), &text)
}
