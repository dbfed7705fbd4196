//! `jhflow` command-line interface: classification queries, field sampling
//! to CSV/JSON, verification reports, global-solution search, and non-radial
//! evaluation.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// CLI failure with its documented exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed values, malformed config (exit 2).
    Parse(String),
    /// Inadmissible spec or evaluation domain error (exit 3).
    Spec(jhflow::Error),
    /// Filesystem failure (exit 4).
    Io(std::io::Error),
    /// A verification threshold was exceeded (exit 5).
    Threshold(String),
    /// The global-solution search found no bracket (exit 6).
    NoBracket(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Spec(_) => 3,
            CliError::Io(_) => 4,
            CliError::Threshold(_) => 5,
            CliError::NoBracket(_) => 6,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Parse(m) => format!("error: {m}"),
            CliError::Spec(e) => format!("error: {e}"),
            CliError::Io(e) => format!("i/o error: {e}"),
            CliError::Threshold(m) => format!("verification failed: {m}"),
            CliError::NoBracket(m) => format!("no bracket: {m}"),
        }
    }
}

impl From<jhflow::Error> for CliError {
    fn from(e: jhflow::Error) -> Self {
        match e {
            jhflow::Error::NoBracket(m) => CliError::NoBracket(m),
            other => CliError::Spec(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected csv or json, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

impl FromStr for BranchArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plus" | "+" => Ok(BranchArg::Plus),
            "minus" | "-" => Ok(BranchArg::Minus),
            other => Err(format!("expected plus or minus, got {other:?}")),
        }
    }
}

/// Rectangular sampling grid: "xmin,xmax,ymin,ymax,nx,ny".
#[derive(Debug, Clone, Copy)]
pub struct GridArg {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for GridArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err("grid must be \"xmin,xmax,ymin,ymax,nx,ny\"".into());
        }
        let num = |i: usize| -> Result<f64, String> {
            parts[i]
                .parse::<f64>()
                .map_err(|e| format!("grid component {}: {e}", i + 1))
        };
        let count = |i: usize| -> Result<usize, String> {
            parts[i]
                .parse::<usize>()
                .map_err(|e| format!("grid component {}: {e}", i + 1))
        };
        let grid = GridArg {
            x_min: num(0)?,
            x_max: num(1)?,
            y_min: num(2)?,
            y_max: num(3)?,
            nx: count(4)?,
            ny: count(5)?,
        };
        let ordered = grid.x_min < grid.x_max && grid.y_min < grid.y_max;
        if !ordered {
            return Err("grid requires xmin < xmax and ymin < ymax".into());
        }
        if grid.nx < 1 || grid.ny < 1 || grid.nx.saturating_mul(grid.ny) > 10_000_000 {
            return Err("grid requires 1 <= nx*ny <= 1e7".into());
        }
        Ok(grid)
    }
}

/// Closed angular range "a,b" with a < b.
#[derive(Debug, Clone, Copy)]
pub struct ThetaRangeArg {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for ThetaRangeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err("theta-range must be \"a,b\"".into());
        }
        let lo = parts[0].parse::<f64>().map_err(|e| e.to_string())?;
        let hi = parts[1].parse::<f64>().map_err(|e| e.to_string())?;
        let ordered = lo < hi;
        if !ordered {
            return Err("theta-range requires a < b".into());
        }
        Ok(ThetaRangeArg { lo, hi })
    }
}

/// Cone clip "thetamin,thetamax" (opening angle in (0, 2pi]).
#[derive(Debug, Clone, Copy)]
pub struct ConeArg {
    pub theta_min: f64,
    pub theta_max: f64,
}

impl FromStr for ConeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err("cone must be \"thetamin,thetamax\"".into());
        }
        let theta_min = parts[0].parse::<f64>().map_err(|e| e.to_string())?;
        let theta_max = parts[1].parse::<f64>().map_err(|e| e.to_string())?;
        Ok(ConeArg {
            theta_min,
            theta_max,
        })
    }
}

/// Flags shared by every spec-constructing subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct SpecFlags {
    /// Solution family: f0..f7 (radial), or
    /// linear|weierstrass|degenerate|numeric (non-radial).
    #[arg(long)]
    pub family: Option<String>,

    /// Parameter C1 of the cubic h^3 + 6h^2 + 6*C1*h + C2.
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,

    /// Parameter C2 of the cubic.
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,

    /// Free profile constant C (for f0: the constant profile value).
    #[arg(long = "const-c", allow_negative_numbers = true)]
    pub const_c: Option<f64>,

    /// Swirl constant C0 of non-radial solutions (xv = yu + C0).
    #[arg(long, allow_negative_numbers = true)]
    pub c0: Option<f64>,

    /// Weierstrass invariant g3.
    #[arg(long, allow_negative_numbers = true)]
    pub g3: Option<f64>,

    /// Weierstrass argument shift C in P(tau + C; 0, g3).
    #[arg(long = "wp-shift", allow_negative_numbers = true)]
    pub wp_shift: Option<f64>,

    /// Linear coefficient Ctilde1 given directly (alternative to --c1 with
    /// --branch for the linear family).
    #[arg(long, allow_negative_numbers = true)]
    pub ctilde1: Option<f64>,

    /// Branch of Ctilde1 = -2 +/- sqrt(4 - C0^2 - 2*C1).
    #[arg(long)]
    pub branch: Option<BranchArg>,

    /// Evaluate radial fields through the auxiliary angle on the slit plane.
    #[arg(long)]
    pub extended: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputFlags {
    /// Output format (default csv for samples, json for reports).
    #[arg(long)]
    pub format: Option<Format>,

    /// Output path; stdout when omitted. Files are written atomically.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Configuration file with key=value lines; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "jhflow",
    version,
    about = "Self-similar solutions of the planar stationary Navier-Stokes equations: \
             classification, exact fields, and numerical verification",
    after_help = "Log verbosity is controlled by the JHFLOW_LOG environment variable \
                  (error, warn, info, debug, trace)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a parameter point (C1, C2) into its bifurcation region.
    Classify {
        #[command(flatten)]
        spec: SpecFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Sample a radial solution field on a grid (CSV: x,y,u,v,p,valid).
    Eval {
        #[command(flatten)]
        spec: SpecFlags,
        /// Sampling grid "xmin,xmax,ymin,ymax,nx,ny".
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridArg>,
        /// Optional cone clip "thetamin,thetamax".
        #[arg(long, allow_hyphen_values = true)]
        cone: Option<ConeArg>,
        /// Parallel grid evaluation with this many threads.
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Verify a field against the PDE: residual report, nonzero exit on
    /// threshold violation.
    Verify {
        #[command(flatten)]
        spec: SpecFlags,
        /// Verify a previously sampled CSV grid instead of a constructed
        /// spec.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of sample points in spec mode.
        #[arg(long)]
        samples: Option<usize>,
        /// Residual threshold (default 1e-6).
        #[arg(long)]
        tol: Option<f64>,
        /// Scale u by this factor before verification (testing aid).
        #[arg(long)]
        corrupt: Option<f64>,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Solve the global-periodicity condition for n periods.
    GlobalSolve {
        /// Number of periods n >= 1.
        #[arg(long)]
        n: Option<u32>,
        /// Search-path parameter (c - b stays at this value; default 1.0).
        #[arg(long)]
        seed: Option<f64>,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Evaluate a non-radial solution: grid samples or an H(theta) sweep.
    Nonradial {
        #[command(flatten)]
        spec: SpecFlags,
        /// Sampling grid "xmin,xmax,ymin,ymax,nx,ny" (field mode).
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridArg>,
        /// Angular range "a,b" (profile-sweep mode).
        #[arg(long = "theta-range", allow_hyphen_values = true)]
        theta_range: Option<ThetaRangeArg>,
        /// Number of sweep samples (default 201).
        #[arg(long)]
        samples: Option<usize>,
        /// Initial H(a) for the numeric variant sweep.
        #[arg(long, allow_negative_numbers = true)]
        h0: Option<f64>,
        /// Initial H'(a) for the numeric variant sweep.
        #[arg(long = "h0-prime", allow_negative_numbers = true)]
        h0_prime: Option<f64>,
        /// Integrator step for the numeric variant (default 1e-4).
        #[arg(long)]
        step: Option<f64>,
        /// Parallel grid evaluation with this many threads.
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Compare a closed-form radial profile against an RK4 integration of
    /// the angular equation.
    Oracle {
        #[command(flatten)]
        spec: SpecFlags,
        /// Angular range "a,b" to integrate over.
        #[arg(long = "theta-range", allow_hyphen_values = true)]
        theta_range: Option<ThetaRangeArg>,
        /// RK4 step (default 1e-4).
        #[arg(long)]
        step: Option<f64>,
        #[command(flatten)]
        output: OutputFlags,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("JHFLOW_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify { spec, output } => commands::classify(spec, output),
        Command::Eval {
            spec,
            grid,
            cone,
            threads,
            output,
        } => commands::eval(spec, grid, cone, threads, output),
        Command::Verify {
            spec,
            input,
            samples,
            tol,
            corrupt,
            output,
        } => commands::verify(spec, input, samples, tol, corrupt, output),
        Command::GlobalSolve { n, seed, output } => commands::global_solve(n, seed, output),
        Command::Nonradial {
            spec,
            grid,
            theta_range,
            samples,
            h0,
            h0_prime,
            step,
            threads,
            output,
        } => commands::nonradial(
            spec,
            grid,
            theta_range,
            samples,
            h0,
            h0_prime,
            step,
            threads,
            output,
        ),
        Command::Oracle {
            spec,
            theta_range,
            step,
            output,
        } => commands::oracle(spec, theta_range, step, output),
    };
    if let Err(err) = result {
        eprintln!("{}", err.message());
        std::process::exit(err.exit_code());
    }
}
