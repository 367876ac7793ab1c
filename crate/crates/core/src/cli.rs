//! The `theta` command-line tool.
//!
//! Exit codes: 0 success, 2 malformed input, 3 matrix outside the Siegel
//! upper half space, 4 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::error::ThetaError;
use crate::io::{MatrixFile, ReduceOutput};
use crate::lattice::DEFAULT_MAX_ELLIPSOID_POINTS;
use crate::schottky::{even_theta_constants, schottky_null_in, DEFAULT_RANK_TOL};
use crate::siegel::{random_siegel, siegel_reduce};
use crate::theta::{theta_split, Characteristic, ContextOptions, DerivativeSpec, RiemannContext};

/// Environment variable overriding the ellipsoid point cap.
pub const MAX_ELLIPSOID_ENV: &str = "THETA_MAX_ELLIPSOID";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "theta", version, about = "Riemann theta functions with characteristics and derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate theta[m](z, tau), or a directional derivative of it
    Eval {
        /// JSON matrix file
        matrix: PathBuf,
        /// z as 2g reals, real and imaginary parts interleaved
        #[arg(allow_negative_numbers = true, required = true)]
        z: Vec<f64>,
        /// Characteristic "eps;delta", e.g. "10;01" or "1,0;0,1"
        #[arg(long = "char")]
        characteristic: Option<String>,
        /// Derivative directions: vectors separated by ';', entries by ','
        #[arg(long, allow_hyphen_values = true)]
        derivs: Vec<String>,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
        /// Evaluate at the matrix as given instead of its Siegel reduction
        #[arg(long)]
        no_siegel: bool,
        /// Also print the exponent E of value = mantissa * exp(E)
        #[arg(long)]
        split: bool,
        #[arg(long)]
        json: bool,
    },
    /// Siegel-reduce a matrix and print it with the symplectic transform
    Reduce { matrix: PathBuf },
    /// Print a random Riemann matrix
    Random {
        g: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Look for a vanishing even theta null and report the Hessian rank there
    SchottkyNull {
        matrix: PathBuf,
        /// Vanishing threshold; default 1e-6 times the largest even theta constant
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        rank_tol: f64,
    },
    /// Time context construction plus all even theta constants on random matrices
    Bench {
        g: usize,
        count: usize,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<ThetaError> for Failure {
    fn from(e: ThetaError) -> Self {
        let code = match e {
            ThetaError::NotPositiveDefinite { .. } | ThetaError::NotSymmetric { .. } => EXIT_DOMAIN,
            ref e if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_INPUT, message: format!("write failed: {e}") }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Eval { matrix, z, characteristic, derivs, eps, no_siegel, split, json } => {
            let tau = MatrixFile::read(&matrix)?.to_matrix()?;
            let g = tau.rows();
            if z.len() != 2 * g {
                return Err(input_error(format!("z needs {} reals (genus {g}), got {}", 2 * g, z.len())));
            }
            let z: Vec<Complex64> = z.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
            let m = match characteristic {
                Some(s) => s.parse::<Characteristic>()?,
                None => Characteristic::zero(g),
            };
            let spec = parse_derivs(&derivs)?;
            let options = ContextOptions { eps, nderivs: spec.order(), siegel: !no_siegel, max_points: max_points()? };
            let ctx = RiemannContext::new(&tau, options)?;
            if !ctx.gamma().matrix().is_identity() {
                writeln!(err, "note: evaluated at the Siegel-reduced matrix (see `theta reduce`)")?;
            }
            if ctx.reduction_stalled() {
                writeln!(err, "warning: Siegel reduction hit its iteration cap")?;
            }
            let value = theta_split(&z, &ctx, &m, &spec)?;
            if json {
                let mut body = if split {
                    json!({
                        "mantissa": [value.mantissa.re, value.mantissa.im],
                        "exponent": value.exponent,
                    })
                } else {
                    let v = value.value();
                    json!({ "value": [v.re, v.im] })
                };
                body["tau"] = json!({ "re": ctx.tau().re().to_rows(), "im": ctx.tau().im().to_rows() });
                writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("json value serialises"))?;
            } else if split {
                writeln!(out, "{}", format_complex(value.mantissa))?;
                writeln!(out, "exponent {}", value.exponent)?;
            } else {
                writeln!(out, "{}", format_complex(value.value()))?;
            }
        }
        Command::Reduce { matrix } => {
            let tau = MatrixFile::read(&matrix)?.to_matrix()?;
            let red = siegel_reduce(&tau)?;
            if red.stalled {
                writeln!(err, "warning: Siegel reduction hit its iteration cap")?;
            }
            let body = serde_json::to_string_pretty(&ReduceOutput::from(&red)).expect("reduce output serialises");
            writeln!(out, "{body}")?;
        }
        Command::Random { g, seed } => {
            if g == 0 {
                return Err(input_error("genus must be at least 1"));
            }
            writeln!(out, "{}", MatrixFile::from_matrix(&random_siegel(g, seed)).to_json())?;
        }
        Command::SchottkyNull { matrix, tol, eps, rank_tol } => {
            let tau = MatrixFile::read(&matrix)?.to_matrix()?;
            let options = ContextOptions { eps, nderivs: 2, siegel: true, max_points: max_points()? };
            let ctx = RiemannContext::new(&tau, options)?;
            match schottky_null_in(&ctx, tol, rank_tol)? {
                Some(report) => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serialises"))?
                }
                None => writeln!(out, "none")?,
            }
        }
        Command::Bench { g, count, eps, seed } => {
            if g == 0 || count == 0 {
                return Err(input_error("genus and count must be at least 1"));
            }
            let options = ContextOptions { eps, nderivs: 0, siegel: true, max_points: max_points()? };
            let mut times = Vec::with_capacity(count);
            for i in 0..count {
                let tau = random_siegel(g, seed.wrapping_add(i as u64));
                let start = Instant::now();
                let ctx = RiemannContext::new(&tau, options)?;
                even_theta_constants(&ctx)?;
                times.push(start.elapsed().as_secs_f64());
            }
            let (mean, std) = mean_std(&times);
            writeln!(out, "{mean:.6} {std:.6}")?;
        }
    }
    Ok(())
}

fn max_points() -> Result<usize, Failure> {
    match std::env::var(MAX_ELLIPSOID_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| input_error(format!("{MAX_ELLIPSOID_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_ELLIPSOID_POINTS),
    }
}

fn parse_derivs(args: &[String]) -> Result<DerivativeSpec, Failure> {
    let mut vectors = Vec::new();
    for arg in args {
        for vector in arg.split(';').filter(|s| !s.trim().is_empty()) {
            let parsed: Result<Vec<f64>, _> = vector.split(',').map(|x| x.trim().parse::<f64>()).collect();
            vectors.push(parsed.map_err(|_| input_error(format!("bad derivative direction {vector:?}")))?);
        }
    }
    Ok(DerivativeSpec::from_real(&vectors)?)
}

/// Sample mean and standard deviation (zero for a single sample).
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// `a + bi` with 15 decimals, or scientific notation for large magnitudes.
pub fn format_complex(v: Complex64) -> String {
    let large = v.re.abs().max(v.im.abs()) >= 1e6 || !v.re.is_finite() || !v.im.is_finite();
    let fmt = |x: f64| if large { format!("{x:.14e}") } else { format!("{x:.15}") };
    let re = fmt(v.re);
    let im = fmt(v.im.abs());
    // a negative imaginary part that rounds to zero prints as "+ 0.000..."
    let negative = v.im < 0.0 && im.chars().any(|c| ('1'..='9').contains(&c));
    format!("{re} {} {im}i", if negative { '-' } else { '+' })
}
