//! `qbound` binary: subcommand dispatch, output formatting, exit codes.
//!
//! Exit codes: 0 success, 1 input error, 2 mathematical violation.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qbound_cli::verify::{run_verify, QUBIT_RESIDUAL_TOL};
use qbound_cli::{io, sweep, Failure};
use qbound_core::relations::SLACK_TOL;
use qbound_core::{
    alpha_constant, bound_report, build_spin, casimir_residual, commutation_residual,
    maximally_mixed_demo, maximize_ratio, BoundReport, SeededStream,
};

#[derive(Parser)]
#[command(
    name = "qbound",
    version,
    about = "Variance-product bounds with a mixed-state commutator trade-off: \
             evaluate, verify, sweep, and certify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every bound term for one (state, A, B) triple of matrix files
    Bounds {
        /// Density-matrix JSON file
        #[arg(long)]
        state: PathBuf,
        /// First observable JSON file
        #[arg(long)]
        obs_a: PathBuf,
        /// Second observable JSON file
        #[arg(long)]
        obs_b: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Random (state, A, B) campaign counting slack violations
    Verify {
        /// Hilbert-space dimension
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Monte Carlo purity sweep of the averaged qubit bound terms
    Sweep {
        /// Purity grid MIN:MAX:STEP on [0.5, 1]
        #[arg(long, default_value = "0.5:1.0:0.05")]
        grid: String,
        /// Samples per grid point
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write here (atomically) instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Spin-j demonstration at the maximally mixed state
    Spin {
        /// Spin quantum number (half-integer)
        #[arg(long)]
        j: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Search for the optimal weighted commutator-norm constant
    Tightness {
        /// Strictly positive weight-matrix JSON file
        #[arg(long)]
        omega: PathBuf,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Qubit campaign that also enforces the exact-equality residual
    QubitEquality {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Applies `QBOUND_THREADS` to the global worker pool; 0 or unset means
/// automatic. Results never depend on this, only wall time does.
fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("QBOUND_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        Failure::Input(format!(
            "QBOUND_THREADS must be a nonnegative integer, got {raw:?}"
        ))
    })?;
    if n == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Bounds {
            state,
            obs_a,
            obs_b,
            format,
        } => cmd_bounds(&state, &obs_a, &obs_b, format),
        Command::Verify {
            dim,
            samples,
            seed,
            format,
        } => cmd_verify(dim, samples, seed, format, false),
        Command::QubitEquality {
            samples,
            seed,
            format,
        } => cmd_verify(2, samples, seed, format, true),
        Command::Sweep {
            grid,
            samples,
            seed,
            out,
            format,
        } => cmd_sweep(&grid, samples, seed, out.as_deref(), format),
        Command::Spin { j, hbar, format } => cmd_spin(j, hbar, format),
        Command::Tightness {
            omega,
            restarts,
            iters,
            seed,
            format,
        } => cmd_tightness(&omega, restarts, iters, seed, format),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Input(format!("json: {e}")))?;
    println!("{text}");
    Ok(())
}

fn print_csv<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(value)
        .map_err(|e| Failure::Input(format!("csv: {e}")))?;
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Input(format!("csv: {e}")))?;
    std::io::stdout()
        .write_all(&bytes)
        .map_err(|e| Failure::Input(e.to_string()))
}

fn print_row<T: Serialize>(value: &T, format: Option<Format>) -> Result<(), Failure> {
    match format.unwrap_or(Format::Json) {
        Format::Json => print_json(value),
        Format::Csv => print_csv(value),
    }
}

/// [`BoundReport`] with serialization; field order is the CSV column order.
#[derive(Serialize)]
struct BoundsOut {
    variance_a: f64,
    variance_b: f64,
    product: f64,
    robertson: f64,
    schrodinger_cov_sq: f64,
    new_tradeoff: f64,
    total_bound: f64,
    slack: f64,
}

impl From<BoundReport> for BoundsOut {
    fn from(r: BoundReport) -> Self {
        BoundsOut {
            variance_a: r.variance_a,
            variance_b: r.variance_b,
            product: r.product,
            robertson: r.robertson,
            schrodinger_cov_sq: r.schrodinger_cov_sq,
            new_tradeoff: r.new_tradeoff,
            total_bound: r.total_bound,
            slack: r.slack,
        }
    }
}

fn cmd_bounds(
    state: &std::path::Path,
    obs_a: &std::path::Path,
    obs_b: &std::path::Path,
    format: Option<Format>,
) -> Result<(), Failure> {
    let rho = io::load_density(state)?;
    let a = io::load_observable(obs_a)?;
    let b = io::load_observable(obs_b)?;
    let report = bound_report(&a, &b, &rho)?;
    print_row(&BoundsOut::from(report), format)?;
    if report.slack < -SLACK_TOL * (1.0 + report.product) {
        return Err(Failure::Violation(format!(
            "slack {:.6e} below -1e-9·(1 + product {:.6e})",
            report.slack, report.product
        )));
    }
    Ok(())
}

fn cmd_verify(
    dim: usize,
    samples: usize,
    seed: u64,
    format: Option<Format>,
    enforce_equality: bool,
) -> Result<(), Failure> {
    let summary = run_verify(dim, samples, seed)?;
    print_row(&summary, format)?;
    if summary.violations > 0 {
        return Err(Failure::Violation(format!(
            "{} of {} samples had slack below -1e-9·(1 + product)",
            summary.violations, summary.samples
        )));
    }
    if enforce_equality && summary.max_rel_residual > QUBIT_RESIDUAL_TOL {
        return Err(Failure::Violation(format!(
            "max equality residual {:.3e} exceeds {QUBIT_RESIDUAL_TOL:.0e}",
            summary.max_rel_residual
        )));
    }
    Ok(())
}

fn cmd_sweep(
    grid_spec: &str,
    samples: usize,
    seed: u64,
    out: Option<&std::path::Path>,
    format: Option<Format>,
) -> Result<(), Failure> {
    let grid = sweep::parse_grid(grid_spec)?;
    let rows = sweep::run_sweep(&grid, samples, seed)?;
    let bytes = match format.unwrap_or(Format::Csv) {
        Format::Csv => sweep::csv_bytes(&rows)?,
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&rows)
                .map_err(|e| Failure::Input(format!("json: {e}")))?;
            text.push('\n');
            text.into_bytes()
        }
    };
    match out {
        Some(path) => {
            io::write_atomic(path, &bytes)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| Failure::Input(e.to_string()))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SpinOut {
    j: f64,
    hbar: f64,
    dim: usize,
    alpha: f64,
    product: f64,
    bound: f64,
    robertson: f64,
    schrodinger_cov_sq: f64,
    commutation_residual: f64,
    casimir_residual: f64,
}

fn cmd_spin(j: f64, hbar: f64, format: Option<Format>) -> Result<(), Failure> {
    let sys = build_spin(j, hbar)?;
    let demo = maximally_mixed_demo(&sys)?;
    let out = SpinOut {
        j: sys.j(),
        hbar: sys.hbar(),
        dim: sys.dim(),
        alpha: alpha_constant(sys.j())?,
        product: demo.product,
        bound: demo.bound,
        robertson: demo.robertson,
        schrodinger_cov_sq: demo.cov_sq,
        commutation_residual: commutation_residual(&sys),
        casimir_residual: casimir_residual(&sys),
    };
    match format {
        None => {
            println!("j                     {}", out.j);
            println!("hbar                  {}", out.hbar);
            println!("dim                   {}", out.dim);
            println!("alpha                 {}", out.alpha);
            println!("product               {}", out.product);
            println!("bound                 {}", out.bound);
            println!("robertson             {}", out.robertson);
            println!("schrodinger_cov_sq    {}", out.schrodinger_cov_sq);
            println!("commutation_residual  {}", out.commutation_residual);
            println!("casimir_residual      {}", out.casimir_residual);
            Ok(())
        }
        Some(_) => print_row(&out, format),
    }
}

#[derive(Serialize)]
struct TightnessOut {
    dim: usize,
    c_target: f64,
    best_ratio: f64,
    gap: f64,
    restarts_used: usize,
    iterations_used: usize,
}

fn cmd_tightness(
    omega: &std::path::Path,
    restarts: usize,
    iters: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<(), Failure> {
    let w = io::load_positive(omega)?;
    let mut rng = SeededStream::new(seed);
    let cert = maximize_ratio(&w, restarts, iters, &mut rng)?;
    let out = TightnessOut {
        dim: w.dim(),
        c_target: cert.c_target,
        best_ratio: cert.best_ratio,
        gap: cert.c_target - cert.best_ratio,
        restarts_used: cert.restarts_used,
        iterations_used: cert.iterations_used,
    };
    print_row(&out, format)?;
    if cert.best_ratio > cert.c_target * (1.0 + 1e-9) {
        return Err(Failure::Violation(format!(
            "best ratio {:.12} exceeds the optimal constant {:.12}",
            cert.best_ratio, cert.c_target
        )));
    }
    Ok(())
}
