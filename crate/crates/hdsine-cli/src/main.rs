//! Batch experiment driver: identity residual sweeps, semimetric fuzz
//! audits, functional-equation grids, tube-bound checks, and concentration
//! runs, with reproducible seeds and machine-readable output.
//!
//! Exit codes: 0 when every checked property holds, 1 on usage or
//! parameter errors, 2 when a property is violated (the offending instance
//! is serialized for replay).

mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use output::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hdsine",
    version,
    about = "Experiment driver for high-dimensional sine inequalities and concentration bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Output file for the result rows (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Where to serialize the offending instance on a violation
    /// (defaults to `<out>.violation.json`, or `violation.json`).
    #[arg(long)]
    dump: Option<PathBuf>,
}

impl OutputOpts {
    fn format(&self) -> Result<Format, String> {
        Format::parse(&self.format)
    }

    fn dump_path(&self) -> PathBuf {
        if let Some(d) = &self.dump {
            return d.clone();
        }
        match &self.out {
            Some(out) => {
                let mut s = out.as_os_str().to_os_string();
                s.push(".violation.json");
                PathBuf::from(s)
            }
            None => PathBuf::from("violation.json"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Seeded fuzz audit of the simplex inequality for one sine kind.
    Semimetric {
        /// Sine kind: polar or hyper.
        #[arg(long)]
        kind: String,
        /// Intrinsic dimension (tuples have d+1 vectors).
        #[arg(long)]
        d: usize,
        /// Ambient dimension (at least d+1).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Residual sweep of the splitting identities in ambient dimension d+1.
    Identities {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10_000)]
        contexts: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scaling choice: random, uniform (1/|v_i|), or faces.
        #[arg(long, default_value = "random")]
        beta: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Functional-equation residual grid for a function family.
    Funceq {
        /// Family: sk, square, cosine, or perturbed.
        #[arg(long)]
        family: String,
        /// Amplitude for the sk family.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Curvature for the sk family.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        k: f64,
        /// Grid points per axis.
        #[arg(long, default_value_t = 40)]
        grid: usize,
        #[arg(long, default_value_t = -1.5, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.5)]
        hi: f64,
        /// Scaled-residual tolerance for membership.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Monte Carlo verification of the concentration bound.
    Concentration {
        /// Regularity exponent of the sampler.
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        eps: f64,
        /// Samples per ball.
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        /// Explicit comma-separated radii.
        #[arg(long)]
        radii: Option<String>,
        /// Log-spaced radii as `lo:hi:count` (default 0.01:1:7).
        #[arg(long = "radii-decades")]
        radii_decades: Option<String>,
        /// Number of random (S, w) configurations.
        #[arg(long, default_value_t = 20)]
        configs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampler: auto, plane, cantor, or ball.
        #[arg(long, default_value = "auto")]
        sampler: String,
        /// Override the relaxation constant (defaults to the closed-form
        /// constant for the sampler's parameters).
        #[arg(long = "c-override")]
        c_override: Option<f64>,
        /// Ambient dimension (defaults to d+2 for plane/cantor, gamma for
        /// the full-dimensional ball).
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Tube measure bound sweep over an (epsilon, radius) grid.
    TubeBound {
        /// Sampler: plane or cantor.
        #[arg(long)]
        sampler: String,
        /// Regularity exponent (plane: integer plane dimension; cantor:
        /// fractional in (d-1, d)).
        #[arg(long)]
        gamma: f64,
        /// Tube subspace dimension.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Comma-separated epsilon grid.
        #[arg(long = "eps-list", default_value = "0,0.1,0.3,1")]
        eps_list: String,
        /// Comma-separated radii.
        #[arg(long, default_value = "0.05,0.3,1")]
        radii: String,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Re-evaluate a serialized instance with verbose intermediate values.
    Replay {
        /// Instance file produced by a prior violation dump.
        #[arg(long)]
        file: PathBuf,
    },
}

/// Errors carrying the intended process exit code.
pub enum CliError {
    /// Bad usage or parameters: exit 1.
    Usage(String),
    /// A checked property failed: exit 2.
    Violation(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<hdsine::Error> for CliError {
    fn from(e: hdsine::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {e}"))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Semimetric {
            kind,
            d,
            n,
            trials,
            seed,
            output,
        } => commands::semimetric::run(&kind, d, n, trials, seed, &output),
        Command::Identities {
            d,
            contexts,
            seed,
            beta,
            output,
        } => commands::identities::run(d, contexts, seed, &beta, &output),
        Command::Funceq {
            family,
            c,
            k,
            grid,
            lo,
            hi,
            tol,
            output,
        } => commands::funceq::run(&family, c, k, grid, lo, hi, tol, &output),
        Command::Concentration {
            gamma,
            d,
            eps,
            samples,
            radii,
            radii_decades,
            configs,
            seed,
            sampler,
            c_override,
            n,
            output,
        } => commands::concentration::run(commands::concentration::Params {
            gamma,
            d,
            eps,
            samples,
            radii,
            radii_decades,
            configs,
            seed,
            sampler,
            c_override,
            n,
            output,
        }),
        Command::TubeBound {
            sampler,
            gamma,
            m,
            eps_list,
            radii,
            samples,
            seed,
            output,
        } => commands::tube::run(&sampler, gamma, m, &eps_list, &radii, samples, seed, &output),
        Command::Replay { file } => commands::replay::run(&file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(2)
        }
    }
}
