//! `hardy`: sharp fractional Hardy constants and numerical checks from the
//! command line.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{CliError, Report};

#[derive(Debug, Parser)]
#[command(
    name = "hardy",
    version,
    about = "Sharp fractional Hardy inequalities: constants and checks"
)]
pub struct Cli {
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for random instances.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

/// `(N, s, p)` flags.
#[derive(Debug, Clone, Copy, Args)]
pub struct ParamArgs {
    /// Dimension N.
    #[arg(long = "N")]
    pub dim: u32,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostArg {
    Abs,
    Square,
    Cube,
    /// `t_+ + 2 t_-`.
    Split,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sharp constant C_{N,s,p}.
    Constant(ParamArgs),
    /// Remainder constant c_p.
    Cp {
        #[arg(long)]
        p: f64,
    },
    /// Angular kernel Φ_{N,s,p}(r).
    Phi {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        r: f64,
    },
    /// Rayleigh quotients of the trial functions.
    Sharpness {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated, increasing.
        #[arg(long = "n", value_delimiter = ',', default_values_t = [10u64, 100, 1000])]
        n_list: Vec<u64>,
    },
    /// Remainder inequality for a radial function (p >= 2).
    RemainderCheck {
        #[command(flatten)]
        params: ParamArgs,
        /// Radial function file; a default profile is used otherwise.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Ground-state identity and remainder on a weighted graph.
    GraphCheck {
        /// Graph instance file.
        #[arg(long, conflicts_with = "random")]
        file: Option<PathBuf>,
        /// Random instance with this many nodes.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long)]
        p: f64,
    },
    /// Ground-state identity on the unit-weight path with p = 2.
    JacobiCheck {
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Rearrangement inequality on the integer lattice.
    RearrangeCheck {
        /// Enumerate all functions on {-M..M} with values 0..=MAXVAL.
        #[arg(long, num_args = 2, value_names = ["M", "MAXVAL"])]
        exhaustive: Option<Vec<u32>>,
        /// Lattice function file (`site value` lines).
        #[arg(long, conflicts_with = "exhaustive")]
        file: Option<PathBuf>,
        /// Kernel d^{-a}.
        #[arg(long, default_value_t = 1.5)]
        kernel_exponent: f64,
        #[arg(long, value_enum, default_value_t = CostArg::All)]
        cost: CostArg,
    },
    /// Lorentz quasinorm of a radial step function.
    Lorentz {
        /// Step function file (`radius height` lines).
        #[arg(long)]
        file: PathBuf,
        #[arg(long = "N")]
        dim: u32,
        #[arg(long)]
        q: f64,
        /// Second index; `inf` allowed.
        #[arg(long)]
        r: String,
    },
    /// Lorentz norm of a symmetric decreasing function against its weighted norm.
    SymmdecrCheck {
        #[command(flatten)]
        params: ParamArgs,
        /// Step function file; a seeded random one otherwise.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        layers: usize,
    },
    /// Fractional isoperimetric comparison for a ball (p = 1).
    IsoperimetricCheck {
        #[arg(long = "N")]
        dim: u32,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Gaussian subordination of |x|^{-N-ps}.
    GaussianCheck {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
    },
    /// Sharp constants over a parameter grid.
    Table {
        #[arg(long = "N", value_delimiter = ',', required = true)]
        dims: Vec<u32>,
        #[arg(long = "s", value_delimiter = ',', required = true)]
        s_list: Vec<f64>,
        #[arg(long = "p", value_delimiter = ',', required = true)]
        p_list: Vec<f64>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HARDY_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Invalid(format!(
            "HARDY_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("cannot size thread pool: {e}")))
}

fn emit(report: &Report, json: bool) -> ExitCode {
    let text = if json {
        report.to_json() + "\n"
    } else {
        report.to_text()
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {}", e.message());
        return e.exit_code();
    }
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        eprintln!("error: --tol must lie in (0, 1), got {}", cli.tol);
        return ExitCode::from(1);
    }
    let outcome = match &cli.command {
        Command::Table {
            dims,
            s_list,
            p_list,
            format,
        } => commands::table(&cli, dims, s_list, p_list, *format),
        other => commands::run(&cli, other).map(|r| emit(&r, cli.json)),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {}", e.message());
        e.exit_code()
    })
}
