mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "sl3", version, about = "Numerical checks for spherical functions, Hecke operators and lattice counts on SL(3)")]
struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the file and the SL3_OUTPUT_DIR variable).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cross-formula, Weyl and wall suites for the spherical function.
    Spherical(SphericalArgs),
    /// Hecke algebra checks.
    Hecke {
        #[command(subcommand)]
        action: HeckeAction,
    },
    /// Kernel construction, growth fit and regime table.
    Kernel(KernelArgs),
    /// Count integer matrices near the orthogonal group.
    Count(CountArgs),
    /// Geometric side of the amplified trace formula.
    Geomside(GeomArgs),
    /// Geometric side and the optimal amplifier length.
    Supnorm(SupnormArgs),
    /// Fast smoke test of every module.
    Selftest,
}

#[derive(Args, Debug)]
pub struct SphericalArgs {
    /// Spectral parameter as two comma-separated complex numbers, e.g. `i2,i3` or `-1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Points per axis of the chamber grid.
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
}

#[derive(Subcommand, Debug)]
enum HeckeAction {
    /// Verify the six composition identities for `T_p`, `T_q` and their duals.
    Linearize {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    /// Spectral parameters, comma separated.
    #[arg(long = "T", value_delimiter = ',', num_args = 1..)]
    pub t: Option<Vec<f64>>,
    /// Write the tabulated kernel as CSV.
    #[arg(long)]
    pub export: bool,
    /// Points per axis of the exported table.
    #[arg(long, default_value_t = 61)]
    pub table: usize,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub l: u64,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 0.0)]
    pub d1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub d2: f64,
    /// Count at the identity (the default).
    #[arg(long, conflicts_with = "compact")]
    pub at_identity: bool,
    /// Compact base point `x1,x2,x3,b1,b2`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub compact: Option<Vec<f64>>,
    /// Include witness matrices.
    #[arg(long)]
    pub witnesses: bool,
    /// Also write count-versus-bound data on a 4x4 grid of boxes up to (d1, d2).
    #[arg(long)]
    pub scatter: bool,
}

#[derive(Args, Debug)]
pub struct GeomArgs {
    #[arg(long = "L")]
    pub l: Option<u64>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Write the per-term table as CSV.
    #[arg(long)]
    pub export: bool,
}

#[derive(Args, Debug)]
pub struct SupnormArgs {
    #[arg(long = "L")]
    pub l: Option<u64>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Only solve for the optimal amplifier length.
    #[arg(long)]
    pub optimize: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match RunConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(out) = cli.out {
        cfg.output_dir = out;
    }
    let result = match cli.command {
        Command::Spherical(a) => commands::spherical(&cfg, &a),
        Command::Hecke { action: HeckeAction::Linearize { p, q } } => commands::hecke_linearize(&cfg, p, q),
        Command::Kernel(a) => commands::kernel(&mut cfg, &a),
        Command::Count(a) => commands::count(&cfg, &a),
        Command::Geomside(a) => commands::geomside(&mut cfg, &a),
        Command::Supnorm(a) => commands::supnorm(&mut cfg, &a),
        Command::Selftest => commands::selftest(&cfg),
    };
    match result {
        Ok(report) => {
            print!("{}", report.to_json());
            if let Err(e) = report.write(&cfg.output_dir) {
                eprintln!("error: {e:#}");
                return ExitCode::from(3);
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<commands::UsageError>().is_some();
            ExitCode::from(if usage { 2 } else { 3 })
        }
    }
}
