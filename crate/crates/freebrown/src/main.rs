//! Command-line front end.

use clap::{Parser, Subcommand};
use freebrown::cli::{self, PartialConfig, RunConfig};
use freebrown::density::Route;
use freebrown::matsim::Group;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "freebrown",
    about = "Brown measure of the free multiplicative Brownian motion: support region, density, unitary shadow, characteristics, and GL(N) Monte Carlo",
    version
)]
struct Args {
    /// JSON config file; command-line flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long, global = true)]
    print_config: bool,
    /// Time parameter t.
    #[arg(long, global = true)]
    t: Option<f64>,
    /// Grid size for tables.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Matrix dimension for simulate.
    #[arg(long = "N", global = true)]
    dim: Option<usize>,
    /// SDE step count for simulate.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Number of independent realizations for simulate.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Density route: omega | theta_derivative | phi_jacobian.
    #[arg(long, global = true)]
    route: Option<String>,
    /// Matrix group for simulate: gl | u.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Reduced verification suite (< 60 s).
    #[arg(long, global = true)]
    quick: bool,
    /// Also emit SVG outlines.
    #[arg(long, global = true)]
    svg: bool,
    /// Initial point for hj as "re,im".
    #[arg(long, global = true)]
    lambda0: Option<String>,
    /// Initial regularization for hj.
    #[arg(long, global = true)]
    x0: Option<f64>,
    /// Root-finding relative tolerance override.
    #[arg(long, global = true)]
    root_tol: Option<f64>,
    /// Membership band override.
    #[arg(long, global = true)]
    tol_band: Option<f64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Sample the region boundary and write its CSV (plus optional SVG).
    Region,
    /// Tabulate the density grid and write CSV + JSON metadata.
    Density,
    /// Tabulate the spectral density of free unitary Brownian motion.
    Biane,
    /// Tabulate the boundary angle map θ ↦ φ.
    Shadow,
    /// Integrate one characteristic trajectory and write CSV + constants.
    Hj,
    /// Run the Monte Carlo simulation and comparison report.
    Simulate,
    /// Run the verification suite; exit 1 on any failure.
    Verify,
}

impl From<Command> for cli::Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Region => cli::Subcommand::Region,
            Command::Density => cli::Subcommand::Density,
            Command::Biane => cli::Subcommand::Biane,
            Command::Shadow => cli::Subcommand::Shadow,
            Command::Hj => cli::Subcommand::Hj,
            Command::Simulate => cli::Subcommand::Simulate,
            Command::Verify => cli::Subcommand::Verify,
        }
    }
}

fn parse_route(s: &str) -> Result<Route, String> {
    match s {
        "omega" => Ok(Route::Omega),
        "theta_derivative" | "theta-derivative" => Ok(Route::ThetaDerivative),
        "phi_jacobian" | "phi-jacobian" => Ok(Route::PhiJacobian),
        other => Err(format!("unknown route '{other}' (expected omega | theta_derivative | phi_jacobian)")),
    }
}

fn parse_group(s: &str) -> Result<Group, String> {
    match s {
        "gl" | "GL" => Ok(Group::Gl),
        "u" | "U" => Ok(Group::U),
        other => Err(format!("unknown group '{other}' (expected gl | u)")),
    }
}

fn parse_lambda0(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("lambda0 must be 're,im', got '{s}'"));
    }
    let re: f64 = parts[0].trim().parse().map_err(|e| format!("lambda0 real part: {e}"))?;
    let im: f64 = parts[1].trim().parse().map_err(|e| format!("lambda0 imaginary part: {e}"))?;
    Ok((re, im))
}

fn build_flags(args: &Args) -> Result<PartialConfig, String> {
    Ok(PartialConfig {
        subcommand: args.command.map(Into::into),
        t: args.t,
        n: args.n,
        dim: args.dim,
        steps: args.steps,
        samples: args.samples,
        seed: args.seed,
        out: args.out.clone(),
        route: args.route.as_deref().map(parse_route).transpose()?,
        group: args.group.as_deref().map(parse_group).transpose()?,
        quick: if args.quick { Some(true) } else { None },
        svg: if args.svg { Some(true) } else { None },
        lambda0: args.lambda0.as_deref().map(parse_lambda0).transpose()?,
        x0: args.x0,
        root_tol: args.root_tol,
        tol_band: args.tol_band,
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let flags = match build_flags(&args) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cfg: RunConfig = match cli::resolve(args.config.as_deref(), &flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if args.print_config {
        match serde_json::to_string_pretty(&cfg) {
            Ok(s) => {
                println!("{s}");
                return ExitCode::SUCCESS;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    match cli::run(&cfg) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(freebrown::Error::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
