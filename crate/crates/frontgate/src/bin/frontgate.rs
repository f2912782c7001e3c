//! Thin command-line front end: argument parsing only; all work happens in
//! the library's `cli` module.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "frontgate", version, about = "Bistable fronts, blocking barriers, and invasion simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Path to the JSON configuration document.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overridden by FRONTGATE_OUT).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweep commands.
    #[arg(long)]
    threads: Option<usize>,
    /// Reserved: all computations are deterministic.
    #[arg(long)]
    seedless: bool,
}

#[derive(Args)]
struct FiguresArgs {
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seedless: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Bistable traveling-wave speed of the configured model.
    Speed(Common),
    /// Interior zero and potential zero (theta, theta_c) of the model.
    #[command(name = "theta-c")]
    ThetaC(Common),
    /// Sweep eps -> int f h_eps^4 and report any sign change.
    #[command(name = "sign-curve")]
    SignCurve(Common),
    /// Enumerate standing blocking fronts at a given (C, L).
    Barrier(Common),
    /// Sample the minimal blocking half-length curve C -> L_*(C).
    #[command(name = "lstar-curve")]
    LstarCurve(Common),
    /// Minimal blocking coefficient C_*(L).
    Cstar(Common),
    /// Critical population jump ratio.
    Jump(Common),
    /// Compactly supported invasion propagule profile.
    Propagule(Common),
    /// Time-dependent simulation with outcome classification.
    Simulate(Common),
    /// Run every built-in figure recipe.
    Figures(FiguresArgs),
}

fn out_dir(cli_out: &PathBuf) -> PathBuf {
    match std::env::var_os("FRONTGATE_OUT") {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => cli_out.clone(),
    }
}

fn run(name: &str, common: &Common) -> Result<frontgate::report::ReportBundle, frontgate::cli::CliError> {
    let config = std::fs::read_to_string(&common.config)
        .map_err(|e| frontgate::cli::CliError::Config(format!("cannot read config: {e}")))?;
    frontgate::cli::run_command(name, Some(&config), &out_dir(&common.out), common.threads)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Speed(c) => run("speed", c),
        Command::ThetaC(c) => run("theta-c", c),
        Command::SignCurve(c) => run("sign-curve", c),
        Command::Barrier(c) => run("barrier", c),
        Command::LstarCurve(c) => run("lstar-curve", c),
        Command::Cstar(c) => run("cstar", c),
        Command::Jump(c) => run("jump", c),
        Command::Propagule(c) => run("propagule", c),
        Command::Simulate(c) => run("simulate", c),
        Command::Figures(args) => {
            frontgate::cli::run_command("figures", None, &out_dir(&args.out), args.threads)
        }
    };
    match result {
        Ok(bundle) => {
            println!("{} ok: {} file(s), config {}", bundle.command, bundle.files.len(), &bundle.config_hash[..12.min(bundle.config_hash.len())]);
            for f in &bundle.files {
                println!("  {}  {}", &f.sha256[..12], f.path);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(frontgate::cli::exit_code(&err) as u8)
        }
    }
}
