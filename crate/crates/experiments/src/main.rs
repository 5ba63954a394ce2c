use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use clap::{Parser, Subcommand, ValueEnum};
use log::{info, warn};
use optomech::check::{report, run_check};
use optomech::config::Config;
use optomech::runs::{run_fig2, run_fig3, run_fig4, run_fig5, run_fig6, run_sweep, write_output, Context, RunOptions};
use optomech_core::observables::TransferFrame;

/// Default output directory when --out is not given.
const OUT_ENV: &str = "OPTOMECH_OUT";

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(version, about = "Reproduce the squeezing and state-transfer figures of the hybrid atom-optomechanical model")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat key = value config file (SI units). Missing keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory [default: $OPTOMECH_OUT, else ./out]
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Integrate covariances numerically including the oscillating noise term.
    #[arg(long, global = true)]
    include_nt: bool,

    /// Quadratures used to compare transferred states.
    #[arg(long, global = true, value_enum, default_value_t = FrameArg::Bogoliubov)]
    frame: FrameArg,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Enhanced couplings versus input power.
    Fig2,
    /// Atomic squeezing versus atom-field coupling.
    Fig3,
    /// Peak squeezing versus cavity damping and temperature.
    Fig4,
    /// Transfer fidelity versus enhanced coupling.
    Fig5,
    /// Transfer fidelity versus damping, atom coupling and temperature.
    Fig6,
    /// Cartesian sweep declared by the sweep_* config keys.
    Sweep,
    /// RWA and physicality diagnostics.
    Check,
}

#[derive(ValueEnum, Clone, Copy)]
enum FrameArg {
    Bogoliubov,
    Bare,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("config error: cannot read {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        },
        None => String::new(),
    };
    let cfg = match Config::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let opts = RunOptions {
        workers: cli.workers,
        include_nt: cli.include_nt,
        frame: match cli.frame {
            FrameArg::Bogoliubov => TransferFrame::Bogoliubov,
            FrameArg::Bare => TransferFrame::Bare,
        },
    };
    let ctx = match Context::new(cfg, opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let out_dir = cli
        .out
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    let started = SystemTime::now();
    let clock = Instant::now();
    let (output, checks_ok) = match cli.command {
        Command::Fig2 => (run_fig2(&ctx), true),
        Command::Fig3 => (run_fig3(&ctx), true),
        Command::Fig4 => (run_fig4(&ctx), true),
        Command::Fig5 => (run_fig5(&ctx), true),
        Command::Fig6 => (run_fig6(&ctx), true),
        Command::Sweep => (run_sweep(&ctx), true),
        Command::Check => run_check(&ctx),
    };
    info!("{} finished in {:.2} s", output.experiment, clock.elapsed().as_secs_f64());

    let written = match write_output(&ctx, &output, &out_dir, cli.config.as_deref(), &text, started, clock) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("config error: cannot write to {}: {e}", out_dir.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if matches!(cli.command, Command::Check) {
        print!("{}", report(output.table("check")));
    }
    for f in &written.files {
        println!("wrote {}", f.display());
    }
    println!("wrote {}", written.manifest.display());

    let d = &output.diagnostics;
    if d.rwa_violations > 0 {
        info!("{} of {} points outside the RWA threshold", d.rwa_violations, d.points);
    }
    if d.failed > 0 || !checks_ok {
        for e in &d.errors {
            warn!("{e}");
        }
        eprintln!("numerical failure: {} of {} points failed (see {})", d.failed, d.points, written.manifest.display());
        return ExitCode::from(EXIT_NUMERICAL);
    }
    ExitCode::SUCCESS
}
