use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tauberian::cli::{self, CmdOutput, Format, RunConfig, SweepKind};

#[derive(Parser)]
#[command(name = "tauberian", version, about = "Sharp Tauberian constants and their extremal examples")]
struct Args {
    /// Tolerance override, `NAME=VALUE` or `all=VALUE`; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    tol: Vec<String>,
    /// LP grid size (odd).
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, default_value = "table", global = true)]
    format: Format,
    #[arg(long, default_value_t = cli::DEFAULT_SEED, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every acceptance check.
    Verify,
    /// Print the constants table with provenance labels.
    Constants,
    /// CSV sweep of theta | u | delta | h.
    Sweep {
        what: SweepKind,
        #[arg(allow_hyphen_values = true)]
        lo: f64,
        #[arg(allow_hyphen_values = true)]
        hi: f64,
        steps: usize,
    },
    /// Lipschitz LP against the zig-zag family.
    Lp {
        #[arg(value_name = "N")]
        shift: u32,
        #[arg(allow_hyphen_values = true)]
        s: f64,
        #[arg(value_name = "I", allow_hyphen_values = true)]
        budget: f64,
        #[arg(default_value_t = cli::DEFAULT_GRID)]
        n: usize,
    },
}

fn config(args: &Args) -> tauberian::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    cfg.format = args.format;
    cfg.seed = args.seed;
    for t in &args.tol {
        cfg.set_tolerance(t)?;
    }
    if let Some(n) = args.grid {
        cfg = cfg.with_grid(n)?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let out = match config(&args) {
        Ok(cfg) => match args.command {
            Command::Verify => cli::cmd_verify(&cfg),
            Command::Constants => cli::cmd_constants(&cfg),
            Command::Sweep { what, lo, hi, steps } => cli::cmd_sweep(what, lo, hi, steps, &cfg),
            Command::Lp { shift, s, budget, n } => cli::cmd_lp(shift, s, budget, n, &cfg),
        },
        Err(e) => CmdOutput { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
