use std::path::PathBuf;
use std::process::ExitCode;

use bounds::BoundConstants;
use clap::{Args, Parser, Subcommand};
use fock_core::par::init_threads;
use fock_core::Exec;
use squash_cli::config::Config;
use squash_cli::{appendix, bounds_check, demo, figure3, sample, CliError, Context, Outcome, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(name = "squashsim", version, about = "Squashed-detector bounds: sweeps, suites, verification and demos")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// TOML scenario file; built-in defaults when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the seed in the config file.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads; 1 runs sequentially, 0 lets the pool decide.
    #[arg(long, value_name = "N", default_value_t = 0)]
    threads: usize,
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified moment intervals over an LO-intensity sweep.
    Figure3(Common),
    /// Random-state suites for every deviation inequality.
    BoundsCheck(Common),
    /// Constants, closed forms, block positivity, scalar lemmas, identities.
    VerifyAppendix(Common),
    /// Sum-criterion certification of two-mode squeezed vacuum.
    EntanglementDemo(Common),
    /// Seeded count records from one detector.
    Sample(Common),
}

fn execute(command: &Command) -> Result<Outcome, CliError> {
    let common = match command {
        Command::Figure3(c)
        | Command::BoundsCheck(c)
        | Command::VerifyAppendix(c)
        | Command::EntanglementDemo(c)
        | Command::Sample(c) => c,
    };
    let cfg = match &common.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let exec = if common.threads == 1 { Exec::Sequential } else { Exec::Parallel };
    if common.threads > 1 {
        init_threads(common.threads);
    }
    let ctx = Context { seed: common.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED), exec, out: common.out.clone() };
    let consts = BoundConstants::stated();
    match command {
        Command::Figure3(_) => figure3::run(&cfg.figure3, &consts, &ctx),
        Command::BoundsCheck(_) => bounds_check::run(&cfg.bounds_check, &consts, &ctx),
        Command::VerifyAppendix(_) => appendix::run(&cfg.verify_appendix, &ctx),
        Command::EntanglementDemo(_) => demo::run(&cfg.entanglement_demo, &consts, &ctx),
        Command::Sample(_) => sample::run(&cfg.sample, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            println!("{}", if outcome.passed { "PASS" } else { "FAIL" });
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
