//! `motivekit`: run fibration, blow-up, inference and realization scenarios
//! and print deterministic reports.
//!
//! Exit status: 0 on success, 1 when an identity fails (or a realization is
//! rejected, or an inference goal is not derived), 2 on malformed input.

mod commands;
mod report;
mod scenario;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;
use report::Report;
use scenario::{Body, Kind, Scenario, Suite};

#[derive(Parser, Debug)]
#[command(name = "motivekit", version, about = "Symbolic Chow-motive decompositions of fibrations and blow-ups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Emit {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long, value_name = "FILE")]
    scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split h(X) for a fibration X → B and check the identities.
    Decompose(Common),
    /// Blow-up formula, its inverse and Chow–Künneth projectors.
    Blowup(Common),
    /// Saturate facts under the rule catalog and print traces.
    Infer {
        #[arg(long, value_name = "FILE", required_unless_present = "rules")]
        scenario: Option<PathBuf>,
        /// Print the rule catalog with citations.
        #[arg(long)]
        rules: bool,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// Poincaré-polynomial consistency and catalog lookups.
    Realize(Common),
    /// Sampled property suites.
    Verify {
        #[arg(long, value_enum, required_unless_present = "scenario")]
        suite: Option<Suite>,
        #[arg(long)]
        trials: Option<usize>,
        /// Defaults to MOTIVEKIT_SEED, then a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "FILE")]
        scenario: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
}

const DEFAULT_TRIALS: usize = 500;

fn load(path: &PathBuf, expected: Kind, command: &str) -> Result<Scenario, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let s = scenario::parse(&bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if s.kind != expected {
        return Err(Failure::input(format!(
            "{}: scenario kind `{}` does not match `{command}` (expected `{}`)",
            path.display(),
            s.kind.name(),
            expected.name()
        )));
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<(Report, Emit), Failure> {
    match cli.command {
        Command::Decompose(c) => {
            let s = load(&c.scenario, Kind::Fibration, "decompose")?;
            let Body::Fibration(b) = &s.body else { unreachable!() };
            Ok((commands::decompose(b, s.digest)?, c.emit))
        }
        Command::Blowup(c) => {
            let s = load(&c.scenario, Kind::Blowup, "blowup")?;
            let Body::Blowup(b) = &s.body else { unreachable!() };
            Ok((commands::blowup(b, s.digest)?, c.emit))
        }
        Command::Infer { scenario: _, rules: true, emit } => Ok((commands::rules(scenario::digest(b"rules")), emit)),
        Command::Infer { scenario, emit, .. } => {
            let path = scenario.expect("required unless --rules");
            let s = load(&path, Kind::Inference, "infer")?;
            let Body::Inference(b) = &s.body else { unreachable!() };
            Ok((commands::infer_facts(b, s.digest)?, emit))
        }
        Command::Realize(c) => {
            let s = load(&c.scenario, Kind::Realization, "realize")?;
            let Body::Realization(b) = &s.body else { unreachable!() };
            Ok((commands::realize(b, s.digest)?, c.emit))
        }
        Command::Verify { suite, trials, seed, scenario, emit } => {
            let (mut suite, mut trials, mut seed, mut digest) = (suite, trials, seed, None);
            if let Some(path) = scenario {
                let s = load(&path, Kind::Verify, "verify")?;
                let Body::Verify(b) = s.body else { unreachable!() };
                suite = suite.or(Some(b.suite));
                trials = trials.or(b.trials);
                seed = seed.or(b.seed);
                digest = Some(s.digest);
            }
            let suite = suite.expect("required unless --scenario");
            let trials = trials.unwrap_or(DEFAULT_TRIALS);
            let seed = seed.unwrap_or_else(motivekit_core::seed_from_env);
            let digest = digest.unwrap_or_else(|| {
                scenario::digest(format!("suite={};trials={trials};seed={seed}", suite.name()).as_bytes())
            });
            Ok((commands::verify(suite, trials, seed, digest)?, emit))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("motivekit: error: {line}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((report, emit)) => {
            let out = match emit {
                Emit::Text => report.to_text(),
                Emit::Json => report.to_json(),
            };
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if report.has_failure() {
                eprintln!("motivekit: error: verification failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("motivekit: error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
