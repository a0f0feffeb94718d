use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mahler_forge::builder::{build_construction_with, describe, BuildConfig, BuildError, DerivativeCap};
use mahler_forge::checker::{verify, Suite};
use mahler_forge::evaluator::{eval_certified, eval_certified_within, EvalError};
use mahler_forge::log::Construction;
use mahler_forge::qpoly::rational::parse_rational;
use mahler_forge::qpoly::GaussianRational;
use mahler_forge::targets::{default_schedule, TargetSchedule};

const EXIT_FAILURE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_MALFORMED: u8 = 3;

#[derive(Parser)]
#[command(name = "mahler-forge", version, about = "Build, verify and evaluate certified stages of an entire function with prescribed algebraic preimages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build stages 1..=N and write the construction log.
    Construct {
        #[arg(long, default_value_t = 2)]
        stages: usize,
        /// `paper` tracks j ≤ n at step n; `J<k>` caps the derivative order at k.
        #[arg(long, default_value = "paper")]
        mode: DerivativeCap,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Target schedule JSON (list of blocks); the default enumeration otherwise.
        #[arg(long)]
        targets: Option<PathBuf>,
        #[arg(long, default_value = "construction.json")]
        out: PathBuf,
        /// Deepest arc bisection level for circle certificates.
        #[arg(long)]
        radius_budget: Option<u32>,
        #[arg(long)]
        expansion_ceiling: Option<usize>,
    },
    /// Re-check every certificate of a log; exit 0 iff all checks pass.
    Verify {
        log: PathBuf,
        /// Restrict to some suites (conditions, rouche, stability, values).
        #[arg(long)]
        suite: Vec<Suite>,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print only failures and the summary.
        #[arg(long)]
        quiet: bool,
    },
    /// Certified value of the limit function (or a derivative) at a point.
    Eval {
        log: PathBuf,
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 0)]
        deriv: usize,
        /// Radius of the ball the tail bound covers (defaults to |z|).
        #[arg(long)]
        radius: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the default target schedule as JSON.
    Targets {
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn init_threads() {
    if let Ok(v) = std::env::var("MAHLER_FORGE_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring MAHLER_FORGE_THREADS={v:?}"),
        }
    }
}

fn load_log(path: &PathBuf) -> Result<Construction, ExitCode> {
    Construction::load(path).map_err(|e| fail(EXIT_MALFORMED, format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();
    match cli.command {
        Command::Construct {
            stages,
            mode,
            seed,
            targets,
            out,
            radius_budget,
            expansion_ceiling,
        } => {
            let needed = stages.saturating_sub(1).max(1);
            let schedule = match targets {
                Some(p) => match TargetSchedule::load(&p) {
                    Ok(s) => s,
                    Err(e) => return fail(EXIT_MALFORMED, format!("{}: {e}", p.display())),
                },
                None => default_schedule(needed),
            };
            let mut config = BuildConfig {
                schedule,
                max_stage: stages,
                cap: mode,
                seed,
                ..BuildConfig::default()
            };
            if let Some(d) = radius_budget {
                config.budget.max_depth = d;
                config.budget.tight_depth = config.budget.tight_depth.min(d);
            }
            if let Some(e) = expansion_ceiling {
                config.expansion_ceiling = e;
            }
            let built = build_construction_with(&config, |st| eprintln!("{}", describe(st)));
            match built {
                Ok(c) => match c.save(&out) {
                    Ok(()) => {
                        eprintln!("wrote {}", out.display());
                        ExitCode::SUCCESS
                    }
                    Err(e) => fail(EXIT_FAILURE, e),
                },
                Err(e @ (BuildError::Config(_) | BuildError::Targets(_))) => fail(EXIT_MALFORMED, e),
                Err(e) => fail(EXIT_FAILURE, e),
            }
        }
        Command::Verify {
            log,
            suite,
            out,
            quiet,
        } => {
            let c = match load_log(&log) {
                Ok(c) => c,
                Err(code) => return code,
            };
            let suites: Vec<Suite> = if suite.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suite
            };
            if suites.contains(&Suite::Divergence) {
                return fail(EXIT_MALFORMED, "the divergence suite compares two logs; see the library API");
            }
            let report = verify(&c, &suites);
            if quiet {
                for r in report.failures() {
                    println!("{r}");
                }
                println!(
                    "{} checks, {} failed",
                    report.results.len(),
                    report.failures().count()
                );
            } else {
                print!("{}", report.human());
            }
            if let Some(p) = out {
                if let Err(e) = std::fs::write(&p, report.to_json()) {
                    return fail(EXIT_FAILURE, format!("{}: {e}", p.display()));
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
        Command::Eval {
            log,
            z,
            deriv,
            radius,
            json,
        } => {
            let c = match load_log(&log) {
                Ok(c) => c,
                Err(code) => return code,
            };
            let z = match GaussianRational::parse(&z) {
                Ok(z) => z,
                Err(e) => return fail(EXIT_MALFORMED, e),
            };
            let value = match radius {
                None => eval_certified(&c, &z, deriv),
                Some(r) => match parse_rational(&r) {
                    Ok(r) => eval_certified_within(&c, &z, deriv, &r),
                    Err(e) => return fail(EXIT_MALFORMED, e),
                },
            };
            match value {
                Ok(v) => {
                    if json {
                        println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
                    } else {
                        println!("{v}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e @ (EvalError::TailNotControlled { .. } | EvalError::OutsideRadius(_))) => {
                    fail(EXIT_PRECONDITION, e)
                }
                Err(e) => fail(EXIT_MALFORMED, e),
            }
        }
        Command::Targets { count } => {
            println!("{}", default_schedule(count).to_json());
            ExitCode::SUCCESS
        }
    }
}
