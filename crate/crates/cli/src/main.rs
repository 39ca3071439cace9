use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fuzzint_core::harness::{fuzz_with, FuzzSpec, PairFamily};
use fuzzint_core::pseudo::pseudo_integral;
use fuzzint_core::sugeno::{sugeno_fixed_point, sugeno_integral, sugeno_oracle, DEFAULT_ORACLE_N, DEFAULT_TOL};
use fuzzint_core::{
    reproduce_paper_suite, HarnessError, Interval, IntervalUnion, PseudoError, RunConfig, SugenoError, SuiteResult,
};
use thiserror::Error;

mod input;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error(transparent)]
    Sugeno(#[from] SugenoError),
    #[error(transparent)]
    Pseudo(#[from] PseudoError),
    #[error("{0} hard error(s) while running checks")]
    Checks(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Harness(e) => e.exit_code() as u8,
            _ => 1,
        }
    }
}

/// Sugeno integrals, pseudo-integrals and Diaz-Metcalf type inequality checks.
#[derive(Debug, Parser)]
#[command(name = "fuzzint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a single integral.
    #[command(subcommand)]
    Integrate(Integrate),
    /// Run the checks of one checker from a config file.
    Check {
        checker: String,
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Run every check and sweep of a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Recompute the built-in worked examples with printed-value annotations.
    Reproduce {
        #[command(flatten)]
        out: Output,
    },
    /// Run one checker over seeded random operand pairs.
    Fuzz {
        #[arg(long)]
        family: String,
        #[arg(long)]
        checker: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed exponent instead of a per-trial draw.
        #[arg(long)]
        s: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
struct Output {
    /// Print a flat CSV summary instead of JSON lines.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum SugenoMethod {
    Crossing,
    FixedPoint,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum Integrate {
    /// Sugeno integral of f over its domain.
    Sugeno {
        /// Expression in x, JSON function definition, or @file.
        #[arg(long)]
        f: String,
        /// lebesgue, lebesgue-squared, distorted:<T(t)>, or a JSON measure.
        #[arg(long, default_value = "lebesgue")]
        measure: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        domain: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = SugenoMethod::Crossing)]
        method: SugenoMethod,
    },
    /// Pseudo-integral of f under a generator or semiring.
    Pseudo {
        #[arg(long)]
        f: String,
        /// Generator expression in t, or a JSON semiring.
        #[arg(long)]
        g: String,
        /// Value interval of the generator.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        g_interval: Option<Vec<f64>>,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        domain: Option<Vec<f64>>,
        #[arg(long, default_value_t = 64)]
        panels: usize,
    },
}

fn pair(v: &Option<Vec<f64>>) -> Option<(f64, f64)> {
    v.as_ref().map(|v| (v[0], v[1]))
}

fn print_json(value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| CliError::Harness(e.into()))?;
    println!("{text}");
    Ok(())
}

fn integrate(cmd: Integrate) -> Result<(), CliError> {
    match cmd {
        Integrate::Sugeno { f, measure, domain, method } => {
            let f = input::function(&f, pair(&domain))?;
            let d = fuzzint_core::RealFn::domain(&f);
            let mu = input::measure(&measure, d.width())?;
            let a = IntervalUnion::interval(d.lo, d.hi);
            let result = match method {
                SugenoMethod::Crossing => sugeno_integral(&f, &a, &mu, DEFAULT_TOL)?,
                SugenoMethod::Oracle => sugeno_oracle(&f, &a, &mu, DEFAULT_ORACLE_N)?,
                SugenoMethod::FixedPoint => {
                    if d.lo != 0.0 || mu != fuzzint_core::FuzzyMeasure::Lebesgue {
                        return Err(CliError::Input(
                            "the fixed-point method needs a domain [0, a] and the Lebesgue measure".into(),
                        ));
                    }
                    sugeno_fixed_point(&f, d.hi, DEFAULT_TOL)?
                }
            };
            print_json(&result)
        }
        Integrate::Pseudo { f, g, g_interval, domain, panels } => {
            let f = input::function(&f, pair(&domain))?;
            let sr = input::semiring(&g, pair(&g_interval).unwrap_or((0.0, f64::INFINITY)))?;
            let d = fuzzint_core::RealFn::domain(&f);
            let result = pseudo_integral(&sr, &f.to_func(), Interval::new(d.lo, d.hi), panels)?;
            print_json(&result)
        }
    }
}

fn emit(result: &SuiteResult, out: &Output) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    if out.csv {
        result.write_csv(&mut lock)?;
    } else {
        result.write_json_lines(&mut lock)?;
    }
    lock.flush().map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })?;
    if result.has_errors() {
        return Err(CliError::Checks(result.errors.len()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Integrate(cmd) => integrate(cmd),
        Command::Check { checker, config, out } => {
            let config = RunConfig::load(&config)?;
            let result = config.execute(Some(&checker))?;
            config.write_output(&result)?;
            emit(&result, &out)
        }
        Command::Run { config, out } => {
            let config = RunConfig::load(&config)?;
            let result = config.execute(None)?;
            config.write_output(&result)?;
            emit(&result, &out)
        }
        Command::Reproduce { out } => emit(&reproduce_paper_suite()?, &out),
        Command::Fuzz { family, checker, trials, seed, s, out } => {
            let family: PairFamily = family.parse()?;
            let mut spec = FuzzSpec::new(family, &checker, trials, seed);
            spec.s = s;
            emit(&fuzz_with(&spec)?, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
