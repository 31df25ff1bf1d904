//! Command-line front end: generate, solve, benchmark, certify and validate
//! random Cournot-type instances.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hybrid_eq::bench::{self, GenSpec, InstanceData, ReportFormat, SuiteConfig};
use hybrid_eq::maps::{certify_hybrid, HybridParams};
use hybrid_eq::model::validate_instance;
use hybrid_eq::{run, InnerSolveConfig, ProblemInstance, ScheduleConfig, StopConfig, Variant};

#[derive(Parser)]
#[command(name = "hybrid-eq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and write it as JSON.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one instance and print the run report as JSON.
    Run {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Include the per-iteration trace in the report.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a batch of random instances and write the averages table.
    Bench {
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// Master seed; `HYBRID_EQ_SEED` takes precedence when set.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        i0_fraction: f64,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the symmetric generalized hybrid inequality on sampled pairs.
    Certify {
        #[command(flatten)]
        source: SourceArgs,
        /// Coefficients alpha,beta,gamma,delta.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1,0,-1,0",
            allow_hyphen_values = true
        )]
        params: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
    },
    /// Check the standing assumptions of an instance on random samples.
    Validate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// `HYBRID_EQ_SEED` takes precedence when set.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    i0_fraction: f64,
}

#[derive(Args)]
struct SourceArgs {
    /// Instance JSON written by `generate`; a fresh instance is generated otherwise.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[command(flatten)]
    gen: GenArgs,
}

impl SourceArgs {
    fn load(&self) -> hybrid_eq::Result<(InstanceData, ProblemInstance)> {
        let data = match &self.instance {
            Some(path) => InstanceData::load(path)?,
            None => InstanceData::generate(&GenSpec {
                i0_fraction: self.gen.i0_fraction,
                ..GenSpec::new(self.gen.n, effective_seed(self.gen.seed)?)
            })?,
        };
        let inst = data.to_instance()?;
        Ok((data, inst))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, default_value = "alg3", value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
}

impl SolveArgs {
    fn stop(&self) -> StopConfig {
        StopConfig {
            eps: self.eps,
            max_iter: self.max_iter,
            ..StopConfig::default()
        }
    }
}

const SEED_VAR: &str = "HYBRID_EQ_SEED";

/// The environment seed wins over the command-line one.
fn effective_seed(flag: u64) -> hybrid_eq::Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            hybrid_eq::Error::InvalidArgument(format!(
                "{SEED_VAR}={v:?} is not an unsigned integer"
            ))
        }),
        Err(_) => Ok(flag),
    }
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: hybrid_eq::Error| e.to_string())
}

fn write_json(value: &impl serde::Serialize, out: Option<&PathBuf>) -> hybrid_eq::Result<()> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| hybrid_eq::Error::Serde(e.to_string()))?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|source| hybrid_eq::Error::Io {
            path: path.clone(),
            source,
        }),
        None => print_stdout(&text),
    }
}

/// Prints to stdout; a closed pipe (e.g. `| head`) is not an error.
fn print_stdout(text: &str) -> hybrid_eq::Result<()> {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(hybrid_eq::Error::Io {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Returns `Ok(false)` when some run or check failed.
fn dispatch(cli: Cli) -> hybrid_eq::Result<bool> {
    match cli.command {
        Command::Generate { gen, out } => {
            let data = InstanceData::generate(&GenSpec {
                i0_fraction: gen.i0_fraction,
                ..GenSpec::new(gen.n, effective_seed(gen.seed)?)
            })?;
            match out {
                Some(path) => data.save(&path)?,
                None => write_json(&data, None)?,
            }
            Ok(true)
        }
        Command::Run {
            source,
            solve,
            trace,
            out,
        } => {
            let (_, inst) = source.load()?;
            let schedule = ScheduleConfig::for_variant(solve.variant, inst.f.as_ref());
            let stop = solve.stop();
            let mut report = run(
                &inst,
                solve.variant,
                &schedule,
                &stop,
                &InnerSolveConfig::for_outer_tol(stop.eps),
            )?;
            if !trace {
                report.trace.clear();
                report.invariants.records.retain(|r| !r.satisfied);
            }
            write_json(&report, out.as_ref())?;
            Ok(report.converged())
        }
        Command::Bench {
            n,
            reps,
            seed,
            i0_fraction,
            solve,
            format,
            out,
        } => {
            let mut cfg = SuiteConfig::new(n, reps, solve.variant, effective_seed(seed)?);
            cfg.i0_fraction = i0_fraction;
            cfg.stop = solve.stop();
            cfg.inner = InnerSolveConfig::for_outer_tol(solve.eps);
            let table = bench::run_suite(&cfg)?;
            match &out {
                Some(path) => bench::emit_report(&table, format, path)?,
                None => bench::write_report(&table.rows, format, std::io::stdout().lock())?,
            }
            for note in table.footnotes() {
                eprintln!("failed: {note}");
            }
            Ok(!table.has_failures())
        }
        Command::Certify {
            source,
            params,
            pairs,
        } => {
            let (data, inst) = source.load()?;
            let [a, b, g, d] = params[..] else {
                return Err(hybrid_eq::Error::InvalidArgument(format!(
                    "--params needs 4 values, got {}",
                    params.len()
                )));
            };
            let hp = HybridParams::new(a, b, g, d);
            let report =
                certify_hybrid(inst.map.as_ref(), hp, inst.set.as_ref(), pairs, data.seed)?;
            write_json(&report, None)?;
            Ok(report.passed)
        }
        Command::Validate { source, samples } => {
            let (data, inst) = source.load()?;
            let report = validate_instance(&inst, samples, data.seed)?;
            write_json(&report, None)?;
            Ok(report.passed())
        }
    }
}
