//! `aoi`: simulate, sweep, verify and trace-check from the command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aoi_sim::experiment::{load_trace_arrivals, run_sweep, run_verify, simulate_cell, write_report, ExperimentConfig};
use aoi_sim::metrics::RunMetrics;
use aoi_sim::model::Buffer;
use aoi_sim::policies::PolicyName;
use aoi_sim::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aoi", version, about = "Multi-server age-of-information simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config; defaults depend on the subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// One replication of one cell; writes the event log as JSON lines.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Policy (default: first in config).
        #[arg(long)]
        policy: Option<PolicyName>,
        /// Queue capacity, an integer or `inf` (default: first in config).
        #[arg(long)]
        buffer: Option<Buffer>,
        /// Load (default: first in config).
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 0)]
        replication: u64,
    },
    /// Every (policy, B, rho) cell of the config; writes CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Lemma suite and coupled certificates; exits 2 on any failure.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Validates an `s,a` arrival trace; exits 2 if it is malformed.
    TraceCheck { path: PathBuf },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_config(common: &Common, default: fn() -> ExperimentConfig) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_json(&std::fs::read_to_string(path).map_err(|e| {
            Failure::Usage(format!("{}: {e}", path.display()))
        })?)?,
        None => default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn with_jobs<T>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure>
where
    T: Send,
{
    match jobs {
        Some(0) => Err(Failure::Usage("--jobs must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Simulate { common, policy, buffer, rho, replication } => {
            let cfg = load_config(&common, ExperimentConfig::fig3)?;
            let policy = policy.unwrap_or(cfg.policies[0]);
            let buffer = buffer.unwrap_or(cfg.buffers[0]);
            let rho = rho.unwrap_or(cfg.rho[0]);
            let trace = with_jobs(common.jobs, || simulate_cell(&cfg, &policy, buffer, rho, replication))??;
            trace.write_jsonl(output(common.out.as_deref())?)?;
            let metrics = RunMetrics::from_trace(&trace, &cfg.penalty, cfg.warmup())?;
            eprintln!("{}", serde_json::to_string(&metrics).map_err(|e| Failure::Usage(e.to_string()))?);
        }
        Command::Sweep { common } => {
            let cfg = load_config(&common, ExperimentConfig::fig3)?;
            let reports = with_jobs(common.jobs, || run_sweep(&cfg))??;
            write_report(&reports, output(common.out.as_deref().or(cfg.output.as_deref()))?)?;
        }
        Command::Verify { common } => {
            let cfg = load_config(&common, ExperimentConfig::verify_default)?;
            let summary = with_jobs(common.jobs, || run_verify(&cfg))??;
            let mut out = output(common.out.as_deref())?;
            serde_json::to_writer_pretty(&mut out, &summary).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out)?;
            out.flush()?;
            if !summary.passed {
                let names: Vec<_> = summary.failed().map(|c| c.name.as_str()).collect();
                return Err(Failure::Verification(format!("FAIL: {}", names.join(", "))));
            }
            eprintln!("PASS: {} checks", summary.checks.len());
        }
        Command::TraceCheck { path } => match load_trace_arrivals(&path) {
            Ok(pairs) => println!("PASS: {} arrivals", pairs.len()),
            Err(e @ Error::TraceFile { .. }) => return Err(Failure::Verification(format!("FAIL: {e}"))),
            Err(e) => return Err(Failure::Usage(format!("{}: {e}", path.display()))),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
