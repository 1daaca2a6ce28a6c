use std::io::Write;

use rayon::prelude::*;

use super::{load_trace_arrivals, ArrivalKind, ExperimentConfig};
use crate::engine::{apply_arrival_delays, gen_erlang2_arrivals, gen_poisson_arrivals, run_with, RngStreams, RunOptions, Trace};
use crate::error::Result;
use crate::metrics::{MetricsReport, RunMetrics, CSV_HEADER};
use crate::model::{Buffer, Scenario};
use crate::policies::{Policy, PolicyName};

/// Arrivals of replication `streams` at load `rho`. A loaded trace is used
/// as given and `rho` is only a label.
pub fn cell_scenario(
    cfg: &ExperimentConfig,
    trace: Option<&[(f64, f64)]>,
    rho: f64,
    buffer: Buffer,
    streams: &RngStreams,
) -> Result<Scenario> {
    let horizon = cfg.horizon();
    let pairs = match (&cfg.arrival, trace) {
        (ArrivalKind::Trace(_), Some(pairs)) => pairs.to_vec(),
        (ArrivalKind::Trace(path), None) => load_trace_arrivals(path)?,
        (kind, _) => {
            let lambda = rho * cfg.m as f64 * cfg.mu;
            let gens = match kind {
                ArrivalKind::Poisson => gen_poisson_arrivals(lambda, horizon, streams)?,
                _ => gen_erlang2_arrivals(lambda, horizon, streams)?,
            };
            apply_arrival_delays(&gens, cfg.delay, streams)?
        }
    };
    Scenario::new(&pairs, buffer, cfg.m, cfg.mu, horizon, cfg.seed)
}

/// Replication `r` of one cell, with the full event log.
pub fn simulate_cell(
    cfg: &ExperimentConfig,
    policy: &dyn Policy,
    buffer: Buffer,
    rho: f64,
    r: u64,
) -> Result<Trace> {
    cfg.validate()?;
    let streams = RngStreams::new(cfg.seed).replication(r);
    let sc = cell_scenario(cfg, None, rho, buffer, &streams)?;
    run_with(&sc, policy, &streams, RunOptions::default())
}

/// One report row per `(policy, B, ρ)` cell, in that nesting order.
/// Replication `r` uses the same arrivals and service draws in every cell.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<MetricsReport>> {
    cfg.validate()?;
    let trace = match &cfg.arrival {
        ArrivalKind::Trace(path) => Some(load_trace_arrivals(path)?),
        _ => None,
    };
    let root = RngStreams::new(cfg.seed);
    let cells: Vec<(PolicyName, Buffer, f64)> = cfg
        .policies
        .iter()
        .flat_map(|&p| cfg.buffers.iter().flat_map(move |&b| cfg.rho.iter().map(move |&r| (p, b, r))))
        .collect();
    let reps = cfg.replications;
    let runs: Vec<RunMetrics> = (0..cells.len() as u64 * reps)
        .into_par_iter()
        .map(|k| {
            let (policy, buffer, rho) = cells[(k / reps) as usize];
            let streams = root.replication(k % reps);
            let sc = cell_scenario(cfg, trace.as_deref(), rho, buffer, &streams)?;
            let tr = run_with(&sc, &policy, &streams, RunOptions::lean())?;
            RunMetrics::from_trace(&tr, &cfg.penalty, cfg.warmup())
        })
        .collect::<Result<_>>()?;
    Ok(cells
        .iter()
        .zip(runs.chunks(reps as usize))
        .map(|(&(p, b, rho), chunk)| MetricsReport::aggregate(p.as_str(), cfg.m, b, rho, cfg.seed, chunk))
        .collect())
}

pub fn write_report<W: Write>(reports: &[MetricsReport], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in reports {
        r.write_csv_row(&mut out)?;
    }
    out.flush()?;
    Ok(())
}
