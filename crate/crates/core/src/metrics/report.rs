//! Replication-level aggregation and the CSV report row.

use std::io::Write;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::functionals::{
    average_peak_age_window, throughput_and_delay_window, time_average_age_window, time_average_penalty_window,
};
use super::penalty::PenaltyFn;
use crate::engine::Trace;
use crate::error::{Error, Result};
use crate::model::Buffer;

pub const CSV_HEADER: &str =
    "policy,m,B,rho,avg_age,avg_age_ci,peak_age,peak_age_ci,penalty,throughput,mean_delay,delivered,dropped,replications,seed";

/// Mean with a 95% Student-t half-width over replications.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: f64,
    pub n: usize,
}

impl Estimate {
    /// Undefined values (`None`) are left out. With fewer than two values the
    /// half-width is NaN; with none the mean is NaN too.
    pub fn from_values<I: IntoIterator<Item = Option<f64>>>(values: I) -> Self {
        let xs: Vec<f64> = values.into_iter().flatten().collect();
        let n = xs.len();
        if n == 0 {
            return Estimate { mean: f64::NAN, half_width: f64::NAN, n };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        if n < 2 {
            return Estimate { mean, half_width: f64::NAN, n };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let t = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("dof ≥ 1").inverse_cdf(0.975);
        Estimate { mean, half_width: t * (var / n as f64).sqrt(), n }
    }

    pub fn lower(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.half_width
    }

    pub fn overlaps(&self, other: &Estimate) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }
}

/// Metrics of a single run over the measurement window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunMetrics {
    pub avg_age: f64,
    pub peak_age: Option<f64>,
    pub penalty: f64,
    pub throughput: f64,
    pub mean_delay: Option<f64>,
    pub delivered: u64,
    pub dropped: u64,
}

impl RunMetrics {
    pub fn from_trace(trace: &Trace, penalty: &PenaltyFn, warmup: f64) -> Result<Self> {
        let horizon = trace.scenario.horizon;
        if !(warmup >= 0.0 && warmup < horizon) {
            return Err(Error::InvalidArgument(format!("warm-up {warmup} must lie in [0, {horizon})")));
        }
        let age = &trace.age;
        let td = throughput_and_delay_window(trace, warmup, horizon)?;
        let peak_age = match average_peak_age_window(age, warmup, horizon) {
            Ok(v) => Some(v),
            Err(Error::Undefined(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(RunMetrics {
            avg_age: time_average_age_window(age, warmup, horizon)?,
            peak_age,
            penalty: time_average_penalty_window(age, penalty, warmup, horizon)?,
            throughput: td.throughput,
            mean_delay: td.mean_delay,
            delivered: td.delivered,
            dropped: trace.drops.iter().filter(|&&(_, t)| t >= warmup).count() as u64,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricsReport {
    pub policy: String,
    pub m: usize,
    pub buffer: Buffer,
    pub rho: f64,
    pub avg_age: Estimate,
    pub peak_age: Estimate,
    pub penalty: Estimate,
    pub throughput: Estimate,
    pub mean_delay: Estimate,
    pub delivered: Estimate,
    pub dropped: Estimate,
    pub replications: usize,
    pub seed: u64,
}

impl MetricsReport {
    /// Aggregates runs listed in replication order.
    pub fn aggregate(policy: &str, m: usize, buffer: Buffer, rho: f64, seed: u64, runs: &[RunMetrics]) -> Self {
        let est = |f: &dyn Fn(&RunMetrics) -> Option<f64>| Estimate::from_values(runs.iter().map(f));
        MetricsReport {
            policy: policy.to_string(),
            m,
            buffer,
            rho,
            avg_age: est(&|r| Some(r.avg_age)),
            peak_age: est(&|r| r.peak_age),
            penalty: est(&|r| Some(r.penalty)),
            throughput: est(&|r| Some(r.throughput)),
            mean_delay: est(&|r| r.mean_delay),
            delivered: est(&|r| Some(r.delivered as f64)),
            dropped: est(&|r| Some(r.dropped as f64)),
            replications: runs.len(),
            seed,
        }
    }

    pub fn write_csv_row<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.policy,
            self.m,
            self.buffer,
            self.rho,
            self.avg_age.mean,
            self.avg_age.half_width,
            self.peak_age.mean,
            self.peak_age.half_width,
            self.penalty.mean,
            self.throughput.mean,
            self.mean_delay.mean,
            self.delivered.mean,
            self.dropped.mean,
            self.replications,
            self.seed,
        )?;
        Ok(())
    }
}
