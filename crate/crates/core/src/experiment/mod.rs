//! Experiment configuration, sweeps and the verification run.

mod sweep;
mod trace_file;
mod verify;

pub use sweep::{cell_scenario, run_sweep, simulate_cell, write_report};
pub use trace_file::load_trace_arrivals;
pub use verify::{run_verify, run_verify_with, VerifySummary};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::engine::DelayMode;
use crate::error::{Error, Result};
use crate::metrics::PenaltyFn;
use crate::model::Buffer;
use crate::policies::PolicyName;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrivalKind {
    Poisson,
    Erlang2,
    /// CSV file with header `s,a`.
    Trace(PathBuf),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub policies: Vec<PolicyName>,
    pub m: usize,
    #[serde(rename = "B")]
    pub buffers: Vec<Buffer>,
    pub rho: Vec<f64>,
    pub arrival: ArrivalKind,
    pub delay: DelayMode,
    pub mu: f64,
    /// Defaults to `10⁵/μ`.
    pub horizon: Option<f64>,
    /// Discarded prefix; defaults to `10³/μ`.
    pub warmup: Option<f64>,
    pub replications: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub penalty: PenaltyFn,
    /// Instances per lemma in `verify`.
    pub lemma_cases: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig::fig3()
    }
}

fn rho_grid() -> Vec<f64> {
    (1..=10).map(|k| k as f64 / 10.0).collect()
}

impl ExperimentConfig {
    /// One server, Erlang-2 arrivals, zero delay.
    pub fn fig3() -> Self {
        ExperimentConfig {
            policies: vec![PolicyName::PrmpLgfs, PolicyName::LcfsNpB1, PolicyName::Fcfs],
            m: 1,
            buffers: vec![Buffer::Infinite],
            rho: rho_grid(),
            arrival: ArrivalKind::Erlang2,
            delay: DelayMode::Zero,
            mu: 1.0,
            horizon: None,
            warmup: None,
            replications: 50,
            seed: 2018,
            output: None,
            penalty: PenaltyFn::Identity,
            lemma_cases: 100_000,
        }
    }

    /// Five servers, delays of 1 or 100 with equal probability, `B ∈ {10, ∞}`.
    pub fn fig4() -> Self {
        ExperimentConfig {
            policies: vec![PolicyName::PrmpLgfs, PolicyName::NpLgfs, PolicyName::Fcfs],
            m: 5,
            buffers: vec![Buffer::Finite(10), Buffer::Infinite],
            delay: DelayMode::TwoPoint { low: 1.0, high: 100.0, p: 0.5 },
            ..ExperimentConfig::fig3()
        }
    }

    /// Settings of the `verify` subcommand when no config is given.
    pub fn verify_default() -> Self {
        ExperimentConfig {
            policies: vec![PolicyName::Fcfs, PolicyName::NpLgfs, PolicyName::LcfsPrmp, PolicyName::LcfsNpB1],
            m: 5,
            buffers: vec![Buffer::Finite(0), Buffer::Finite(1), Buffer::Finite(10), Buffer::Infinite],
            rho: vec![0.5, 0.9],
            arrival: ArrivalKind::Poisson,
            delay: DelayMode::TwoPoint { low: 0.0, high: 5.0, p: 0.5 },
            horizon: Some(200.0),
            replications: 100,
            ..ExperimentConfig::fig3()
        }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or(1e5 / self.mu)
    }

    pub fn warmup(&self) -> f64 {
        self.warmup.unwrap_or((1e3 / self.mu).min(self.horizon() / 10.0))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.policies.is_empty() || self.buffers.is_empty() || self.rho.is_empty() {
            return bad("policies, B and rho must be non-empty".into());
        }
        if self.m == 0 {
            return bad("m must be at least 1".into());
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad(format!("mu = {} must be positive", self.mu));
        }
        if let Some(&r) = self.rho.iter().find(|&&r| !(r > 0.0 && r <= 1.2)) {
            return bad(format!("rho = {r} outside (0, 1.2]"));
        }
        let (h, w) = (self.horizon(), self.warmup());
        if !(h > 0.0 && h.is_finite()) {
            return bad(format!("horizon {h} must be positive and finite"));
        }
        if !(w >= 0.0 && w < h) {
            return bad(format!("warm-up {w} must lie in [0, horizon)"));
        }
        if self.replications == 0 {
            return bad("replications must be positive".into());
        }
        if matches!(self.arrival, ArrivalKind::Trace(_)) && self.rho.len() != 1 {
            return bad("a trace arrival source fixes the load; give exactly one rho value as its label".into());
        }
        self.delay.validate()?;
        self.penalty.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        Ok(cfg)
    }
}
