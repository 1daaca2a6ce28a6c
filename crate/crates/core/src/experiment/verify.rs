use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{cell_scenario, ExperimentConfig};
use crate::engine::{run_with, DelayMode, RngStreams, RunOptions};
use crate::error::{Error, Result};
use crate::lemma_lab::{count_equality, run_lemma_suite, LemmaReport, SuiteConfig};
use crate::metrics::{certify, state_dominance, CertificateVerdict};
use crate::model::Buffer;
use crate::policies::{Policy, PolicyName};

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub passed: bool,
    pub checks: Vec<LemmaReport>,
}

impl VerifySummary {
    pub fn failed(&self) -> impl Iterator<Item = &LemmaReport> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn dedup<T: PartialEq + Copy>(xs: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in xs {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn delay_label(d: DelayMode) -> String {
    match d {
        DelayMode::Zero => "zero".into(),
        DelayMode::TwoPoint { low, high, p } => format!("two_point({low},{high},{p})"),
    }
}

fn report(name: String, v: CertificateVerdict) -> LemmaReport {
    LemmaReport {
        passed: v.passed(),
        cases: v.replications,
        violations: v.violations,
        first_counterexample: v.first_violation.map(|(r, cv)| {
            json!({
                "replication": r,
                "t": cv.t,
                "reason": cv.reason,
                "leader_events": cv.leader_events.len(),
                "follower_events": cv.follower_events.len(),
            })
        }),
        name,
    }
}

/// Runs the full suite with prmp-LGFS as the candidate.
pub fn run_verify(cfg: &ExperimentConfig) -> Result<VerifySummary> {
    run_verify_with(cfg, &PolicyName::PrmpLgfs)
}

/// Lemma suite, coupled dominance of `candidate` over every configured
/// baseline, coupled `(N, γ)` equality at `B = ∞`, and B-invariance of the
/// candidate's age process. Scenarios span `m ∈ {1, cfg.m}`, the configured
/// buffers and loads, and both in-order and configured delays.
pub fn run_verify_with(cfg: &ExperimentConfig, candidate: &dyn Policy) -> Result<VerifySummary> {
    cfg.validate()?;
    let root = RngStreams::new(cfg.seed);
    let reps = cfg.replications;
    let mut checks = run_lemma_suite(
        &SuiteConfig { cases: cfg.lemma_cases, walks: (cfg.lemma_cases / 100).max(1), ..Default::default() },
        &root.replication(0),
    );

    let ms = dedup([1, cfg.m]);
    let delays = dedup([DelayMode::Zero, cfg.delay]);
    let mut grid = Vec::new();
    for &m in &ms {
        for &d in &delays {
            for &rho in &cfg.rho {
                grid.push((m, d, rho));
            }
        }
    }
    let cell_cfg = |m: usize, d: DelayMode| ExperimentConfig { m, delay: d, ..cfg.clone() };
    let label = |m: usize, b: Buffer, rho: f64, d: DelayMode| format!("m={m} B={b} rho={rho} delay={}", delay_label(d));

    let family = root.replication(1);
    for &pi in &cfg.policies {
        for &b in &cfg.buffers {
            for &(m, d, rho) in &grid {
                let c = cell_cfg(m, d);
                let v = certify(candidate, &pi, reps, &family, |r| {
                    cell_scenario(&c, None, rho, b, &family.replication(r))
                }, state_dominance)?;
                checks.push(report(format!("theorem1 {} vs {pi} {}", candidate.name(), label(m, b, rho, d)), v));
            }
        }
    }

    let family = root.replication(2);
    for &pi in cfg.policies.iter().filter(|p| p.capacity(Buffer::Infinite) == Buffer::Infinite) {
        for &(m, d, rho) in &grid {
            let c = cell_cfg(m, d);
            let v = certify(&PolicyName::PrmpLgfs, &pi, reps, &family, |r| {
                cell_scenario(&c, None, rho, Buffer::Infinite, &family.replication(r))
            }, count_equality)?;
            checks.push(report(format!("theorem2 prmp-lgfs vs {pi} {}", label(m, Buffer::Infinite, rho, d)), v));
        }
    }

    let family = root.replication(3);
    let buffers = dedup([Buffer::Finite(0), Buffer::Finite(1), Buffer::Finite(10), Buffer::Infinite].into_iter().chain(cfg.buffers.iter().copied()));
    for &(m, d, rho) in &grid {
        let c = cell_cfg(m, d);
        let failures: Vec<(u64, String)> = (0..reps)
            .into_par_iter()
            .map(|r| -> Result<Option<(u64, String)>> {
                let streams = family.replication(r);
                let mut reference = None;
                for &b in &buffers {
                    let sc = cell_scenario(&c, None, rho, b, &streams)?;
                    let age = run_with(&sc, candidate, &streams, RunOptions::lean())?.age;
                    match &reference {
                        None => reference = Some((b, age)),
                        Some((b0, a0)) if *a0 != age => {
                            return Ok(Some((r, format!("age process differs between B={b0} and B={b}"))));
                        }
                        Some(_) => {}
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        checks.push(LemmaReport {
            name: format!("corollary1 {} {}", candidate.name(), label(m, Buffer::Infinite, rho, d).replacen("B=inf ", "", 1)),
            cases: reps,
            violations: failures.len() as u64,
            passed: failures.is_empty(),
            first_counterexample: failures.first().map(|(r, why)| json!({ "replication": r, "reason": why })),
        });
    }

    if checks.is_empty() {
        return Err(Error::InvalidArgument("nothing to verify".into()));
    }
    Ok(VerifySummary { passed: checks.iter().all(|c| c.passed), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::InvertedLgfs;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            policies: vec![PolicyName::Fcfs, PolicyName::LcfsNpB1],
            m: 2,
            buffers: vec![Buffer::Finite(1), Buffer::Infinite],
            rho: vec![0.7],
            horizon: Some(60.0),
            replications: 8,
            lemma_cases: 500,
            ..ExperimentConfig::verify_default()
        }
    }

    #[test]
    fn default_candidate_passes() {
        let s = run_verify(&tiny()).unwrap();
        assert!(s.passed, "{:?}", s.failed().collect::<Vec<_>>());
        // 7 lemma checks, 2 policies × 2 B × 4 grid, 1 policy × 4 grid, 4 grid
        assert_eq!(s.checks.len(), 7 + 16 + 4 + 4);
    }

    #[test]
    fn inverted_candidate_fails() {
        let s = run_verify_with(&tiny(), &InvertedLgfs).unwrap();
        assert!(!s.passed);
        assert!(s.failed().any(|c| c.name.starts_with("theorem1")));
    }

    #[test]
    fn zero_replications_rejected() {
        assert!(run_verify(&ExperimentConfig { replications: 0, ..tiny() }).is_err());
    }
}
