//! Coupled sample-path certificate that preemptive LGFS keeps a
//! componentwise larger state vector than a competing policy.

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::coupled::{run_coupled, CoupledViolation, Epoch};
use crate::engine::RngStreams;
use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::policies::{Policy, PolicyName};

#[derive(Clone, Debug, Serialize)]
pub struct CertificateVerdict {
    pub leader: String,
    pub follower: String,
    pub replications: u64,
    pub total_epochs: u64,
    pub min_epochs: u64,
    /// Replications in which the checked relation failed at least once.
    pub violations: u64,
    #[serde(skip)]
    pub first_violation: Option<(u64, CoupledViolation)>,
}

impl CertificateVerdict {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Runs `replications` coupled dual runs (scenario `scenarios(r)`, clock from
/// `streams.replication(r)`) and evaluates `check` after every epoch.
pub fn certify<S, C>(
    leader: &dyn Policy,
    follower: &dyn Policy,
    replications: u64,
    streams: &RngStreams,
    scenarios: S,
    check: C,
) -> Result<CertificateVerdict>
where
    S: Fn(u64) -> Result<Scenario> + Sync,
    C: Fn(&Epoch) -> Option<String> + Sync,
{
    if replications == 0 {
        return Err(Error::InvalidArgument("replications must be positive".into()));
    }
    let outcomes: Vec<_> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let sc = scenarios(r)?;
            run_coupled(&sc, leader, follower, &streams.replication(r), &check)
        })
        .collect::<Result<_>>()?;

    let mut verdict = CertificateVerdict {
        leader: leader.name().to_string(),
        follower: follower.name().to_string(),
        replications,
        total_epochs: 0,
        min_epochs: u64::MAX,
        violations: 0,
        first_violation: None,
    };
    for (r, out) in outcomes.into_iter().enumerate() {
        verdict.total_epochs += out.epochs;
        verdict.min_epochs = verdict.min_epochs.min(out.epochs);
        if let Some(v) = out.violation {
            verdict.violations += 1;
            if verdict.first_violation.is_none() {
                verdict.first_violation = Some((r as u64, v));
            }
        }
    }
    Ok(verdict)
}

/// Dominance check `V_leader(t) ≥ V_follower(t)` for use with [`certify`].
pub fn state_dominance(e: &Epoch) -> Option<String> {
    if e.leader.dominates(e.follower) {
        return None;
    }
    let (vl, vf) = (e.leader.state_vector(), e.follower.state_vector());
    Some(format!("t={}: leader {vl:?} does not dominate follower {vf:?}", e.t))
}

/// prmp-LGFS against `pi` on a fixed scenario.
pub fn coupled_dominance_certificate(
    scenario: &Scenario,
    pi: &dyn Policy,
    replications: u64,
    streams: &RngStreams,
) -> Result<CertificateVerdict> {
    coupled_dominance_certificate_with(scenario, &PolicyName::PrmpLgfs, pi, replications, streams)
}

/// Same, with an arbitrary leader; used to show a wrong leader is caught.
pub fn coupled_dominance_certificate_with(
    scenario: &Scenario,
    leader: &dyn Policy,
    pi: &dyn Policy,
    replications: u64,
    streams: &RngStreams,
) -> Result<CertificateVerdict> {
    certify(leader, pi, replications, streams, |_| Ok(scenario.clone()), state_dominance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Buffer;
    use crate::policies::InvertedLgfs;

    fn scenario(m: usize, b: Buffer) -> Scenario {
        let pairs: Vec<(f64, f64)> =
            (0..150).map(|i| (i as f64 * 0.25, i as f64 * 0.25 + [0.0, 3.0, 0.5][i % 3])).collect();
        Scenario::new(&pairs, b, m, 1.0, 45.0, 11).unwrap()
    }

    #[test]
    fn self_comparison_passes() {
        let sc = scenario(2, Buffer::Finite(1));
        let v = coupled_dominance_certificate(&sc, &PolicyName::PrmpLgfs, 20, &RngStreams::new(1)).unwrap();
        assert!(v.passed());
        assert!(v.min_epochs > 150);
    }

    #[test]
    fn baselines_never_overtake() {
        let streams = RngStreams::new(2);
        for b in [Buffer::Finite(0), Buffer::Finite(3), Buffer::Infinite] {
            for m in [1, 3] {
                for pi in [PolicyName::Fcfs, PolicyName::NpLgfs, PolicyName::LcfsPrmp, PolicyName::LcfsNpB1] {
                    let v = coupled_dominance_certificate(&scenario(m, b), &pi, 30, &streams).unwrap();
                    assert!(v.passed(), "{pi} m={m} B={b}: {:?}", v.first_violation.map(|x| x.1.reason));
                }
            }
        }
    }

    #[test]
    fn single_packet() {
        let sc = Scenario::new(&[(0.0, 0.0)], Buffer::Finite(0), 1, 1.0, 30.0, 1).unwrap();
        let v = coupled_dominance_certificate(&sc, &PolicyName::Fcfs, 50, &RngStreams::new(3)).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn inverted_leader_is_caught() {
        let sc = scenario(2, Buffer::Infinite);
        let v = coupled_dominance_certificate_with(&sc, &InvertedLgfs, &PolicyName::PrmpLgfs, 20, &RngStreams::new(4))
            .unwrap();
        assert!(!v.passed());
        assert!(v.first_violation.is_some());
    }

    #[test]
    fn zero_replications_rejected() {
        let sc = scenario(1, Buffer::Infinite);
        assert!(coupled_dominance_certificate(&sc, &PolicyName::Fcfs, 0, &RngStreams::new(5)).is_err());
    }
}
