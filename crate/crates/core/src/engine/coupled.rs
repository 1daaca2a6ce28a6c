//! Two policies driven in lockstep on one sample path.
//!
//! Both systems see the same arrivals. Completions come from a single shared
//! clock: epochs of a Poisson(mμ) process, each marked with a uniform rank
//! `l ∈ {0, …, m-1}`. At an epoch each system delivers the packet holding
//! the `l`-th largest generation time among its busy servers, or does
//! nothing if fewer than `l + 1` servers are busy. Because service is
//! exponential, every busy server in either system still completes at rate
//! μ independently of the past, so each marginal is the right process; the
//! coupling only ties which ranks finish together.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::rng::{RngStreams, StreamRole};
use super::system::{Recording, ServiceChanges, System};
use super::trace::EventRecord;
use crate::error::Result;
use crate::model::Scenario;
use crate::policies::Policy;

/// What a check sees after each epoch.
pub struct Epoch<'a, 'p> {
    pub t: f64,
    pub leader: &'a System<'p>,
    pub follower: &'a System<'p>,
}

#[derive(Clone, Debug)]
pub struct CoupledViolation {
    pub t: f64,
    pub reason: String,
    pub leader_events: Vec<EventRecord>,
    pub follower_events: Vec<EventRecord>,
}

#[derive(Clone, Debug)]
pub struct CoupledOutcome {
    /// Arrivals plus clock epochs at which at least one system delivered.
    pub epochs: u64,
    pub violation: Option<CoupledViolation>,
}

fn drive<F>(
    scenario: &Scenario,
    leader: &dyn Policy,
    follower: &dyn Policy,
    streams: &RngStreams,
    rec: Recording,
    stop_at: f64,
    mut check: F,
) -> Result<(u64, Option<(f64, String)>, Vec<EventRecord>, Vec<EventRecord>)>
where
    F: FnMut(&Epoch) -> Option<String>,
{
    let m = scenario.m;
    let horizon = scenario.horizon.min(stop_at);
    let mk = |p| System::new(p, m, scenario.buffer, scenario.n(), scenario.initial_u, scenario.horizon, rec);
    let mut lead = mk(leader);
    let mut foll = mk(follower);
    let arrivals = scenario.arrival_order();
    let clock = Exp::new(m as f64 * scenario.mu).expect("positive rate");
    let mut rng = streams.rng(StreamRole::Coupling);
    let mut tick = clock.sample(&mut rng);
    let mut next = 0usize;
    let mut changes = ServiceChanges::new();
    let mut epochs = 0u64;
    let mut failure = None;

    loop {
        let a = arrivals.get(next).map_or(f64::INFINITY, |p| p.a);
        let t = tick.min(a);
        if t > horizon {
            break;
        }
        if tick <= a {
            let rank = rng.random_range(0..m);
            tick += clock.sample(&mut rng);
            let mut moved = false;
            for sys in [&mut lead, &mut foll] {
                if let Some(server) = sys.server_at_rank(rank) {
                    moved |= sys.complete(t, server, &mut changes)?;
                }
            }
            if !moved {
                continue;
            }
        } else {
            let pkt = arrivals[next];
            next += 1;
            lead.arrive(t, pkt, &mut changes)?;
            foll.arrive(t, pkt, &mut changes)?;
        }
        changes.clear();
        epochs += 1;
        if let Some(reason) = check(&Epoch { t, leader: &lead, follower: &foll }) {
            failure = Some((t, reason));
            break;
        }
    }
    let lp = lead.into_parts();
    let fp = foll.into_parts();
    Ok((epochs, failure, lp.events, fp.events))
}

/// Runs `leader` and `follower` coupled; `check` is evaluated after every
/// epoch and a `Some(reason)` stops the run. On failure the run is replayed
/// with event logging so the violation carries both traces.
pub fn run_coupled<F>(
    scenario: &Scenario,
    leader: &dyn Policy,
    follower: &dyn Policy,
    streams: &RngStreams,
    mut check: F,
) -> Result<CoupledOutcome>
where
    F: FnMut(&Epoch) -> Option<String>,
{
    scenario.validate()?;
    let (epochs, failure, _, _) =
        drive(scenario, leader, follower, streams, Recording::default(), f64::INFINITY, &mut check)?;
    let violation = match failure {
        None => None,
        Some((t, reason)) => {
            let rec = Recording { events: true, counts: false };
            let (_, _, leader_events, follower_events) =
                drive(scenario, leader, follower, streams, rec, t, |_| None)?;
            Some(CoupledViolation { t, reason, leader_events, follower_events })
        }
    };
    Ok(CoupledOutcome { epochs, violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dominates, Buffer};
    use crate::policies::PolicyName;

    fn scenario(m: usize) -> Scenario {
        let pairs: Vec<(f64, f64)> = (0..200).map(|i| (i as f64 * 0.3, i as f64 * 0.3 + (i % 3) as f64)).collect();
        Scenario::new(&pairs, Buffer::Finite(2), m, 1.0, 80.0, 5).unwrap()
    }

    #[test]
    fn self_coupling_is_identical() {
        let sc = scenario(3);
        let p = PolicyName::PrmpLgfs;
        let out = run_coupled(&sc, &p, &p, &RngStreams::new(2), |e| {
            (e.leader.state_vector() != e.follower.state_vector()).then(|| "diverged".to_string())
        })
        .unwrap();
        assert!(out.violation.is_none());
        assert!(out.epochs > 200);
    }

    #[test]
    fn failing_check_carries_dual_trace() {
        let sc = scenario(2);
        let out = run_coupled(&sc, &PolicyName::Fcfs, &PolicyName::PrmpLgfs, &RngStreams::new(9), |e| {
            let ok = dominates(&e.leader.state_vector(), &e.follower.state_vector()).unwrap();
            (!ok).then(|| "fcfs fell behind".to_string())
        })
        .unwrap();
        let v = out.violation.expect("fcfs cannot dominate prmp-lgfs on this path");
        assert!(!v.leader_events.is_empty());
        assert!(v.leader_events.last().unwrap().t <= v.t);
        assert!(!v.follower_events.is_empty());
    }
}
