//! Seeded discrete-event kernel.
//!
//! A run is a pure function of `(scenario, policy, streams)`. Every service
//! start draws a fresh exponential duration keyed by `(packet, attempt)`;
//! a preempted service is simply forgotten and its completion never fires.

mod arrivals;
mod calendar;
pub mod coupled;
mod rng;
mod system;
mod trace;

pub use arrivals::{apply_arrival_delays, gen_erlang2_arrivals, gen_poisson_arrivals, DelayMode};
pub use calendar::{Event, EventKind, EventQueue};
pub use rng::{sample_service, RngStreams, StreamRng, StreamRole};
pub use system::{Recording, ServiceChange, ServiceChanges, System};
pub use trace::{EventRecord, RecordKind, Trace};

use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::policies::Policy;

pub const DEFAULT_EVENT_CAP: u64 = 100_000_000;

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub record: Recording,
    pub event_cap: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { record: Recording { events: true, counts: true }, event_cap: DEFAULT_EVENT_CAP }
    }
}

impl RunOptions {
    /// No event log or count series; only the age process and per-packet results.
    pub fn lean() -> Self {
        RunOptions { record: Recording::default(), ..Default::default() }
    }
}

/// Runs `policy` on `scenario` with full recording.
pub fn run(scenario: &Scenario, policy: &dyn Policy, streams: &RngStreams) -> Result<Trace> {
    run_with(scenario, policy, streams, RunOptions::default())
}

pub fn run_with(scenario: &Scenario, policy: &dyn Policy, streams: &RngStreams, opts: RunOptions) -> Result<Trace> {
    scenario.validate()?;
    let horizon = scenario.horizon;
    let arrivals: Vec<_> = scenario.arrival_order().into_iter().filter(|p| p.a <= horizon).collect();
    let mut calendar = EventQueue::new(arrivals, scenario.m);
    let mut system = System::new(
        policy,
        scenario.m,
        scenario.buffer,
        scenario.n(),
        scenario.initial_u,
        horizon,
        opts.record,
    );
    let mut attempts = vec![0u32; scenario.n()];
    let mut changes = ServiceChanges::new();
    let mut processed = 0u64;

    while let Some(t) = calendar.peek_time() {
        if t > horizon {
            break;
        }
        let event = calendar.pop().expect("peeked event exists");
        processed += 1;
        if processed > opts.event_cap {
            return Err(Error::Nonconvergence { cap: opts.event_cap });
        }
        changes.clear();
        match event.kind {
            EventKind::Arrival(pkt) => system.arrive(t, pkt, &mut changes)?,
            EventKind::Completion { server, packet } => {
                debug_assert_eq!(system.state().servers()[server].map(|p| p.id), Some(packet));
                system.complete(t, server, &mut changes)?;
            }
        }
        for change in &changes {
            let ServiceChange::Start { server, packet } = *change;
            let attempt = &mut attempts[packet.id as usize - 1];
            let duration = sample_service(streams, scenario.mu, packet.id, *attempt);
            *attempt += 1;
            calendar.schedule_completion(t + duration, server, packet.id);
        }
    }

    let parts = system.into_parts();
    Ok(Trace {
        scenario: scenario.clone(),
        policy: policy.name().to_string(),
        events: parts.events,
        completions: parts.completions,
        age: parts.age,
        counts: parts.count_series,
        drops: parts.drops,
        arrived: parts.arrived,
        delivered: parts.counts.gamma,
        in_system: parts.queued + parts.in_service,
        processed_events: processed,
    })
}
