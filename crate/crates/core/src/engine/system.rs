//! One policy's view of the system: policy state, U(t), counts and logs.
//!
//! `System` applies policy actions and bookkeeping but does not decide when
//! services end; the plain engine draws service times, the coupled runner
//! uses a shared completion clock.

use smallvec::SmallVec;

use super::trace::{EventRecord, RecordKind};
use crate::error::{Error, Result};
use crate::model::{state_from_servers, AgeProcess, CountState, Packet, PacketId, ServerId, StateVector};
use crate::policies::{Action, Policy, PolicyState};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ServiceChange {
    Start { server: ServerId, packet: Packet },
}

pub type ServiceChanges = SmallVec<[ServiceChange; 2]>;

#[derive(Clone, Copy, Debug, Default)]
pub struct Recording {
    pub events: bool,
    pub counts: bool,
}

pub struct System<'p> {
    policy: &'p dyn Policy,
    state: PolicyState,
    m: usize,
    age: AgeProcess,
    counts: CountState,
    arrived: u64,
    completions: Vec<Option<f64>>,
    drops: Vec<(PacketId, f64)>,
    events: Option<Vec<EventRecord>>,
    count_series: Option<Vec<(f64, CountState)>>,
}

impl<'p> System<'p> {
    pub fn new(
        policy: &'p dyn Policy,
        m: usize,
        buffer: crate::model::Buffer,
        n_packets: usize,
        initial_u: f64,
        horizon: f64,
        rec: Recording,
    ) -> Self {
        System {
            policy,
            state: PolicyState::new(m, policy.capacity(buffer), policy.queue_order()),
            m,
            age: AgeProcess::empty(initial_u, horizon),
            counts: CountState::default(),
            arrived: 0,
            completions: vec![None; n_packets],
            drops: Vec::new(),
            events: rec.events.then(Vec::new),
            count_series: rec.counts.then(|| vec![(0.0, CountState::default())]),
        }
    }

    pub fn policy(&self) -> &dyn Policy {
        self.policy
    }

    pub fn state(&self) -> &PolicyState {
        &self.state
    }

    pub fn u(&self) -> f64 {
        self.age.current_u()
    }

    pub fn counts(&self) -> CountState {
        self.counts
    }

    pub fn arrived(&self) -> u64 {
        self.arrived
    }

    pub fn state_vector(&self) -> StateVector {
        let mut serving: SmallVec<[f64; 8]> = SmallVec::new();
        serving.extend(self.state.servers().iter().flatten().map(|p| p.s));
        state_from_servers(self.u(), &serving, self.m).expect("at most m servers are busy")
    }

    fn padded_alphas(&self) -> SmallVec<[f64; 8]> {
        let u = self.u();
        let mut a: SmallVec<[f64; 8]> = SmallVec::new();
        for slot in self.state.servers() {
            let x = slot.map_or(u, |p| p.s.max(u));
            let mut k = a.len();
            a.push(x);
            while k > 0 && a[k - 1] < x {
                a[k] = a[k - 1];
                k -= 1;
            }
            a[k] = x;
        }
        a
    }

    /// `V_self ≥ V_other` componentwise, without building state vectors.
    pub fn dominates(&self, other: &System<'_>) -> bool {
        self.m == other.m
            && self.u() >= other.u()
            && self.padded_alphas().iter().zip(&other.padded_alphas()).all(|(a, b)| a >= b)
    }

    /// Server holding the `rank`-th freshest packet in service (rank 0 is the freshest).
    pub fn server_at_rank(&self, rank: usize) -> Option<ServerId> {
        let servers = self.state.servers();
        if rank >= self.state.busy() {
            return None;
        }
        servers.iter().enumerate().find_map(|(i, p)| {
            let p = p.as_ref()?;
            let fresher = servers.iter().flatten().filter(|q| q.fresher_than(p)).count();
            (fresher == rank).then_some(i)
        })
    }

    fn log(&mut self, t: f64, kind: RecordKind, pkt: PacketId, srv: Option<ServerId>) {
        if let Some(ev) = self.events.as_mut() {
            ev.push(EventRecord { t, kind, pkt, srv });
        }
    }

    fn record_counts(&mut self, t: f64) {
        let c = self.counts;
        if let Some(series) = self.count_series.as_mut() {
            match series.last_mut() {
                Some(last) if last.0 == t => last.1 = c,
                _ => series.push((t, c)),
            }
        }
    }

    fn apply(&mut self, t: f64, actions: &[Action], changes: &mut ServiceChanges) -> Result<()> {
        for action in actions {
            self.state.apply(self.policy.name(), action)?;
            match *action {
                Action::Assign { packet, server } => {
                    self.log(t, RecordKind::Start, packet.id, Some(server));
                    changes.push(ServiceChange::Start { server, packet });
                }
                Action::Preempt { victim, server, replacement } => {
                    self.log(t, RecordKind::Preempt, victim.id, Some(server));
                    self.log(t, RecordKind::Start, replacement.id, Some(server));
                    changes.push(ServiceChange::Start { server, packet: replacement });
                }
                Action::Enqueue(packet) => self.log(t, RecordKind::Enqueue, packet.id, None),
                Action::Drop(packet) => {
                    self.counts.n -= 1;
                    self.drops.push((packet.id, t));
                    self.log(t, RecordKind::Drop, packet.id, None);
                }
                Action::Noop => {}
            }
        }
        let held = (self.state.busy() + self.state.queue().len()) as u64;
        if held != self.counts.n {
            return Err(Error::PolicyViolation {
                policy: self.policy.name().to_string(),
                reason: format!("{} packets in system but {held} held by servers and queue", self.counts.n),
            });
        }
        Ok(())
    }

    pub fn arrive(&mut self, t: f64, pkt: Packet, changes: &mut ServiceChanges) -> Result<()> {
        self.arrived += 1;
        self.counts.n += 1;
        self.log(t, RecordKind::Arrival, pkt.id, None);
        let actions = self.policy.on_arrival(&self.state, pkt);
        self.apply(t, &actions, changes)?;
        self.record_counts(t);
        Ok(())
    }

    /// Delivers the packet on `server`. Returns `false` if the server was idle.
    pub fn complete(&mut self, t: f64, server: ServerId, changes: &mut ServiceChanges) -> Result<bool> {
        let Some(pkt) = self.state.vacate(server) else {
            return Ok(false);
        };
        self.counts.n -= 1;
        self.counts.gamma += 1;
        self.completions[pkt.id as usize - 1] = Some(t);
        self.age.deliver(t, pkt.s);
        self.log(t, RecordKind::Completion, pkt.id, Some(server));
        let actions = self.policy.on_completion(&self.state, server);
        self.apply(t, &actions, changes)?;
        self.record_counts(t);
        Ok(true)
    }

    pub(crate) fn into_parts(self) -> SystemParts {
        SystemParts {
            age: self.age,
            counts: self.counts,
            arrived: self.arrived,
            completions: self.completions,
            drops: self.drops,
            events: self.events.unwrap_or_default(),
            count_series: self.count_series.unwrap_or_default(),
            queued: self.state.queue().len() as u64,
            in_service: self.state.busy() as u64,
        }
    }
}

pub(crate) struct SystemParts {
    pub age: AgeProcess,
    pub counts: CountState,
    pub arrived: u64,
    pub completions: Vec<Option<f64>>,
    pub drops: Vec<(PacketId, f64)>,
    pub events: Vec<EventRecord>,
    pub count_series: Vec<(f64, CountState)>,
    pub queued: u64,
    pub in_service: u64,
}
