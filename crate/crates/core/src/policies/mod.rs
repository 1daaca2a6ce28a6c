//! Scheduling policies.
//!
//! A policy is a pure decision function: given the current [`PolicyState`]
//! and an event it returns the [`Action`]s to apply. The engine applies them
//! through [`PolicyState::apply`], which rejects anything inconsistent
//! (assigning to a busy server, overfilling the buffer, ...).

mod doubles;
mod fcfs;
mod lcfs;
mod lgfs;
mod queue;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub use doubles::{IdlingFcfs, InvertedLgfs};
pub use fcfs::Fcfs;
pub use lcfs::Lcfs;
pub use lgfs::{NpLgfs, PrmpLgfs};
pub use queue::{PacketQueue, QueueOrder};

use crate::error::{Error, Result};
use crate::model::{Buffer, Packet, ServerId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Action {
    Assign { packet: Packet, server: ServerId },
    /// `replacement` takes `server` from `victim`; the victim's fate follows
    /// as a separate `Enqueue` or `Drop`.
    Preempt { victim: Packet, server: ServerId, replacement: Packet },
    Enqueue(Packet),
    Drop(Packet),
    Noop,
}

pub type Actions = SmallVec<[Action; 4]>;

pub trait Policy: Send + Sync {
    fn name(&self) -> &str;

    fn queue_order(&self) -> QueueOrder;

    /// Buffer the policy actually runs with; most policies take the configured one.
    fn capacity(&self, configured: Buffer) -> Buffer {
        configured
    }

    fn is_preemptive(&self) -> bool;

    fn on_arrival(&self, state: &PolicyState, pkt: Packet) -> Actions;

    /// Called after `server` finished its packet and is idle.
    fn on_completion(&self, state: &PolicyState, server: ServerId) -> Actions;
}

/// Queue plus per-server occupancy.
#[derive(Clone, Debug)]
pub struct PolicyState {
    queue: PacketQueue,
    servers: Vec<Option<Packet>>,
    capacity: Buffer,
    alpha_floor: Option<f64>,
    busy: usize,
}

impl PolicyState {
    pub fn new(m: usize, capacity: Buffer, order: QueueOrder) -> Self {
        PolicyState {
            queue: PacketQueue::new(order),
            servers: vec![None; m],
            capacity,
            alpha_floor: None,
            busy: 0,
        }
    }

    pub fn queue(&self) -> &PacketQueue {
        &self.queue
    }

    pub fn servers(&self) -> &[Option<Packet>] {
        &self.servers
    }

    pub fn capacity(&self) -> Buffer {
        self.capacity
    }

    pub fn busy(&self) -> usize {
        self.busy
    }

    /// α: smallest generation time under service, `None` when all servers idle.
    pub fn alpha_floor(&self) -> Option<f64> {
        self.alpha_floor
    }

    pub fn queue_has_room(&self) -> bool {
        self.capacity.admits(self.queue.len())
    }

    /// Lowest-numbered idle server.
    pub fn idle_server(&self) -> Option<ServerId> {
        self.servers.iter().position(Option::is_none)
    }

    /// Busy server whose packet is least recent in `order`.
    pub fn least_recent_in_service(&self, order: QueueOrder) -> Option<(ServerId, Packet)> {
        self.servers
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i, p)))
            .min_by(|x, y| order.cmp(&x.1, &y.1))
    }

    /// Busy server whose packet is most recent in `order`.
    pub fn most_recent_in_service(&self, order: QueueOrder) -> Option<(ServerId, Packet)> {
        self.servers
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i, p)))
            .max_by(|x, y| order.cmp(&x.1, &y.1))
    }

    pub(crate) fn vacate(&mut self, server: ServerId) -> Option<Packet> {
        let p = self.servers.get_mut(server)?.take();
        if p.is_some() {
            self.busy -= 1;
            self.refresh_alpha();
        }
        p
    }

    fn refresh_alpha(&mut self) {
        self.alpha_floor = self.servers.iter().flatten().map(|p| p.s).min_by(f64::total_cmp);
    }

    pub fn apply(&mut self, policy: &str, action: &Action) -> Result<()> {
        let violation = |reason: String| Error::PolicyViolation { policy: policy.to_string(), reason };
        match *action {
            Action::Assign { packet, server } => {
                match self.servers.get(server) {
                    Some(None) => {}
                    Some(Some(p)) => {
                        return Err(violation(format!("server {server} busy with packet {}", p.id)))
                    }
                    None => return Err(violation(format!("no server {server}"))),
                }
                if !self.queue.is_empty() {
                    self.queue.remove(&packet);
                }
                self.servers[server] = Some(packet);
                self.busy += 1;
                self.refresh_alpha();
            }
            Action::Preempt { victim, server, replacement } => {
                if self.servers.get(server).copied().flatten() != Some(victim) {
                    return Err(violation(format!("server {server} is not serving packet {}", victim.id)));
                }
                if !self.queue.is_empty() {
                    self.queue.remove(&replacement);
                }
                self.servers[server] = Some(replacement);
                self.refresh_alpha();
            }
            Action::Enqueue(packet) => {
                if !self.queue_has_room() {
                    return Err(violation(format!("queue full ({}), cannot hold packet {}", self.capacity, packet.id)));
                }
                self.queue.insert(packet);
            }
            Action::Drop(packet) => {
                self.queue.remove(&packet);
            }
            Action::Noop => {}
        }
        Ok(())
    }
}

/// Puts `pkt` in the queue, evicting the least recent waiting packet (in the
/// queue's own order) when full. The newcomer itself is dropped if it is the
/// least recent.
pub(crate) fn admit_evicting_oldest(state: &PolicyState, pkt: Packet, out: &mut Actions) {
    if state.queue_has_room() {
        out.push(Action::Enqueue(pkt));
        return;
    }
    let order = state.queue.order();
    match state.queue.oldest() {
        Some(oldest) if order.cmp(oldest, &pkt).is_lt() => {
            out.push(Action::Drop(*oldest));
            out.push(Action::Enqueue(pkt));
        }
        _ => out.push(Action::Drop(pkt)),
    }
}

/// The registered policies, by their config/CLI names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolicyName {
    #[serde(rename = "prmp-lgfs")]
    PrmpLgfs,
    #[serde(rename = "np-lgfs")]
    NpLgfs,
    #[serde(rename = "fcfs")]
    Fcfs,
    #[serde(rename = "lcfs-prmp")]
    LcfsPrmp,
    #[serde(rename = "lcfs-np-b1")]
    LcfsNpB1,
}

static PRMP_LGFS: PrmpLgfs = PrmpLgfs;
static NP_LGFS: NpLgfs = NpLgfs;
static FCFS: Fcfs = Fcfs;
static LCFS_PRMP: Lcfs = Lcfs::preemptive();
static LCFS_NP_B1: Lcfs = Lcfs::non_preemptive_single_buffer();

impl PolicyName {
    pub const ALL: [PolicyName; 5] = [
        PolicyName::PrmpLgfs,
        PolicyName::NpLgfs,
        PolicyName::Fcfs,
        PolicyName::LcfsPrmp,
        PolicyName::LcfsNpB1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyName::PrmpLgfs => "prmp-lgfs",
            PolicyName::NpLgfs => "np-lgfs",
            PolicyName::Fcfs => "fcfs",
            PolicyName::LcfsPrmp => "lcfs-prmp",
            PolicyName::LcfsNpB1 => "lcfs-np-b1",
        }
    }

    pub fn policy(self) -> &'static dyn Policy {
        match self {
            PolicyName::PrmpLgfs => &PRMP_LGFS,
            PolicyName::NpLgfs => &NP_LGFS,
            PolicyName::Fcfs => &FCFS,
            PolicyName::LcfsPrmp => &LCFS_PRMP,
            PolicyName::LcfsNpB1 => &LCFS_NP_B1,
        }
    }
}

impl fmt::Display for PolicyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::UnknownPolicy(s.to_string()))
    }
}

impl Policy for PolicyName {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn queue_order(&self) -> QueueOrder {
        self.policy().queue_order()
    }

    fn capacity(&self, configured: Buffer) -> Buffer {
        self.policy().capacity(configured)
    }

    fn is_preemptive(&self) -> bool {
        self.policy().is_preemptive()
    }

    fn on_arrival(&self, state: &PolicyState, pkt: Packet) -> Actions {
        self.policy().on_arrival(state, pkt)
    }

    fn on_completion(&self, state: &PolicyState, server: ServerId) -> Actions {
        self.policy().on_completion(state, server)
    }
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in PolicyName::ALL {
            assert_eq!(p.as_str().parse::<PolicyName>().unwrap(), p);
            assert_eq!(p.policy().name(), p.as_str());
            let json = serde_json::to_string(&p).unwrap();
            assert_eq!(json, format!("\"{}\"", p.as_str()));
        }
        assert!(matches!("lifo".parse::<PolicyName>(), Err(Error::UnknownPolicy(_))));
    }

    #[test]
    fn apply_rejects_inconsistent_actions() {
        let policy = PolicyName::Fcfs;
        let mut st = state_with(&policy, Buffer::Finite(1), &[Some(pkt(1, 0.0, 0.0))], &[]);
        let busy = Action::Assign { packet: pkt(2, 1.0, 1.0), server: 0 };
        assert!(st.apply("t", &busy).is_err());
        st.apply("t", &Action::Enqueue(pkt(2, 1.0, 1.0))).unwrap();
        assert!(st.apply("t", &Action::Enqueue(pkt(3, 2.0, 2.0))).is_err());
        let wrong_victim = Action::Preempt { victim: pkt(9, 0.0, 0.0), server: 0, replacement: pkt(3, 2.0, 2.0) };
        assert!(st.apply("t", &wrong_victim).is_err());
    }

    #[test]
    fn alpha_floor_tracks_service() {
        let policy = PolicyName::PrmpLgfs;
        let mut st = state_with(&policy, Buffer::Infinite, &[Some(pkt(2, 5.0, 5.0)), None], &[]);
        assert_eq!(st.alpha_floor(), Some(5.0));
        st.apply("t", &Action::Assign { packet: pkt(1, 3.0, 6.0), server: 1 }).unwrap();
        assert_eq!(st.alpha_floor(), Some(3.0));
        st.vacate(1);
        assert_eq!(st.alpha_floor(), Some(5.0));
        st.vacate(0);
        assert_eq!(st.alpha_floor(), None);
    }

    #[test]
    fn eviction_keeps_most_recent() {
        let policy = PolicyName::NpLgfs;
        let st = state_with(&policy, Buffer::Finite(1), &[Some(pkt(1, 0.0, 0.0))], &[pkt(3, 3.0, 3.0)]);
        let mut out = Actions::new();
        admit_evicting_oldest(&st, pkt(2, 2.0, 4.0), &mut out);
        assert_eq!(out.as_slice(), &[Action::Drop(pkt(2, 2.0, 4.0))]);
        out.clear();
        admit_evicting_oldest(&st, pkt(4, 4.0, 4.0), &mut out);
        assert_eq!(out.as_slice(), &[Action::Drop(pkt(3, 3.0, 3.0)), Action::Enqueue(pkt(4, 4.0, 4.0))]);
        let zero = state_with(&policy, Buffer::Finite(0), &[Some(pkt(1, 0.0, 0.0))], &[]);
        out.clear();
        admit_evicting_oldest(&zero, pkt(4, 4.0, 4.0), &mut out);
        assert_eq!(out.as_slice(), &[Action::Drop(pkt(4, 4.0, 4.0))]);
    }
}
