//! Event calendar: pre-sorted arrivals merged with a heap of completions.
//!
//! Ties in time go to completions first, then to the smaller packet id.
//! Preemption cancels a server's pending completion by bumping the server's
//! epoch; cancelled entries are skipped lazily when they surface.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::model::{cmp_key, Packet, PacketId, ServerId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EventKind {
    Arrival(Packet),
    Completion { server: ServerId, packet: PacketId },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
}

#[derive(Clone, Copy, Debug)]
struct Pending {
    t: f64,
    server: ServerId,
    packet: PacketId,
    epoch: u64,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_key(self.t, self.packet, other.t, other.packet).then(self.server.cmp(&other.server))
    }
}

#[derive(Debug)]
pub struct EventQueue {
    arrivals: Vec<Packet>,
    next_arrival: usize,
    completions: BinaryHeap<Reverse<Pending>>,
    epochs: Vec<u64>,
}

impl EventQueue {
    /// `arrivals` must already be sorted by `(a, id)`.
    pub fn new(arrivals: Vec<Packet>, servers: usize) -> Self {
        debug_assert!(arrivals.windows(2).all(|w| cmp_key(w[0].a, w[0].id, w[1].a, w[1].id).is_lt()));
        EventQueue { arrivals, next_arrival: 0, completions: BinaryHeap::new(), epochs: vec![0; servers] }
    }

    /// Schedules `server`'s completion, replacing any pending one.
    pub fn schedule_completion(&mut self, t: f64, server: ServerId, packet: PacketId) {
        self.epochs[server] += 1;
        self.completions.push(Reverse(Pending { t, server, packet, epoch: self.epochs[server] }));
    }

    pub fn cancel(&mut self, server: ServerId) {
        self.epochs[server] += 1;
    }

    fn skip_cancelled(&mut self) {
        while let Some(Reverse(top)) = self.completions.peek() {
            if top.epoch == self.epochs[top.server] {
                break;
            }
            self.completions.pop();
        }
    }

    pub fn peek_time(&mut self) -> Option<f64> {
        self.skip_cancelled();
        let c = self.completions.peek().map(|r| r.0.t);
        let a = self.arrivals.get(self.next_arrival).map(|p| p.a);
        match (c, a) {
            (Some(c), Some(a)) => Some(c.min(a)),
            (c, a) => c.or(a),
        }
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.skip_cancelled();
        let arrival = self.arrivals.get(self.next_arrival).copied();
        let completion = self.completions.peek().map(|r| r.0);
        let take_completion = match (completion, arrival) {
            (Some(c), Some(a)) => c.t <= a.a,
            (Some(_), None) => true,
            (None, _) => false,
        };
        if take_completion {
            let c = self.completions.pop().unwrap().0;
            Some(Event { t: c.t, kind: EventKind::Completion { server: c.server, packet: c.packet } })
        } else {
            let a = arrival?;
            self.next_arrival += 1;
            Some(Event { t: a.a, kind: EventKind::Arrival(a) })
        }
    }
}
