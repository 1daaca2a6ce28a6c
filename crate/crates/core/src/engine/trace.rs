use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{AgeProcess, CountState, PacketId, Scenario, ServerId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Arrival,
    Enqueue,
    Start,
    Preempt,
    Completion,
    Drop,
}

/// One line of the event log.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub t: f64,
    pub kind: RecordKind,
    pub pkt: PacketId,
    pub srv: Option<ServerId>,
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct Trace {
    pub scenario: Scenario,
    pub policy: String,
    pub events: Vec<EventRecord>,
    /// Indexed by `id - 1`.
    pub completions: Vec<Option<f64>>,
    pub age: AgeProcess,
    pub counts: Vec<(f64, CountState)>,
    pub drops: Vec<(PacketId, f64)>,
    pub arrived: u64,
    pub delivered: u64,
    pub in_system: u64,
    pub processed_events: u64,
}

impl Trace {
    pub fn completion(&self, id: PacketId) -> Option<f64> {
        self.completions[id as usize - 1]
    }

    /// `(a_i, c_i)` of every delivered packet, by id.
    pub fn deliveries(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.scenario
            .packets
            .iter()
            .zip(&self.completions)
            .filter_map(|(p, c)| c.map(|c| (p.a, c)))
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for ev in &self.events {
            serde_json::to_writer(&mut out, ev)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Checks the structural invariants of a recorded trace; returns the first problem found.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let dropped = self.drops.len() as u64;
        if self.arrived != self.delivered + dropped + self.in_system {
            return Err(format!(
                "conservation: {} arrived, {} delivered, {dropped} dropped, {} in system",
                self.arrived, self.delivered, self.in_system
            ));
        }
        let m = self.scenario.m;
        let mut on_server: Vec<Option<PacketId>> = vec![None; m];
        let mut last_t = f64::NEG_INFINITY;
        let mut done = vec![false; self.scenario.n()];
        for ev in &self.events {
            if ev.t < last_t {
                return Err(format!("time goes backwards at {ev:?}"));
            }
            last_t = ev.t;
            let arrival = self.scenario.packet(ev.pkt).a;
            match ev.kind {
                RecordKind::Start => {
                    let srv = ev.srv.ok_or("start without server")?;
                    if ev.t < arrival {
                        return Err(format!("packet {} served before arrival", ev.pkt));
                    }
                    if on_server[srv].is_some() {
                        return Err(format!("server {srv} double-booked at {}", ev.t));
                    }
                    on_server[srv] = Some(ev.pkt);
                }
                RecordKind::Preempt => {
                    let srv = ev.srv.ok_or("preempt without server")?;
                    if on_server[srv] != Some(ev.pkt) {
                        return Err(format!("preempting packet {} not on server {srv}", ev.pkt));
                    }
                    on_server[srv] = None;
                }
                RecordKind::Completion => {
                    let srv = ev.srv.ok_or("completion without server")?;
                    if on_server[srv] != Some(ev.pkt) {
                        return Err(format!("completion of packet {} without a matching start", ev.pkt));
                    }
                    if std::mem::replace(&mut done[ev.pkt as usize - 1], true) {
                        return Err(format!("packet {} completed twice", ev.pkt));
                    }
                    on_server[srv] = None;
                }
                RecordKind::Arrival | RecordKind::Enqueue | RecordKind::Drop => {}
            }
        }
        Ok(())
    }
}
