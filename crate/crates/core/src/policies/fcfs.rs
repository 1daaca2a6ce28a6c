use super::{Action, Actions, Policy, PolicyState, QueueOrder};
use crate::model::{Packet, ServerId};

/// First-Come-First-Served by arrival time, tail drop on a full buffer.
#[derive(Clone, Copy, Debug, Default)]
pub struct Fcfs;

impl Policy for Fcfs {
    fn name(&self) -> &str {
        "fcfs"
    }

    fn queue_order(&self) -> QueueOrder {
        QueueOrder::Arrival
    }

    fn is_preemptive(&self) -> bool {
        false
    }

    fn on_arrival(&self, state: &PolicyState, pkt: Packet) -> Actions {
        let mut out = Actions::new();
        if let Some(server) = state.idle_server() {
            out.push(Action::Assign { packet: pkt, server });
        } else if state.queue_has_room() {
            out.push(Action::Enqueue(pkt));
        } else {
            out.push(Action::Drop(pkt));
        }
        out
    }

    fn on_completion(&self, state: &PolicyState, server: ServerId) -> Actions {
        let mut out = Actions::new();
        match state.queue().oldest() {
            Some(&packet) => out.push(Action::Assign { packet, server }),
            None => out.push(Action::Noop),
        }
        out
    }
}
