//! Deliberately wrong policies used to show the certificates can fail.

use super::{Action, Actions, Policy, PolicyState, QueueOrder};
use crate::model::{Packet, ServerId};

/// Preemptive LGFS with the freshness order flipped: it keeps the stalest
/// packets in service and serves the stalest waiting packet first.
#[derive(Clone, Copy, Debug, Default)]
pub struct InvertedLgfs;

impl Policy for InvertedLgfs {
    fn name(&self) -> &str {
        "inverted-lgfs"
    }

    fn queue_order(&self) -> QueueOrder {
        QueueOrder::Generation
    }

    fn is_preemptive(&self) -> bool {
        true
    }

    fn on_arrival(&self, state: &PolicyState, pkt: Packet) -> Actions {
        let mut out = Actions::new();
        if let Some(server) = state.idle_server() {
            out.push(Action::Assign { packet: pkt, server });
            return out;
        }
        let victim = state.most_recent_in_service(QueueOrder::Generation);
        let (displaced, mut preempt) = match victim {
            Some((server, victim)) if victim.fresher_than(&pkt) => {
                (victim, Some(Action::Preempt { victim, server, replacement: pkt }))
            }
            _ => (pkt, None),
        };
        out.extend(preempt.take());
        if state.queue_has_room() {
            out.push(Action::Enqueue(displaced));
        } else {
            match state.queue().newest() {
                Some(newest) if newest.fresher_than(&displaced) => {
                    out.push(Action::Drop(*newest));
                    out.push(Action::Enqueue(displaced));
                }
                _ => out.push(Action::Drop(displaced)),
            }
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

/// FCFS that only starts service at arrival epochs, so a server freed by a
/// completion idles while packets wait. Not work-conserving.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdlingFcfs;

impl Policy for IdlingFcfs {
    fn name(&self) -> &str {
        "idling-fcfs"
    }

    fn queue_order(&self) -> QueueOrder {
        QueueOrder::Arrival
    }

    fn is_preemptive(&self) -> bool {
        false
    }

    fn on_arrival(&self, state: &PolicyState, pkt: Packet) -> Actions {
        let mut out = Actions::new();
        match state.idle_server() {
            Some(server) => match state.queue().oldest() {
                Some(&head) => {
                    out.push(Action::Assign { packet: head, server });
                    out.push(Action::Enqueue(pkt));
                }
                None => out.push(Action::Assign { packet: pkt, server }),
            },
            None if state.queue_has_room() => out.push(Action::Enqueue(pkt)),
            None => out.push(Action::Drop(pkt)),
        }
        out
    }

    fn on_completion(&self, _state: &PolicyState, _server: ServerId) -> Actions {
        let mut out = Actions::new();
        out.push(Action::Noop);
        out
    }
}
