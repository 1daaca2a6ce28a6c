use super::{admit_evicting_oldest, Action, Actions, Policy, PolicyState, QueueOrder};
use crate::model::{Packet, ServerId};

/// Preemptive Last-Generated-First-Served.
///
/// A new packet takes an idle server if there is one. Otherwise it preempts
/// the server holding α (the stalest packet in service) when it is fresher,
/// and the preempted packet goes back to the queue. A completion pulls the
/// freshest waiting packet.
#[derive(Clone, Copy, Debug, Default)]
pub struct PrmpLgfs;

impl Policy for PrmpLgfs {
    fn name(&self) -> &str {
        "prmp-lgfs"
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
        match state.least_recent_in_service(QueueOrder::Generation) {
            Some((server, victim)) if pkt.fresher_than(&victim) => {
                out.push(Action::Preempt { victim, server, replacement: pkt });
                admit_evicting_oldest(state, victim, &mut out);
            }
            _ => admit_evicting_oldest(state, pkt, &mut out),
        }
        out
    }

    fn on_completion(&self, state: &PolicyState, server: ServerId) -> Actions {
        serve_freshest(state, server)
    }
}

/// Non-preemptive LGFS: arrivals never interrupt service.
#[derive(Clone, Copy, Debug, Default)]
pub struct NpLgfs;

impl Policy for NpLgfs {
    fn name(&self) -> &str {
        "np-lgfs"
    }

    fn queue_order(&self) -> QueueOrder {
        QueueOrder::Generation
    }

    fn is_preemptive(&self) -> bool {
        false
    }

    fn on_arrival(&self, state: &PolicyState, pkt: Packet) -> Actions {
        let mut out = Actions::new();
        match state.idle_server() {
            Some(server) => out.push(Action::Assign { packet: pkt, server }),
            None => admit_evicting_oldest(state, pkt, &mut out),
        }
        out
    }

    fn on_completion(&self, state: &PolicyState, server: ServerId) -> Actions {
        serve_freshest(state, server)
    }
}

pub(super) fn serve_freshest(state: &PolicyState, server: ServerId) -> Actions {
    let mut out = Actions::new();
    match state.queue().newest() {
        Some(&packet) => out.push(Action::Assign { packet, server }),
        None => out.push(Action::Noop),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::model::Buffer;

    #[test]
    fn fresh_arrival_preempts_alpha() {
        let st = state_with(&PrmpLgfs, Buffer::Finite(1), &[Some(pkt(1, 2.0, 2.0))], &[]);
        let mut st2 = st.clone();
        let acts = PrmpLgfs.on_arrival(&st, pkt(2, 3.0, 3.0));
        assert_eq!(
            acts.as_slice(),
            &[
                Action::Preempt { victim: pkt(1, 2.0, 2.0), server: 0, replacement: pkt(2, 3.0, 3.0) },
                Action::Enqueue(pkt(1, 2.0, 2.0)),
            ]
        );
        apply_all(&mut st2, &acts);
        assert_eq!(st2.alpha_floor(), Some(3.0));
        assert_eq!(st2.queue().len(), 1);
    }

    #[test]
    fn stale_arrival_without_buffer_is_dropped() {
        let st = state_with(&PrmpLgfs, Buffer::Finite(0), &[Some(pkt(2, 2.0, 2.0))], &[]);
        let acts = PrmpLgfs.on_arrival(&st, pkt(1, 1.0, 2.5));
        assert_eq!(acts.as_slice(), &[Action::Drop(pkt(1, 1.0, 2.5))]);
    }

    #[test]
    fn preempted_victim_dropped_without_buffer() {
        let st = state_with(&PrmpLgfs, Buffer::Finite(0), &[Some(pkt(1, 2.0, 2.0))], &[]);
        let acts = PrmpLgfs.on_arrival(&st, pkt(2, 3.0, 3.0));
        assert_eq!(acts[1], Action::Drop(pkt(1, 2.0, 2.0)));
    }

    #[test]
    fn idle_server_gets_arrival() {
        let mut st = state_with(&PrmpLgfs, Buffer::Infinite, &[Some(pkt(1, 4.0, 4.0)), None], &[]);
        let acts = PrmpLgfs.on_arrival(&st, pkt(2, 5.0, 5.0));
        assert_eq!(acts.as_slice(), &[Action::Assign { packet: pkt(2, 5.0, 5.0), server: 1 }]);
        apply_all(&mut st, &acts);
        assert_eq!(st.alpha_floor(), Some(4.0));
    }

    #[test]
    fn preemption_targets_the_stalest_server() {
        let st = state_with(
            &PrmpLgfs,
            Buffer::Infinite,
            &[Some(pkt(3, 5.0, 5.0)), Some(pkt(1, 2.0, 6.0)), Some(pkt(2, 4.0, 4.0))],
            &[],
        );
        let acts = PrmpLgfs.on_arrival(&st, pkt(4, 4.5, 7.0));
        assert!(matches!(acts[0], Action::Preempt { server: 1, .. }));
    }

    #[test]
    fn completion_serves_freshest_waiting() {
        let waiting = [pkt(1, 1.0, 1.0), pkt(3, 4.0, 4.0), pkt(2, 2.0, 2.0)];
        let mut st = state_with(&PrmpLgfs, Buffer::Infinite, &[None], &waiting);
        let acts = PrmpLgfs.on_completion(&st, 0);
        assert_eq!(acts.as_slice(), &[Action::Assign { packet: pkt(3, 4.0, 4.0), server: 0 }]);
        apply_all(&mut st, &acts);
        assert_eq!(st.queue().len(), 2);
        assert_eq!(st.alpha_floor(), Some(4.0));

        let empty = state_with(&PrmpLgfs, Buffer::Infinite, &[None], &[]);
        assert_eq!(PrmpLgfs.on_completion(&empty, 0).as_slice(), &[Action::Noop]);
    }

    #[test]
    fn equal_generation_times_favor_larger_id() {
        let waiting = [pkt(4, 2.0, 3.0), pkt(5, 2.0, 2.5)];
        let st = state_with(&PrmpLgfs, Buffer::Infinite, &[None], &waiting);
        let acts = PrmpLgfs.on_completion(&st, 0);
        assert_eq!(acts.as_slice(), &[Action::Assign { packet: pkt(5, 2.0, 2.5), server: 0 }]);
    }

    #[test]
    fn non_preemptive_variant_queues_fresh_arrivals() {
        let st = state_with(&NpLgfs, Buffer::Finite(2), &[Some(pkt(1, 1.0, 1.0))], &[]);
        let acts = NpLgfs.on_arrival(&st, pkt(2, 3.0, 3.0));
        assert_eq!(acts.as_slice(), &[Action::Enqueue(pkt(2, 3.0, 3.0))]);

        let idle = state_with(&NpLgfs, Buffer::Finite(2), &[None], &[]);
        let acts = NpLgfs.on_arrival(&idle, pkt(2, 3.0, 3.0));
        assert_eq!(acts.as_slice(), &[Action::Assign { packet: pkt(2, 3.0, 3.0), server: 0 }]);

        let waiting = state_with(&NpLgfs, Buffer::Infinite, &[None], &[pkt(1, 1.0, 1.0), pkt(2, 9.0, 9.0)]);
        let acts = NpLgfs.on_completion(&waiting, 0);
        assert_eq!(acts.as_slice(), &[Action::Assign { packet: pkt(2, 9.0, 9.0), server: 0 }]);
    }
}
