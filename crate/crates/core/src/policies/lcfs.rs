use super::lgfs::serve_freshest;
use super::{admit_evicting_oldest, Action, Actions, Policy, PolicyState, QueueOrder};
use crate::model::{Buffer, Packet, ServerId};

/// Last-Come-First-Served: LGFS with arrival time in place of generation time.
#[derive(Clone, Copy, Debug)]
pub struct Lcfs {
    preemptive: bool,
    fixed_buffer: Option<Buffer>,
}

impl Lcfs {
    pub const fn new(preemptive: bool) -> Self {
        Lcfs { preemptive, fixed_buffer: None }
    }

    pub const fn preemptive() -> Self {
        Lcfs::new(true)
    }

    /// Non-preemptive with one waiting slot; a new arrival replaces the waiting packet.
    pub const fn non_preemptive_single_buffer() -> Self {
        Lcfs { preemptive: false, fixed_buffer: Some(Buffer::Finite(1)) }
    }
}

impl Policy for Lcfs {
    fn name(&self) -> &str {
        match (self.preemptive, self.fixed_buffer) {
            (true, _) => "lcfs-prmp",
            (false, Some(Buffer::Finite(1))) => "lcfs-np-b1",
            (false, _) => "lcfs-np",
        }
    }

    fn queue_order(&self) -> QueueOrder {
        QueueOrder::Arrival
    }

    fn capacity(&self, configured: Buffer) -> Buffer {
        self.fixed_buffer.unwrap_or(configured)
    }

    fn is_preemptive(&self) -> bool {
        self.preemptive
    }

    fn on_arrival(&self, state: &PolicyState, pkt: Packet) -> Actions {
        let mut out = Actions::new();
        if let Some(server) = state.idle_server() {
            out.push(Action::Assign { packet: pkt, server });
            return out;
        }
        if self.preemptive {
            if let Some((server, victim)) = state.least_recent_in_service(QueueOrder::Arrival) {
                if pkt.arrived_after(&victim) {
                    out.push(Action::Preempt { victim, server, replacement: pkt });
                    admit_evicting_oldest(state, victim, &mut out);
                    return out;
                }
            }
        }
        admit_evicting_oldest(state, pkt, &mut out);
        out
    }

    fn on_completion(&self, state: &PolicyState, server: ServerId) -> Actions {
        // the queue is ordered by arrival, so its newest is the last to arrive
        serve_freshest(state, server)
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;

    #[test]
    fn single_buffer_replaces_waiting_packet() {
        let policy = Lcfs::non_preemptive_single_buffer();
        let st = state_with(&policy, Buffer::Infinite, &[Some(pkt(2, 1.0, 1.0))], &[pkt(3, 2.0, 2.0)]);
        assert_eq!(st.capacity(), Buffer::Finite(1));
        let acts = policy.on_arrival(&st, pkt(4, 3.0, 3.0));
        assert_eq!(acts.as_slice(), &[Action::Drop(pkt(3, 2.0, 2.0)), Action::Enqueue(pkt(4, 3.0, 3.0))]);
    }

    #[test]
    fn preemptive_ignores_generation_time() {
        let policy = Lcfs::preemptive();
        let st = state_with(&policy, Buffer::Finite(0), &[Some(pkt(2, 5.0, 5.0))], &[]);
        // generated long ago but arrived last
        let acts = policy.on_arrival(&st, pkt(1, 0.0, 6.0));
        assert_eq!(acts[0], Action::Preempt { victim: pkt(2, 5.0, 5.0), server: 0, replacement: pkt(1, 0.0, 6.0) });
        assert_eq!(acts[1], Action::Drop(pkt(2, 5.0, 5.0)));
    }

    #[test]
    fn completion_serves_last_arrival() {
        let policy = Lcfs::new(false);
        let st = state_with(&policy, Buffer::Infinite, &[None], &[pkt(1, 0.0, 9.0), pkt(2, 1.0, 2.0)]);
        let acts = policy.on_completion(&st, 0);
        assert_eq!(acts.as_slice(), &[Action::Assign { packet: pkt(1, 0.0, 9.0), server: 0 }]);
    }

    #[test]
    fn names() {
        assert_eq!(Lcfs::preemptive().name(), "lcfs-prmp");
        assert_eq!(Lcfs::non_preemptive_single_buffer().name(), "lcfs-np-b1");
        assert_eq!(Lcfs::new(false).name(), "lcfs-np");
    }
}
