//! Keyed random substreams.
//!
//! Every stream is a pure function of `(root seed, role, index)`, so the
//! numbers a run sees never depend on how other streams were consumed or on
//! thread scheduling.

use rand::SeedableRng;
use rand_distr::{Distribution, Exp};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::model::PacketId;

pub type StreamRng = Xoshiro256PlusPlus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StreamRole {
    /// One draw per service start: the `attempt`-th time `packet` enters service.
    Service { packet: PacketId, attempt: u32 },
    Arrival,
    Delay,
    /// Shared completion clock of a coupled dual run.
    Coupling,
    /// Scenario-level randomness for test harnesses (e.g. random instances).
    Instance(u64),
}

impl StreamRole {
    fn key(self) -> (u64, u64, u64) {
        match self {
            StreamRole::Service { packet, attempt } => (1, packet as u64, attempt as u64),
            StreamRole::Arrival => (2, 0, 0),
            StreamRole::Delay => (3, 0, 0),
            StreamRole::Coupling => (4, 0, 0),
            StreamRole::Instance(i) => (5, i, 0),
        }
    }
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStreams {
    root: u64,
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        RngStreams { root: mix64(seed) }
    }

    /// Independent child family for replication `index`.
    pub fn replication(&self, index: u64) -> RngStreams {
        RngStreams { root: mix64(mix64(self.root ^ 0x5245_504C) ^ index) }
    }

    pub fn rng(&self, role: StreamRole) -> StreamRng {
        let (tag, i, j) = role.key();
        let k = mix64(mix64(mix64(self.root ^ tag) ^ i) ^ j);
        StreamRng::seed_from_u64(k)
    }
}

/// Exponential(μ) service duration for one service start.
pub fn sample_service(streams: &RngStreams, mu: f64, packet: PacketId, attempt: u32) -> f64 {
    let exp = Exp::new(mu).expect("service rate must be positive");
    exp.sample(&mut streams.rng(StreamRole::Service { packet, attempt }))
}
