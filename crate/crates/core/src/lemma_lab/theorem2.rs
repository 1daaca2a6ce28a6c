use crate::engine::coupled::Epoch;
use crate::engine::RngStreams;
use crate::error::{Error, Result};
use crate::metrics::{certify, CertificateVerdict};
use crate::model::{Buffer, Scenario};
use crate::policies::{Policy, PolicyName};

/// `(N, γ)` equality check for use with [`certify`].
pub fn count_equality(e: &Epoch) -> Option<String> {
    let (p, q) = (e.leader.counts(), e.follower.counts());
    (p != q).then(|| format!("t={}: (N, γ) = ({}, {}) vs ({}, {})", e.t, p.n, p.gamma, q.n, q.gamma))
}

/// Coupled dual runs of prmp-LGFS and `pi` with an infinite buffer; passes
/// iff `(N(t), γ(t))` agree at every epoch of every replication.
pub fn theorem2_coupled_equality(
    scenario: &Scenario,
    pi: &dyn Policy,
    replications: u64,
    streams: &RngStreams,
) -> Result<CertificateVerdict> {
    if scenario.buffer != Buffer::Infinite {
        return Err(Error::Precondition(format!("buffer must be infinite, got {}", scenario.buffer)));
    }
    certify(&PolicyName::PrmpLgfs, pi, replications, streams, |_| Ok(scenario.clone()), count_equality)
}
