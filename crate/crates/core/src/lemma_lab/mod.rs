//! Proof steps as executable transition operators.
//!
//! A prmp-LGFS state is fully determined by the arrived set `S` and `U`:
//! `α_i = max(s_[i], U)`. A competing policy π may hold any state with
//! `U_π ≤ α_{i,π} ≤ max(s_[i], U_π)` in non-increasing order.

mod suite;
mod theorem2;

pub use suite::{run_lemma_suite, sample_adversary, LemmaReport, SuiteConfig};
pub use theorem2::{count_equality, theorem2_coupled_equality};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{dominates, Buffer, CountState, StateVector};

/// Multiset of generation times of the packets arrived so far, largest first.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ArrivedSet {
    desc: Vec<f64>,
}

impl ArrivedSet {
    pub fn new<I: IntoIterator<Item = f64>>(times: I) -> Result<Self> {
        let mut desc: Vec<f64> = times.into_iter().collect();
        if desc.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument("generation times must be finite".into()));
        }
        desc.sort_by(|a, b| b.total_cmp(a));
        Ok(ArrivedSet { desc })
    }

    /// `s_[i]` with `i` counted from 1; `None` past the end (read as −∞).
    pub fn s(&self, i: usize) -> Option<f64> {
        i.checked_sub(1).and_then(|k| self.desc.get(k)).copied()
    }

    pub fn len(&self) -> usize {
        self.desc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.desc.is_empty()
    }

    pub fn insert(&mut self, s: f64) {
        let at = self.desc.partition_point(|&x| x >= s);
        self.desc.insert(at, s);
    }

    /// Upper bound `max(s_[i], U)` on the `i`-th coordinate of any feasible state.
    pub fn bound(&self, i: usize, u: f64) -> f64 {
        self.s(i).map_or(u, |s| s.max(u))
    }
}

/// `α_{i,P} = max(s_[i], U)` for `i = 1..=m`.
pub fn alpha_construction_p(set: &ArrivedSet, u: f64, m: usize) -> Vec<f64> {
    (1..=m).map(|i| set.bound(i, u)).collect()
}

/// Checks that `alphas` is a feasible π state under `(S, U)`.
pub fn check_feasible(set: &ArrivedSet, u: f64, alphas: &[f64]) -> Result<()> {
    let mut prev = f64::INFINITY;
    for (k, &a) in alphas.iter().enumerate() {
        let bound = set.bound(k + 1, u);
        if !(a >= u && a <= prev && a <= bound) {
            return Err(Error::Precondition(format!(
                "α_{} = {a} outside [U = {u}, min(α_{}, {bound})]",
                k + 1,
                k
            )));
        }
        prev = a;
    }
    Ok(())
}

/// True iff the prmp-LGFS construction at `U_P` dominates the feasible
/// adversary built at `U_π ≤ U_P`.
pub fn lemma2star_check(set: &ArrivedSet, u_p: f64, u_pi: f64, alphas_pi: &[f64]) -> Result<bool> {
    if u_p < u_pi {
        return Err(Error::Precondition(format!("U_P = {u_p} < U_π = {u_pi}")));
    }
    if alphas_pi.is_empty() {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    check_feasible(set, u_pi, alphas_pi)?;
    let p = alpha_construction_p(set, u_p, alphas_pi.len());
    Ok(p.iter().zip(alphas_pi).all(|(a, b)| a >= b))
}

/// Primed states of a transition and whether the lemma's conclusion holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transition {
    pub p: StateVector,
    pub pi: StateVector,
    pub holds: bool,
}

fn both(p: StateVector, pi: StateVector) -> Result<Transition> {
    let holds = dominates(&p, &pi)?;
    Ok(Transition { p, pi, holds })
}

/// Coupled delivery of rank `l` (1-based) in both systems.
///
/// Each side moves to `U' = max(U, α_l)`. P re-serves the freshest packets of
/// `S`; π keeps its other packets, padded to `U'`.
pub fn lemma3_delivery_transition(
    set: &ArrivedSet,
    u_p: f64,
    u_pi: f64,
    alphas_p: &[f64],
    alphas_pi: &[f64],
    l: usize,
) -> Result<Transition> {
    let m = alphas_p.len();
    if alphas_pi.len() != m {
        return Err(Error::DimensionMismatch { left: m, right: alphas_pi.len() });
    }
    if l == 0 || l > m {
        return Err(Error::Precondition(format!("rank {l} outside 1..={m}")));
    }
    check_feasible(set, u_p, alphas_p)?;
    check_feasible(set, u_pi, alphas_pi)?;
    if u_p < u_pi || alphas_p.iter().zip(alphas_pi).any(|(a, b)| a < b) {
        return Err(Error::Precondition("P does not dominate π before the delivery".into()));
    }

    let up2 = u_p.max(alphas_p[l - 1]);
    let p = StateVector::new(up2, alpha_construction_p(set, up2, m))?;

    let upi2 = u_pi.max(alphas_pi[l - 1]);
    let mut rest: Vec<f64> = alphas_pi.iter().enumerate().filter(|&(k, _)| k != l - 1).map(|(_, &a)| a).collect();
    rest.push(upi2);
    let rest: Vec<f64> = rest.into_iter().map(|a| a.max(upi2)).collect();
    let pi = StateVector::new(upi2, rest)?;
    both(p, pi)
}

/// Arrival of a packet generated at `s_new`; `U` is unchanged on both sides.
pub fn lemma4_insertion_transition(
    set: &ArrivedSet,
    u_p: f64,
    u_pi: f64,
    s_new: f64,
    m: usize,
) -> Result<(ArrivedSet, Transition)> {
    if u_p < u_pi {
        return Err(Error::Precondition(format!("U_P = {u_p} < U_π = {u_pi}")));
    }
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    if !s_new.is_finite() {
        return Err(Error::InvalidArgument("generation time must be finite".into()));
    }
    let mut next = set.clone();
    next.insert(s_new);
    let p = StateVector::new(u_p, alpha_construction_p(&next, u_p, m))?;
    let pi = StateVector::new(u_pi, alpha_construction_p(&next, u_pi, m))?;
    Ok((next, both(p, pi)?))
}

fn check_equal_counts(p: CountState, pi: CountState) -> Result<()> {
    if p != pi {
        return Err(Error::Precondition(format!("count states differ: {p:?} vs {pi:?}")));
    }
    Ok(())
}

/// Coupled delivery: `N − 1`, `γ + 1` on both sides.
pub fn lemma6_delivery_count(p: CountState, pi: CountState) -> Result<(CountState, CountState, bool)> {
    check_equal_counts(p, pi)?;
    if p.n == 0 {
        return Err(Error::Precondition("no packet to deliver (N = 0)".into()));
    }
    let step = |c: CountState| CountState { n: c.n - 1, gamma: c.gamma + 1 };
    let (p2, pi2) = (step(p), step(pi));
    Ok((p2, pi2, p2 == pi2))
}

/// Arrival with an infinite buffer: `N + 1` on both sides.
pub fn lemma7_insertion_count(
    p: CountState,
    pi: CountState,
    buffer: Buffer,
) -> Result<(CountState, CountState, bool)> {
    if buffer != Buffer::Infinite {
        return Err(Error::Precondition(format!("buffer must be infinite, got {buffer}")));
    }
    check_equal_counts(p, pi)?;
    let step = |c: CountState| CountState { n: c.n + 1, gamma: c.gamma };
    let (p2, pi2) = (step(p), step(pi));
    Ok((p2, pi2, p2 == pi2))
}
