//! Empirical first-order stochastic dominance with a one-sided DKW band.
//!
//! For each grid time the claim is `P{A > x} ≤ P{B > x}` for all `x`. With
//! per-sample bands `ε_k = sqrt(ln(2/α') / (2 n_k))` (α' = level / |grid|,
//! split evenly between the two samples), the claim is rejected at a grid
//! time only if the empirical CCDF of A exceeds that of B by more than
//! `ε_A + ε_B` somewhere.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceVerdict {
    pub passed: bool,
    /// Largest `CCDF_A(x) − CCDF_B(x)` over all grid times and sample points.
    pub worst_gap: f64,
    pub worst_time: f64,
    pub worst_x: f64,
    pub band: f64,
}

/// `max_x (CCDF_a(x) − CCDF_b(x))` with the argmax, both inputs sorted ascending.
fn max_ccdf_gap(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = (0.0, f64::NEG_INFINITY);
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        let gap = (a.len() - i) as f64 / na - (b.len() - j) as f64 / nb;
        if gap > best.0 {
            best = (gap, x);
        }
    }
    best
}

/// `samples_a[r][k]` is replication `r` of policy A at `times[k]`; same for B.
/// Tests whether A is stochastically no larger than B at every grid time.
pub fn marginal_dominance_test(
    samples_a: &[Vec<f64>],
    samples_b: &[Vec<f64>],
    times: &[f64],
    level: f64,
) -> Result<DominanceVerdict> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("level {level} outside (0, 1)")));
    }
    if samples_a.is_empty() || samples_b.is_empty() {
        return Err(Error::InvalidArgument("no replications".into()));
    }
    for row in samples_a.iter().chain(samples_b) {
        if row.len() != times.len() {
            return Err(Error::DimensionMismatch { left: row.len(), right: times.len() });
        }
    }
    let per_time = level / times.len() as f64;
    let eps = |n: usize| ((2.0 / per_time).ln() / (2.0 * n as f64)).sqrt();
    let band = eps(samples_a.len()) + eps(samples_b.len());

    let column = |rows: &[Vec<f64>], k: usize| {
        let mut c: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        c.sort_by(f64::total_cmp);
        c
    };
    let mut worst = (f64::NEG_INFINITY, times[0], f64::NAN);
    for (k, &t) in times.iter().enumerate() {
        let (gap, x) = max_ccdf_gap(&column(samples_a, k), &column(samples_b, k));
        if gap > worst.0 {
            worst = (gap, t, x);
        }
    }
    Ok(DominanceVerdict {
        passed: worst.0 <= band,
        worst_gap: worst.0,
        worst_time: worst.1,
        worst_x: worst.2,
        band,
    })
}
