//! Exact age functionals of a sawtooth.
//!
//! Between consecutive resets Δ(t) = t − U grows with slope one, so every
//! integral is a sum of closed-form pieces. The `_window` variants restrict
//! to `[from, to]`; the plain ones cover `[0, horizon]`.

use super::penalty::PenaltyFn;
use crate::engine::Trace;
use crate::error::{Error, Result};
use crate::model::AgeProcess;

fn check_window(proc: &AgeProcess, from: f64, to: f64) -> Result<()> {
    if !(to > from) || from < 0.0 || to > proc.horizon() {
        return Err(Error::InvalidArgument(format!(
            "window [{from}, {to}] is empty or outside [0, {}]",
            proc.horizon()
        )));
    }
    Ok(())
}

fn penalty_integral(proc: &AgeProcess, h: &PenaltyFn, from: f64, to: f64) -> f64 {
    proc.segments()
        .filter_map(|(t0, t1, u)| {
            let (lo, hi) = (t0.max(from), t1.min(to));
            (hi > lo).then(|| h.integral(lo - u, hi - u))
        })
        .sum()
}

/// (1/T) ∫₀ᵀ Δ(t) dt.
pub fn time_average_age(proc: &AgeProcess) -> Result<f64> {
    time_average_age_window(proc, 0.0, proc.horizon())
}

pub fn time_average_age_window(proc: &AgeProcess, from: f64, to: f64) -> Result<f64> {
    time_average_penalty_window(proc, &PenaltyFn::Identity, from, to)
}

/// (1/T) ∫₀ᵀ h(Δ(t)) dt.
pub fn time_average_penalty(proc: &AgeProcess, h: &PenaltyFn) -> Result<f64> {
    time_average_penalty_window(proc, h, 0.0, proc.horizon())
}

pub fn time_average_penalty_window(proc: &AgeProcess, h: &PenaltyFn, from: f64, to: f64) -> Result<f64> {
    check_window(proc, from, to)?;
    h.validate()?;
    Ok(penalty_integral(proc, h, from, to) / (to - from))
}

/// Left limits of Δ at each reset: the sawtooth peaks.
pub fn peak_ages(proc: &AgeProcess) -> impl Iterator<Item = (f64, f64)> + '_ {
    let before = std::iter::once(proc.initial_u()).chain(proc.resets().iter().map(|&(_, u)| u));
    proc.resets().iter().zip(before).map(|(&(t, _), u_prev)| (t, t - u_prev))
}

/// Mean of the peaks; undefined when U never increases.
pub fn average_peak_age(proc: &AgeProcess) -> Result<f64> {
    average_peak_age_window(proc, 0.0, proc.horizon())
}

/// Mean of the peaks whose reset falls in `[from, to]`.
pub fn average_peak_age_window(proc: &AgeProcess, from: f64, to: f64) -> Result<f64> {
    let (sum, k) = peak_ages(proc)
        .filter(|&(t, _)| t >= from && t <= to)
        .fold((0.0, 0usize), |(s, k), (_, a)| (s + a, k + 1));
    if k == 0 {
        return Err(Error::Undefined("average peak age"));
    }
    Ok(sum / k as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThroughputDelay {
    pub throughput: f64,
    /// `None` when nothing was delivered.
    pub mean_delay: Option<f64>,
    pub delivered: u64,
}

/// Deliveries per unit time and mean `c − a` over delivered packets.
pub fn throughput_and_delay(trace: &Trace) -> Result<ThroughputDelay> {
    throughput_and_delay_window(trace, 0.0, trace.scenario.horizon)
}

/// Same, counting deliveries with completion time in `[from, to]`.
pub fn throughput_and_delay_window(trace: &Trace, from: f64, to: f64) -> Result<ThroughputDelay> {
    if !(to > from) {
        return Err(Error::InvalidArgument(format!("window [{from}, {to}] is empty")));
    }
    let (sum, k) = trace
        .deliveries()
        .filter(|&(_, c)| c >= from && c <= to)
        .fold((0.0, 0u64), |(s, k), (a, c)| (s + (c - a), k + 1));
    Ok(ThroughputDelay {
        throughput: k as f64 / (to - from),
        mean_delay: (k > 0).then(|| sum / k as f64),
        delivered: k,
    })
}
