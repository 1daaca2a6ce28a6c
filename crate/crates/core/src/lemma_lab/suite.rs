//! Randomized instances and the lemma suite runner.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{
    alpha_construction_p, lemma2star_check, lemma3_delivery_transition, lemma4_insertion_transition,
    lemma6_delivery_count, lemma7_insertion_count, ArrivedSet,
};
use crate::engine::{RngStreams, StreamRng, StreamRole};
use crate::error::Result;
use crate::model::{dominates, state_from_servers, Buffer, CountState, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    /// Random instances per single-step lemma.
    pub cases: u64,
    /// Random walks per composition check.
    pub walks: u64,
    pub walk_len: u64,
    pub max_set: usize,
    pub max_m: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { cases: 100_000, walks: 1_000, walk_len: 1_000, max_set: 20, max_m: 5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub name: String,
    pub cases: u64,
    pub violations: u64,
    pub first_counterexample: Option<Value>,
    pub passed: bool,
}

/// Draws `α_1 ≥ … ≥ α_m` one coordinate at a time, uniform on
/// `[U, min(α_{i−1}, max(s_[i], U))]`, snapping to either end with
/// probability 0.15 each so equality cases are well covered.
pub fn sample_adversary<R: Rng>(set: &ArrivedSet, u: f64, m: usize, rng: &mut R) -> Vec<f64> {
    let mut prev = f64::INFINITY;
    (1..=m)
        .map(|i| {
            let hi = prev.min(set.bound(i, u));
            let x = match rng.random::<f64>() {
                p if p < 0.15 => hi,
                p if p < 0.30 => u,
                _ => u + rng.random::<f64>() * (hi - u),
            };
            prev = x;
            x
        })
        .collect()
}

/// Times on a small integer grid half of the time, so ties are common.
fn time<R: Rng>(rng: &mut R) -> f64 {
    if rng.random_bool(0.5) {
        rng.random_range(0..=20) as f64
    } else {
        rng.random::<f64>() * 20.0
    }
}

fn random_set<R: Rng>(rng: &mut R, max: usize) -> ArrivedSet {
    let n = rng.random_range(0..=max);
    ArrivedSet::new((0..n).map(|_| time(rng))).expect("finite times")
}

/// `U_π ≤ U_P`, each sometimes taken from `S`.
fn random_us<R: Rng>(rng: &mut R, set: &ArrivedSet) -> (f64, f64) {
    let from_set = |rng: &mut R| match set.len() {
        0 => time(rng),
        n => set.s(rng.random_range(1..=n)).unwrap(),
    };
    let u_pi = if rng.random_bool(0.3) { from_set(rng) } else { time(rng) };
    let u_p = match rng.random_range(0..3) {
        0 => u_pi,
        1 => from_set(rng).max(u_pi),
        _ => u_pi + rng.random::<f64>() * 10.0,
    };
    (u_p, u_pi)
}

fn check_all<F>(name: &str, n: u64, streams: &RngStreams, check: F) -> LemmaReport
where
    F: Fn(&mut StreamRng) -> Option<Value> + Sync,
{
    let first = (0..n)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = streams.rng(StreamRole::Instance(i));
            check(&mut rng).map(|v| (i, v))
        })
        .map(|(i, v)| (1u64, Some((i, v))))
        .reduce(
            || (0, None),
            |(na, a), (nb, b)| {
                let first = match (a, b) {
                    (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                    (x, y) => x.or(y),
                };
                (na + nb, first)
            },
        );
    LemmaReport {
        name: name.to_string(),
        cases: n,
        violations: first.0,
        first_counterexample: first.1.map(|(i, v)| json!({ "instance": i, "detail": v })),
        passed: first.0 == 0,
    }
}

fn verdict(r: Result<bool>, detail: impl FnOnce() -> Value) -> Option<Value> {
    match r {
        Ok(true) => None,
        Ok(false) => Some(detail()),
        Err(e) => Some(json!({ "error": e.to_string(), "instance": detail() })),
    }
}

fn lemma2star(cfg: &SuiteConfig, streams: &RngStreams) -> LemmaReport {
    check_all("lemma2star", cfg.cases, streams, |rng| {
        let m = rng.random_range(1..=cfg.max_m);
        let set = random_set(rng, cfg.max_set);
        let (u_p, u_pi) = random_us(rng, &set);
        let adv = sample_adversary(&set, u_pi, m, rng);
        verdict(lemma2star_check(&set, u_p, u_pi, &adv), || {
            json!({ "S": set, "U_P": u_p, "U_pi": u_pi, "alphas_pi": adv })
        })
    })
}

fn lemma3(cfg: &SuiteConfig, streams: &RngStreams) -> LemmaReport {
    check_all("lemma3", cfg.cases, streams, |rng| {
        let m = rng.random_range(1..=cfg.max_m);
        let set = random_set(rng, cfg.max_set);
        let (u_p, u_pi) = random_us(rng, &set);
        let alphas_p = alpha_construction_p(&set, u_p, m);
        let adv = sample_adversary(&set, u_pi, m, rng);
        let l = rng.random_range(1..=m);
        verdict(lemma3_delivery_transition(&set, u_p, u_pi, &alphas_p, &adv, l).map(|t| t.holds), || {
            json!({ "S": set, "U_P": u_p, "U_pi": u_pi, "alphas_pi": adv, "l": l })
        })
    })
}

fn lemma4(cfg: &SuiteConfig, streams: &RngStreams) -> LemmaReport {
    check_all("lemma4", cfg.cases, streams, |rng| {
        let m = rng.random_range(1..=cfg.max_m);
        let set = random_set(rng, cfg.max_set);
        let (u_p, u_pi) = random_us(rng, &set);
        let s_new = time(rng);
        verdict(lemma4_insertion_transition(&set, u_p, u_pi, s_new, m).map(|(_, t)| t.holds), || {
            json!({ "S": set, "U_P": u_p, "U_pi": u_pi, "s_new": s_new, "m": m })
        })
    })
}

fn random_count<R: Rng>(rng: &mut R, min_n: u64) -> CountState {
    CountState { n: rng.random_range(min_n..=1_000), gamma: rng.random_range(0..=1_000_000) }
}

fn lemma6(cfg: &SuiteConfig, streams: &RngStreams) -> LemmaReport {
    check_all("lemma6", cfg.cases, streams, |rng| {
        let c = random_count(rng, 1);
        verdict(lemma6_delivery_count(c, c).map(|r| r.2), || json!({ "state": c }))
    })
}

fn lemma7(cfg: &SuiteConfig, streams: &RngStreams) -> LemmaReport {
    check_all("lemma7", cfg.cases, streams, |rng| {
        let c = random_count(rng, 0);
        verdict(lemma7_insertion_count(c, c, Buffer::Infinite).map(|r| r.2), || json!({ "state": c }))
    })
}

/// One random walk of coupled insertions and rank deliveries. P follows the
/// construction; π is an explicit set of served packets managed by a random
/// (possibly idling, possibly preempting) scheduler.
fn dominance_walk(rng: &mut StreamRng, len: u64, max_m: usize) -> Option<Value> {
    let m = rng.random_range(1..=max_m);
    let u0 = time(rng);
    let mut set = ArrivedSet::default();
    let (mut u_p, mut u_pi) = (u0, u0);
    let mut served: Vec<f64> = Vec::new();
    let mut waiting: Vec<f64> = Vec::new();
    let mut horizon = u0;

    for step in 0..len {
        let insert = set.is_empty() || rng.random_bool(0.5);
        if insert {
            // generation times drift upward but may arrive out of order
            horizon += rng.random::<f64>();
            let s_new = horizon - rng.random::<f64>() * 3.0 * rng.random::<f64>();
            set.insert(s_new);
            let take = rng.random_bool(0.7);
            if take && served.len() < m {
                served.push(s_new);
            } else if take && rng.random_bool(0.5) {
                let k = rng.random_range(0..served.len());
                waiting.push(std::mem::replace(&mut served[k], s_new));
            } else {
                waiting.push(s_new);
            }
        } else {
            let l = rng.random_range(1..=m);
            u_p = u_p.max(set.bound(l, u_p));
            served.sort_by(|a, b| b.total_cmp(a));
            if l <= served.len() {
                let g = served.remove(l - 1);
                u_pi = u_pi.max(g);
            }
            if !waiting.is_empty() && served.len() < m && rng.random_bool(0.8) {
                let k = rng.random_range(0..waiting.len());
                served.push(waiting.swap_remove(k));
            }
        }
        let p = StateVector::new(u_p, alpha_construction_p(&set, u_p, m)).expect("construction is ordered");
        let pi = state_from_servers(u_pi, &served, m).expect("at most m served");
        if !dominates(&p, &pi).expect("same m") {
            return Some(json!({ "step": step, "m": m, "P": p, "pi": pi }));
        }
    }
    None
}

fn count_walk(rng: &mut StreamRng, len: u64) -> Option<Value> {
    let (mut p, mut pi) = (CountState::default(), CountState::default());
    for step in 0..len {
        let r = if p.n > 0 && rng.random_bool(0.5) {
            lemma6_delivery_count(p, pi)
        } else {
            lemma7_insertion_count(p, pi, Buffer::Infinite)
        };
        match r {
            Ok((a, b, true)) => (p, pi) = (a, b),
            Ok((a, b, false)) => return Some(json!({ "step": step, "P": a, "pi": b })),
            Err(e) => return Some(json!({ "step": step, "error": e.to_string() })),
        }
    }
    None
}

/// Runs every lemma check; each gets its own substream family.
pub fn run_lemma_suite(cfg: &SuiteConfig, streams: &RngStreams) -> Vec<LemmaReport> {
    let fam = |k: u64| streams.replication(k);
    let mut reports = vec![
        lemma2star(cfg, &fam(1)),
        lemma3(cfg, &fam(2)),
        lemma4(cfg, &fam(3)),
        lemma6(cfg, &fam(4)),
        lemma7(cfg, &fam(5)),
    ];
    let (len, max_m) = (cfg.walk_len, cfg.max_m);
    reports.push(check_all("lemma2_composition", cfg.walks, &fam(6), |rng| dominance_walk(rng, len, max_m)));
    reports.push(check_all("lemma5_composition", cfg.walks, &fam(7), |rng| count_walk(rng, len)));
    reports
}
