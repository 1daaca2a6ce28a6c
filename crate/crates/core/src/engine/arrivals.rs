//! Generation-time processes and generation-to-arrival delays.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::rng::{RngStreams, StreamRole};
use crate::error::{Error, Result};

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("arrival rate must be positive, got {rate}")))
    }
}

fn renewal<F: FnMut() -> f64>(horizon: f64, mut gap: F) -> Vec<f64> {
    let mut times = Vec::new();
    let mut t = 0.0;
    loop {
        t += gap();
        if t > horizon {
            return times;
        }
        times.push(t);
    }
}

/// Generation instants of a Poisson(λ) process on `[0, horizon]`.
pub fn gen_poisson_arrivals(rate: f64, horizon: f64, streams: &RngStreams) -> Result<Vec<f64>> {
    check_rate(rate)?;
    let exp = Exp::new(rate).unwrap();
    let mut rng = streams.rng(StreamRole::Arrival);
    Ok(renewal(horizon, || exp.sample(&mut rng)))
}

/// Generation instants with Erlang-2 gaps of mean `1/rate`.
pub fn gen_erlang2_arrivals(rate: f64, horizon: f64, streams: &RngStreams) -> Result<Vec<f64>> {
    check_rate(rate)?;
    let phase = Exp::new(2.0 * rate).unwrap();
    let mut rng = streams.rng(StreamRole::Arrival);
    Ok(renewal(horizon, || phase.sample(&mut rng) + phase.sample(&mut rng)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayMode {
    /// `a_i = s_i`.
    Zero,
    /// `a_i − s_i` is `low` with probability `p`, otherwise `high`.
    TwoPoint { low: f64, high: f64, p: f64 },
}

impl DelayMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DelayMode::Zero => Ok(()),
            DelayMode::TwoPoint { low, high, p } => {
                if !(low >= 0.0 && high >= 0.0 && low.is_finite() && high.is_finite()) {
                    return Err(Error::InvalidArgument(format!("delays must be finite and ≥ 0 ({low}, {high})")));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidArgument(format!("delay probability {p} outside [0, 1]")));
                }
                Ok(())
            }
        }
    }
}

/// Pairs each generation time with its arrival time. Output stays in id
/// (generation) order; arrival order may differ.
pub fn apply_arrival_delays(gens: &[f64], mode: DelayMode, streams: &RngStreams) -> Result<Vec<(f64, f64)>> {
    mode.validate()?;
    Ok(match mode {
        DelayMode::Zero => gens.iter().map(|&s| (s, s)).collect(),
        DelayMode::TwoPoint { low, high, p } => {
            let mut rng = streams.rng(StreamRole::Delay);
            gens.iter()
                .map(|&s| {
                    let d = if rng.random_bool(p) { low } else { high };
                    (s, s + d)
                })
                .collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Buffer, Scenario};

    fn gaps(times: &[f64]) -> Vec<f64> {
        std::iter::once(times[0]).chain(times.windows(2).map(|w| w[1] - w[0])).collect()
    }

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn poisson_count_concentrates() {
        let s = RngStreams::new(3);
        let times = gen_poisson_arrivals(1.0, 1e6, &s).unwrap();
        let rate = times.len() as f64 / 1e6;
        assert!((0.996..=1.004).contains(&rate), "rate {rate}");
        assert!(times.windows(2).all(|w| w[1] > w[0]));
        assert!(*times.last().unwrap() <= 1e6);
    }

    #[test]
    fn poisson_gaps_have_unit_cv() {
        let s = RngStreams::new(4);
        let times = gen_poisson_arrivals(1.0, 1e6, &s).unwrap();
        let (mean, var) = mean_var(&gaps(&times));
        let cv = var.sqrt() / mean;
        assert!((cv - 1.0).abs() < 0.01, "cv {cv}");
    }

    #[test]
    fn empty_horizon() {
        let s = RngStreams::new(5);
        assert!(gen_poisson_arrivals(1.0, 0.0, &s).unwrap().is_empty());
        assert!(gen_poisson_arrivals(0.0, 1.0, &s).is_err());
        assert!(gen_erlang2_arrivals(-1.0, 1.0, &s).is_err());
    }

    #[test]
    fn erlang2_moments() {
        let s = RngStreams::new(6);
        let times = gen_erlang2_arrivals(1.0, 1e6, &s).unwrap();
        let g = gaps(&times);
        assert!(g.len() > 990_000);
        let (mean, var) = mean_var(&g);
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
        assert!((var - 0.5).abs() < 0.01, "var {var}");

        let fast = gen_erlang2_arrivals(2.0, 2e5, &s).unwrap();
        let (mean2, _) = mean_var(&gaps(&fast));
        assert!((mean2 - 0.5).abs() < 0.005, "mean {mean2}");
    }

    #[test]
    fn zero_delay_is_identity() {
        let s = RngStreams::new(8);
        let pairs = apply_arrival_delays(&[0.5, 1.0, 2.0], DelayMode::Zero, &s).unwrap();
        assert!(pairs.iter().all(|(s, a)| s == a));
    }

    #[test]
    fn two_point_delays_are_balanced() {
        let s = RngStreams::new(9);
        let gens: Vec<f64> = (0..1_000_000).map(|i| i as f64).collect();
        let mode = DelayMode::TwoPoint { low: 1.0, high: 100.0, p: 0.5 };
        let pairs = apply_arrival_delays(&gens, mode, &s).unwrap();
        let low = pairs.iter().filter(|(s, a)| a - s == 1.0).count();
        assert!(pairs.iter().all(|(s, a)| a - s == 1.0 || a - s == 100.0));
        let frac = low as f64 / pairs.len() as f64;
        assert!((frac - 0.5).abs() < 0.005, "fraction {frac}");
        assert!(apply_arrival_delays(&gens, DelayMode::TwoPoint { low: 1.0, high: 2.0, p: 1.5 }, &s).is_err());
    }

    #[test]
    fn out_of_order_construction() {
        let pairs = [(0.0, 100.0), (0.5, 1.5)];
        let sc = Scenario::new(&pairs, Buffer::Infinite, 1, 1.0, 200.0, 0).unwrap();
        let order: Vec<u32> = sc.arrival_order().iter().map(|p| p.id).collect();
        assert_eq!(order, vec![2, 1]);
    }
}
