//! Domain types shared by the simulator, the policies and the proof lab.
//!
//! All times are `f64` seconds. Packet ids start at 1 and follow generation
//! order, so `s` is non-decreasing in id.

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type PacketId = u32;
pub type ServerId = usize;

/// One update packet: generation time `s` and arrival time `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Packet {
    pub id: PacketId,
    pub s: f64,
    pub a: f64,
}

impl Packet {
    /// Lexicographic freshness: later generation first, ties go to the larger id.
    pub fn fresher_than(&self, other: &Packet) -> bool {
        cmp_key(self.s, self.id, other.s, other.id) == Ordering::Greater
    }

    /// Arrival recency with the same tie rule.
    pub fn arrived_after(&self, other: &Packet) -> bool {
        cmp_key(self.a, self.id, other.a, other.id) == Ordering::Greater
    }
}

pub(crate) fn cmp_key(x: f64, xi: PacketId, y: f64, yi: PacketId) -> Ordering {
    x.total_cmp(&y).then(xi.cmp(&yi))
}

/// Queue capacity, excluding the `m` server slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Buffer {
    Finite(usize),
    Infinite,
}

impl Buffer {
    pub fn admits(&self, occupied: usize) -> bool {
        match *self {
            Buffer::Finite(b) => occupied < b,
            Buffer::Infinite => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Buffer::Finite(0))
    }
}

impl fmt::Display for Buffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Buffer::Finite(b) => write!(f, "{b}"),
            Buffer::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Buffer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinite") {
            return Ok(Buffer::Infinite);
        }
        s.parse::<usize>()
            .map(Buffer::Finite)
            .map_err(|_| Error::InvalidArgument(format!("buffer size `{s}`")))
    }
}

impl Serialize for Buffer {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Buffer::Finite(b) => ser.serialize_u64(*b as u64),
            Buffer::Infinite => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Buffer {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Int(b) => Ok(Buffer::Finite(b as usize)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A complete simulation input: arrivals, buffer, servers, service rate and horizon.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub packets: Vec<Packet>,
    pub buffer: Buffer,
    pub m: usize,
    pub mu: f64,
    pub horizon: f64,
    pub seed: u64,
    /// U(0⁻); shared by every policy.
    #[serde(default)]
    pub initial_u: f64,
}

impl Scenario {
    /// Builds a scenario from `(s, a)` pairs listed in generation order.
    pub fn new(
        arrivals: &[(f64, f64)],
        buffer: Buffer,
        m: usize,
        mu: f64,
        horizon: f64,
        seed: u64,
    ) -> Result<Self> {
        let packets = arrivals
            .iter()
            .enumerate()
            .map(|(i, &(s, a))| Packet { id: i as PacketId + 1, s, a })
            .collect();
        let scenario = Scenario { packets, buffer, m, mu, horizon, seed, initial_u: 0.0 };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn with_buffer(&self, buffer: Buffer) -> Self {
        Scenario { buffer, ..self.clone() }
    }

    pub fn n(&self) -> usize {
        self.packets.len()
    }

    pub fn packet(&self, id: PacketId) -> &Packet {
        &self.packets[id as usize - 1]
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if self.m == 0 {
            return bad("at least one server is required".into());
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad(format!("service rate must be positive, got {}", self.mu));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return bad(format!("horizon must be finite and non-negative, got {}", self.horizon));
        }
        if !self.initial_u.is_finite() {
            return bad("initial U must be finite".into());
        }
        let mut prev_s = f64::NEG_INFINITY;
        for (i, p) in self.packets.iter().enumerate() {
            if p.id as usize != i + 1 {
                return bad(format!("packet at position {i} has id {}", p.id));
            }
            if !(p.s.is_finite() && p.a.is_finite()) {
                return bad(format!("packet {} has non-finite times", p.id));
            }
            if p.s < 0.0 {
                return bad(format!("packet {} generated before time 0", p.id));
            }
            if p.s > p.a {
                return bad(format!("packet {} arrives at {} before generation {}", p.id, p.a, p.s));
            }
            if p.s < prev_s {
                return bad(format!("generation times decrease at packet {}", p.id));
            }
            prev_s = p.s;
        }
        Ok(())
    }

    /// Packets sorted by `(a, id)`: the order in which they reach the system.
    pub fn arrival_order(&self) -> Vec<Packet> {
        let mut v = self.packets.clone();
        v.sort_by(|x, y| cmp_key(x.a, x.id, y.a, y.id));
        v
    }
}

/// `(U, α_1, …, α_m)` with `U ≤ α_m ≤ … ≤ α_1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    u: f64,
    alphas: Vec<f64>,
}

impl StateVector {
    /// Checks the ordering invariant; `alphas[0]` is the largest.
    pub fn new(u: f64, alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidArgument("state vector needs m ≥ 1".into()));
        }
        let mut floor = u;
        for &x in alphas.iter().rev() {
            if x.is_nan() || x < floor {
                return Err(Error::InvalidArgument(format!(
                    "state vector ordering violated: U={u}, alphas={alphas:?}"
                )));
            }
            floor = x;
        }
        Ok(StateVector { u, alphas })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn m(&self) -> usize {
        self.alphas.len()
    }
}

/// Applies the padding rule: each in-service generation time `g` becomes
/// `max(g, U)` and idle slots are filled with `U`.
pub fn state_from_servers(u: f64, serving: &[f64], m: usize) -> Result<StateVector> {
    if serving.len() > m {
        return Err(Error::TooManyServing { count: serving.len(), m });
    }
    let mut alphas = Vec::with_capacity(m);
    alphas.extend(serving.iter().map(|&g| g.max(u)));
    alphas.resize(m, u);
    alphas.sort_by(|x, y| y.total_cmp(x));
    StateVector::new(u, alphas)
}

/// Componentwise order `x ≥ y`.
pub fn dominates(x: &StateVector, y: &StateVector) -> Result<bool> {
    if x.m() != y.m() {
        return Err(Error::DimensionMismatch { left: x.m(), right: y.m() });
    }
    Ok(x.u >= y.u && x.alphas.iter().zip(&y.alphas).all(|(a, b)| a >= b))
}

/// Piecewise-linear age Δ(t) = t − U(t), stored as the points where U jumps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgeProcess {
    initial_u: f64,
    resets: Vec<(f64, f64)>,
    horizon: f64,
}

impl AgeProcess {
    pub fn new(initial_u: f64, resets: Vec<(f64, f64)>, horizon: f64) -> Result<Self> {
        let mut last_t = f64::NEG_INFINITY;
        let mut last_u = initial_u;
        for &(t, u) in &resets {
            if !(t > last_t) || !(u > last_u) {
                return Err(Error::InvalidArgument(format!(
                    "reset ({t}, {u}) does not strictly increase time and U"
                )));
            }
            if t > horizon || t < 0.0 {
                return Err(Error::InvalidArgument(format!("reset time {t} outside [0, {horizon}]")));
            }
            last_t = t;
            last_u = u;
        }
        Ok(AgeProcess { initial_u, resets, horizon })
    }

    pub(crate) fn empty(initial_u: f64, horizon: f64) -> Self {
        AgeProcess { initial_u, resets: Vec::new(), horizon }
    }

    /// Records a delivery of generation time `s` at `t`; only strict increases of U count.
    pub(crate) fn deliver(&mut self, t: f64, s: f64) -> bool {
        if s > self.current_u() {
            debug_assert!(self.resets.last().is_none_or(|&(lt, _)| t >= lt));
            match self.resets.last_mut() {
                // simultaneous completions collapse into one reset
                Some(last) if last.0 == t => last.1 = s,
                _ => self.resets.push((t, s)),
            }
            true
        } else {
            false
        }
    }

    pub fn initial_u(&self) -> f64 {
        self.initial_u
    }

    pub fn resets(&self) -> &[(f64, f64)] {
        &self.resets
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn current_u(&self) -> f64 {
        self.resets.last().map_or(self.initial_u, |&(_, u)| u)
    }

    /// U(t), right-continuous.
    pub fn u_at(&self, t: f64) -> f64 {
        let k = self.resets.partition_point(|&(rt, _)| rt <= t);
        if k == 0 {
            self.initial_u
        } else {
            self.resets[k - 1].1
        }
    }

    pub fn age_at(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::OutOfRange { t, horizon: self.horizon });
        }
        Ok(t - self.u_at(t))
    }

    /// Linear pieces `(t_start, t_end, U)` covering `[0, horizon]`.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let starts = std::iter::once((0.0, self.initial_u)).chain(self.resets.iter().copied());
        let ends = self.resets.iter().map(|&(t, _)| t).chain(std::iter::once(self.horizon));
        starts.zip(ends).map(|((t0, u), t1)| (t0, t1, u)).filter(|(t0, t1, _)| t1 > t0)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# initial_u={}", self.initial_u)?;
        writeln!(out, "# horizon={}", self.horizon)?;
        writeln!(out, "t,u")?;
        for (t, u) in &self.resets {
            writeln!(out, "{t},{u}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut initial_u = None;
        let mut horizon = None;
        let mut resets = Vec::new();
        let mut header = false;
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            let err = |reason: String| Error::TraceFile { line: i + 1, reason };
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let (key, value) = meta
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| err(format!("bad metadata `{meta}`")))?;
                let value: f64 = value.trim().parse().map_err(|_| err(format!("bad number `{value}`")))?;
                match key.trim() {
                    "initial_u" => initial_u = Some(value),
                    "horizon" => horizon = Some(value),
                    other => return Err(err(format!("unknown metadata `{other}`"))),
                }
                continue;
            }
            if !header {
                if line != "t,u" {
                    return Err(err(format!("expected header `t,u`, found `{line}`")));
                }
                header = true;
                continue;
            }
            let (t, u) = line.split_once(',').ok_or_else(|| err("expected two columns".into()))?;
            let t: f64 = t.trim().parse().map_err(|_| err(format!("bad time `{t}`")))?;
            let u: f64 = u.trim().parse().map_err(|_| err(format!("bad value `{u}`")))?;
            resets.push((t, u));
        }
        let horizon = horizon.ok_or(Error::TraceFile { line: 0, reason: "missing horizon".into() })?;
        AgeProcess::new(initial_u.unwrap_or(0.0), resets, horizon)
    }
}

/// `(N, γ)`: packets in the system and packets delivered so far.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountState {
    pub n: u64,
    pub gamma: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(u: f64, a: &[f64]) -> StateVector {
        StateVector::new(u, a.to_vec()).unwrap()
    }

    #[test]
    fn padding_rule() {
        assert_eq!(state_from_servers(4.0, &[5.0, 3.0], 2).unwrap(), sv(4.0, &[5.0, 4.0]));
        assert_eq!(state_from_servers(0.0, &[], 3).unwrap(), sv(0.0, &[0.0, 0.0, 0.0]));
        assert_eq!(state_from_servers(2.0, &[1.0], 1).unwrap(), sv(2.0, &[2.0]));
        assert!(matches!(
            state_from_servers(0.0, &[1.0, 2.0], 1),
            Err(Error::TooManyServing { count: 2, m: 1 })
        ));
    }

    #[test]
    fn state_vector_rejects_bad_order() {
        assert!(StateVector::new(3.0, vec![5.0, 2.0]).is_err());
        assert!(StateVector::new(0.0, vec![1.0, 2.0]).is_err());
        assert!(StateVector::new(0.0, vec![]).is_err());
    }

    #[test]
    fn dominance_examples() {
        let x = sv(4.0, &[5.0, 4.0]);
        let y = sv(2.0, &[5.0, 3.0]);
        assert!(dominates(&x, &y).unwrap());
        assert!(dominates(&x, &x).unwrap());
        assert!(!dominates(&y, &x).unwrap());
        assert!(dominates(&x, &sv(0.0, &[0.0])).is_err());
    }

    #[test]
    fn age_lookup() {
        let p = AgeProcess::new(0.0, vec![(2.0, 1.0)], 10.0).unwrap();
        assert_eq!(p.age_at(3.0).unwrap(), 2.0);
        assert_eq!(p.age_at(2.0).unwrap(), 1.0);
        assert!(p.age_at(1.999).unwrap() > 1.99);
        let flat = AgeProcess::new(0.0, vec![], 10.0).unwrap();
        assert_eq!(flat.age_at(5.0).unwrap(), 5.0);
        assert!(matches!(flat.age_at(11.0), Err(Error::OutOfRange { .. })));
        assert!(flat.age_at(-0.5).is_err());
    }

    #[test]
    fn resets_must_increase() {
        assert!(AgeProcess::new(0.0, vec![(1.0, 1.0), (2.0, 1.0)], 5.0).is_err());
        assert!(AgeProcess::new(0.0, vec![(2.0, 1.0), (1.0, 1.5)], 5.0).is_err());
        assert!(AgeProcess::new(1.0, vec![(2.0, 0.5)], 5.0).is_err());
    }

    #[test]
    fn stale_delivery_leaves_no_reset() {
        let mut p = AgeProcess::empty(0.0, 10.0);
        assert!(p.deliver(1.0, 0.5));
        assert!(!p.deliver(2.0, 0.4));
        assert!(!p.deliver(3.0, 0.5));
        assert!(p.deliver(4.0, 3.0));
        assert_eq!(p.resets(), &[(1.0, 0.5), (4.0, 3.0)]);
    }

    #[test]
    fn csv_round_trip() {
        let p = AgeProcess::new(0.25, vec![(1.0, 0.5), (3.125, 2.0 / 3.0)], 4.0).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# initial_u=0.25\n# horizon=4\nt,u\n1,0.5\n"));
        assert_eq!(AgeProcess::read_csv(&buf[..]).unwrap(), p);
    }

    #[test]
    fn scenario_validation() {
        assert!(Scenario::new(&[(0.0, 0.0), (1.0, 2.0)], Buffer::Finite(1), 1, 1.0, 5.0, 1).is_ok());
        assert!(Scenario::new(&[(2.0, 1.0)], Buffer::Infinite, 1, 1.0, 5.0, 1).is_err());
        assert!(Scenario::new(&[(2.0, 3.0), (1.0, 3.0)], Buffer::Infinite, 1, 1.0, 5.0, 1).is_err());
        assert!(Scenario::new(&[], Buffer::Infinite, 0, 1.0, 5.0, 1).is_err());
        assert!(Scenario::new(&[], Buffer::Infinite, 1, 0.0, 5.0, 1).is_err());
        let out_of_order = Scenario::new(&[(0.0, 100.0), (0.5, 1.5)], Buffer::Infinite, 1, 1.0, 5.0, 1)
            .unwrap()
            .arrival_order();
        assert_eq!(out_of_order[0].id, 2);
    }

    #[test]
    fn buffer_parsing() {
        assert_eq!("inf".parse::<Buffer>().unwrap(), Buffer::Infinite);
        assert_eq!("10".parse::<Buffer>().unwrap(), Buffer::Finite(10));
        assert!("-1".parse::<Buffer>().is_err());
        let b: Vec<Buffer> = serde_json::from_str(r#"[0, 1, "inf"]"#).unwrap();
        assert_eq!(b, vec![Buffer::Finite(0), Buffer::Finite(1), Buffer::Infinite]);
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"[0,1,"inf"]"#);
    }
}
