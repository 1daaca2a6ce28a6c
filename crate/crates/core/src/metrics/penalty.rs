use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type AgeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Non-negative, non-decreasing penalty `h` applied to the age.
#[derive(Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyFn {
    Identity,
    /// `x^p`, `p ≥ 0`.
    Power(f64),
    /// `e^{a x}`, `a ≥ 0`.
    Exp(f64),
    /// `1{x ≥ threshold}`.
    Step(f64),
    /// Arbitrary function, integrated numerically.
    #[serde(skip)]
    Custom(AgeFn),
}

impl fmt::Debug for PenaltyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PenaltyFn::Identity => f.write_str("Identity"),
            PenaltyFn::Power(p) => write!(f, "Power({p})"),
            PenaltyFn::Exp(a) => write!(f, "Exp({a})"),
            PenaltyFn::Step(t) => write!(f, "Step({t})"),
            PenaltyFn::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

const QUAD_REL_TOL: f64 = 1e-9;

fn grid() -> impl Iterator<Item = f64> {
    let fine = (0..=2000).map(|k| k as f64 * 0.05);
    let coarse = (1..=60).map(|k| 100.0 * 1.25f64.powi(k));
    fine.chain(coarse)
}

impl PenaltyFn {
    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(h: F) -> Self {
        PenaltyFn::Custom(Arc::new(h))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PenaltyFn::Identity => x,
            PenaltyFn::Power(p) => x.powf(*p),
            PenaltyFn::Exp(a) => (a * x).exp(),
            PenaltyFn::Step(th) => {
                if x >= *th {
                    1.0
                } else {
                    0.0
                }
            }
            PenaltyFn::Custom(h) => h(x),
        }
    }

    /// Rejects parameters that make `h` decreasing or negative; custom
    /// functions are spot-checked on a grid over `[0, ~10^8]`.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            PenaltyFn::Identity => Ok(()),
            PenaltyFn::Power(p) if !(*p >= 0.0 && p.is_finite()) => bad(format!("power {p} must be ≥ 0")),
            PenaltyFn::Exp(a) if !(*a >= 0.0 && a.is_finite()) => bad(format!("exponent rate {a} must be ≥ 0")),
            PenaltyFn::Step(th) if th.is_nan() => bad("step threshold is NaN".into()),
            PenaltyFn::Power(_) | PenaltyFn::Exp(_) | PenaltyFn::Step(_) => Ok(()),
            PenaltyFn::Custom(h) => {
                let mut prev = f64::NEG_INFINITY;
                for x in grid() {
                    let y = h(x);
                    if y.is_nan() || y < 0.0 {
                        return bad(format!("penalty is negative or NaN at {x}"));
                    }
                    if y < prev {
                        return bad(format!("penalty decreases at {x}"));
                    }
                    prev = y;
                }
                Ok(())
            }
        }
    }

    /// `∫ h(x) dx` over `[lo, hi]`.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        match self {
            PenaltyFn::Identity => (hi * hi - lo * lo) / 2.0,
            PenaltyFn::Power(p) => (hi.powf(p + 1.0) - lo.powf(p + 1.0)) / (p + 1.0),
            PenaltyFn::Exp(a) if *a == 0.0 => hi - lo,
            PenaltyFn::Exp(a) => ((a * hi).exp() - (a * lo).exp()) / a,
            PenaltyFn::Step(th) => (hi - lo.max(*th)).max(0.0),
            PenaltyFn::Custom(h) => adaptive_simpson(&**h, lo, hi, QUAD_REL_TOL),
        }
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson with Richardson correction.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    let tol = (rel_tol * whole.abs()).max(f64::MIN_POSITIVE);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_forms_match_quadrature() {
        let cases = [
            (PenaltyFn::Identity, PenaltyFn::custom(|x| x)),
            (PenaltyFn::Power(2.5), PenaltyFn::custom(|x: f64| x.powf(2.5))),
            (PenaltyFn::Exp(0.3), PenaltyFn::custom(|x: f64| (0.3 * x).exp())),
        ];
        for (closed, numeric) in &cases {
            for (lo, hi) in [(0.0, 1.0), (0.5, 7.25), (3.0, 3.5)] {
                assert_relative_eq!(closed.integral(lo, hi), numeric.integral(lo, hi), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn step_integral() {
        let h = PenaltyFn::Step(1.0);
        assert_eq!(h.integral(0.0, 2.0), 1.0);
        assert_eq!(h.integral(0.0, 0.5), 0.0);
        assert_eq!(h.integral(1.5, 2.0), 0.5);
    }

    #[test]
    fn validation() {
        assert!(PenaltyFn::Power(-1.0).validate().is_err());
        assert!(PenaltyFn::Exp(-0.1).validate().is_err());
        assert!(PenaltyFn::Power(0.0).validate().is_ok());
        assert!(PenaltyFn::custom(|x: f64| (-x).exp()).validate().is_err());
        assert!(PenaltyFn::custom(|x: f64| x.sin()).validate().is_err());
        assert!(PenaltyFn::custom(|x: f64| x - 1.0).validate().is_err());
        assert!(PenaltyFn::custom(|x: f64| x.ln_1p()).validate().is_ok());
    }

    #[test]
    fn serde_shape() {
        let hs: Vec<PenaltyFn> = serde_json::from_str(r#"["identity", {"power": 2}, {"step": 1.5}]"#).unwrap();
        assert!(matches!(hs[1], PenaltyFn::Power(p) if p == 2.0));
        assert!(matches!(hs[2], PenaltyFn::Step(t) if t == 1.5));
    }
}
