// Explicit numeric conditions for the density bounds and the key embeddings.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::density::Rational;
use crate::error::{CoreError, Result};

/// A threshold value: exact when the formula allows it, otherwise a float;
/// `Unbounded` when the formula diverges to `+∞`.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Exact(BigRational),
    Real(f64),
    Unbounded,
}

impl Bound {
    pub fn as_f64(&self) -> f64 {
        match self {
            Bound::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Bound::Real(x) => *x,
            Bound::Unbounded => f64::INFINITY,
        }
    }

    /// `x < self`, exactly where possible.
    pub fn exceeds(&self, x: Rational) -> bool {
        match self {
            Bound::Exact(r) => big(x) < *r,
            Bound::Real(b) => (*x.numer() as f64 / *x.denom() as f64) < *b,
            Bound::Unbounded => true,
        }
    }

    fn min(self, other: Bound) -> Bound {
        match (&self, &other) {
            (Bound::Unbounded, _) => other,
            (_, Bound::Unbounded) => self,
            (Bound::Exact(a), Bound::Exact(b)) => {
                if a <= b {
                    self
                } else {
                    other
                }
            }
            _ => {
                if self.as_f64() <= other.as_f64() {
                    self
                } else {
                    other
                }
            }
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(r) => write!(f, "{r}"),
            Bound::Real(x) => write!(f, "{x}"),
            Bound::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Base parameters; each bound is reported only when its inputs are given.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ThresholdParams {
    pub c: Option<Rational>,
    pub f: Option<Rational>,
    /// `f₁ … f_m` and `l₁ … l_t` for the linked-vertex bound.
    pub fs: Vec<Rational>,
    pub ls: Vec<Rational>,
    /// Number of transitive sets `t` for the linked-pair bound (uses `f`).
    pub t: Option<usize>,
    /// Largest run multiplicity δ of the N⊗G embedding.
    pub delta: Option<usize>,
    /// `|H|` for the GK₆ embedding.
    pub h: Option<usize>,
}

fn big(r: Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn open_unit(name: &str, r: Rational) -> Result<()> {
    if r > Rational::zero() && r < Rational::one() {
        Ok(())
    } else {
        Err(CoreError::Domain(format!("{name} = {r} must lie in (0, 1)")))
    }
}

/// `log_base(arg)` for `base ∈ (0, 1)` and `arg ∈ [0, 1]`; exact when
/// `arg^q = base^p` for small `p, q`.
fn log_below_one(base: Rational, arg: Rational) -> Result<Bound> {
    if base <= Rational::zero() || base >= Rational::one() {
        return Err(CoreError::Domain(format!("logarithm base {base} must lie in (0, 1)")));
    }
    if arg < Rational::zero() || arg > Rational::one() {
        return Err(CoreError::Domain(format!(
            "logarithm argument {arg} must lie in [0, 1]"
        )));
    }
    if arg.is_zero() {
        return Ok(Bound::Unbounded);
    }
    if arg.is_one() {
        return Ok(Bound::Exact(BigRational::zero()));
    }
    let (b, a) = (big(base), big(arg));
    for q in 1u32..=12 {
        let aq: BigRational = Pow::pow(&a, q);
        for p in 1u32..=12 {
            let bp: BigRational = Pow::pow(&b, p);
            if bp == aq {
                return Ok(Bound::Exact(BigRational::new(BigInt::from(p), BigInt::from(q))));
            }
            if bp < aq {
                break;
            }
        }
    }
    let f = |r: Rational| *r.numer() as f64 / *r.denom() as f64;
    Ok(Bound::Real(f(arg).ln() / f(base).ln()))
}

fn one_over_power(base: u64, exp: u32) -> Bound {
    let den: BigInt = Pow::pow(BigInt::from(base), exp);
    Bound::Exact(BigRational::new(BigInt::one(), den))
}

/// Evaluates every bound whose inputs are present, keyed by name:
///
/// * `matched_pairs`: `log_{c/2}(1/2)`
/// * `crossing_arc`: `log_c(1 − f)`
/// * `linked_vertex`: min over `fs`, `ls` of `log_{c/(2(m+t))}(1 − ·)`
/// * `linked_pair`: `min(log_{c/(2t)}(1 − f), log_{c/4}(1/2))`
/// * `lambda_key`: `1/(2δ)^{δ+3}`
/// * `lambda_gk6`: `1/(4h)^{h+4}`
///
/// `f = 1` is accepted as the limit `f → 1⁻`, where the logarithm diverges.
pub fn epsilon_thresholds(p: &ThresholdParams) -> Result<BTreeMap<&'static str, Bound>> {
    let mut out = BTreeMap::new();
    let half = Rational::new(1, 2);
    let one = Rational::one();
    let frac_le_one = |name: &str, r: Rational| {
        if r > Rational::zero() && r <= one {
            Ok(())
        } else {
            Err(CoreError::Domain(format!("{name} = {r} must lie in (0, 1]")))
        }
    };
    if let Some(c) = p.c {
        open_unit("c", c)?;
        out.insert("matched_pairs", log_below_one(c / 2, half)?);
        if let Some(f) = p.f {
            frac_le_one("f", f)?;
            out.insert("crossing_arc", log_below_one(c, one - f)?);
        }
        let k = p.fs.len() + p.ls.len();
        if k > 0 {
            let base = c / Rational::from_integer(2 * k as i64);
            let mut best = Bound::Unbounded;
            for (i, &x) in p.fs.iter().chain(&p.ls).enumerate() {
                frac_le_one(if i < p.fs.len() { "f_i" } else { "l_i" }, x)?;
                best = best.min(log_below_one(base, one - x)?);
            }
            out.insert("linked_vertex", best);
        }
        if let (Some(t), Some(f)) = (p.t, p.f) {
            if t == 0 {
                return Err(CoreError::Domain("t must be positive".into()));
            }
            let a = log_below_one(c / Rational::from_integer(2 * t as i64), one - f)?;
            let b = log_below_one(c / 4, half)?;
            out.insert("linked_pair", a.min(b));
        }
    }
    if let Some(d) = p.delta {
        if d == 0 {
            return Err(CoreError::Domain("δ must be positive".into()));
        }
        out.insert("lambda_key", one_over_power(2 * d as u64, d as u32 + 3));
    }
    if let Some(h) = p.h {
        if h == 0 {
            return Err(CoreError::Domain("h must be positive".into()));
        }
        out.insert("lambda_gk6", one_over_power(4 * h as u64, h as u32 + 4));
    }
    debug_assert!(out.values().all(|b| !matches!(b, Bound::Exact(r) if r.is_negative())));
    Ok(out)
}
