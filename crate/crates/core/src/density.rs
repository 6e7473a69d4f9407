//! Exact rationals and directed densities.

use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;

use crate::bits::VertexSet;
use crate::error::{CoreError, Result};
use crate::tournament::Tournament;

/// Exact rational used for all densities, thresholds and structure
/// parameters.
pub type Rational = Ratio<i64>;

/// Parses `p/q`, an integer, or a finite decimal like `0.125`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |e: String| CoreError::Parse(format!("rational {s:?}: {e}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|e| bad(format!("{e}")))?;
        let q: i64 = q.trim().parse().map_err(|e| bad(format!("{e}")))?;
        if q == 0 {
            return Err(bad("zero denominator".into()));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad("unsupported decimal".into()));
        }
        let neg = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|e| bad(format!("{e}")))?
        };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|e| bad(format!("{e}")))?
        };
        let mag = int_part.abs() * den + f;
        return Ok(Rational::new(if neg { -mag } else { mag }, den));
    }
    let p: i64 = s.parse().map_err(|e| bad(format!("{e}")))?;
    Ok(Rational::from_integer(p))
}

/// `e_{X,Y} / (|X| |Y|)`, kept as an unreduced count pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DensityValue {
    pub arcs: u64,
    pub pairs: u64,
}

impl DensityValue {
    pub fn value(&self) -> Rational {
        Rational::new(self.arcs as i64, self.pairs as i64)
    }

    /// `self >= r`, compared by cross multiplication.
    pub fn at_least(&self, r: Rational) -> bool {
        (self.arcs as i128) * (*r.denom() as i128) >= (*r.numer() as i128) * (self.pairs as i128)
    }
}

/// Directed density from `x` to `y`. The sets must be nonempty and
/// disjoint.
pub fn directed_density(t: &Tournament, x: &VertexSet, y: &VertexSet) -> Result<DensityValue> {
    if x.is_empty() || y.is_empty() || !x.is_disjoint(y) {
        return Err(CoreError::BadVertexSets);
    }
    let full = t.vertices();
    if !x.is_subset(&full) || !y.is_subset(&full) {
        return Err(CoreError::BadVertexSets);
    }
    let arcs: usize = x.iter().map(|u| t.out_set(u).intersection(y).len()).sum();
    Ok(DensityValue {
        arcs: arcs as u64,
        pairs: (x.len() * y.len()) as u64,
    })
}

/// `1 - r`.
pub fn complement(r: Rational) -> Rational {
    Rational::one() - r
}
