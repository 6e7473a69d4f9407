//! ε-criticality with exact exponent comparisons.
//!
//! For `ε = p/q` the test `tr < n^ε` is decided as `tr^q < n^p` in big
//! integers, so boundary cases never depend on floating point.

use num_bigint::BigUint;
use num_traits::{Signed, Zero};

use crate::bits::VertexSet;
use crate::density::Rational;
use crate::error::{CoreError, Result};
use crate::tournament::Tournament;
use crate::transitive::tr_of;
use crate::Limits;

/// `value < n^eps` for a positive rational `eps`.
pub fn below_power(value: usize, n: usize, eps: Rational) -> bool {
    let p = eps.numer().unsigned_abs() as u32;
    let q = eps.denom().unsigned_abs() as u32;
    BigUint::from(value).pow(q) < BigUint::from(n).pow(p)
}

pub fn is_epsilon_critical(t: &Tournament, eps: Rational) -> Result<bool> {
    is_epsilon_critical_with_limit(t, eps, Limits::default().criticality)
}

pub fn is_epsilon_critical_with_limit(t: &Tournament, eps: Rational, limit: usize) -> Result<bool> {
    if !eps.is_positive() {
        return Err(CoreError::Domain(format!("epsilon must be positive, got {eps}")));
    }
    let n = t.n();
    if n > limit {
        return Err(CoreError::LimitExceeded {
            what: "is_epsilon_critical",
            n,
            limit,
        });
    }
    if n == 0 || !below_power(tr_of(t, &t.vertices()), n, eps) {
        return Ok(false);
    }
    // smallest tr each subset size must reach
    let need: Vec<usize> = (0..=n)
        .map(|k| (0..=k).find(|&m| !below_power(m, k, eps)).unwrap_or(k + 1))
        .collect();
    let full: u64 = (1u64 << n) - 1;
    let violation = crate::par::find_first((full - 1) as usize, |i| {
        let mask = i as u64 + 1;
        let s: VertexSet = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        (!need[s.len()].is_zero() && tr_of(t, &s) < need[s.len()]).then_some(())
    });
    if violation.is_some() {
        return Ok(false);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn power_comparison_is_exact() {
        // 2 < 3^0.7 ≈ 2.158
        assert!(below_power(2, 3, r(7, 10)));
        assert!(!below_power(3, 3, r(7, 10)));
        // 2 = 4^(1/2) exactly: not strictly below
        assert!(!below_power(2, 4, r(1, 2)));
        assert!(below_power(1, 4, r(1, 2)));
    }

    #[test]
    fn single_vertex_is_never_critical() {
        assert!(!is_epsilon_critical(&Tournament::transitive(1), r(1, 2)).unwrap());
    }

    #[test]
    fn cyclic_triangle_is_point_seven_critical() {
        assert!(is_epsilon_critical(&Tournament::cyclic_triangle(), r(7, 10)).unwrap());
    }

    #[test]
    fn transitive_is_never_critical() {
        for eps in [r(1, 3), r(7, 10), r(1, 1)] {
            assert!(!is_epsilon_critical(&Tournament::transitive(3), eps).unwrap());
            assert!(!is_epsilon_critical(&Tournament::transitive(6), eps).unwrap());
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(is_epsilon_critical(&Tournament::transitive(3), r(0, 1)).is_err());
        assert!(matches!(
            is_epsilon_critical(&Tournament::transitive(11), r(1, 2)),
            Err(CoreError::LimitExceeded { .. })
        ));
    }
}
