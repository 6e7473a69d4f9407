// K₆ instances under an ordering.

use super::K6Witness;
use crate::error::{CoreError, Result};
use crate::tournament::{Ordering, Tournament, K6_BACKWARD};

fn matches_canonical(t: &Tournament, vs: &[usize; 6]) -> bool {
    for a in 0..6 {
        for b in a + 1..6 {
            let backward = t.beats(vs[b], vs[a]);
            if backward != K6_BACKWARD.contains(&(b, a)) {
                return false;
            }
        }
    }
    true
}

/// Every position tuple `i₁ < … < i₆` with `i₂ = i₁+1`, `i₄ = i₃+1`,
/// `i₆ = i₅+1` whose ordered subtournament is the canonical K₆.
pub fn find_k6_instances(t: &Tournament, beta: &Ordering) -> Vec<K6Witness> {
    let n = t.n();
    let mut out = Vec::new();
    if beta.len() != n || n < 6 {
        return out;
    }
    for i1 in 0..n - 5 {
        for i3 in i1 + 2..n - 3 {
            for i5 in i3 + 2..n - 1 {
                let positions = [i1, i1 + 1, i3, i3 + 1, i5, i5 + 1];
                let vertices = positions.map(|p| beta.vertex_at(p));
                if matches_canonical(t, &vertices) {
                    out.push(K6Witness { vertices, positions });
                }
            }
        }
    }
    out
}

/// Whether `ordering` is a canonical ordering of the 6-vertex tournament `t`.
pub fn is_canonical_k6(t: &Tournament, ordering: &Ordering) -> Result<bool> {
    if t.n() != 6 {
        return Err(CoreError::SizeMismatch {
            expected: 6,
            found: t.n(),
        });
    }
    ordering.check_len(6)?;
    let vs: [usize; 6] = ordering.as_slice().try_into().expect("length checked");
    Ok(matches_canonical(t, &vs))
}
