//! Induced subtournament containment by backtracking.

use crate::bits::VertexSet;
use crate::tournament::Tournament;

/// Finds `X ⊆ V(T)` with `T|X ≅ H`. The returned vector maps each vertex of
/// `h` to its image in `t`.
pub fn contains_subtournament(t: &Tournament, h: &Tournament) -> Option<Vec<usize>> {
    if h.n() > t.n() {
        return None;
    }
    if h.n() == 0 {
        return Some(Vec::new());
    }
    // Map high-degree-spread vertices first: more constraints early.
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| {
        let d = h.out_set(v).len() as isize;
        std::cmp::Reverse((2 * d - (h.n() as isize - 1)).abs())
    });
    let mut map = vec![usize::MAX; h.n()];
    let mut used = VertexSet::empty();
    if extend(t, h, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn extend(
    t: &Tournament,
    h: &Tournament,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut VertexSet,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let hv = order[depth];
    let h_out = h.out_set(hv).len();
    let h_in = h.n() - 1 - h_out;
    let mut cand = t.vertices().difference(used);
    for &prev in &order[..depth] {
        let image = map[prev];
        cand = if h.beats(prev, hv) {
            cand.intersection(&t.out_set(image))
        } else {
            cand.intersection(&t.in_set(image))
        };
        if cand.is_empty() {
            return false;
        }
    }
    for tv in cand {
        let t_out = t.out_set(tv).len();
        if t_out < h_out || t.n() - 1 - t_out < h_in {
            continue;
        }
        map[hv] = tv;
        used.insert(tv);
        if extend(t, h, order, depth + 1, map, used) {
            return true;
        }
        used.remove(tv);
    }
    map[hv] = usize::MAX;
    false
}

/// True iff `t` contains no member of `family`.
pub fn is_family_free(t: &Tournament, family: &[Tournament]) -> bool {
    family.iter().all(|h| contains_subtournament(t, h).is_none())
}

/// Checks that `map` is an injective, arc-preserving (both ways) embedding
/// of `h` into `t`.
pub fn is_embedding(t: &Tournament, h: &Tournament, map: &[usize]) -> bool {
    if map.len() != h.n() || map.iter().any(|&v| v >= t.n()) {
        return false;
    }
    let image: VertexSet = map.iter().collect();
    if image.len() != map.len() {
        return false;
    }
    (0..h.n()).all(|a| (0..h.n()).all(|b| a == b || h.beats(a, b) == t.beats(map[a], map[b])))
}
