// Searchers for the density configurations. Each returns a witness when one
// exists and `None` otherwise; nothing here assumes ε-criticality.
//
// Notation: `x ← y` means the arc `y → x`.

use serde::Serialize;

use crate::bits::VertexSet;
use crate::error::{CoreError, Result};
use crate::tournament::Tournament;

/// The three arrangements of the linked-pair search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkedPairVariant {
    /// `x ← {y, s₁..s_m}` and `{s_{m+1}..s_t} ← y`.
    First,
    /// `{u₁..u_m, p} ← q` and `{u_{m+1}..u_t} ← p`.
    Second,
    /// `g ← {v, z₁..z_m}` and `v ← {z_{m+1}..z_t}`.
    Third,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityQuery {
    /// Pairs `(x_i, y_i)`, pairwise distinct, with `y_i → x_i`.
    MatchedPairs { x: VertexSet, y: VertexSet },
    /// `g ∈ a`, one `s_i ∈ S_i` with `g → s_i`, one `p_i ∈ P_i` with `p_i → g`.
    LinkedVertex {
        s: Vec<VertexSet>,
        p: Vec<VertexSet>,
        a: VertexSet,
    },
    /// A vertex from each of `a1`, `a2` and every set, arranged per
    /// `variant`; the first `m` sets play the first role.
    LinkedPair {
        sets: Vec<VertexSet>,
        m: usize,
        a1: VertexSet,
        a2: VertexSet,
        variant: LinkedPairVariant,
    },
    /// Arcs in both directions between `a` and the transitive set `g`.
    CrossingArc { a: VertexSet, g: VertexSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum DensityWitness {
    /// A maximum set of pairs `(x, y)` with `y → x`.
    MatchedPairs {
        pairs: Vec<(usize, usize)>,
    },
    LinkedVertex {
        g: usize,
        s: Vec<usize>,
        p: Vec<usize>,
    },
    /// `(first, second)` are the vertices from `a1` and `a2`.
    LinkedPair {
        first: usize,
        second: usize,
        picks: Vec<usize>,
    },
    /// `a → g` and `g' → a'` when present.
    CrossingArc {
        from_a: Option<(usize, usize)>,
        into_a: Option<(usize, usize)>,
    },
}

fn disjoint_all(sets: &[&VertexSet]) -> bool {
    let mut acc = VertexSet::empty();
    for s in sets {
        if !acc.is_disjoint(s) {
            return false;
        }
        acc = acc.union(s);
    }
    true
}

fn in_host(t: &Tournament, sets: &[&VertexSet]) -> Result<()> {
    let full = t.vertices();
    if sets.iter().all(|s| s.is_subset(&full)) && disjoint_all(sets) {
        Ok(())
    } else {
        Err(CoreError::BadVertexSets)
    }
}

/// Runs one of the four searches. `Ok(None)` means no witness exists (for
/// `MatchedPairs`, the maximum is returned even when empty).
pub fn density_search(t: &Tournament, q: &DensityQuery) -> Result<Option<DensityWitness>> {
    match q {
        DensityQuery::MatchedPairs { x, y } => {
            in_host(t, &[x, y])?;
            Ok(Some(DensityWitness::MatchedPairs {
                pairs: max_matching(t, x, y),
            }))
        }
        DensityQuery::LinkedVertex { s, p, a } => {
            let mut all: Vec<&VertexSet> = s.iter().chain(p.iter()).collect();
            all.push(a);
            in_host(t, &all)?;
            for g in a {
                let ss: Option<Vec<usize>> = s.iter().map(|si| t.out_set(g).intersection(si).first()).collect();
                let ps: Option<Vec<usize>> = p.iter().map(|pi| t.in_set(g).intersection(pi).first()).collect();
                if let (Some(s), Some(p)) = (ss, ps) {
                    return Ok(Some(DensityWitness::LinkedVertex { g, s, p }));
                }
            }
            Ok(None)
        }
        DensityQuery::LinkedPair {
            sets,
            m,
            a1,
            a2,
            variant,
        } => {
            if *m > sets.len() {
                return Err(CoreError::Precondition(format!(
                    "linked pair split m = {m} exceeds the {} sets",
                    sets.len()
                )));
            }
            let mut all: Vec<&VertexSet> = sets.iter().collect();
            all.push(a1);
            all.push(a2);
            in_host(t, &all)?;
            for x in a1 {
                for y in a2 {
                    if let Some(picks) = linked_pair_at(t, sets, *m, *variant, x, y) {
                        return Ok(Some(DensityWitness::LinkedPair {
                            first: x,
                            second: y,
                            picks,
                        }));
                    }
                }
            }
            Ok(None)
        }
        DensityQuery::CrossingArc { a, g } => {
            in_host(t, &[a, g])?;
            let from_a = a
                .iter()
                .find_map(|x| t.out_set(x).intersection(g).first().map(|y| (x, y)));
            let into_a = g
                .iter()
                .find_map(|y| t.out_set(y).intersection(a).first().map(|x| (y, x)));
            if from_a.is_none() && into_a.is_none() {
                return Ok(None);
            }
            Ok(Some(DensityWitness::CrossingArc { from_a, into_a }))
        }
    }
}

// Candidate picks for a fixed (x ∈ a1, y ∈ a2); `None` if the pair cannot
// be completed.
fn linked_pair_at(
    t: &Tournament,
    sets: &[VertexSet],
    m: usize,
    variant: LinkedPairVariant,
    x: usize,
    y: usize,
) -> Option<Vec<usize>> {
    use LinkedPairVariant::*;
    // (pair arc, role of the first m sets, role of the rest), as
    // neighbourhoods to intersect with
    let (pair_ok, head, tail) = match variant {
        First => (t.beats(y, x), t.in_set(x), t.out_set(y)),
        Second => (t.beats(y, x), t.out_set(y), t.out_set(x)),
        Third => (t.beats(y, x), t.in_set(x), t.in_set(y)),
    };
    if !pair_ok {
        return None;
    }
    sets.iter()
        .enumerate()
        .map(|(i, s)| {
            if i < m {
                head.intersection(s)
            } else {
                tail.intersection(s)
            }
            .first()
        })
        .collect()
}

// Kuhn's augmenting paths; pairs sorted by x.
fn max_matching(t: &Tournament, x: &VertexSet, y: &VertexSet) -> Vec<(usize, usize)> {
    let xs = x.to_vec();
    let mut owner: Vec<Option<usize>> = vec![None; t.n()];
    for &u in &xs {
        let mut seen = VertexSet::empty();
        augment(t, u, y, &mut owner, &mut seen);
    }
    let mut pairs: Vec<(usize, usize)> = y.iter().filter_map(|v| owner[v].map(|u| (u, v))).collect();
    pairs.sort_unstable();
    pairs
}

fn augment(t: &Tournament, u: usize, y: &VertexSet, owner: &mut [Option<usize>], seen: &mut VertexSet) -> bool {
    for v in t.in_set(u).intersection(y) {
        if seen.contains(v) {
            continue;
        }
        seen.insert(v);
        if owner[v].is_none_or(|w| augment(t, w, y, owner, seen)) {
            owner[v] = Some(u);
            return true;
        }
    }
    false
}
