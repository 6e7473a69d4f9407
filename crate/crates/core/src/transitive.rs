//! Transitive subtournaments: exact `tr` by branch and bound, and the
//! logarithmic greedy lower bound.

use crate::bits::VertexSet;
use crate::error::{CoreError, Result};
use crate::tournament::Tournament;
use crate::Limits;

/// Largest transitive subtournament of `t`, with a witness listed in
/// transitive order (every arc points forward).
///
/// Refuses hosts above `Limits::default().tr_exact` vertices; use
/// [`tr_exact_with_limit`] to raise it or [`ramsey_transitive`] for a bound.
pub fn tr_exact(t: &Tournament) -> Result<(usize, Vec<usize>)> {
    tr_exact_with_limit(t, Limits::default().tr_exact)
}

pub fn tr_exact_with_limit(t: &Tournament, limit: usize) -> Result<(usize, Vec<usize>)> {
    if t.n() > limit {
        return Err(CoreError::LimitExceeded {
            what: "tr_exact",
            n: t.n(),
            limit,
        });
    }
    let w = max_transitive_in(t, &t.vertices());
    Ok((w.len(), w))
}

/// Maximum transitive subset of `T|set`, in transitive order. No size limit.
pub fn max_transitive_in(t: &Tournament, set: &VertexSet) -> Vec<usize> {
    let mut best = greedy_chain(t, *set);
    let mut chain = Vec::with_capacity(set.len());
    branch(t, *set, &mut chain, &mut best);
    best
}

/// `tr(T|set)`.
pub fn tr_of(t: &Tournament, set: &VertexSet) -> usize {
    max_transitive_in(t, set).len()
}

// Every transitive set has a unique top vertex. Branching on the top and
// recursing into its out-neighbourhood enumerates each set once. An explored
// top may still appear lower down in a later branch, so only the pool of
// eligible tops shrinks; the member pool bounds the search.
fn branch(t: &Tournament, cand: VertexSet, chain: &mut Vec<usize>, best: &mut Vec<usize>) {
    if chain.len() > best.len() {
        best.clone_from(chain);
    }
    if chain.len() + cand.len() <= best.len() {
        return;
    }
    // High in-pool out-degree first: they lead to large chains early.
    let mut order: Vec<(usize, usize)> = cand
        .iter()
        .map(|v| (t.out_set(v).intersection(&cand).len(), v))
        .collect();
    order.sort_unstable_by(|a, b| b.cmp(a));
    for (deg, v) in order {
        if chain.len() + 1 + deg <= best.len() {
            // sorted by degree: no later top can do better
            return;
        }
        chain.push(v);
        let next = cand.intersection(&t.out_set(v));
        branch(t, next, chain, best);
        chain.pop();
    }
}

fn greedy_chain(t: &Tournament, mut cand: VertexSet) -> Vec<usize> {
    let mut chain = Vec::new();
    while !cand.is_empty() {
        let v = cand
            .iter()
            .max_by_key(|&v| (t.out_set(v).intersection(&cand).len(), std::cmp::Reverse(v)))
            .expect("nonempty");
        chain.push(v);
        cand = cand.intersection(&t.out_set(v));
    }
    chain
}

/// Transitive set of size at least `floor(log2 n) + 1`: take the smallest
/// remaining vertex and keep the larger of its out- and in-neighbourhoods,
/// preferring the out-neighbourhood on ties. The witness is returned in
/// transitive order.
pub fn ramsey_transitive(t: &Tournament) -> Vec<usize> {
    let mut tops = Vec::new();
    let mut bottoms = Vec::new();
    let mut cand = t.vertices();
    while let Some(v) = cand.first() {
        cand.remove(v);
        let outs = cand.intersection(&t.out_set(v));
        let ins = cand.difference(&outs);
        if outs.len() >= ins.len() {
            tops.push(v);
            cand = outs;
        } else {
            bottoms.push(v);
            cand = ins;
        }
    }
    bottoms.reverse();
    tops.extend(bottoms);
    tops
}

/// `floor(log2 n) + 1` for `n >= 1`.
pub fn ramsey_bound(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - n.leading_zeros()) as usize
}
