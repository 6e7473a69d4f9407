// Best-effort search for smooth structures.
//
// Seeds: consecutive chunks of a maximum transitive subtournament (all arcs
// between chunks point forward, so such a structure is smooth for every λ),
// then contiguous blocks of a score ordering with greedy repair. Small hosts
// fall back to exhaustive enumeration, set by set, checking the pair
// conditions as soon as both sets are fixed.

use super::{ratio_at_least, scaled_at_least, verify_smooth_with_tr, SmoothStructure, SmoothViolation};
use crate::bits::VertexSet;
use crate::density::Rational;
use crate::error::{CoreError, Result};
use crate::tournament::{is_transitive_set, Tournament};
use crate::transitive::max_transitive_in;

// subsets are enumerated as u64 masks
const EXHAUSTIVE_CAP: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmoothSearch {
    /// Hosts up to this size get the exhaustive fallback.
    pub exhaustive_limit: usize,
    /// Candidate sets examined by the exhaustive fallback before giving up.
    pub node_budget: u64,
}

impl Default for SmoothSearch {
    fn default() -> Self {
        SmoothSearch {
            exhaustive_limit: 12,
            node_budget: 5_000_000,
        }
    }
}

/// Looks for a smooth `(c, λ, w)`-structure in `t`. `Ok(None)` means "not
/// found", not "does not exist" — except on hosts searched exhaustively.
pub fn find_smooth(t: &Tournament, c: Rational, lambda: Rational, w: &[bool]) -> Result<Option<SmoothStructure>> {
    find_smooth_with(t, c, lambda, w, SmoothSearch::default())
}

pub fn find_smooth_with(
    t: &Tournament,
    c: Rational,
    lambda: Rational,
    w: &[bool],
    opts: SmoothSearch,
) -> Result<Option<SmoothStructure>> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if c <= zero {
        return Err(CoreError::Domain(format!("c = {c} must be positive")));
    }
    if lambda <= zero || lambda >= one {
        return Err(CoreError::Domain(format!("λ = {lambda} must lie in (0, 1)")));
    }
    if w.is_empty() {
        return Err(CoreError::Domain("w must be nonempty".into()));
    }
    let n = t.n();
    let tr_witness = max_transitive_in(t, &t.vertices());
    let tr = tr_witness.len();
    let need: Vec<usize> = w.iter().map(|&b| min_size(c, if b { tr } else { n }).max(1)).collect();
    if need.iter().sum::<usize>() > n {
        return Ok(None);
    }
    let make = |sets: Vec<VertexSet>| SmoothStructure::new(t.clone(), sets, w.to_vec(), c, lambda);
    let accept = |chi: &SmoothStructure| verify_smooth_with_tr(chi, tr).ok;

    if let Some(chi) = chunk_seed(&tr_witness, &need).map(make) {
        if accept(&chi) {
            return Ok(Some(chi));
        }
    }
    let mut by_score: Vec<usize> = (0..n).collect();
    by_score.sort_by_key(|&v| (std::cmp::Reverse(t.out_set(v).len()), v));
    for sets in block_seeds(t, &by_score, w, &need) {
        let mut chi = make(sets);
        repair(&mut chi, &need, tr);
        if accept(&chi) {
            return Ok(Some(chi));
        }
    }
    if n <= opts.exhaustive_limit.min(EXHAUSTIVE_CAP) {
        let mut budget = opts.node_budget;
        let mut sets = Vec::with_capacity(w.len());
        if exhaustive(t, w, &need, lambda, &by_score, &mut sets, &mut budget)? {
            let chi = make(sets);
            debug_assert!(accept(&chi));
            return Ok(Some(chi));
        }
    }
    Ok(None)
}

// smallest integer s with s ≥ c·m
fn min_size(c: Rational, m: usize) -> usize {
    (0..=m).find(|&s| scaled_at_least(s, c, m)).unwrap_or(m + 1)
}

fn chunk_seed(chain: &[usize], need: &[usize]) -> Option<Vec<VertexSet>> {
    let total: usize = need.iter().sum();
    if total > chain.len() {
        return None;
    }
    // hand the spare vertices out left to right
    let mut spare = chain.len() - total;
    let k = need.len();
    let mut out = Vec::with_capacity(k);
    let mut at = 0;
    for (i, &m) in need.iter().enumerate() {
        let extra = spare / (k - i);
        spare -= extra;
        out.push(chain[at..at + m + extra].iter().collect());
        at += m + extra;
    }
    Some(out)
}

fn block_seeds(t: &Tournament, order: &[usize], w: &[bool], need: &[usize]) -> Vec<Vec<VertexSet>> {
    let n = order.len();
    let k = w.len();
    let mut seeds = Vec::new();
    // equal blocks, and blocks of exactly the required sizes
    let equal: Vec<usize> = (0..k).map(|i| n / k + usize::from(i < n % k)).collect();
    for sizes in [equal, need.to_vec()] {
        let mut at = 0;
        let mut sets = Vec::with_capacity(k);
        for (i, &s) in sizes.iter().enumerate() {
            let block: VertexSet = order[at..at + s].iter().collect();
            at += s;
            sets.push(if w[i] {
                max_transitive_in(t, &block).into_iter().collect()
            } else {
                block
            });
        }
        seeds.push(sets);
    }
    seeds
}

// Drops the worst offending vertex while that keeps every set large enough.
fn repair(chi: &mut SmoothStructure, need: &[usize], tr: usize) {
    loop {
        let report = verify_smooth_with_tr(chi, tr);
        if report.ok {
            return;
        }
        let mut tally = vec![0usize; chi.host.n()];
        for v in &report.violations {
            match *v {
                SmoothViolation::OutDensity { vertex, .. } | SmoothViolation::InDensity { vertex, .. } => {
                    tally[vertex] += 1
                }
                _ => return,
            }
        }
        let victim = (0..tally.len())
            .filter(|&v| tally[v] > 0)
            .filter(|&v| chi.set_of(v).is_some_and(|i| chi.sets[i].len() > need[i]))
            .max_by_key(|&v| (tally[v], std::cmp::Reverse(v)));
        let Some(v) = victim else { return };
        let i = chi.set_of(v).expect("member");
        chi.sets[i].remove(v);
    }
}

fn pair_ok(t: &Tournament, si: &VertexSet, sj: &VertexSet, need: Rational) -> bool {
    si.iter()
        .all(|x| ratio_at_least(t.out_set(x).intersection(sj).len(), sj.len(), need))
        && sj
            .iter()
            .all(|y| ratio_at_least(t.in_set(y).intersection(si).len(), si.len(), need))
}

fn exhaustive(
    t: &Tournament,
    w: &[bool],
    need: &[usize],
    lambda: Rational,
    order: &[usize],
    sets: &mut Vec<VertexSet>,
    budget: &mut u64,
) -> Result<bool> {
    let i = sets.len();
    if i == w.len() {
        return Ok(true);
    }
    let used = sets.iter().fold(VertexSet::empty(), |a, s| a.union(s));
    let free: Vec<usize> = order.iter().copied().filter(|&v| !used.contains(v)).collect();
    let later: usize = need[i + 1..].iter().sum();
    if free.len() < need[i] + later {
        return Ok(false);
    }
    let one = Rational::from_integer(1);
    for mask in 1u64..(1u64 << free.len()) {
        let size = mask.count_ones() as usize;
        if size < need[i] || free.len() - size < later {
            continue;
        }
        if *budget == 0 {
            return Err(CoreError::BudgetExceeded(
                "exhaustive smooth-structure search ran out of nodes".into(),
            ));
        }
        *budget -= 1;
        let s: VertexSet = (0..free.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| free[b])
            .collect();
        if w[i] && !is_transitive_set(t, &s) {
            continue;
        }
        if !sets.iter().all(|p| pair_ok(t, p, &s, one - lambda)) {
            continue;
        }
        sets.push(s);
        if exhaustive(t, w, need, lambda, order, sets, budget)? {
            return Ok(true);
        }
        sets.pop();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_size_rounds_up() {
        assert_eq!(min_size(Rational::new(1, 3), 7), 3);
        assert_eq!(min_size(Rational::new(1, 2), 8), 4);
        assert_eq!(min_size(Rational::new(1, 1), 5), 5);
    }

    #[test]
    fn chunk_seed_spreads_spare() {
        let sets = chunk_seed(&[0, 1, 2, 3, 4, 5, 6], &[2, 2]).unwrap();
        assert_eq!(sets[0].len() + sets[1].len(), 7);
        assert!(sets[0].len() >= 2 && sets[1].len() >= 2);
    }
}
