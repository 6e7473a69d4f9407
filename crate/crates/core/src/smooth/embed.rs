// Well-contained embeddings and the case split that turns an embedded
// mutant into a copy of one of the two forbidden tournaments.

use serde::{Deserialize, Serialize};

use super::{xi_labels, SmoothStructure, XiLabeling};
use crate::bits::VertexSet;
use crate::containment::is_embedding;
use crate::error::{CoreError, Result};
use crate::keys::{KeyFlavor, KeyTournament};
use crate::tournament::{Ordering, PartialDigraph, Tournament};
use std::collections::BTreeMap;

/// Source vertex → host vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Backtracking search for an arc-preserving map sending the source vertex
/// at position `p` of `theta` into the ξ-block labelled `p + 1`.
pub fn find_well_contained(
    chi: &SmoothStructure,
    source: &PartialDigraph,
    theta: &Ordering,
    delta: &BTreeMap<usize, usize>,
) -> Result<Option<Embedding>> {
    find_well_contained_with_budget(chi, source, theta, delta, DEFAULT_NODE_BUDGET)
}

pub fn find_well_contained_with_budget(
    chi: &SmoothStructure,
    source: &PartialDigraph,
    theta: &Ordering,
    delta: &BTreeMap<usize, usize>,
    budget: u64,
) -> Result<Option<Embedding>> {
    theta.check_len(source.n())?;
    let xi = xi_labels(chi, delta)?;
    let n = source.n();
    if n > xi.label_count {
        return Ok(None);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = VertexSet::empty();
    let mut budget = budget;
    if place(chi, source, theta, &xi, 0, &mut map, &mut used, &mut budget)? {
        Ok(Some(Embedding { map }))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn place(
    chi: &SmoothStructure,
    source: &PartialDigraph,
    theta: &Ordering,
    xi: &XiLabeling,
    p: usize,
    map: &mut [usize],
    used: &mut VertexSet,
    budget: &mut u64,
) -> Result<bool> {
    if p == source.n() {
        return Ok(true);
    }
    let v = theta.vertex_at(p);
    for &h in xi.vertices_with(p + 1) {
        if used.contains(h) {
            continue;
        }
        if *budget == 0 {
            return Err(CoreError::BudgetExceeded(
                "well-containment search ran out of nodes".into(),
            ));
        }
        *budget -= 1;
        let fits = (0..p).map(|q| theta.vertex_at(q)).all(|u| {
            (!source.has_arc(u, v) || chi.host.beats(map[u], h)) && (!source.has_arc(v, u) || chi.host.beats(h, map[u]))
        });
        if !fits {
            continue;
        }
        map[v] = h;
        used.insert(h);
        if place(chi, source, theta, xi, p + 1, map, used, budget)? {
            return Ok(true);
        }
        used.remove(h);
        map[v] = usize::MAX;
    }
    Ok(false)
}

/// Injectivity, arc preservation, and `ξ(f(v)) = position(v) + 1` for every
/// source vertex.
pub fn verify_well_contained(
    chi: &SmoothStructure,
    xi: &XiLabeling,
    source: &PartialDigraph,
    theta: &Ordering,
    f: &Embedding,
) -> bool {
    let n = source.n();
    if f.map.len() != n || theta.len() != n {
        return false;
    }
    let inside = chi.union();
    let mut seen = VertexSet::empty();
    for &h in &f.map {
        if h >= chi.host.n() || !inside.contains(h) || seen.contains(h) {
            return false;
        }
        seen.insert(h);
    }
    if source
        .arcs()
        .into_iter()
        .any(|(u, v)| !chi.host.beats(f.map[u], f.map[v]))
    {
        return false;
    }
    (0..n).all(|p| xi.label.get(f.map[theta.vertex_at(p)]).copied().flatten() == Some(p + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OutcomeTarget {
    /// The super nebula N.
    N,
    /// The Δgalaxy G, found on the given gadget.
    G { gadget: usize },
    /// The central triangular galaxy H.
    H,
    /// A canonical K₆ on the given gadget.
    K6 { gadget: usize },
}

/// A copy of `pattern` in the host: pattern vertex `i` ↦ `vertices[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub target: OutcomeTarget,
    pub pattern: Tournament,
    pub vertices: Vec<usize>,
}

impl Outcome {
    /// Re-checks the copy against the host.
    pub fn holds_in(&self, host: &Tournament) -> bool {
        is_embedding(host, &self.pattern, &self.vertices)
    }
}

fn check_homomorphism(t: &Tournament, d: &PartialDigraph, f: &Embedding) -> Result<()> {
    if f.map.len() != d.n() {
        return Err(CoreError::Precondition(format!(
            "embedding has {} entries for {} source vertices",
            f.map.len(),
            d.n()
        )));
    }
    let mut seen = VertexSet::empty();
    for &h in &f.map {
        if h >= t.n() || seen.contains(h) {
            return Err(CoreError::Precondition(format!(
                "embedding is not injective into the host at {h}"
            )));
        }
        seen.insert(h);
    }
    if let Some((u, v)) = d.arcs().into_iter().find(|&(u, v)| !t.beats(f.map[u], f.map[v])) {
        return Err(CoreError::Precondition(format!(
            "arc ({u}, {v}) of the mutant is not preserved"
        )));
    }
    Ok(())
}

/// Reads the host orientation of every arc the mutant leaves open and
/// returns the forced copy.
pub fn extract_outcome(t: &Tournament, f: &Embedding, key: &KeyTournament) -> Result<Outcome> {
    check_homomorphism(t, &key.mutant(), f)?;
    let img = |x: usize| f.map[x];
    match key.flavor {
        KeyFlavor::NebulaGalaxy => {
            let backward = key
                .removed_forward_arcs
                .iter()
                .position(|&(a, b)| t.beats(img(b), img(a)));
            match backward {
                None => {
                    let pattern = Tournament::from_fn(key.base.len(), |u, v| key.k.beats(key.base[u], key.base[v]));
                    Ok(Outcome {
                        target: OutcomeTarget::N,
                        pattern,
                        vertices: key.base.iter().map(|&x| img(x)).collect(),
                    })
                }
                Some(r) => {
                    let g = &key.gadgets[r];
                    let (a, b) = key.removed_forward_arcs[r];
                    let mut pattern = Tournament::from_fn(g.g_to_k.len(), |u, v| key.k.beats(g.g_to_k[u], g.g_to_k[v]));
                    let ga = g
                        .g_to_k
                        .iter()
                        .position(|&x| x == a)
                        .expect("E_f arc inside its gadget");
                    let gb = g
                        .g_to_k
                        .iter()
                        .position(|&x| x == b)
                        .expect("E_f arc inside its gadget");
                    pattern.flip(ga, gb);
                    Ok(Outcome {
                        target: OutcomeTarget::G { gadget: r },
                        pattern,
                        vertices: g.g_to_k.iter().map(|&x| img(x)).collect(),
                    })
                }
            }
        }
        KeyFlavor::Gk6 => {
            // gadget anchor: d₁ … d₆
            let both_forward = key.gadgets.iter().position(|g| {
                let d = &g.anchor;
                t.beats(img(d[0]), img(d[2])) && t.beats(img(d[3]), img(d[5]))
            });
            if let Some(r) = both_forward {
                return Ok(Outcome {
                    target: OutcomeTarget::K6 { gadget: r },
                    pattern: Tournament::k6(),
                    vertices: key.gadgets[r].anchor.iter().map(|&x| img(x)).collect(),
                });
            }
            let h = key.base.len();
            let src_of = |x: usize| key.base.iter().position(|&k| k == x);
            let mut pattern = Tournament::from_fn(h, |u, v| key.k.beats(key.base[u], key.base[v]));
            let mut vertices: Vec<usize> = key.base.iter().map(|&x| img(x)).collect();
            for g in &key.gadgets {
                let d = &g.anchor;
                let (z2, z3) = match (src_of(d[3]), src_of(d[5])) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(CoreError::Precondition("GK6 gadget anchor outside the base".into())),
                };
                pattern.flip(z2, z3);
                if !t.beats(img(d[5]), img(d[3])) {
                    // d₁ ← d₃: the triple (d₁, d₃, d₆) stands in for the triangle
                    vertices[z2] = img(d[2]);
                }
            }
            Ok(Outcome {
                target: OutcomeTarget::H,
                pattern,
                vertices,
            })
        }
    }
}
