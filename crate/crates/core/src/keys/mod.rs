//! Leaf vectors, bad triplets, mutant digraphs and key tournaments.
//!
//! Everything here is position-based: a decomposition witness fixes an
//! ordering θ and all vectors are indexed by θ-positions.

mod gk6;
mod key;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::recognize::{
    check_decomposition, recognize_decomposition, DecompositionWitness, Grammar, Part, RecognizeOptions,
};
use crate::tournament::{Ordering, PartialDigraph, Tournament};

pub use gk6::{build_key_gk6, operation_k6, operation_k6_all, undo_gk6_key};
pub use key::{build_key, verify_key, BulletReport, Gadget, KeyFlavor, KeyReport, KeyTournament};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafVector {
    pub bits: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractedVector {
    pub bits: Vec<u8>,
    /// Index of each 1 in `bits` → length of the run it replaced.
    pub multiplicity: BTreeMap<usize, usize>,
}

impl ContractedVector {
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

/// Positions of all leaves of stars and super 2-nebulas, by θ-position.
fn leaf_flags(w: &DecompositionWitness) -> Result<Vec<bool>> {
    let mut flags = vec![false; w.n()];
    let theta = &w.ordering;
    for p in &w.parts {
        match p {
            Part::Star(s) => {
                for &l in &s.leaves {
                    flags[theta.position_of(l)] = true;
                }
            }
            Part::SuperTwoNebula(s) => {
                for l in s.leaves() {
                    flags[theta.position_of(l)] = true;
                }
            }
            Part::Triangle(_) | Part::K6(_) => {
                return Err(CoreError::WrongGrammar(format!(
                    "leaf vectors need a (super) nebula decomposition, found {} parts",
                    if matches!(p, Part::Triangle(_)) {
                        "triangle"
                    } else {
                        "K6"
                    }
                )))
            }
        }
    }
    Ok(flags)
}

pub fn leaf_vector(w: &DecompositionWitness) -> Result<LeafVector> {
    Ok(LeafVector {
        bits: leaf_flags(w)?.into_iter().map(u8::from).collect(),
    })
}

pub fn contract(s: &LeafVector) -> ContractedVector {
    contract_bits(&s.bits)
}

pub fn contract_bits(bits: &[u8]) -> ContractedVector {
    let mut out = Vec::new();
    let mut mult = BTreeMap::new();
    for &b in bits {
        if b == 1 && out.last() == Some(&1) {
            *mult.get_mut(&(out.len() - 1)).expect("run start recorded") += 1;
        } else {
            if b == 1 {
                mult.insert(out.len(), 1);
            }
            out.push(b);
        }
    }
    ContractedVector {
        bits: out,
        multiplicity: mult,
    }
}

/// Run index (R-class) of every leaf position; `None` for non-leaves.
pub fn r_classes(s: &LeafVector) -> Vec<Option<usize>> {
    let mut out = Vec::with_capacity(s.bits.len());
    let mut run = 0usize;
    let mut prev = 0u8;
    for &b in &s.bits {
        if b == 1 && prev == 0 {
            run += 1;
        }
        out.push((b == 1).then(|| run - 1));
        prev = b;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartSelector {
    /// The first `k` super 2-nebulas.
    Sigmas(usize),
    /// The first `k` stars.
    Stars(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    /// Selected vertices in θ order; vertex `i` of `tournament` is `vertices[i]`.
    pub vertices: Vec<usize>,
    pub tournament: Tournament,
    pub leaf: LeafVector,
    /// 1s are merged only when they come from the same run of the full
    /// leaf vector.
    pub contracted: ContractedVector,
}

/// The sub-structure spanned by the first `k` super 2-nebulas or stars.
pub fn restrict_structure(t: &Tournament, w: &DecompositionWitness, sel: PartSelector) -> Result<Restriction> {
    let full = leaf_vector(w)?;
    let classes = r_classes(&full);
    let theta = &w.ordering;
    let (k, available): (usize, Vec<Vec<usize>>) = match sel {
        PartSelector::Sigmas(k) => (k, w.sigmas().map(|s| s.vertices()).collect()),
        PartSelector::Stars(k) => (k, w.stars().map(|s| s.vertices()).collect()),
    };
    if k > available.len() {
        return Err(CoreError::Precondition(format!(
            "asked for {k} parts but only {} are present",
            available.len()
        )));
    }
    let mut positions: Vec<usize> = available[..k].iter().flatten().map(|&v| theta.position_of(v)).collect();
    positions.sort_unstable();
    let vertices: Vec<usize> = positions.iter().map(|&p| theta.vertex_at(p)).collect();
    let bits: Vec<u8> = positions.iter().map(|&p| full.bits[p]).collect();

    let mut cbits = Vec::new();
    let mut mult = BTreeMap::new();
    let mut last_class: Option<usize> = None;
    for &p in &positions {
        match classes[p] {
            Some(c) if last_class == Some(c) && cbits.last() == Some(&1) => {
                *mult.get_mut(&(cbits.len() - 1)).expect("run start recorded") += 1;
            }
            Some(c) => {
                mult.insert(cbits.len(), 1);
                cbits.push(1);
                last_class = Some(c);
            }
            None => {
                cbits.push(0);
                last_class = None;
            }
        }
    }
    Ok(Restriction {
        tournament: t.induced(&vertices),
        vertices,
        leaf: LeafVector { bits },
        contracted: ContractedVector {
            bits: cbits,
            multiplicity: mult,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TripletSource {
    Star { center: usize },
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triplet {
    /// Vertices in θ order.
    pub vertices: [usize; 3],
    pub positions: [usize; 3],
    pub source: TripletSource,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadTripletSet {
    /// Sorted lexicographically by positions.
    pub triplets: Vec<Triplet>,
}

impl BadTripletSet {
    pub fn len(&self) -> usize {
        self.triplets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triplets.is_empty()
    }
}

fn require_regular_super_nebula(t: &Tournament, w: &DecompositionWitness) -> Result<()> {
    let v = check_decomposition(t, w, Grammar::SuperNebula, true);
    if v.is_empty() {
        Ok(())
    } else {
        Err(CoreError::WrongGrammar(format!(
            "not a regular super nebula witness: {}",
            v.join("; ")
        )))
    }
}

/// Bad triplets of a regular super nebula under its witness ordering.
pub fn bad_triplets(t: &Tournament, w: &DecompositionWitness) -> Result<BadTripletSet> {
    require_regular_super_nebula(t, w)?;
    Ok(bad_triplets_unchecked(t, w))
}

pub(crate) fn bad_triplets_unchecked(t: &Tournament, w: &DecompositionWitness) -> BadTripletSet {
    let theta = &w.ordering;
    let s = LeafVector {
        bits: leaf_flags(w).expect("checked").into_iter().map(u8::from).collect(),
    };
    let class = r_classes(&s);
    let mut out: Vec<Triplet> = Vec::new();
    let mk = |vs: [usize; 3], source: TripletSource| {
        let mut ps = vs.map(|v| theta.position_of(v));
        ps.sort_unstable();
        Triplet {
            vertices: ps.map(|p| theta.vertex_at(p)),
            positions: ps,
            source,
        }
    };
    for st in w.stars() {
        for (i, &a) in st.leaves.iter().enumerate() {
            for &b in &st.leaves[i + 1..] {
                if class[theta.position_of(a)] != class[theta.position_of(b)] {
                    out.push(mk([st.center, a, b], TripletSource::Star { center: st.center }));
                }
            }
        }
    }
    let sigma_vs: Vec<usize> = w.sigmas().flat_map(|s| s.vertices()).collect();
    let back = |x: usize, y: usize| {
        let (px, py) = (theta.position_of(x), theta.position_of(y));
        if px < py {
            t.beats(y, x)
        } else {
            t.beats(x, y)
        }
    };
    for i in 0..sigma_vs.len() {
        for j in i + 1..sigma_vs.len() {
            for k in j + 1..sigma_vs.len() {
                let (a, b, c) = (sigma_vs[i], sigma_vs[j], sigma_vs[k]);
                let count = usize::from(back(a, b)) + usize::from(back(a, c)) + usize::from(back(b, c));
                if count == 2 {
                    out.push(mk([a, b, c], TripletSource::Sigma));
                }
            }
        }
    }
    out.sort_by_key(|t| t.positions);
    out.dedup_by_key(|t| t.positions);
    BadTripletSet { triplets: out }
}

/// The forward arc of a triple under `theta`; it must be unique.
pub fn forward_arc(t: &Tournament, theta: &Ordering, triple: [usize; 3]) -> Result<(usize, usize)> {
    let mut fwd = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (triple[i], triple[j]);
            let (first, second) = if theta.position_of(a) < theta.position_of(b) {
                (a, b)
            } else {
                (b, a)
            };
            if t.beats(first, second) {
                fwd.push((first, second));
            }
        }
    }
    match fwd.as_slice() {
        [e] => Ok(*e),
        _ => Err(CoreError::Precondition(format!(
            "triple {triple:?} has {} forward arcs, expected exactly one",
            fwd.len()
        ))),
    }
}

/// `E_f`: the forward arc of each bad triplet, in triplet order.
pub fn forward_arcs(t: &Tournament, w: &DecompositionWitness) -> Result<Vec<(usize, usize)>> {
    bad_triplets(t, w)?
        .triplets
        .iter()
        .map(|tr| forward_arc(t, &w.ordering, tr.vertices))
        .collect()
}

/// The host minus the forward arc of every bad triplet.
pub fn mutant(t: &Tournament, w: &DecompositionWitness) -> Result<PartialDigraph> {
    let ef = forward_arcs(t, w)?;
    let mut d = PartialDigraph::from_tournament(t);
    for (u, v) in ef {
        d.remove_pair(u, v);
    }
    Ok(d)
}

/// Every tournament completing `d`, in the order of
/// [`PartialDigraph::missing_pairs`] bit masks (bit set = forward).
pub fn completions(d: &PartialDigraph) -> impl Iterator<Item = Tournament> + '_ {
    let k = d.missing_pairs().len();
    assert!(k < 32, "too many missing pairs to enumerate");
    (0u32..1 << k).map(move |mask| {
        let fw: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        d.complete(&fw).expect("mask length matches")
    })
}

/// Checks that `w` certifies `g` as a regular Δgalaxy.
pub(crate) fn require_regular_delta_galaxy(g: &Tournament, w: &DecompositionWitness) -> Result<()> {
    let v = check_decomposition(g, w, Grammar::DeltaGalaxy, true);
    if v.is_empty() {
        Ok(())
    } else {
        Err(CoreError::WrongGrammar(format!(
            "not a regular Δgalaxy witness: {}",
            v.join("; ")
        )))
    }
}

/// The three tournaments obtained from `g` by reversing one arc of its
/// triangle under `alpha`.
pub fn reversal_set(g: &Tournament, alpha: &Ordering) -> Result<Vec<Tournament>> {
    let w = recognize_decomposition(g, Grammar::DeltaGalaxy, alpha, &RecognizeOptions::regular())?
        .ok_or_else(|| CoreError::WrongGrammar("not a regular Δgalaxy under the given ordering".into()))?;
    let tri = w.triangles().next().expect("Δgalaxy has one triangle");
    let [x, y, z] = tri.vertices();
    Ok([(x, y), (x, z), (y, z)]
        .into_iter()
        .map(|(a, b)| {
            let mut h = g.clone();
            h.flip(a, b);
            h
        })
        .collect())
}
