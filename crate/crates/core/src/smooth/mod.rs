//! Smooth `(c, λ, w)`-structures: verification, desk-scale search, the
//! intersection bound, ξ-labels, well-containment and the density-search
//! primitives used in the embedding arguments.

mod density_search;
mod embed;
mod search;
mod thresholds;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::VertexSet;
use crate::density::{parse_rational, Rational};
use crate::error::{CoreError, Result};
use crate::tournament::{transitive_order, Tournament};
use crate::transitive::max_transitive_in;

pub use density_search::{density_search, DensityQuery, DensityWitness, LinkedPairVariant};
pub use embed::{
    extract_outcome, find_well_contained, find_well_contained_with_budget, verify_well_contained, Embedding, Outcome,
    OutcomeTarget,
};
pub use search::{find_smooth, find_smooth_with, SmoothSearch};
pub use thresholds::{epsilon_thresholds, Bound, ThresholdParams};

/// A candidate smooth structure `(S₁, …, S_|w|)` of `host`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothStructure {
    pub host: Tournament,
    pub sets: Vec<VertexSet>,
    /// `w_i = true` marks a transitive set, `false` a linear one.
    pub w: Vec<bool>,
    pub c: Rational,
    pub lambda: Rational,
}

impl SmoothStructure {
    pub fn new(host: Tournament, sets: Vec<VertexSet>, w: Vec<bool>, c: Rational, lambda: Rational) -> Self {
        SmoothStructure {
            host,
            sets,
            w,
            c,
            lambda,
        }
    }

    /// Reads sets from a partition file: one set per line, whitespace
    /// separated vertex indices, in `w` order. Blank lines and `#` comments
    /// are skipped.
    pub fn parse_partition(text: &str) -> Result<Vec<VertexSet>> {
        let mut sets = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut s = VertexSet::empty();
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|e| CoreError::Parse(format!("partition vertex {tok:?}: {e}")))?;
                if v >= crate::bits::MAX_VERTICES {
                    return Err(CoreError::Parse(format!("partition vertex {v} out of range")));
                }
                s.insert(v);
            }
            sets.push(s);
        }
        Ok(sets)
    }

    /// Parses a `w` pattern such as `010` or `0,1,0`.
    pub fn parse_w(text: &str) -> Result<Vec<bool>> {
        let w: Vec<bool> = text
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(CoreError::Parse(format!("w pattern {text:?}: unexpected {c:?}"))),
            })
            .collect::<Result<_>>()?;
        if w.is_empty() {
            return Err(CoreError::Parse("empty w pattern".into()));
        }
        Ok(w)
    }

    pub fn union(&self) -> VertexSet {
        self.sets.iter().fold(VertexSet::empty(), |a, s| a.union(s))
    }

    /// Index of the set holding `v`.
    pub fn set_of(&self, v: usize) -> Option<usize> {
        self.sets.iter().position(|s| s.contains(v))
    }
}

/// On-disk form of a structure, used by the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureFile {
    pub host: Tournament,
    pub c: String,
    pub lambda: String,
    pub w: String,
    pub sets: Vec<Vec<usize>>,
    /// Multiplicity of each transitive entry of `w`, in order. Defaults to 1.
    #[serde(default)]
    pub delta: Option<Vec<usize>>,
}

impl StructureFile {
    pub fn into_structure(self) -> Result<(SmoothStructure, BTreeMap<usize, usize>)> {
        let w = SmoothStructure::parse_w(&self.w)?;
        let sets = self.sets.iter().map(|s| s.iter().collect()).collect();
        let ones: Vec<usize> = (0..w.len()).filter(|&i| w[i]).collect();
        let delta = match self.delta {
            None => ones.iter().map(|&i| (i, 1)).collect(),
            Some(d) => {
                if d.len() != ones.len() {
                    return Err(CoreError::Precondition(format!(
                        "{} δ values for {} transitive entries",
                        d.len(),
                        ones.len()
                    )));
                }
                ones.into_iter().zip(d).collect()
            }
        };
        let chi = SmoothStructure::new(
            self.host,
            sets,
            w,
            parse_rational(&self.c)?,
            parse_rational(&self.lambda)?,
        );
        Ok((chi, delta))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SmoothViolation {
    Parameters {
        detail: String,
    },
    VertexOutOfRange {
        set: usize,
        vertex: usize,
    },
    Overlap {
        first: usize,
        second: usize,
    },
    EmptySet {
        set: usize,
    },
    LinearTooSmall {
        set: usize,
        size: usize,
        n: usize,
    },
    NotTransitive {
        set: usize,
    },
    TransitiveTooSmall {
        set: usize,
        size: usize,
        tr: usize,
    },
    /// `d({v}, S_j) < 1 − λ` for `v ∈ S_i`, `i < j`.
    OutDensity {
        vertex: usize,
        from: usize,
        to: usize,
        arcs: usize,
        size: usize,
    },
    /// `d(S_i, {v}) < 1 − λ` for `v ∈ S_j`, `i < j`.
    InDensity {
        vertex: usize,
        from: usize,
        to: usize,
        arcs: usize,
        size: usize,
    },
}

impl fmt::Display for SmoothViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SmoothViolation::*;
        match self {
            Parameters { detail } => write!(f, "parameters: {detail}"),
            VertexOutOfRange { set, vertex } => write!(f, "S{} holds vertex {vertex} outside the host", set + 1),
            Overlap { first, second } => write!(f, "S{} and S{} intersect", first + 1, second + 1),
            EmptySet { set } => write!(f, "S{} is empty", set + 1),
            LinearTooSmall { set, size, n } => write!(f, "linear set S{} has {size} vertices, below c·{n}", set + 1),
            NotTransitive { set } => write!(f, "S{} is not transitive", set + 1),
            TransitiveTooSmall { set, size, tr } => {
                write!(
                    f,
                    "transitive set S{} has {size} vertices, below c·tr = c·{tr}",
                    set + 1
                )
            }
            OutDensity {
                vertex,
                from,
                to,
                arcs,
                size,
            } => write!(
                f,
                "smoothness: d({{{vertex}}}, S{}) = {arcs}/{size} < 1−λ (vertex in S{})",
                to + 1,
                from + 1
            ),
            InDensity {
                vertex,
                from,
                to,
                arcs,
                size,
            } => write!(
                f,
                "smoothness: d(S{}, {{{vertex}}}) = {arcs}/{size} < 1−λ (vertex in S{})",
                from + 1,
                to + 1
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothReport {
    pub ok: bool,
    pub violations: Vec<SmoothViolation>,
}

// count / size ≥ r
fn ratio_at_least(count: usize, size: usize, r: Rational) -> bool {
    (count as i128) * (*r.denom() as i128) >= (*r.numer() as i128) * (size as i128)
}

// size ≥ c·n
fn scaled_at_least(size: usize, c: Rational, n: usize) -> bool {
    ratio_at_least(size, 1, c * Rational::from_integer(n as i64))
}

/// Checks every defining condition exactly. tr(host) is computed when some
/// entry of `w` is 1.
pub fn verify_smooth(chi: &SmoothStructure) -> SmoothReport {
    let tr = if chi.w.iter().any(|&b| b) {
        max_transitive_in(&chi.host, &chi.host.vertices()).len()
    } else {
        0
    };
    verify_smooth_with_tr(chi, tr)
}

/// As [`verify_smooth`] with a known `tr(host)`.
pub fn verify_smooth_with_tr(chi: &SmoothStructure, tr: usize) -> SmoothReport {
    let mut v = Vec::new();
    let n = chi.host.n();
    let one = Rational::from_integer(1);
    if chi.sets.len() != chi.w.len() {
        v.push(SmoothViolation::Parameters {
            detail: format!("{} sets for |w| = {}", chi.sets.len(), chi.w.len()),
        });
    }
    if chi.c <= Rational::from_integer(0) {
        v.push(SmoothViolation::Parameters {
            detail: format!("c = {} is not positive", chi.c),
        });
    }
    if chi.lambda <= Rational::from_integer(0) || chi.lambda >= one {
        v.push(SmoothViolation::Parameters {
            detail: format!("λ = {} is outside (0, 1)", chi.lambda),
        });
    }
    let full = chi.host.vertices();
    for (i, s) in chi.sets.iter().enumerate() {
        if let Some(x) = s.difference(&full).first() {
            v.push(SmoothViolation::VertexOutOfRange { set: i, vertex: x });
        }
        if s.is_empty() {
            v.push(SmoothViolation::EmptySet { set: i });
        }
        for (j, t) in chi.sets.iter().enumerate().skip(i + 1) {
            if !s.is_disjoint(t) {
                v.push(SmoothViolation::Overlap { first: i, second: j });
            }
        }
    }
    if !v.is_empty() {
        return SmoothReport {
            ok: false,
            violations: v,
        };
    }
    for (i, s) in chi.sets.iter().enumerate() {
        if chi.w[i] {
            if !crate::tournament::is_transitive_set(&chi.host, s) {
                v.push(SmoothViolation::NotTransitive { set: i });
            }
            if !scaled_at_least(s.len(), chi.c, tr) {
                v.push(SmoothViolation::TransitiveTooSmall {
                    set: i,
                    size: s.len(),
                    tr,
                });
            }
        } else if !scaled_at_least(s.len(), chi.c, n) {
            v.push(SmoothViolation::LinearTooSmall {
                set: i,
                size: s.len(),
                n,
            });
        }
    }
    let need = one - chi.lambda;
    for (i, si) in chi.sets.iter().enumerate() {
        for (j, sj) in chi.sets.iter().enumerate().skip(i + 1) {
            for x in si {
                let arcs = chi.host.out_set(x).intersection(sj).len();
                if !ratio_at_least(arcs, sj.len(), need) {
                    v.push(SmoothViolation::OutDensity {
                        vertex: x,
                        from: i,
                        to: j,
                        arcs,
                        size: sj.len(),
                    });
                }
            }
            for y in sj {
                let arcs = chi.host.in_set(y).intersection(si).len();
                if !ratio_at_least(arcs, si.len(), need) {
                    v.push(SmoothViolation::InDensity {
                        vertex: y,
                        from: i,
                        to: j,
                        arcs,
                        size: si.len(),
                    });
                }
            }
        }
    }
    SmoothReport {
        ok: v.is_empty(),
        violations: v,
    }
}

/// `S_{j,x}` restricted to `within`: out-neighbours of `x` if `x` sits in an
/// earlier set, in-neighbours if later.
pub fn neighbourhood_in(chi: &SmoothStructure, j: usize, x: usize, within: &VertexSet) -> Result<VertexSet> {
    let i = chi
        .set_of(x)
        .ok_or_else(|| CoreError::Precondition(format!("vertex {x} is in no set of the structure")))?;
    if i == j {
        return Err(CoreError::Precondition(format!("vertex {x} lies in S{} itself", j + 1)));
    }
    Ok(if i < j {
        chi.host.out_set(x).intersection(within)
    } else {
        chi.host.in_set(x).intersection(within)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionCheck {
    pub intersection: VertexSet,
    /// `(1 − kλ/γ)·|S*_j|`.
    pub bound: Rational,
    pub holds: bool,
}

/// Intersects `S*_{j,x}` over `x ∈ a` and compares the size with
/// `(1 − kλ/γ)|S*_j|`.
pub fn check_intersection_bound(
    chi: &SmoothStructure,
    j: usize,
    s_star: &VertexSet,
    gamma: Rational,
    a: &[usize],
) -> Result<IntersectionCheck> {
    if j >= chi.sets.len() {
        return Err(CoreError::Precondition(format!("no set S{}", j + 1)));
    }
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if gamma <= zero || gamma > one {
        return Err(CoreError::Precondition(format!("γ = {gamma} is outside (0, 1]")));
    }
    let sj = &chi.sets[j];
    if !s_star.is_subset(sj) {
        return Err(CoreError::Precondition(format!("S* is not a subset of S{}", j + 1)));
    }
    if !ratio_at_least(s_star.len(), sj.len(), gamma) {
        return Err(CoreError::Precondition(format!(
            "|S*| = {} is below γ|S{}| = {gamma}·{}",
            s_star.len(),
            j + 1,
            sj.len()
        )));
    }
    let mut seen = VertexSet::empty();
    let mut inter = *s_star;
    for &x in a {
        if seen.contains(x) {
            return Err(CoreError::Precondition(format!("vertex {x} repeated in A")));
        }
        seen.insert(x);
        inter = inter.intersection(&neighbourhood_in(chi, j, x, s_star)?);
    }
    let k = Rational::from_integer(a.len() as i64);
    let bound = (one - k * chi.lambda / gamma) * Rational::from_integer(s_star.len() as i64);
    let holds = Rational::from_integer(inter.len() as i64) >= bound;
    Ok(IntersectionCheck {
        intersection: inter,
        bound,
        holds,
    })
}

/// ξ-labels of a structure. Labels are 1-based, as positions of the source
/// ordering are.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiLabeling {
    /// Label of each host vertex; `None` outside the structure and for the
    /// leftover tail of a transitive set.
    pub label: Vec<Option<usize>>,
    /// Per set, its blocks: one block (the whole set) for a linear set, δ
    /// blocks of `⌊|S|/δ⌋` vertices in transitive order for a transitive
    /// one.
    pub blocks: Vec<Vec<Vec<usize>>>,
    /// Label of the first block of each set.
    pub first_label: Vec<usize>,
    /// Number of distinct labels.
    pub label_count: usize,
}

impl XiLabeling {
    /// Host vertices carrying `label`, in block order.
    pub fn vertices_with(&self, label: usize) -> &[usize] {
        for (i, bs) in self.blocks.iter().enumerate() {
            let first = self.first_label[i];
            if label >= first && label < first + bs.len() {
                return &bs[label - first];
            }
        }
        &[]
    }
}

/// Evaluates ξ. `delta` maps each index `i` with `w_i = 1` to `δ^w(i) ≥ 1`.
pub fn xi_labels(chi: &SmoothStructure, delta: &BTreeMap<usize, usize>) -> Result<XiLabeling> {
    if chi.sets.len() != chi.w.len() {
        return Err(CoreError::Precondition(format!(
            "{} sets for |w| = {}",
            chi.sets.len(),
            chi.w.len()
        )));
    }
    for (&i, &d) in delta {
        if i >= chi.w.len() || !chi.w[i] {
            return Err(CoreError::Precondition(format!(
                "δ given at index {i}, which is not a 1 of w"
            )));
        }
        if d == 0 {
            return Err(CoreError::Precondition(format!("δ({i}) = 0")));
        }
    }
    let mut label = vec![None; chi.host.n()];
    let mut blocks = Vec::with_capacity(chi.sets.len());
    let mut first_label = Vec::with_capacity(chi.sets.len());
    let mut prefix = 0;
    for (i, s) in chi.sets.iter().enumerate() {
        first_label.push(prefix + 1);
        if chi.w[i] {
            let d = *delta
                .get(&i)
                .ok_or_else(|| CoreError::Precondition(format!("δ missing at index {i}")))?;
            let order = transitive_order(&chi.host, s)
                .ok_or_else(|| CoreError::Precondition(format!("S{} is not transitive", i + 1)))?;
            let m = order.len() / d;
            let bs: Vec<Vec<usize>> = (0..d).map(|j| order[j * m..(j + 1) * m].to_vec()).collect();
            for (j, b) in bs.iter().enumerate() {
                for &v in b {
                    label[v] = Some(prefix + j + 1);
                }
            }
            blocks.push(bs);
            prefix += d;
        } else {
            for v in s {
                label[v] = Some(prefix + 1);
            }
            blocks.push(vec![s.to_vec()]);
            prefix += 1;
        }
    }
    Ok(XiLabeling {
        label,
        blocks,
        first_label,
        label_count: prefix,
    })
}
