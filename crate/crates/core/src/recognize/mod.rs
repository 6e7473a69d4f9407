//! Ordered decomposition families: stars, galaxies, nebulas, super nebulas,
//! triangular galaxies, Σ-galaxies and GK₆, with certified witnesses.
//!
//! A decomposition under θ is read off the graph of backward arcs: every
//! part is one connected component of that graph, so no backward arc ever
//! joins two parts. Components are classified by shape (a star `K_{1,k}`, a
//! double star for a super 2-nebula, a triangle, or a `P4 + K2` pair forming
//! a K₆ instance) and the grammar's placement clauses are then checked by
//! [`evaluate`].

mod components;
pub mod evaluate;
mod k6;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::tournament::{Ordering, Tournament};
use crate::Limits;

pub(crate) use components::star_witness;
pub use components::{classify_star_segment, find_triangles_under, recognize_super_2_nebula};
pub use evaluate::{check_decomposition, grammar_violations};
pub use k6::{find_k6_instances, is_canonical_k6};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarKind {
    Left,
    Right,
    Middle,
}

impl StarKind {
    pub fn is_frontier(self) -> bool {
        self != StarKind::Middle
    }
}

/// Which vertex of a 2-vertex star is taken as its center.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterChoice {
    /// The earlier vertex: a left star.
    Left,
    /// The later vertex: a right star.
    #[default]
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaKind {
    Left,
    Middle,
    Right,
}

impl SigmaKind {
    /// The contracted leaf vector that defines this kind.
    pub fn contracted(self) -> [u8; 3] {
        match self {
            SigmaKind::Left => [1, 0, 0],
            SigmaKind::Middle => [0, 1, 0],
            SigmaKind::Right => [0, 0, 1],
        }
    }

    pub fn from_contracted(bits: &[u8]) -> Option<SigmaKind> {
        match bits {
            [1, 0, 0] => Some(SigmaKind::Left),
            [0, 1, 0] => Some(SigmaKind::Middle),
            [0, 0, 1] => Some(SigmaKind::Right),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarWitness {
    pub kind: StarKind,
    pub center: usize,
    pub center_position: usize,
    /// Leaves in θ order.
    pub leaves: Vec<usize>,
    /// Positions of all star vertices under θ, increasing.
    pub positions: Vec<usize>,
}

impl StarWitness {
    pub fn vertices(&self) -> Vec<usize> {
        let mut v = self.leaves.clone();
        v.push(self.center);
        v
    }

    pub fn len(&self) -> usize {
        self.leaves.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// A middle star whose center sits at the second position.
    pub fn is_one_left_middle(&self) -> bool {
        self.kind == StarKind::Middle && self.center_index() == 1
    }

    /// A middle star whose center sits at the second-to-last position.
    pub fn is_one_right_middle(&self) -> bool {
        self.kind == StarKind::Middle && self.center_index() + 2 == self.len()
    }

    /// Index of the center within the star's own ordering.
    pub fn center_index(&self) -> usize {
        self.positions
            .iter()
            .position(|&p| p == self.center_position)
            .expect("center position belongs to the star")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperTwoNebulaWitness {
    pub kind: SigmaKind,
    /// The two frontier stars, earlier center first.
    pub stars: [StarWitness; 2],
    pub positions: Vec<usize>,
}

impl SuperTwoNebulaWitness {
    pub fn centers(&self) -> [usize; 2] {
        [self.stars[0].center, self.stars[1].center]
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.stars.iter().flat_map(|s| s.leaves.iter().copied()).collect();
        l.sort_unstable();
        l
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.stars.iter().flat_map(|s| s.vertices()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleWitness {
    pub left_exterior: usize,
    pub center: usize,
    pub right_exterior: usize,
    pub positions: [usize; 3],
}

impl TriangleWitness {
    pub fn vertices(&self) -> [usize; 3] {
        [self.left_exterior, self.center, self.right_exterior]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K6Witness {
    /// `v_{i1} .. v_{i6}` in canonical order.
    pub vertices: [usize; 6],
    pub positions: [usize; 6],
}

impl K6Witness {
    pub fn centers(&self) -> (usize, usize) {
        (self.vertices[0], self.vertices[5])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Part {
    Star(StarWitness),
    SuperTwoNebula(SuperTwoNebulaWitness),
    Triangle(TriangleWitness),
    K6(K6Witness),
}

impl Part {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            Part::Star(s) => s.vertices(),
            Part::SuperTwoNebula(s) => s.vertices(),
            Part::Triangle(t) => t.vertices().to_vec(),
            Part::K6(k) => k.vertices.to_vec(),
        }
    }

    pub fn first_position(&self) -> usize {
        match self {
            Part::Star(s) => s.positions[0],
            Part::SuperTwoNebula(s) => s.positions[0],
            Part::Triangle(t) => t.positions[0],
            Part::K6(k) => k.positions[0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionWitness {
    pub grammar: Grammar,
    pub regular: bool,
    /// Parts sorted by first position.
    pub parts: Vec<Part>,
    /// Vertices isolated in the backward-arc graph, in θ order.
    pub singletons: Vec<usize>,
    pub ordering: Ordering,
}

impl DecompositionWitness {
    pub fn stars(&self) -> impl Iterator<Item = &StarWitness> {
        self.parts.iter().filter_map(|p| match p {
            Part::Star(s) => Some(s),
            _ => None,
        })
    }

    pub fn sigmas(&self) -> impl Iterator<Item = &SuperTwoNebulaWitness> {
        self.parts.iter().filter_map(|p| match p {
            Part::SuperTwoNebula(s) => Some(s),
            _ => None,
        })
    }

    pub fn triangles(&self) -> impl Iterator<Item = &TriangleWitness> {
        self.parts.iter().filter_map(|p| match p {
            Part::Triangle(t) => Some(t),
            _ => None,
        })
    }

    pub fn k6s(&self) -> impl Iterator<Item = &K6Witness> {
        self.parts.iter().filter_map(|p| match p {
            Part::K6(k) => Some(k),
            _ => None,
        })
    }

    pub fn n(&self) -> usize {
        self.ordering.len()
    }
}

/// Supported decomposition families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grammar {
    Galaxy,
    Nebula,
    SuperNebula,
    LeftNebula,
    RightNebula,
    CentralNebula,
    SuperLeftNebula,
    SuperRightNebula,
    /// Stars are right or 1-right middle stars; super 2-nebulas are left.
    OneRightSuperNebula,
    /// Stars are left or 1-left middle stars; super 2-nebulas are right.
    OneLeftSuperNebula,
    /// Frontier stars only; super 2-nebulas are middle.
    FrontierMiddleSuperNebula,
    TriangularTournament,
    TriangularGalaxy,
    CentralTriangularGalaxy,
    LeftTriangularGalaxy,
    RightTriangularGalaxy,
    DeltaGalaxy,
    CentralDeltaGalaxy,
    LeftDeltaGalaxy,
    RightDeltaGalaxy,
    LrDeltaGalaxy,
    CrDeltaGalaxy,
    ClDeltaGalaxy,
    SigmaGalaxy,
    MiddleSigmaGalaxy,
    LeftSigmaGalaxy,
    RightSigmaGalaxy,
    Gk6,
}

pub const ALL_GRAMMARS: [Grammar; 28] = [
    Grammar::Galaxy,
    Grammar::Nebula,
    Grammar::SuperNebula,
    Grammar::LeftNebula,
    Grammar::RightNebula,
    Grammar::CentralNebula,
    Grammar::SuperLeftNebula,
    Grammar::SuperRightNebula,
    Grammar::OneRightSuperNebula,
    Grammar::OneLeftSuperNebula,
    Grammar::FrontierMiddleSuperNebula,
    Grammar::TriangularTournament,
    Grammar::TriangularGalaxy,
    Grammar::CentralTriangularGalaxy,
    Grammar::LeftTriangularGalaxy,
    Grammar::RightTriangularGalaxy,
    Grammar::DeltaGalaxy,
    Grammar::CentralDeltaGalaxy,
    Grammar::LeftDeltaGalaxy,
    Grammar::RightDeltaGalaxy,
    Grammar::LrDeltaGalaxy,
    Grammar::CrDeltaGalaxy,
    Grammar::ClDeltaGalaxy,
    Grammar::SigmaGalaxy,
    Grammar::MiddleSigmaGalaxy,
    Grammar::LeftSigmaGalaxy,
    Grammar::RightSigmaGalaxy,
    Grammar::Gk6,
];

impl Grammar {
    pub fn tag(self) -> &'static str {
        match self {
            Grammar::Galaxy => "galaxy",
            Grammar::Nebula => "nebula",
            Grammar::SuperNebula => "super-nebula",
            Grammar::LeftNebula => "left-nebula",
            Grammar::RightNebula => "right-nebula",
            Grammar::CentralNebula => "central-nebula",
            Grammar::SuperLeftNebula => "super-left-nebula",
            Grammar::SuperRightNebula => "super-right-nebula",
            Grammar::OneRightSuperNebula => "one-right-super-nebula",
            Grammar::OneLeftSuperNebula => "one-left-super-nebula",
            Grammar::FrontierMiddleSuperNebula => "frontier-middle-super-nebula",
            Grammar::TriangularTournament => "triangular-tournament",
            Grammar::TriangularGalaxy => "triangular-galaxy",
            Grammar::CentralTriangularGalaxy => "central-triangular-galaxy",
            Grammar::LeftTriangularGalaxy => "left-triangular-galaxy",
            Grammar::RightTriangularGalaxy => "right-triangular-galaxy",
            Grammar::DeltaGalaxy => "delta-galaxy",
            Grammar::CentralDeltaGalaxy => "central-delta-galaxy",
            Grammar::LeftDeltaGalaxy => "left-delta-galaxy",
            Grammar::RightDeltaGalaxy => "right-delta-galaxy",
            Grammar::LrDeltaGalaxy => "lr-delta-galaxy",
            Grammar::CrDeltaGalaxy => "cr-delta-galaxy",
            Grammar::ClDeltaGalaxy => "cl-delta-galaxy",
            Grammar::SigmaGalaxy => "sigma-galaxy",
            Grammar::MiddleSigmaGalaxy => "middle-sigma-galaxy",
            Grammar::LeftSigmaGalaxy => "left-sigma-galaxy",
            Grammar::RightSigmaGalaxy => "right-sigma-galaxy",
            Grammar::Gk6 => "gk6",
        }
    }

    /// Families whose definition admits vertices isolated in the
    /// backward-arc graph at all. Σ-galaxies and GK₆ list their parts
    /// exhaustively (GK₆ asks for a regular galaxy on X).
    pub fn admits_singletons(self) -> bool {
        !matches!(
            self,
            Grammar::SigmaGalaxy
                | Grammar::MiddleSigmaGalaxy
                | Grammar::LeftSigmaGalaxy
                | Grammar::RightSigmaGalaxy
                | Grammar::Gk6
        )
    }

    /// Families that fix a positive number of special parts (and so never
    /// hold on a transitive tournament).
    pub fn requires_special_part(self) -> bool {
        matches!(
            self,
            Grammar::DeltaGalaxy
                | Grammar::CentralDeltaGalaxy
                | Grammar::LeftDeltaGalaxy
                | Grammar::RightDeltaGalaxy
                | Grammar::LrDeltaGalaxy
                | Grammar::CrDeltaGalaxy
                | Grammar::ClDeltaGalaxy
                | Grammar::SigmaGalaxy
                | Grammar::MiddleSigmaGalaxy
                | Grammar::LeftSigmaGalaxy
                | Grammar::RightSigmaGalaxy
        )
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Grammar {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        ALL_GRAMMARS
            .iter()
            .copied()
            .find(|g| g.tag() == s)
            .ok_or_else(|| CoreError::Parse(format!("unknown grammar {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecognizeOptions {
    /// Forbid singleton parts.
    pub regular: bool,
    /// Preferred center for 2-vertex stars; the other choice is tried when
    /// the preferred one violates a placement clause.
    pub center_choice: CenterChoice,
    /// Cap on the number of 2-vertex-star center assignments tried.
    pub max_assignments: u64,
}

impl Default for RecognizeOptions {
    fn default() -> Self {
        RecognizeOptions {
            regular: false,
            center_choice: CenterChoice::Right,
            max_assignments: 1 << 20,
        }
    }
}

impl RecognizeOptions {
    pub fn regular() -> Self {
        RecognizeOptions {
            regular: true,
            ..Self::default()
        }
    }
}

/// Decides whether `t` is in `grammar` under `theta`, returning a witness.
pub fn recognize_decomposition(
    t: &Tournament,
    grammar: Grammar,
    theta: &Ordering,
    opts: &RecognizeOptions,
) -> Result<Option<DecompositionWitness>> {
    theta.check_len(t.n())?;
    components::recognize_under(t, grammar, theta, opts)
}

/// Searches every ordering in lexicographic order and returns the first
/// witness. Refuses hosts above `Limits::default().unordered_recognition`.
pub fn recognize_unordered(
    t: &Tournament,
    grammar: Grammar,
    opts: &RecognizeOptions,
) -> Result<Option<DecompositionWitness>> {
    recognize_unordered_with_limit(t, grammar, opts, Limits::default().unordered_recognition)
}

pub fn recognize_unordered_with_limit(
    t: &Tournament,
    grammar: Grammar,
    opts: &RecognizeOptions,
    limit: usize,
) -> Result<Option<DecompositionWitness>> {
    let n = t.n();
    if n > limit {
        return Err(CoreError::LimitExceeded {
            what: "recognize_unordered",
            n,
            limit,
        });
    }
    let total: usize = (1..=n).product();
    let found = crate::par::find_first(total, |idx| {
        let theta = nth_permutation(n, idx);
        components::recognize_under(t, grammar, &theta, opts).unwrap_or(None)
    });
    Ok(found)
}

/// Tries each caller-supplied ordering in turn.
pub fn recognize_over<I>(
    t: &Tournament,
    grammar: Grammar,
    opts: &RecognizeOptions,
    orderings: I,
) -> Result<Option<DecompositionWitness>>
where
    I: IntoIterator<Item = Ordering>,
{
    for theta in orderings {
        if let Some(w) = recognize_decomposition(t, grammar, &theta, opts)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// The `idx`-th permutation of `0..n` in lexicographic order.
pub fn nth_permutation(n: usize, mut idx: usize) -> Ordering {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<usize> = vec![1; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i;
    }
    let mut perm = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let k = idx / fact[i];
        idx %= fact[i];
        perm.push(pool.remove(k));
    }
    Ordering::new(perm).expect("valid permutation")
}

pub(crate) fn positions_of(theta: &Ordering, vs: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = vs.iter().map(|&v| theta.position_of(v)).collect();
    p.sort_unstable();
    p
}
