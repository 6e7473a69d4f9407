//! Tournaments, partial digraphs and vertex orderings.
//!
//! Adjacency is one [`VertexSet`] row per vertex: `out[u]` holds every `v`
//! with `u -> v`. In-neighbourhoods of a tournament are derived by
//! complementing against the vertex set.

use std::fmt;

use crate::bits::{VertexSet, MAX_VERTICES};
use crate::error::{CoreError, Result};

/// Anything with a vertex count and an arc relation.
pub trait Digraph {
    fn order(&self) -> usize;
    fn has_arc(&self, u: usize, v: usize) -> bool;
}

/// A complete orientation on `n` vertices. Serializes as its text form.
#[derive(Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Tournament {
    n: usize,
    out: Vec<VertexSet>,
}

impl Tournament {
    /// The transitive tournament with `i -> j` for every `i < j`.
    pub fn transitive(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        let full = VertexSet::full(n);
        let out = (0..n).map(|u| full.difference(&VertexSet::full(u + 1))).collect();
        Tournament { n, out }
    }

    /// Builds a tournament on `0..n` whose arcs all point forward in vertex
    /// order, except the listed `(u, v)` arcs which must satisfy `u > v`.
    pub fn from_backward_arcs(n: usize, backward: &[(usize, usize)]) -> Result<Self> {
        let mut t = Self::transitive(n);
        for &(u, v) in backward {
            if u <= v || u >= n {
                return Err(CoreError::Precondition(format!(
                    "({u},{v}) is not a backward arc on {n} vertices"
                )));
            }
            t.set_arc(u, v);
        }
        Ok(t)
    }

    /// Builds a tournament from a predicate deciding `u -> v` for `u < v`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        let mut t = Self::transitive(n);
        for u in 0..n {
            for v in u + 1..n {
                if !forward(u, v) {
                    t.set_arc(v, u);
                }
            }
        }
        t
    }

    /// The directed 3-cycle `0 -> 1 -> 2 -> 0`.
    pub fn cyclic_triangle() -> Self {
        Self::from_backward_arcs(3, &[(2, 0)]).expect("static arcs")
    }

    /// `K6` labelled by its canonical ordering `v1..v6 = 0..5`.
    pub fn k6() -> Self {
        Self::from_backward_arcs(6, &K6_BACKWARD).expect("static arcs")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn beats(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    #[inline]
    pub fn out_set(&self, u: usize) -> VertexSet {
        self.out[u]
    }

    #[inline]
    pub fn in_set(&self, u: usize) -> VertexSet {
        let mut s = VertexSet::full(self.n).difference(&self.out[u]);
        s.remove(u);
        s
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Orients the pair `{u, v}` as `u -> v`.
    pub fn set_arc(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        self.out[v].remove(u);
        self.out[u].insert(v);
    }

    /// Reverses whichever arc joins `u` and `v`.
    pub fn flip(&mut self, u: usize, v: usize) {
        if self.beats(u, v) {
            self.set_arc(v, u);
        } else {
            self.set_arc(u, v);
        }
    }

    /// `T|X` relabelled so that `vertices[i]` becomes vertex `i`.
    pub fn induced(&self, vertices: &[usize]) -> Tournament {
        Tournament::from_fn(vertices.len(), |i, j| self.beats(vertices[i], vertices[j]))
    }

    /// Relabels so that vertex `i` of the result is `ordering.vertex_at(i)`.
    pub fn reordered(&self, ordering: &Ordering) -> Tournament {
        self.induced(ordering.as_slice())
    }

    /// All arcs `(u, v)` with `u -> v`.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for u in 0..self.n {
            for v in self.out[u] {
                arcs.push((u, v));
            }
        }
        arcs
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive_set(self, &self.vertices())
    }

    /// Parses the upper-triangle text format: line 1 is `n`, line 2 is a
    /// string of `n(n-1)/2` characters where the character for the pair
    /// `(i, j)`, `i < j`, is `1` iff `i -> j`.
    pub fn parse(text: &str) -> Result<Self> {
        let (n, body) = parse_header(text)?;
        let chars: Vec<char> = body.chars().collect();
        check_body_len(n, chars.len())?;
        let mut t = Self::transitive(n);
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                match chars[k] {
                    '1' => {}
                    '0' => t.set_arc(v, u),
                    c => return Err(CoreError::Parse(format!("unexpected character {c:?}"))),
                }
                k += 1;
            }
        }
        Ok(t)
    }

    /// Inverse of [`Tournament::parse`]; ends with a newline.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                s.push(if self.beats(u, v) { '1' } else { '0' });
            }
        }
        s.push('\n');
        s
    }
}

impl Digraph for Tournament {
    fn order(&self) -> usize {
        self.n
    }

    fn has_arc(&self, u: usize, v: usize) -> bool {
        self.beats(u, v)
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament({})", self.to_text().replace('\n', " ").trim_end())
    }
}

/// Backward arcs of `K6` under its canonical ordering, zero-based:
/// `(v4,v1), (v6,v3), (v6,v1), (v5,v2)`.
pub const K6_BACKWARD: [(usize, usize); 4] = [(3, 0), (5, 2), (5, 0), (4, 1)];

fn parse_header(text: &str) -> Result<(usize, String)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| CoreError::Parse("missing vertex count".into()))?
        .parse()
        .map_err(|e| CoreError::Parse(format!("vertex count: {e}")))?;
    if n > MAX_VERTICES {
        return Err(CoreError::LimitExceeded {
            what: "tournament file",
            n,
            limit: MAX_VERTICES,
        });
    }
    let body = lines.next().unwrap_or("").to_string();
    if lines.next().is_some() {
        return Err(CoreError::Parse("trailing content after arc string".into()));
    }
    Ok((n, body))
}

fn check_body_len(n: usize, len: usize) -> Result<()> {
    let want = n * n.saturating_sub(1) / 2;
    if len != want {
        return Err(CoreError::Parse(format!(
            "expected {want} arc characters for n = {n}, found {len}"
        )));
    }
    Ok(())
}

/// True iff `T|set` has no directed cycle.
///
/// A tournament is transitive iff its out-degrees are pairwise distinct.
pub fn is_transitive_set(t: &Tournament, set: &VertexSet) -> bool {
    let k = set.len();
    let mut seen = vec![false; k];
    for v in set {
        let d = t.out_set(v).intersection(set).len();
        if seen[d] {
            return false;
        }
        seen[d] = true;
    }
    true
}

/// Orders a transitive vertex set so that every arc points forward.
pub fn transitive_order(t: &Tournament, set: &VertexSet) -> Option<Vec<usize>> {
    if !is_transitive_set(t, set) {
        return None;
    }
    let mut vs = set.to_vec();
    vs.sort_by_key(|&v| std::cmp::Reverse(t.out_set(v).intersection(set).len()));
    Some(vs)
}

/// A digraph with at most one arc per pair.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PartialDigraph {
    n: usize,
    out: Vec<VertexSet>,
}

impl PartialDigraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        PartialDigraph {
            n,
            out: vec![VertexSet::empty(); n],
        }
    }

    pub fn from_tournament(t: &Tournament) -> Self {
        PartialDigraph {
            n: t.n(),
            out: (0..t.n()).map(|u| t.out_set(u)).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v || u >= self.n || v >= self.n {
            return Err(CoreError::Precondition(format!("bad arc ({u},{v})")));
        }
        if self.out[v].contains(u) {
            return Err(CoreError::Precondition(format!(
                "pair {{{u},{v}}} already carries the opposite arc"
            )));
        }
        self.out[u].insert(v);
        Ok(())
    }

    /// Deletes the arc between `u` and `v`, whichever way it points.
    /// Returns whether an arc was present.
    pub fn remove_pair(&mut self, u: usize, v: usize) -> bool {
        let had = self.out[u].contains(v) || self.out[v].contains(u);
        self.out[u].remove(v);
        self.out[v].remove(u);
        had
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    #[inline]
    pub fn out_set(&self, u: usize) -> VertexSet {
        self.out[u]
    }

    /// Vertices `w` with `w -> u`.
    pub fn in_set(&self, u: usize) -> VertexSet {
        (0..self.n).filter(|&w| self.out[w].contains(u)).collect()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(VertexSet::len).sum()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::new();
        for u in 0..self.n {
            for v in self.out[u] {
                arcs.push((u, v));
            }
        }
        arcs
    }

    /// Pairs carrying no arc, as `(u, v)` with `u < v`.
    pub fn missing_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_arc(u, v) && !self.has_arc(v, u) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Completes to a tournament by orienting each missing pair `(u, v)`
    /// (`u < v`, as listed by [`PartialDigraph::missing_pairs`]) forward
    /// iff the matching entry of `forward` is true.
    pub fn complete(&self, forward: &[bool]) -> Result<Tournament> {
        let missing = self.missing_pairs();
        if missing.len() != forward.len() {
            return Err(CoreError::Precondition(format!(
                "{} missing pairs but {} orientations supplied",
                missing.len(),
                forward.len()
            )));
        }
        let mut t = Tournament::transitive(self.n);
        for u in 0..self.n {
            for v in self.out[u] {
                t.set_arc(u, v);
            }
        }
        for (&(u, v), &fw) in missing.iter().zip(forward) {
            if fw {
                t.set_arc(u, v);
            } else {
                t.set_arc(v, u);
            }
        }
        Ok(t)
    }

    pub fn induced(&self, vertices: &[usize]) -> PartialDigraph {
        let mut d = PartialDigraph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if self.has_arc(u, v) {
                    d.out[i].insert(j);
                }
            }
        }
        d
    }

    /// Text format mirroring the tournament file: the pair character is
    /// `1` for `i -> j`, `0` for `j -> i`, and `-` when no arc is present.
    pub fn parse(text: &str) -> Result<Self> {
        let (n, body) = parse_header(text)?;
        let chars: Vec<char> = body.chars().collect();
        check_body_len(n, chars.len())?;
        let mut d = PartialDigraph::empty(n);
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                match chars[k] {
                    '1' => d.out[u].insert(v),
                    '0' => d.out[v].insert(u),
                    '-' => {}
                    c => return Err(CoreError::Parse(format!("unexpected character {c:?}"))),
                }
                k += 1;
            }
        }
        Ok(d)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                s.push(if self.has_arc(u, v) {
                    '1'
                } else if self.has_arc(v, u) {
                    '0'
                } else {
                    '-'
                });
            }
        }
        s.push('\n');
        s
    }
}

impl Digraph for PartialDigraph {
    fn order(&self) -> usize {
        self.n
    }

    fn has_arc(&self, u: usize, v: usize) -> bool {
        PartialDigraph::has_arc(self, u, v)
    }
}

/// A bijection between positions `0..n` and vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Ordering {
    perm: Vec<usize>,
    pos: Vec<usize>,
}

impl Ordering {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in perm.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(CoreError::InvalidOrdering(format!(
                    "{perm:?} is not a permutation of 0..{n}"
                )));
            }
            pos[v] = i;
        }
        Ok(Ordering { perm, pos })
    }

    pub fn identity(n: usize) -> Self {
        Ordering {
            perm: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.perm.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    #[inline]
    pub fn vertex_at(&self, position: usize) -> usize {
        self.perm[position]
    }

    #[inline]
    pub fn position_of(&self, vertex: usize) -> usize {
        self.pos[vertex]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    /// The members of `set` in the order this ordering visits them.
    pub fn restrict(&self, set: &VertexSet) -> Vec<usize> {
        self.perm.iter().copied().filter(|&v| set.contains(v)).collect()
    }

    /// Parses a comma- or whitespace-separated permutation of `0..n`.
    pub fn parse(text: &str) -> Result<Self> {
        let perm = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|e| CoreError::Parse(format!("ordering entry {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ordering::new(perm)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(CoreError::SizeMismatch {
                expected: n,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl TryFrom<String> for Tournament {
    type Error = CoreError;

    fn try_from(text: String) -> Result<Self> {
        Tournament::parse(&text)
    }
}

impl From<Tournament> for String {
    fn from(t: Tournament) -> String {
        t.to_text()
    }
}

impl TryFrom<Vec<usize>> for Ordering {
    type Error = CoreError;

    fn try_from(perm: Vec<usize>) -> Result<Self> {
        Ordering::new(perm)
    }
}

impl From<Ordering> for Vec<usize> {
    fn from(o: Ordering) -> Vec<usize> {
        o.perm
    }
}

/// The graph of backward arcs of `d` under `theta`: every pair
/// `(v_i, v_j)` with positions `i < j` such that `v_j -> v_i` is an arc.
/// Pairs are returned as `(earlier vertex, later vertex)` sorted by
/// position.
pub fn backward_arc_graph<D: Digraph>(d: &D, theta: &Ordering) -> Result<Vec<(usize, usize)>> {
    theta.check_len(d.order())?;
    let n = d.order();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (theta.vertex_at(i), theta.vertex_at(j));
            if d.has_arc(b, a) {
                pairs.push((a, b));
            }
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k6_backward_graph_under_canonical_ordering() {
        let k6 = Tournament::k6();
        let mut got = backward_arc_graph(&k6, &Ordering::identity(6)).unwrap();
        got.sort();
        // {v1,v4}, {v1,v6}, {v2,v5}, {v3,v6}
        assert_eq!(got, vec![(0, 3), (0, 5), (1, 4), (2, 5)]);
    }

    #[test]
    fn transitive_has_no_backward_arcs() {
        let t = Tournament::transitive(9);
        assert!(backward_arc_graph(&t, &Ordering::identity(9)).unwrap().is_empty());
        assert!(t.is_transitive());
    }

    #[test]
    fn cyclic_triangle_has_one_backward_pair_under_every_ordering() {
        let c3 = Tournament::cyclic_triangle();
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let theta = Ordering::new(perm.to_vec()).unwrap();
            let b = backward_arc_graph(&c3, &theta).unwrap();
            assert!(b.len() == 1 || b.len() == 2);
        }
        // the three rotations of the cycle each leave exactly one backward pair
        for perm in [[0, 1, 2], [1, 2, 0], [2, 0, 1]] {
            let theta = Ordering::new(perm.to_vec()).unwrap();
            assert_eq!(backward_arc_graph(&c3, &theta).unwrap().len(), 1);
        }
    }

    #[test]
    fn ordering_size_mismatch_is_an_error() {
        let t = Tournament::transitive(4);
        assert!(matches!(
            backward_arc_graph(&t, &Ordering::identity(3)),
            Err(CoreError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let k6 = Tournament::k6();
        let text = k6.to_text();
        assert_eq!(text, "6\n110101101110111\n");
        assert_eq!(Tournament::parse(&text).unwrap(), k6);
        assert_eq!(Tournament::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Tournament::parse("3\n10\n").is_err());
        assert!(Tournament::parse("3\n1x1\n").is_err());
        assert!(Tournament::parse("").is_err());
        assert_eq!(Tournament::parse("1\n").unwrap().n(), 1);
    }

    #[test]
    fn partial_digraph_text_and_completion() {
        let mut d = PartialDigraph::from_tournament(&Tournament::k6());
        assert!(d.remove_pair(0, 2));
        let text = d.to_text();
        assert_eq!(PartialDigraph::parse(&text).unwrap(), d);
        assert_eq!(d.missing_pairs(), vec![(0, 2)]);
        assert_eq!(d.complete(&[true]).unwrap(), Tournament::k6());
        assert!(d.add_arc(2, 0).is_ok());
        assert!(d.add_arc(0, 2).is_err());
    }

    #[test]
    fn ordering_validation() {
        assert!(Ordering::new(vec![0, 0, 1]).is_err());
        assert!(Ordering::new(vec![0, 3, 1]).is_err());
        let o = Ordering::parse("2, 0 1").unwrap();
        assert_eq!(o.position_of(2), 0);
        assert_eq!(o.restrict(&[0, 2].iter().collect()), vec![2, 0]);
    }
}
