// Component-based recognition under a fixed ordering.

use super::evaluate::{grammar_violations, Count, Rules, StarRule};
use super::{
    positions_of, CenterChoice, DecompositionWitness, Grammar, K6Witness, Part, RecognizeOptions, SigmaKind, StarKind,
    StarWitness, SuperTwoNebulaWitness, TriangleWitness,
};
use crate::bits::VertexSet;
use crate::error::{CoreError, Result};
use crate::tournament::{Ordering, Tournament};

/// Backward-arc adjacency (undirected) as bitsets over vertices.
fn backward_adjacency(t: &Tournament, theta: &Ordering, within: &VertexSet) -> Vec<VertexSet> {
    let mut adj = vec![VertexSet::default(); t.n()];
    for u in within.iter() {
        for v in t.out_set(u).intersection(within).iter() {
            if theta.position_of(u) > theta.position_of(v) {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
    }
    adj
}

fn components(n: usize, adj: &[VertexSet], theta: &Ordering) -> Vec<Vec<usize>> {
    let mut seen = VertexSet::default();
    let mut out = Vec::new();
    for p in 0..n {
        let start = theta.vertex_at(p);
        if seen.contains(start) {
            continue;
        }
        let mut comp = VertexSet::singleton(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in adj[u].difference(&comp).iter() {
                comp.insert(w);
                stack.push(w);
            }
        }
        seen = seen.union(&comp);
        let mut vs = comp.to_vec();
        vs.sort_by_key(|&v| theta.position_of(v));
        out.push(vs);
    }
    out
}

fn edge_count(adj: &[VertexSet], vs: &[usize]) -> usize {
    vs.iter().map(|&v| adj[v].len()).sum::<usize>() / 2
}

pub(crate) fn star_witness(theta: &Ordering, center: usize, vs: &[usize]) -> StarWitness {
    let positions = positions_of(theta, vs);
    let cp = theta.position_of(center);
    let kind = if cp == positions[0] {
        StarKind::Left
    } else if cp == *positions.last().expect("nonempty") {
        StarKind::Right
    } else {
        StarKind::Middle
    };
    let leaves = positions
        .iter()
        .map(|&p| theta.vertex_at(p))
        .filter(|&v| v != center)
        .collect();
    StarWitness {
        kind,
        center,
        center_position: cp,
        leaves,
        positions,
    }
}

fn two_star(theta: &Ordering, vs: &[usize], choice: CenterChoice) -> StarWitness {
    // vs is in θ order
    let center = match choice {
        CenterChoice::Left => vs[0],
        CenterChoice::Right => vs[1],
    };
    star_witness(theta, center, vs)
}

/// Classifies `s` as a star under `theta`: the backward arcs inside `s` must
/// be exactly those joining one center to every other vertex.
pub fn classify_star_segment(
    t: &Tournament,
    theta: &Ordering,
    s: &VertexSet,
    choice: CenterChoice,
) -> Option<StarWitness> {
    if s.len() < 2 || theta.len() != t.n() || s.iter().any(|v| v >= t.n()) {
        return None;
    }
    let adj = backward_adjacency(t, theta, s);
    let mut vs = s.to_vec();
    vs.sort_by_key(|&v| theta.position_of(v));
    star_center(&adj, &vs, choice).map(|c| star_witness(theta, c, &vs))
}

fn star_center(adj: &[VertexSet], vs: &[usize], choice: CenterChoice) -> Option<usize> {
    let k = vs.len();
    if edge_count(adj, vs) != k - 1 {
        return None;
    }
    if k == 2 {
        return Some(match choice {
            CenterChoice::Left => vs[0],
            CenterChoice::Right => vs[1],
        });
    }
    vs.iter().copied().find(|&v| adj[v].len() == k - 1)
}

fn sigma_from_component(adj: &[VertexSet], theta: &Ordering, vs: &[usize]) -> Option<SuperTwoNebulaWitness> {
    let k = vs.len();
    if k < 4 || edge_count(adj, vs) != k - 1 {
        return None;
    }
    let hubs: Vec<usize> = vs.iter().copied().filter(|&v| adj[v].len() >= 2).collect();
    if hubs.len() != 2 || !adj[hubs[0]].contains(hubs[1]) {
        return None;
    }
    // hubs are in θ order since vs is
    let mut stars = Vec::with_capacity(2);
    for (i, &c) in hubs.iter().enumerate() {
        let other = hubs[1 - i];
        let mut own: Vec<usize> = adj[c].iter().filter(|&v| v != other).collect();
        if own.iter().any(|&l| adj[l].len() != 1) {
            return None;
        }
        own.push(c);
        own.sort_by_key(|&v| theta.position_of(v));
        let st = star_witness(theta, c, &own);
        if !st.kind.is_frontier() {
            return None;
        }
        stars.push(st);
    }
    let leaves: VertexSet = stars.iter().flat_map(|s| s.leaves.iter().copied()).collect();
    let mut c: Vec<u8> = Vec::new();
    for &v in vs {
        let b = u8::from(leaves.contains(v));
        if !(b == 1 && c.last() == Some(&1)) {
            c.push(b);
        }
    }
    let kind = SigmaKind::from_contracted(&c)?;
    let [a, b]: [StarWitness; 2] = stars.try_into().ok()?;
    Some(SuperTwoNebulaWitness {
        kind,
        stars: [a, b],
        positions: positions_of(theta, vs),
    })
}

/// Recognizes the whole of `t` as a super 2-nebula under `theta`.
pub fn recognize_super_2_nebula(t: &Tournament, theta: &Ordering) -> Option<SuperTwoNebulaWitness> {
    if theta.len() != t.n() {
        return None;
    }
    let all = t.vertices();
    let adj = backward_adjacency(t, theta, &all);
    let vs = theta.as_slice().to_vec();
    if components(t.n(), &adj, theta).len() != 1 {
        return None;
    }
    sigma_from_component(&adj, theta, &vs)
}

/// Every position-increasing triple whose three arcs are all backward.
pub fn find_triangles_under(t: &Tournament, theta: &Ordering) -> Vec<TriangleWitness> {
    let n = t.n();
    if theta.len() != n {
        return Vec::new();
    }
    let v = |p: usize| theta.vertex_at(p);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !t.beats(v(j), v(i)) {
                continue;
            }
            for k in j + 1..n {
                if t.beats(v(k), v(i)) && t.beats(v(k), v(j)) {
                    out.push(TriangleWitness {
                        left_exterior: v(i),
                        center: v(j),
                        right_exterior: v(k),
                        positions: [i, j, k],
                    });
                }
            }
        }
    }
    out
}

enum Shape {
    Single(usize),
    Star(StarWitness),
    TwoStar(Vec<usize>),
    Sigma(SuperTwoNebulaWitness),
    Triangle(TriangleWitness),
    K6(K6Witness),
}

/// Pairs `P4` components with `K2` components into K₆ instances. Returns the
/// K₆ witnesses and the indices of the consumed components.
fn pair_k6(adj: &[VertexSet], theta: &Ordering, comps: &[Vec<usize>]) -> (Vec<(usize, K6Witness)>, Vec<bool>) {
    let mut used = vec![false; comps.len()];
    let mut out = Vec::new();
    let comp_of = |v: usize| comps.iter().position(|c| c.contains(&v));
    for (ci, c) in comps.iter().enumerate() {
        if c.len() != 4 || edge_count(adj, c) != 3 {
            continue;
        }
        let p: Vec<usize> = c.iter().map(|&v| theta.position_of(v)).collect();
        let (a, b, cc, d) = (p[0], p[1], p[2], p[3]);
        let e = |x: usize, y: usize| adj[theta.vertex_at(x)].contains(theta.vertex_at(y));
        if !(e(a, cc) && e(a, d) && e(b, d) && cc == b + 1 && a + 1 < b && cc + 1 < d) {
            continue;
        }
        let (v2, v5) = (theta.vertex_at(a + 1), theta.vertex_at(d - 1));
        let Some(kj) = comp_of(v2) else { continue };
        if comps[kj].len() != 2 || !comps[kj].contains(&v5) || used[kj] {
            continue;
        }
        used[ci] = true;
        used[kj] = true;
        let positions = [a, a + 1, b, cc, d - 1, d];
        out.push((
            ci,
            K6Witness {
                vertices: positions.map(|q| theta.vertex_at(q)),
                positions,
            },
        ));
    }
    (out, used)
}

pub(crate) fn recognize_under(
    t: &Tournament,
    grammar: Grammar,
    theta: &Ordering,
    opts: &RecognizeOptions,
) -> Result<Option<DecompositionWitness>> {
    let n = t.n();
    let rules = Rules::of(grammar);
    let all = t.vertices();
    let adj = backward_adjacency(t, theta, &all);
    let comps = components(n, &adj, theta);

    let (k6s, consumed) = if rules.k6 {
        pair_k6(&adj, theta, &comps)
    } else {
        (Vec::new(), vec![false; comps.len()])
    };

    let mut shapes: Vec<Shape> = Vec::with_capacity(comps.len());
    for (ci, c) in comps.iter().enumerate() {
        if consumed[ci] {
            if let Some((_, k)) = k6s.iter().find(|(i, _)| *i == ci) {
                shapes.push(Shape::K6(*k));
            }
            continue;
        }
        let k = c.len();
        let m = edge_count(&adj, c);
        let shape = if k == 1 {
            Shape::Single(c[0])
        } else if k == 2 {
            Shape::TwoStar(c.clone())
        } else if k == 3 && m == 3 {
            Shape::Triangle(TriangleWitness {
                left_exterior: c[0],
                center: c[1],
                right_exterior: c[2],
                positions: [0, 1, 2].map(|i| theta.position_of(c[i])),
            })
        } else if let Some(center) = star_center(&adj, c, opts.center_choice) {
            Shape::Star(star_witness(theta, center, c))
        } else if let Some(s) = sigma_from_component(&adj, theta, c) {
            Shape::Sigma(s)
        } else {
            return Ok(None);
        };
        let allowed = match &shape {
            Shape::Single(_) => rules.singletons && !opts.regular,
            Shape::Star(_) | Shape::TwoStar(_) => rules.stars != StarRule::None,
            Shape::Sigma(_) => rules.sigmas != Count::None,
            Shape::Triangle(_) => rules.triangles != Count::None,
            Shape::K6(_) => rules.k6,
        };
        if !allowed {
            return Ok(None);
        }
        shapes.push(shape);
    }

    let two: Vec<usize> = shapes
        .iter()
        .enumerate()
        .filter_map(|(i, s)| matches!(s, Shape::TwoStar(_)).then_some(i))
        .collect();
    let total: u128 = 1u128 << two.len().min(100);
    let cap = u128::from(opts.max_assignments.max(1));
    let tries = total.min(cap);
    let flip = |c: CenterChoice| match c {
        CenterChoice::Left => CenterChoice::Right,
        CenterChoice::Right => CenterChoice::Left,
    };
    for mask in 0..tries {
        let mut parts = Vec::with_capacity(shapes.len());
        let mut singletons = Vec::new();
        let mut bit = 0;
        for s in &shapes {
            match s {
                Shape::Single(v) => singletons.push(*v),
                Shape::Star(st) => parts.push(Part::Star(st.clone())),
                Shape::TwoStar(vs) => {
                    let choice = if mask >> bit & 1 == 1 {
                        flip(opts.center_choice)
                    } else {
                        opts.center_choice
                    };
                    bit += 1;
                    parts.push(Part::Star(two_star(theta, vs, choice)));
                }
                Shape::Sigma(sg) => parts.push(Part::SuperTwoNebula(sg.clone())),
                Shape::Triangle(tr) => parts.push(Part::Triangle(*tr)),
                Shape::K6(k) => parts.push(Part::K6(*k)),
            }
        }
        parts.sort_by_key(Part::first_position);
        let w = DecompositionWitness {
            grammar,
            regular: opts.regular,
            parts,
            singletons,
            ordering: theta.clone(),
        };
        if grammar_violations(grammar, opts.regular, &w).is_empty() {
            return Ok(Some(w));
        }
    }
    if total > cap {
        return Err(CoreError::BudgetExceeded(format!(
            "{} two-vertex stars exceed {} center assignments",
            two.len(),
            opts.max_assignments
        )));
    }
    Ok(None)
}
