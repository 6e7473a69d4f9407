// The N⊗G key construction and its six-bullet verifier.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    bad_triplets_unchecked, forward_arc, leaf_flags, require_regular_delta_galaxy, require_regular_super_nebula,
};
use crate::error::{CoreError, Result};
use crate::recognize::{
    check_decomposition, star_witness, DecompositionWitness, Grammar, Part, StarWitness, SuperTwoNebulaWitness,
};
use crate::tournament::{Ordering, PartialDigraph, Tournament};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeyFlavor {
    NebulaGalaxy,
    Gk6,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    /// N⊗G: the bad triplet in K. GK₆: `d₁ … d₆`.
    pub anchor: Vec<usize>,
    /// N⊗G: `U_i` in θ̃ order. GK₆: `d₂, d₃, d₅`.
    pub inserted: Vec<usize>,
    /// N⊗G: vertex of G → vertex of K on `X_i`. Empty for GK₆.
    pub g_to_k: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyTournament {
    pub flavor: KeyFlavor,
    pub k: Tournament,
    /// θ̃ (or β). Vertices of K are numbered in this order, so it is the
    /// identity.
    pub ordering: Ordering,
    /// Source vertex (of N, or of H) → vertex of K.
    pub base: Vec<usize>,
    pub gadgets: Vec<Gadget>,
    /// `E_f`: one arc per bad triplet (N⊗G) or two per gadget (GK₆).
    pub removed_forward_arcs: Vec<(usize, usize)>,
    /// Decomposition of K under `ordering`.
    pub witness: DecompositionWitness,
}

impl KeyTournament {
    pub fn n(&self) -> usize {
        self.k.n()
    }

    /// K with every arc of `E_f` deleted.
    pub fn mutant(&self) -> PartialDigraph {
        let mut d = PartialDigraph::from_tournament(&self.k);
        for &(u, v) in &self.removed_forward_arcs {
            d.remove_pair(u, v);
        }
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BulletReport {
    pub bullet: u8,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyReport {
    pub bullets: Vec<BulletReport>,
}

impl KeyReport {
    pub fn all_ok(&self) -> bool {
        self.bullets.iter().all(|b| b.ok)
    }

    pub fn first_failure(&self) -> Option<&BulletReport> {
        self.bullets.iter().find(|b| !b.ok)
    }
}

#[derive(Clone, Copy, Debug)]
enum Src {
    N(usize),
    U { gadget: usize, g: usize },
}

pub(crate) fn lift_star(s: &StarWitness, map: &[usize], theta: &Ordering) -> StarWitness {
    let vs: Vec<usize> = s.vertices().iter().map(|&v| map[v]).collect();
    star_witness(theta, map[s.center], &vs)
}

pub(crate) fn lift_part(p: &Part, map: &[usize], theta: &Ordering) -> Part {
    match p {
        Part::Star(s) => Part::Star(lift_star(s, map, theta)),
        Part::SuperTwoNebula(s) => {
            let stars = [lift_star(&s.stars[0], map, theta), lift_star(&s.stars[1], map, theta)];
            let mut positions: Vec<usize> = stars.iter().flat_map(|x| x.positions.iter().copied()).collect();
            positions.sort_unstable();
            Part::SuperTwoNebula(SuperTwoNebulaWitness {
                kind: s.kind,
                stars,
                positions,
            })
        }
        Part::Triangle(t) => {
            let mut t = *t;
            t.left_exterior = map[t.left_exterior];
            t.center = map[t.center];
            t.right_exterior = map[t.right_exterior];
            t.positions = t.vertices().map(|v| theta.position_of(v));
            Part::Triangle(t)
        }
        Part::K6(k) => {
            let mut k = *k;
            k.vertices = k.vertices.map(|v| map[v]);
            k.positions = k.vertices.map(|v| theta.position_of(v));
            Part::K6(k)
        }
    }
}

/// Builds the key tournament `N ⊗ G` under θ̃.
///
/// `G`'s non-triangle vertices are split by the triangle positions into
/// four segments; for each bad triplet `(a, b, c)` the segments go into
/// gaps of N's ordering before `a`, between `a` and `b`, between `b` and
/// `c`, and after `c`, taking the leftmost gap that keeps N's leaf runs and
/// super-2-nebula leaf spans free of inserted centers.
pub fn build_key(
    nt: &Tournament,
    nw: &DecompositionWitness,
    gt: &Tournament,
    gw: &DecompositionWitness,
) -> Result<KeyTournament> {
    require_regular_super_nebula(nt, nw)?;
    require_regular_delta_galaxy(gt, gw)?;
    let theta = &nw.ordering;
    let alpha = &gw.ordering;
    let n1 = nt.n();
    let n2 = gt.n();
    let trips = bad_triplets_unchecked(nt, nw);

    let s_n = leaf_flags(nw)?;
    let sigma_spans: Vec<(usize, usize)> = nw
        .sigmas()
        .map(|s| {
            let ps: Vec<usize> = s.leaves().iter().map(|&l| theta.position_of(l)).collect();
            (*ps.iter().min().expect("leaves"), *ps.iter().max().expect("leaves"))
        })
        .collect();

    let tri = gw.triangles().next().expect("Δgalaxy has a triangle");
    let [j1, j2, j3] = tri.positions;
    let mut g_leaf = vec![false; n2];
    for st in gw.stars() {
        for &l in &st.leaves {
            g_leaf[l] = true;
        }
    }
    let mut segments: [Vec<usize>; 4] = Default::default();
    for p in 0..n2 {
        let k = if p < j1 {
            0
        } else if p == j1 {
            continue;
        } else if p < j2 {
            1
        } else if p == j2 {
            continue;
        } else if p < j3 {
            2
        } else if p == j3 {
            continue;
        } else {
            3
        };
        segments[k].push(alpha.vertex_at(p));
    }
    let has_center: [bool; 4] = std::array::from_fn(|k| segments[k].iter().any(|&g| !g_leaf[g]));

    let feasible = |gap: usize, centers: bool| -> bool {
        if !centers {
            return true;
        }
        let left = gap > 0 && s_n[gap - 1];
        let right = gap < n1 && s_n[gap];
        if left && right {
            return false;
        }
        !sigma_spans.iter().any(|&(lo, hi)| lo < gap && gap <= hi)
    };

    // gap index → (gadget, segment) in insertion order
    let mut gaps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n1 + 1];
    for (i, t) in trips.triplets.iter().enumerate() {
        let [a, b, c] = t.positions;
        let ranges = [0..=a, a + 1..=b, b + 1..=c, c + 1..=n1];
        for (k, range) in ranges.into_iter().enumerate() {
            if segments[k].is_empty() {
                continue;
            }
            let gap =
                range
                    .clone()
                    .find(|&g| feasible(g, has_center[k]))
                    .ok_or_else(|| CoreError::KeyConstruction {
                        bullet: 4,
                        detail: format!(
                            "no gap in {range:?} can hold segment {k} of triplet {:?} without splitting a leaf run",
                            t.vertices
                        ),
                    })?;
            gaps[gap].push((i, k));
        }
    }

    let mut order: Vec<Src> = Vec::with_capacity(n1 + trips.len() * (n2 - 3));
    for (p, slot) in gaps.iter().enumerate() {
        for &(i, k) in slot {
            order.extend(segments[k].iter().map(|&g| Src::U { gadget: i, g }));
        }
        if p < n1 {
            order.push(Src::N(theta.vertex_at(p)));
        }
    }
    let kn = order.len();
    let mut base = vec![usize::MAX; n1];
    let mut g_to_k = vec![vec![usize::MAX; n2]; trips.len()];
    for (x, src) in order.iter().enumerate() {
        match *src {
            Src::N(v) => base[v] = x,
            Src::U { gadget, g } => g_to_k[gadget][g] = x,
        }
    }
    let k = Tournament::from_fn(kn, |x, y| match (order[x], order[y]) {
        (Src::N(u), Src::N(v)) => nt.beats(u, v),
        (Src::U { gadget: a, g: u }, Src::U { gadget: b, g: v }) if a == b => gt.beats(u, v),
        _ => true,
    });
    let ordering = Ordering::identity(kn);

    let mut gadgets = Vec::with_capacity(trips.len());
    let mut ef = Vec::with_capacity(trips.len());
    for (i, t) in trips.triplets.iter().enumerate() {
        let anchor: Vec<usize> = t.vertices.iter().map(|&v| base[v]).collect();
        for (z, &kv) in [tri.left_exterior, tri.center, tri.right_exterior].iter().zip(&anchor) {
            g_to_k[i][*z] = kv;
        }
        let mut inserted: Vec<usize> = segments.iter().flatten().map(|&g| g_to_k[i][g]).collect();
        inserted.sort_unstable();
        ef.push(forward_arc(&k, &ordering, [anchor[0], anchor[1], anchor[2]])?);
        gadgets.push(Gadget {
            anchor,
            inserted,
            g_to_k: g_to_k[i].clone(),
        });
    }

    let mut parts: Vec<Part> = nw.parts.iter().map(|p| lift_part(p, &base, &ordering)).collect();
    for gd in &gadgets {
        for st in gw.stars() {
            parts.push(Part::Star(lift_star(st, &gd.g_to_k, &ordering)));
        }
    }
    parts.sort_by_key(Part::first_position);
    let witness = DecompositionWitness {
        grammar: Grammar::SuperNebula,
        regular: true,
        parts,
        singletons: Vec::new(),
        ordering: ordering.clone(),
    };

    let key = KeyTournament {
        flavor: KeyFlavor::NebulaGalaxy,
        k,
        ordering,
        base,
        gadgets,
        removed_forward_arcs: ef,
        witness,
    };
    let report = verify_key(&key, nt, nw, gt, gw)?;
    if let Some(b) = report.first_failure() {
        return Err(CoreError::KeyConstruction {
            bullet: b.bullet,
            detail: b.detail.clone(),
        });
    }
    Ok(key)
}

fn bullet(bullet: u8, problems: Vec<String>) -> BulletReport {
    BulletReport {
        bullet,
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            "ok".into()
        } else {
            problems.join("; ")
        },
    }
}

fn arcs_match(k: &Tournament, src: &Tournament, map: &[usize], vs: &[usize]) -> Option<(usize, usize)> {
    for &u in vs {
        for &v in vs {
            if u != v && k.beats(map[u], map[v]) != src.beats(u, v) {
                return Some((u, v));
            }
        }
    }
    None
}

fn order_preserved(key_order: &Ordering, src_order: &[usize], map: &[usize]) -> bool {
    src_order
        .windows(2)
        .all(|w| key_order.position_of(map[w[0]]) < key_order.position_of(map[w[1]]))
}

/// Checks the six defining properties of `N ⊗ G` independently.
pub fn verify_key(
    key: &KeyTournament,
    nt: &Tournament,
    nw: &DecompositionWitness,
    gt: &Tournament,
    gw: &DecompositionWitness,
) -> Result<KeyReport> {
    if key.flavor != KeyFlavor::NebulaGalaxy {
        return Err(CoreError::Precondition("verify_key applies to N⊗G keys".into()));
    }
    require_regular_super_nebula(nt, nw)?;
    require_regular_delta_galaxy(gt, gw)?;
    let k = &key.k;
    let kn = k.n();
    let ko = &key.ordering;
    let trips = bad_triplets_unchecked(nt, nw);
    let tri = gw.triangles().next().expect("Δgalaxy has a triangle");
    let tri_vs = tri.vertices();
    let dbar: Vec<usize> = gw
        .ordering
        .as_slice()
        .iter()
        .copied()
        .filter(|v| !tri_vs.contains(v))
        .collect();
    let mut bullets = Vec::with_capacity(6);

    // 1: V(K) = V(N) ∪ U_1 ∪ … ∪ U_s
    let mut p1 = Vec::new();
    if ko.len() != kn {
        p1.push(format!("ordering has {} entries for {kn} vertices", ko.len()));
    }
    if key.base.len() != nt.n() {
        p1.push("base map does not cover N".into());
    }
    if key.gadgets.len() != trips.len() {
        p1.push(format!(
            "{} gadgets for {} bad triplets",
            key.gadgets.len(),
            trips.len()
        ));
    }
    let mut seen = vec![0u32; kn];
    for &x in key
        .base
        .iter()
        .chain(key.gadgets.iter().flat_map(|g| g.inserted.iter()))
    {
        if x < kn {
            seen[x] += 1;
        } else {
            p1.push(format!("vertex {x} out of range"));
        }
    }
    if seen.iter().any(|&c| c != 1) {
        p1.push("base and gadget vertices do not partition V(K)".into());
    }
    for (i, g) in key.gadgets.iter().enumerate() {
        if g.inserted.len() + 3 != gt.n() {
            p1.push(format!(
                "U_{i} has {} vertices, expected {}",
                g.inserted.len(),
                gt.n() - 3
            ));
        }
    }
    let structural_ok = p1.is_empty();
    bullets.push(bullet(1, p1));
    if !structural_ok {
        for b in 2..=6 {
            bullets.push(bullet(b, vec!["skipped: partition is malformed".into()]));
        }
        return Ok(KeyReport { bullets });
    }

    // 2: K | V(N) = N, and θ̃ restricted to V(N) is θ
    let mut p2 = Vec::new();
    let nv: Vec<usize> = (0..nt.n()).collect();
    if let Some((u, v)) = arcs_match(k, nt, &key.base, &nv) {
        p2.push(format!("arc between N vertices {u} and {v} differs"));
    }
    if !order_preserved(ko, nw.ordering.as_slice(), &key.base) {
        p2.push("θ̃ restricted to V(N) is not θ".into());
    }
    bullets.push(bullet(2, p2));

    // 3: K | U_i = G minus its triangle, in α order
    let mut p3 = Vec::new();
    for (i, g) in key.gadgets.iter().enumerate() {
        if g.g_to_k.len() != gt.n() || g.g_to_k.iter().any(|&x| x >= kn) {
            p3.push(format!("gadget {i} has a malformed G map"));
            continue;
        }
        let mut img: Vec<usize> = dbar.iter().map(|&z| g.g_to_k[z]).collect();
        img.sort_unstable();
        if img != g.inserted {
            p3.push(format!("U_{i} is not the image of G's non-triangle vertices"));
        }
        if let Some((u, v)) = arcs_match(k, gt, &g.g_to_k, &dbar) {
            p3.push(format!("U_{i}: arc between G vertices {u} and {v} differs"));
        }
        if !order_preserved(ko, &dbar, &g.g_to_k) {
            p3.push(format!("U_{i} is not in α order"));
        }
    }
    bullets.push(bullet(3, p3));

    // 4: B^{K,θ̃} = B^{N,θ}
    let mut p4 = Vec::new();
    let v = check_decomposition(k, &key.witness, Grammar::SuperNebula, true);
    if !v.is_empty() {
        p4.push(format!("K is not a regular super nebula under θ̃: {}", v.join("; ")));
    } else if key.witness.ordering != *ko {
        p4.push("witness ordering differs from θ̃".into());
    } else {
        let got: BTreeSet<[usize; 3]> = bad_triplets_unchecked(k, &key.witness)
            .triplets
            .iter()
            .map(|t| {
                let mut v = t.vertices;
                v.sort_unstable();
                v
            })
            .collect();
        let want: BTreeSet<[usize; 3]> = trips
            .triplets
            .iter()
            .map(|t| {
                let mut v = t.vertices.map(|x| key.base[x]);
                v.sort_unstable();
                v
            })
            .collect();
        if got != want {
            p4.push(format!("K has {} bad triplets, N has {}", got.len(), want.len()));
        }
    }
    bullets.push(bullet(4, p4));

    // 5: K | X_i with e_i reversed is G, and θ̃ on X_i is α
    let mut p5 = Vec::new();
    for (i, (g, t)) in key.gadgets.iter().zip(&trips.triplets).enumerate() {
        let anchor = t.vertices.map(|x| key.base[x]);
        if g.anchor != anchor {
            p5.push(format!("gadget {i} is attached to the wrong triplet"));
            continue;
        }
        if tri_vs.iter().zip(&anchor).any(|(&z, &a)| g.g_to_k[z] != a) {
            p5.push(format!("gadget {i}: the triangle of G does not map onto its triplet"));
            continue;
        }
        let e = match forward_arc(k, ko, anchor) {
            Ok(e) => e,
            Err(err) => {
                p5.push(format!("gadget {i}: {err}"));
                continue;
            }
        };
        let mut kk = k.clone();
        kk.flip(e.0, e.1);
        let all: Vec<usize> = (0..gt.n()).collect();
        if let Some((u, v)) = arcs_match(&kk, gt, &g.g_to_k, &all) {
            p5.push(format!("X_{i} with e_{i} reversed differs from G at ({u},{v})"));
        }
        if !order_preserved(ko, gw.ordering.as_slice(), &g.g_to_k) {
            p5.push(format!("θ̃ on X_{i} is not α"));
        }
    }
    bullets.push(bullet(5, p5));

    // 6: backward arcs of K come only from N's copy and the U_i copies
    let mut p6 = Vec::new();
    let mut home = vec![usize::MAX; kn];
    for &x in &key.base {
        home[x] = 0;
    }
    for (i, g) in key.gadgets.iter().enumerate() {
        for &x in &g.inserted {
            home[x] = i + 1;
        }
    }
    'outer: for a in 0..kn {
        for b in a + 1..kn {
            let (x, y) = (ko.vertex_at(a), ko.vertex_at(b));
            if k.beats(y, x) && home[x] != home[y] {
                p6.push(format!("backward arc ({y},{x}) joins different copies"));
                break 'outer;
            }
        }
    }
    bullets.push(bullet(6, p6));

    Ok(KeyReport { bullets })
}
