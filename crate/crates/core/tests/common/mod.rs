#![allow(dead_code)]

use ehc_core::recognize::{recognize_decomposition, DecompositionWitness, Grammar, RecognizeOptions};
use ehc_core::{Ordering, Tournament};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Backward arcs given 1-based, as `(later, earlier)`.
pub fn from_one_based(n: usize, arcs: &[(usize, usize)]) -> Tournament {
    let zero: Vec<(usize, usize)> = arcs.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
    Tournament::from_backward_arcs(n, &zero).unwrap()
}

pub fn witness(t: &Tournament, g: Grammar) -> DecompositionWitness {
    recognize_decomposition(t, g, &Ordering::identity(t.n()), &RecognizeOptions::regular())
        .unwrap()
        .unwrap_or_else(|| panic!("expected a regular {g} under the identity"))
}

/// The 17-vertex super nebula with two super 2-nebulas and three stars
/// whose leaf vectors are listed in the text.
pub fn figure4() -> Tournament {
    from_one_based(
        17,
        &[
            // Σ (middle): centers 1, 16; leaves 12, 13
            (12, 1),
            (16, 13),
            (16, 1),
            // Σ (right): centers 2, 3; leaves 5, 6
            (5, 2),
            (6, 3),
            (3, 2),
            // stars centered at 4, 9, 10
            (7, 4),
            (8, 4),
            (11, 9),
            (14, 9),
            (15, 10),
            (17, 10),
        ],
    )
}

/// The 10-vertex super nebula H₁: left star 1 with leaves 2, 7, 8; a middle
/// super 2-nebula on 3..6; the 2-vertex star {9, 10}.
pub fn figure5_n() -> Tournament {
    from_one_based(10, &[(2, 1), (7, 1), (8, 1), (4, 3), (6, 5), (6, 3), (10, 9)])
}

/// The 7-vertex Δgalaxy H₂: stars {1,2}, {6,7} around the triangle {3,4,5}.
pub fn figure5_g() -> Tournament {
    from_one_based(7, &[(2, 1), (7, 6), (4, 3), (5, 3), (5, 4)])
}

pub fn random_tournament(n: usize, rng: &mut ChaCha8Rng) -> Tournament {
    Tournament::from_fn(n, |_, _| rng.gen_bool(0.5))
}

/// Each pair is backward with probability `p`.
pub fn sparse_tournament(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Tournament {
    Tournament::from_fn(n, |_, _| !rng.gen_bool(p))
}

/// A random regular super nebula on `lo..=hi` vertices, under the identity,
/// with at least `min_bad` bad triplets.
pub fn random_super_nebula(
    lo: usize,
    hi: usize,
    min_bad: usize,
    rng: &mut ChaCha8Rng,
) -> (Tournament, DecompositionWitness) {
    loop {
        let n = rng.gen_range(lo..=hi);
        let t = sparse_tournament(n, rng.gen_range(0.15..0.45), rng);
        let Some(w) = recognize_decomposition(
            &t,
            Grammar::SuperNebula,
            &Ordering::identity(n),
            &RecognizeOptions::regular(),
        )
        .unwrap() else {
            continue;
        };
        if ehc_core::keys::bad_triplets(&t, &w).unwrap().len() >= min_bad {
            return (t, w);
        }
    }
}

/// A random regular Δgalaxy on `sizes` vertices under the identity.
pub fn random_delta_galaxy(sizes: &[usize], rng: &mut ChaCha8Rng) -> (Tournament, DecompositionWitness) {
    loop {
        let n = sizes[rng.gen_range(0..sizes.len())];
        let t = sparse_tournament(n, rng.gen_range(0.2..0.6), rng);
        if let Some(w) = recognize_decomposition(
            &t,
            Grammar::DeltaGalaxy,
            &Ordering::identity(n),
            &RecognizeOptions::regular(),
        )
        .unwrap()
        {
            return (t, w);
        }
    }
}

/// A random regular central triangular galaxy with exactly `triangles`
/// triangles on `lo..=hi` vertices under the identity.
pub fn random_central_triangular(
    lo: usize,
    hi: usize,
    triangles: usize,
    rng: &mut ChaCha8Rng,
) -> (Tournament, DecompositionWitness) {
    loop {
        let n = rng.gen_range(lo..=hi);
        let t = sparse_tournament(n, rng.gen_range(0.15..0.5), rng);
        if let Some(w) = recognize_decomposition(
            &t,
            Grammar::CentralTriangularGalaxy,
            &Ordering::identity(n),
            &RecognizeOptions::regular(),
        )
        .unwrap()
        {
            if w.triangles().count() == triangles {
                return (t, w);
            }
        }
    }
}

/// Leaf flags of the stars and super 2-nebulas of `w`, by position; other
/// parts count as non-leaves.
pub fn leaf_bits(w: &DecompositionWitness) -> Vec<u8> {
    use ehc_core::recognize::Part;
    let mut bits = vec![0u8; w.n()];
    for p in &w.parts {
        let leaves: Vec<usize> = match p {
            Part::Star(s) => s.leaves.clone(),
            Part::SuperTwoNebula(s) => s.leaves(),
            _ => Vec::new(),
        };
        for l in leaves {
            bits[w.ordering.position_of(l)] = 1;
        }
    }
    bits
}

/// A structure built around a planted copy of `source` (vertices in
/// identity order): every source vertex becomes a cluster of `r` host
/// vertices; clusters of a run of 1s in `bits` form one transitive set,
/// every 0 its own linear set. Open pairs of the source are oriented at
/// random, vertex pair by vertex pair.
///
/// Returns the structure, δ, and the planted map.
pub fn plant(
    source: &ehc_core::PartialDigraph,
    bits: &[u8],
    r: usize,
    rng: &mut ChaCha8Rng,
) -> (
    ehc_core::smooth::SmoothStructure,
    std::collections::BTreeMap<usize, usize>,
    Vec<usize>,
) {
    use ehc_core::keys::contract_bits;
    let n = source.n();
    assert_eq!(bits.len(), n);
    let hn = n * r;
    let cluster = |x: usize| x / r;
    let cv = contract_bits(bits);
    let mut set_of = vec![0; n];
    let mut ranges = Vec::new();
    let mut p = 0;
    for (i, &b) in cv.bits.iter().enumerate() {
        let len = if b == 1 { cv.multiplicity[&i] } else { 1 };
        set_of[p..p + len].fill(i);
        ranges.push(p * r..(p + len) * r);
        p += len;
    }
    let host = Tournament::from_fn(hn, |x, y| {
        let (u, v) = (cluster(x), cluster(y));
        if u == v || source.has_arc(u, v) {
            true
        } else if source.has_arc(v, u) {
            false
        } else {
            // open pair: keep transitive sets transitive
            set_of[u] == set_of[v] || rng.gen_bool(0.5)
        }
    });
    let sets: Vec<ehc_core::VertexSet> = ranges.into_iter().map(|r| r.collect()).collect();
    let w: Vec<bool> = cv.bits.iter().map(|&b| b == 1).collect();
    let chi = ehc_core::smooth::SmoothStructure::new(
        host,
        sets,
        w,
        ehc_core::Rational::new(1, hn as i64),
        ehc_core::Rational::new(1, 2),
    );
    let planted = (0..n).map(|v| v * r).collect();
    (chi, cv.multiplicity, planted)
}

pub fn random_sets(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut vs: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(&mut vs[..], rng);
    let mut out = vec![Vec::new(); k];
    for (i, v) in vs.into_iter().enumerate() {
        if i < k {
            out[i].push(v);
        } else if rng.gen_bool(0.7) {
            out[rng.gen_range(0..k)].push(v);
        }
    }
    out
}

/// A random structure made smooth by choosing λ as the worst density gap.
pub fn random_smooth(rng: &mut ChaCha8Rng) -> Option<ehc_core::smooth::SmoothStructure> {
    let n = rng.gen_range(6..14);
    let t = sparse_tournament(n, rng.gen_range(0.05..0.3), rng);
    let k = rng.gen_range(2..5).min(n);
    let sets = random_sets(n, k, rng);
    let mut worst = ehc_core::Rational::new(1, 1);
    for i in 0..k {
        for j in i + 1..k {
            for &v in &sets[i] {
                let a = sets[j].iter().filter(|&&u| t.beats(v, u)).count();
                worst = worst.min(ehc_core::Rational::new(a as i64, sets[j].len() as i64));
            }
            for &v in &sets[j] {
                let a = sets[i].iter().filter(|&&u| t.beats(u, v)).count();
                worst = worst.min(ehc_core::Rational::new(a as i64, sets[i].len() as i64));
            }
        }
    }
    let lambda = ehc_core::Rational::new(1, 1) - worst;
    if lambda <= ehc_core::Rational::new(0, 1) || lambda >= ehc_core::Rational::new(1, 1) {
        return None;
    }
    let chi = ehc_core::smooth::SmoothStructure::new(
        t,
        sets.iter().map(|s| s.iter().collect()).collect(),
        vec![false; k],
        ehc_core::Rational::new(1, n as i64),
        lambda,
    );
    ehc_core::smooth::verify_smooth(&chi).ok.then_some(chi)
}
