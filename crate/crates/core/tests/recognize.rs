use ehc_core::bits::VertexSet;
use ehc_core::recognize::*;
use ehc_core::{Ordering, Tournament};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let total: usize = (1..=n).product();
    (0..total).map(|i| nth_permutation(n, i).as_slice().to_vec()).collect()
}

/// All set partitions of `0..n` as block-label vectors.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=blocks {
            cur.push(b);
            go(i + 1, n, cur, blocks.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// Galaxy membership by brute force over orderings, partitions and centers.
/// Works purely with positions: `back(i, j)` for positions `i < j`.
fn galaxy_oracle(t: &Tournament) -> bool {
    let n = t.n();
    let parts = partitions(n);
    for perm in all_perms(n) {
        let back = |i: usize, j: usize| t.beats(perm[j], perm[i]);
        'part: for labels in &parts {
            let nb = labels.iter().max().map_or(0, |m| m + 1);
            let blocks: Vec<Vec<usize>> = (0..nb).map(|b| (0..n).filter(|&p| labels[p] == b).collect()).collect();
            for i in 0..n {
                for j in i + 1..n {
                    if labels[i] != labels[j] && back(i, j) {
                        continue 'part;
                    }
                }
            }
            // candidate centers per block (positions)
            let mut cands: Vec<Vec<usize>> = Vec::new();
            for b in &blocks {
                if b.len() == 1 {
                    cands.push(vec![usize::MAX]);
                    continue;
                }
                let mut cs = Vec::new();
                for &c in [b[0], *b.last().unwrap()].iter() {
                    if cs.contains(&c) {
                        continue;
                    }
                    let ok = b.iter().all(|&x| {
                        b.iter().all(|&y| {
                            if x >= y {
                                return true;
                            }
                            back(x, y) == (x == c || y == c)
                        })
                    });
                    if ok {
                        cs.push(c);
                    }
                }
                if cs.is_empty() {
                    continue 'part;
                }
                cands.push(cs);
            }
            let mut choice = vec![0usize; blocks.len()];
            loop {
                let centers: Vec<usize> = (0..blocks.len()).map(|k| cands[k][choice[k]]).collect();
                let mut good = true;
                for (a, ca) in centers.iter().enumerate() {
                    if *ca == usize::MAX {
                        continue;
                    }
                    for (b, cb) in centers.iter().enumerate() {
                        if a == b || *cb == usize::MAX {
                            continue;
                        }
                        let leaves: Vec<usize> = blocks[b].iter().copied().filter(|p| p != cb).collect();
                        let lo = *leaves.iter().min().unwrap();
                        let hi = *leaves.iter().max().unwrap();
                        if lo < *ca && *ca < hi {
                            good = false;
                        }
                    }
                }
                if good {
                    return true;
                }
                let mut k = 0;
                loop {
                    if k == blocks.len() {
                        continue 'part;
                    }
                    choice[k] += 1;
                    if choice[k] < cands[k].len() {
                        break;
                    }
                    choice[k] = 0;
                    k += 1;
                }
            }
        }
    }
    false
}

fn tournament_from_mask(n: usize, mask: u32) -> Tournament {
    let mut bit = 0;
    Tournament::from_fn(n, |_, _| {
        let f = mask >> bit & 1 == 0;
        bit += 1;
        f
    })
}

#[test]
fn galaxy_agrees_with_exhaustive_enumeration_up_to_five() {
    let opts = RecognizeOptions::default();
    for n in 1..=5usize {
        let pairs = n * (n - 1) / 2;
        for mask in 0..(1u32 << pairs) {
            let t = tournament_from_mask(n, mask);
            let got = recognize_unordered(&t, Grammar::Galaxy, &opts).unwrap();
            assert_eq!(got.is_some(), galaxy_oracle(&t), "n={n} mask={mask:b}");
            if let Some(w) = got {
                assert!(check_decomposition(&t, &w, Grammar::Galaxy, false).is_empty());
            }
        }
    }
}

#[test]
fn k6_is_a_super_nebula_under_its_canonical_ordering() {
    let t = Tournament::k6();
    let theta = Ordering::identity(6);
    let w = recognize_decomposition(&t, Grammar::SuperNebula, &theta, &RecognizeOptions::regular())
        .unwrap()
        .expect("K6 is a regular super nebula");
    assert!(check_decomposition(&t, &w, Grammar::SuperNebula, true).is_empty());
    let sigma: Vec<_> = w.sigmas().collect();
    assert_eq!(sigma.len(), 1);
    assert_eq!(sigma[0].kind, SigmaKind::Middle);
    assert_eq!(sigma[0].centers(), [0, 5]);
    assert_eq!(w.stars().count(), 1);
    // a galaxy cannot hold the super 2-nebula
    assert!(
        recognize_decomposition(&t, Grammar::Galaxy, &theta, &RecognizeOptions::default())
            .unwrap()
            .is_none()
    );
}

#[test]
fn k6_under_gk6_is_one_instance() {
    let t = Tournament::k6();
    let w = recognize_decomposition(&t, Grammar::Gk6, &Ordering::identity(6), &RecognizeOptions::default())
        .unwrap()
        .unwrap();
    assert_eq!(w.k6s().count(), 1);
    assert!(w.singletons.is_empty());
}

#[test]
fn star_segment_examples() {
    let two = Tournament::from_backward_arcs(2, &[(1, 0)]).unwrap();
    let s = VertexSet::full(2);
    let id2 = Ordering::identity(2);
    let r = classify_star_segment(&two, &id2, &s, CenterChoice::Right).unwrap();
    assert_eq!((r.center, r.kind), (1, StarKind::Right));
    let l = classify_star_segment(&two, &id2, &s, CenterChoice::Left).unwrap();
    assert_eq!((l.center, l.kind), (0, StarKind::Left));

    let three = Tournament::from_backward_arcs(3, &[(2, 0), (2, 1)]).unwrap();
    let w = classify_star_segment(&three, &Ordering::identity(3), &VertexSet::full(3), CenterChoice::Left).unwrap();
    assert_eq!((w.center, w.kind), (2, StarKind::Right));
    assert_eq!(w.leaves, vec![0, 1]);

    // only the arc between positions 3 and 4 (1-based) is backward
    let four = Tournament::from_backward_arcs(4, &[(3, 2)]).unwrap();
    assert!(classify_star_segment(&four, &Ordering::identity(4), &VertexSet::full(4), CenterChoice::Right).is_none());

    let middle = Tournament::from_backward_arcs(3, &[(1, 0), (2, 1)]).unwrap();
    let m = classify_star_segment(
        &middle,
        &Ordering::identity(3),
        &VertexSet::full(3),
        CenterChoice::Right,
    )
    .unwrap();
    assert_eq!((m.center, m.kind), (1, StarKind::Middle));
}

#[test]
fn four_vertex_middle_super_two_nebula() {
    // stars {0,1} (center 0) and {2,3} (center 3), center arc reversed
    let t = Tournament::from_backward_arcs(4, &[(1, 0), (3, 2), (3, 0)]).unwrap();
    let w = recognize_super_2_nebula(&t, &Ordering::identity(4)).unwrap();
    assert_eq!(w.kind, SigmaKind::Middle);
    assert_eq!(w.centers(), [0, 3]);
    assert_eq!(w.leaves(), vec![1, 2]);
    assert!(recognize_super_2_nebula(&Tournament::transitive(5), &Ordering::identity(5)).is_none());
}

#[test]
fn left_and_right_super_two_nebulas() {
    // leaves first: 0,1 leaves; centers 2 (of 0) and 3 (of 1)
    let t = Tournament::from_backward_arcs(4, &[(2, 0), (3, 1), (3, 2)]).unwrap();
    assert_eq!(
        recognize_super_2_nebula(&t, &Ordering::identity(4)).unwrap().kind,
        SigmaKind::Left
    );
    // leaves last: centers 0 (of 2) and 1 (of 3)
    let t = Tournament::from_backward_arcs(4, &[(2, 0), (3, 1), (1, 0)]).unwrap();
    assert_eq!(
        recognize_super_2_nebula(&t, &Ordering::identity(4)).unwrap().kind,
        SigmaKind::Right
    );
}

#[test]
fn triangles_under_orderings() {
    let c3 = Tournament::cyclic_triangle();
    for p in all_perms(3) {
        assert!(find_triangles_under(&c3, &Ordering::new(p).unwrap()).is_empty());
    }
    let rev = Tournament::from_backward_arcs(3, &[(1, 0), (2, 0), (2, 1)]).unwrap();
    let tri = find_triangles_under(&rev, &Ordering::identity(3));
    assert_eq!(tri.len(), 1);
    assert_eq!(tri[0].vertices(), [0, 1, 2]);

    // operation on canonical K6: drop v2, v3, v5 and reverse (v4, v6)
    let mut k = Tournament::k6();
    k.flip(3, 5);
    let kept = [0, 3, 5];
    let sub = k.induced(&kept);
    let tri = find_triangles_under(&sub, &Ordering::identity(3));
    assert_eq!(tri.len(), 1);
}

#[test]
fn k6_instances_and_canonical_check() {
    let k = Tournament::k6();
    let found = find_k6_instances(&k, &Ordering::identity(6));
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].centers(), (0, 5));
    assert!(find_k6_instances(&Tournament::transitive(9), &Ordering::identity(9)).is_empty());

    let id = Ordering::identity(6);
    assert!(is_canonical_k6(&k, &id).unwrap());
    assert!(!is_canonical_k6(&Tournament::transitive(6), &id).unwrap());
    let mut flips = 0;
    for u in 0..6 {
        for v in u + 1..6 {
            let mut f = k.clone();
            f.flip(u, v);
            assert!(!is_canonical_k6(&f, &id).unwrap());
            flips += 1;
        }
    }
    assert_eq!(flips, 15);
    assert!(is_canonical_k6(&Tournament::transitive(5), &Ordering::identity(5)).is_err());
}

#[test]
fn transitive_is_all_singletons() {
    let t = Tournament::transitive(7);
    let theta = Ordering::identity(7);
    for g in ALL_GRAMMARS {
        let w = recognize_decomposition(&t, g, &theta, &RecognizeOptions::default()).unwrap();
        if g.admits_singletons() && !g.requires_special_part() {
            let w = w.unwrap_or_else(|| panic!("{g} should accept a transitive tournament"));
            assert!(w.parts.is_empty());
            assert_eq!(w.singletons.len(), 7);
        } else if g != Grammar::Gk6 {
            assert!(w.is_none(), "{g}");
        }
    }
}

/// Two triangles and one left star whose leaves straddle a triangle center.
fn central_triangular_example() -> Tournament {
    // positions: 0 star center, 2 and 6 its leaves; triangle 1,3,7; triangle 8,9,10
    Tournament::from_backward_arcs(11, &[(2, 0), (6, 0), (3, 1), (7, 1), (7, 3), (9, 8), (10, 8), (10, 9)]).unwrap()
}

#[test]
fn central_triangular_galaxy_with_two_triangles_and_one_star() {
    let t = central_triangular_example();
    let theta = Ordering::identity(11);
    let opts = RecognizeOptions::default();
    let w = recognize_decomposition(&t, Grammar::CentralTriangularGalaxy, &theta, &opts)
        .unwrap()
        .unwrap();
    assert_eq!(w.triangles().count(), 2);
    assert_eq!(w.stars().count(), 1);
    assert_eq!(w.singletons, vec![4, 5]);
    assert!(check_decomposition(&t, &w, Grammar::CentralTriangularGalaxy, false).is_empty());
    for g in [
        Grammar::TriangularGalaxy,
        Grammar::LeftTriangularGalaxy,
        Grammar::RightTriangularGalaxy,
    ] {
        assert!(recognize_decomposition(&t, g, &theta, &opts).unwrap().is_none(), "{g}");
    }
}

#[test]
fn evaluator_catches_tampering() {
    let t = central_triangular_example();
    let theta = Ordering::identity(11);
    let w = recognize_decomposition(
        &t,
        Grammar::CentralTriangularGalaxy,
        &theta,
        &RecognizeOptions::default(),
    )
    .unwrap()
    .unwrap();
    assert!(!check_decomposition(&t, &w, Grammar::TriangularGalaxy, false).is_empty());
    let mut bad = w.clone();
    bad.parts.pop();
    assert!(!check_decomposition(&t, &bad, Grammar::CentralTriangularGalaxy, false).is_empty());
    let mut flipped = t.clone();
    flipped.flip(0, 2);
    assert!(!check_decomposition(&flipped, &w, Grammar::CentralTriangularGalaxy, false).is_empty());
}

#[test]
fn cr_side_conditions() {
    // layout: 0 c1, 1 L(tri left ext), 2 l1, 3 C(tri center), 4 l1', 5 l2, 6 R(tri right ext), 7 l2', 8 c2
    let arcs = [(2, 0), (4, 0), (8, 5), (8, 7), (3, 1), (6, 1), (6, 3)];
    let t = Tournament::from_backward_arcs(9, &arcs).unwrap();
    let theta = Ordering::identity(9);
    let opts = RecognizeOptions::default();
    let cr = recognize_decomposition(&t, Grammar::CrDeltaGalaxy, &theta, &opts).unwrap();
    assert!(cr.is_some(), "separated stars satisfy the CR conditions");
    assert!(recognize_decomposition(&t, Grammar::CentralDeltaGalaxy, &theta, &opts)
        .unwrap()
        .is_none());
    assert!(recognize_decomposition(&t, Grammar::LrDeltaGalaxy, &theta, &opts)
        .unwrap()
        .is_none());

    // interleave the stars: Q2's leaf moves between Q1's leaves
    // layout: 0 c1, 1 L, 2 l1, 3 C, 4 l2, 5 l1', 6 R, 7 l2', 8 c2
    let arcs = [(2, 0), (5, 0), (8, 4), (8, 7), (3, 1), (6, 1), (6, 3)];
    let t = Tournament::from_backward_arcs(9, &arcs).unwrap();
    assert!(recognize_decomposition(&t, Grammar::CrDeltaGalaxy, &theta, &opts)
        .unwrap()
        .is_none());

    // center and right exterior inside the same star
    // layout: 0 c1, 1 L, 2 l1, 3 C, 4 R, 5 l1'
    let arcs = [(2, 0), (5, 0), (3, 1), (4, 1), (4, 3)];
    let t = Tournament::from_backward_arcs(6, &arcs).unwrap();
    let theta = Ordering::identity(6);
    assert!(recognize_decomposition(&t, Grammar::CrDeltaGalaxy, &theta, &opts)
        .unwrap()
        .is_none());
}

#[test]
fn two_vertex_center_falls_back_when_forced() {
    let opts = RecognizeOptions::default();
    // the 2-vertex star {2,3} sits inside the leaves 1, 4 of star 0 either way
    let t = Tournament::from_backward_arcs(5, &[(1, 0), (4, 0), (3, 2)]).unwrap();
    assert!(
        recognize_decomposition(&t, Grammar::Galaxy, &Ordering::identity(5), &opts)
            .unwrap()
            .is_none()
    );
    // {1,4}: the default center 4 lies between leaves 3, 5 of star 6; 1 does not
    let t = Tournament::from_backward_arcs(7, &[(6, 3), (6, 5), (4, 1)]).unwrap();
    let w = recognize_decomposition(&t, Grammar::Galaxy, &Ordering::identity(7), &opts)
        .unwrap()
        .unwrap();
    let two = w.stars().find(|s| s.len() == 2).unwrap();
    assert_eq!((two.center, two.kind), (1, StarKind::Left));
    assert_eq!(w.singletons, vec![0, 2]);
    // left preference picks the earlier vertex when nothing forces otherwise
    let t = Tournament::from_backward_arcs(3, &[(2, 1)]).unwrap();
    let left = RecognizeOptions {
        center_choice: CenterChoice::Left,
        ..opts
    };
    let w = recognize_decomposition(&t, Grammar::Galaxy, &Ordering::identity(3), &left)
        .unwrap()
        .unwrap();
    assert_eq!(w.stars().next().unwrap().center, 1);
}

#[test]
fn assignment_budget_is_reported() {
    // two 2-vertex stars inside the leaf span of star 0: no assignment works
    let t = Tournament::from_backward_arcs(8, &[(1, 0), (7, 0), (3, 2), (5, 4)]).unwrap();
    let theta = Ordering::identity(8);
    let capped = RecognizeOptions {
        max_assignments: 1,
        ..RecognizeOptions::default()
    };
    assert!(matches!(
        recognize_decomposition(&t, Grammar::Galaxy, &theta, &capped),
        Err(ehc_core::CoreError::BudgetExceeded(_))
    ));
    assert!(
        recognize_decomposition(&t, Grammar::Galaxy, &theta, &RecognizeOptions::default())
            .unwrap()
            .is_none()
    );
}

fn random_tournament(n: usize, rng: &mut ChaCha8Rng) -> Tournament {
    Tournament::from_fn(n, |_, _| rng.gen_bool(0.5))
}

/// Tournaments with few backward arcs under the identity are far more likely
/// to be in some family than uniform ones.
fn sparse_tournament(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Tournament {
    Tournament::from_fn(n, |_, _| !rng.gen_bool(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn witnesses_pass_the_independent_evaluator(seed in any::<u64>(), n in 1usize..9, p in 0.05f64..0.4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = sparse_tournament(n, p, &mut rng);
        let theta = Ordering::identity(n);
        for g in ALL_GRAMMARS {
            for opts in [RecognizeOptions::default(), RecognizeOptions::regular()] {
                if let Some(w) = recognize_decomposition(&t, g, &theta, &opts).unwrap() {
                    let v = check_decomposition(&t, &w, g, opts.regular);
                    prop_assert!(v.is_empty(), "{g}: {v:?}");
                }
            }
        }
    }

    #[test]
    fn galaxies_are_nebulas_and_super_nebulas(seed in any::<u64>(), n in 1usize..10, p in 0.05f64..0.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = sparse_tournament(n, p, &mut rng);
        let theta = Ordering::identity(n);
        if let Some(w) = recognize_decomposition(&t, Grammar::Galaxy, &theta, &RecognizeOptions::default()).unwrap() {
            prop_assert!(check_decomposition(&t, &w, Grammar::Nebula, false).is_empty());
            prop_assert!(check_decomposition(&t, &w, Grammar::SuperNebula, false).is_empty());
            prop_assert!(recognize_decomposition(&t, Grammar::Nebula, &theta, &RecognizeOptions::default()).unwrap().is_some());
        }
    }

    #[test]
    fn k6_instances_are_canonical(seed in any::<u64>(), n in 6usize..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = random_tournament(n, &mut rng);
        // plant a K6 at positions 0,1,3,4,6,7 half of the time
        if seed % 2 == 0 && n >= 8 {
            let slots = [0, 1, 3, 4, 6, 7];
            let k = Tournament::k6();
            for a in 0..6 {
                for b in a + 1..6 {
                    if k.beats(a, b) != t.beats(slots[a], slots[b]) {
                        t.flip(slots[a], slots[b]);
                    }
                }
            }
        }
        let beta = Ordering::identity(n);
        for w in find_k6_instances(&t, &beta) {
            let sub = t.induced(&w.vertices);
            prop_assert!(is_canonical_k6(&sub, &Ordering::identity(6)).unwrap());
        }
    }
}
