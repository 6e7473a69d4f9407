// K₆-gadget keys for central triangular galaxies.

use super::key::{lift_part, Gadget, KeyFlavor, KeyTournament};
use crate::error::{CoreError, Result};
use crate::recognize::{check_decomposition, DecompositionWitness, Grammar, K6Witness, Part};
use crate::tournament::{Ordering, Tournament, K6_BACKWARD};

fn validate_instance(t: &Tournament, beta: &Ordering, inst: &K6Witness) -> Result<()> {
    let n = t.n();
    beta.check_len(n)?;
    if inst.vertices.iter().any(|&v| v >= n) {
        return Err(CoreError::Precondition("K6 instance vertex out of range".into()));
    }
    let ps = inst.vertices.map(|v| beta.position_of(v));
    if ps != inst.positions {
        return Err(CoreError::Precondition("K6 instance positions disagree with β".into()));
    }
    let [i1, i2, i3, i4, i5, i6] = ps;
    if !(i2 == i1 + 1 && i4 == i3 + 1 && i6 == i5 + 1 && i2 < i3 && i4 < i5) {
        return Err(CoreError::Precondition(format!(
            "K6 instance positions {ps:?} violate the adjacency constraints"
        )));
    }
    for a in 0..6 {
        for b in a + 1..6 {
            let back = t.beats(inst.vertices[b], inst.vertices[a]);
            if back != K6_BACKWARD.contains(&(b, a)) {
                return Err(CoreError::Precondition(format!(
                    "{:?} is not a canonical K6 under β",
                    inst.vertices
                )));
            }
        }
    }
    Ok(())
}

/// Deletes `v_{i₂}, v_{i₃}, v_{i₅}` and reverses the arc `(v_{i₄}, v_{i₆})`.
///
/// Survivors are renumbered in increasing order of their old labels; the
/// returned ordering is β restricted to them.
pub fn operation_k6(t: &Tournament, beta: &Ordering, inst: &K6Witness) -> Result<(Tournament, Ordering)> {
    let (t, o, _) = operation_k6_all(t, beta, std::slice::from_ref(inst))?;
    Ok((t, o))
}

/// Applies the operation to each instance in turn. Also returns the
/// surviving original labels (new vertex `i` is old vertex `survivors[i]`).
pub fn operation_k6_all(
    t: &Tournament,
    beta: &Ordering,
    insts: &[K6Witness],
) -> Result<(Tournament, Ordering, Vec<usize>)> {
    let mut cur = t.clone();
    let mut order = beta.clone();
    let mut survivors: Vec<usize> = (0..t.n()).collect();
    for inst in insts {
        // translate to current labels
        let rank = |v: usize| survivors.binary_search(&v).ok();
        let Some(vs) = inst.vertices.iter().map(|&v| rank(v)).collect::<Option<Vec<usize>>>() else {
            return Err(CoreError::Precondition("K6 instances overlap".into()));
        };
        let vertices: [usize; 6] = vs.try_into().expect("six vertices");
        let local = K6Witness {
            vertices,
            positions: vertices.map(|v| order.position_of(v)),
        };
        validate_instance(&cur, &order, &local)?;
        let drop = [vertices[1], vertices[2], vertices[4]];
        let keep: Vec<usize> = (0..cur.n()).filter(|v| !drop.contains(v)).collect();
        let mut next = cur.induced(&keep);
        let new_id = |v: usize| keep.binary_search(&v).expect("kept");
        next.flip(new_id(vertices[3]), new_id(vertices[5]));
        let perm: Vec<usize> = order
            .as_slice()
            .iter()
            .filter(|v| !drop.contains(v))
            .map(|&v| new_id(v))
            .collect();
        order = Ordering::new(perm)?;
        survivors = keep.iter().map(|&v| survivors[v]).collect();
        cur = next;
    }
    Ok((cur, order, survivors))
}

/// Builds the GK₆ key of a regular central triangular galaxy.
///
/// Each triangle `(z₁, z₂, z₃)` becomes `d₁ = z₁, d₄ = z₂, d₆ = z₃` with
/// `d₂` inserted right after `z₁`, `d₃` right before `z₂` and `d₅` right
/// before `z₃`; the arc `z₃ → z₂` is turned forward.
pub fn build_key_gk6(ht: &Tournament, hw: &DecompositionWitness) -> Result<KeyTournament> {
    let v = check_decomposition(ht, hw, Grammar::CentralTriangularGalaxy, true);
    if !v.is_empty() {
        return Err(CoreError::WrongGrammar(format!(
            "not a regular central triangular galaxy witness: {}",
            v.join("; ")
        )));
    }
    let theta = &hw.ordering;
    let h = ht.n();
    let tris: Vec<_> = hw.triangles().copied().collect();

    #[derive(Clone, Copy)]
    enum Src {
        H(usize),
        D { gadget: usize, slot: usize },
    }
    // per gap: inserts placed after the preceding vertex, then those placed
    // before the following one
    let mut after: Vec<Vec<Src>> = vec![Vec::new(); h + 1];
    let mut before: Vec<Vec<Src>> = vec![Vec::new(); h + 1];
    for (i, tr) in tris.iter().enumerate() {
        let [p1, p2, p3] = tr.positions;
        after[p1 + 1].push(Src::D { gadget: i, slot: 1 });
        before[p2].push(Src::D { gadget: i, slot: 2 });
        before[p3].push(Src::D { gadget: i, slot: 4 });
    }
    let mut order: Vec<Src> = Vec::with_capacity(h + 3 * tris.len());
    for p in 0..=h {
        order.extend(after[p].iter().copied());
        order.extend(before[p].iter().copied());
        if p < h {
            order.push(Src::H(theta.vertex_at(p)));
        }
    }
    let kn = order.len();
    let mut base = vec![usize::MAX; h];
    let mut d = vec![[usize::MAX; 6]; tris.len()];
    for (x, s) in order.iter().enumerate() {
        match *s {
            Src::H(v) => base[v] = x,
            Src::D { gadget, slot } => d[gadget][slot] = x,
        }
    }
    for (i, tr) in tris.iter().enumerate() {
        d[i][0] = base[tr.left_exterior];
        d[i][3] = base[tr.center];
        d[i][5] = base[tr.right_exterior];
    }
    let mut k = Tournament::from_fn(kn, |x, y| match (order[x], order[y]) {
        (Src::H(u), Src::H(v)) => ht.beats(u, v),
        _ => true,
    });
    for g in &d {
        k.set_arc(g[3], g[5]);
        k.set_arc(g[5], g[2]);
        k.set_arc(g[4], g[1]);
    }
    let ordering = Ordering::identity(kn);

    let mut parts: Vec<Part> = hw
        .stars()
        .map(|s| lift_part(&Part::Star(s.clone()), &base, &ordering))
        .collect();
    let mut gadgets = Vec::with_capacity(tris.len());
    let mut ef = Vec::with_capacity(2 * tris.len());
    for g in &d {
        parts.push(Part::K6(K6Witness {
            vertices: *g,
            positions: *g,
        }));
        gadgets.push(Gadget {
            anchor: g.to_vec(),
            inserted: vec![g[1], g[2], g[4]],
            g_to_k: Vec::new(),
        });
        ef.push((g[0], g[2]));
        ef.push((g[3], g[5]));
    }
    parts.sort_by_key(Part::first_position);
    let witness = DecompositionWitness {
        grammar: Grammar::Gk6,
        regular: true,
        parts,
        singletons: Vec::new(),
        ordering: ordering.clone(),
    };
    let v = check_decomposition(&k, &witness, Grammar::Gk6, true);
    if !v.is_empty() {
        return Err(CoreError::KeyConstruction {
            bullet: 0,
            detail: format!("gadget placement breaks the GK6 clauses: {}", v.join("; ")),
        });
    }
    Ok(KeyTournament {
        flavor: KeyFlavor::Gk6,
        k,
        ordering,
        base,
        gadgets,
        removed_forward_arcs: ef,
        witness,
    })
}

/// Applies the operation to every gadget of a GK₆ key and relabels the
/// result by the source vertices, so it can be compared with `(H, θ)`
/// directly.
pub fn undo_gk6_key(key: &KeyTournament) -> Result<(Tournament, Ordering)> {
    if key.flavor != KeyFlavor::Gk6 {
        return Err(CoreError::Precondition("undo_gk6_key needs a GK6 key".into()));
    }
    let insts: Vec<K6Witness> = key
        .gadgets
        .iter()
        .map(|g| {
            let vertices: [usize; 6] = g
                .anchor
                .clone()
                .try_into()
                .map_err(|_| CoreError::Precondition("GK6 gadget must have six anchor vertices".into()))?;
            Ok(K6Witness {
                vertices,
                positions: vertices.map(|v| key.ordering.position_of(v)),
            })
        })
        .collect::<Result<_>>()?;
    let (r, order, survivors) = operation_k6_all(&key.k, &key.ordering, &insts)?;
    let h = key.base.len();
    if survivors.len() != h {
        return Err(CoreError::Precondition(format!(
            "{} survivors for {h} source vertices",
            survivors.len()
        )));
    }
    // survivor index → source vertex
    let mut src = vec![usize::MAX; h];
    for (v, &kx) in key.base.iter().enumerate() {
        let i = survivors
            .binary_search(&kx)
            .map_err(|_| CoreError::Precondition(format!("source vertex {v} was deleted")))?;
        src[i] = v;
    }
    let mut idx = vec![0; h];
    for (i, &v) in src.iter().enumerate() {
        idx[v] = i;
    }
    let t = Tournament::from_fn(h, |u, v| r.beats(idx[u], idx[v]));
    let perm = order.as_slice().iter().map(|&i| src[i]).collect();
    Ok((t, Ordering::new(perm)?))
}
