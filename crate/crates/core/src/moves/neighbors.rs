use std::cell::OnceCell;

use super::apply::{apply_with, remap_annuli, side_pair, sphere_points, spliced_arc, vertex_ends};
use super::{Move, MoveKind, MoveSet, SphereCatalog};
use crate::surface::{CanonicalKey, Draft, PointRef, SurfaceEncoding, TetBoundary};

#[derive(Clone, Debug)]
pub struct Neighbor {
    pub mv: Move,
    pub key: CanonicalKey,
    pub encoding: SurfaceEncoding,
}

#[derive(Clone, Debug, Default)]
pub struct Neighbors {
    /// Sorted by key, then by move text.
    pub moves: Vec<Neighbor>,
    /// Candidate moves skipped because their result would exceed the weight budget.
    pub rejected_by_budget: usize,
}

/// Every move of an allowed kind that applies to `enc`, with its result, for
/// results of weight at most `budget`.
pub fn neighbors(
    enc: &SurfaceEncoding,
    budget: usize,
    move_set: &MoveSet,
    catalog: &SphereCatalog,
) -> Neighbors {
    let mut out = Neighbors::default();
    let mut keyed = Vec::new();
    let before = enc.summary();
    let tri = enc.triangulation();
    for m in candidates(enc, move_set, catalog) {
        if !move_set.contains(m.kind()) {
            continue;
        }
        let delta = m
            .weight_delta(tri, catalog)
            .expect("candidates refer to existing cells");
        if enc.weight() as i64 + delta > budget as i64 {
            out.rejected_by_budget += 1;
            continue;
        }
        let Ok(result) = apply_with(enc, &before, &m, catalog) else {
            continue;
        };
        keyed.push((result.canonical_key(), m.to_string(), m, result));
    }
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    out.moves = keyed
        .into_iter()
        .map(|(key, _, mv, encoding)| Neighbor { mv, key, encoding })
        .collect();
    out
}

/// Candidate moves: location data that is well formed for `enc`. Applying them
/// decides which actually work.
fn candidates(enc: &SurfaceEncoding, move_set: &MoveSet, catalog: &SphereCatalog) -> Vec<Move> {
    let tri = enc.triangulation();
    let boundaries: Vec<OnceCell<TetBoundary>> =
        (0..tri.tet_count()).map(|_| OnceCell::new()).collect();
    let boundary = |t: usize| boundaries[t].get_or_init(|| enc.boundary(t));
    let mut out = Vec::new();

    if move_set.contains(MoveKind::V0) {
        for v in 0..tri.vertex_count() {
            for &(face, corner) in &tri.vertex_classes()[v].face_corners {
                let arcs = enc.face(face);
                let Some(g) = arcs.corner_gap(corner) else {
                    continue;
                };
                let (gaps, _) = arcs.gap_regions();
                for (a, b) in arcs.arcs() {
                    if gaps[a] == gaps[g] || gaps[b] == gaps[g] {
                        out.push(Move::Vertex {
                            forward: true,
                            vertex: v,
                            face,
                            corner: corner as u8,
                            arc: (a, b),
                        });
                    }
                }
            }
            if let Some(removed) = vertex_ends(enc, v) {
                let d = Draft::from_encoding(enc);
                for &(face, corner) in &tri.vertex_classes()[v].face_corners {
                    let q = d.corner_points(face, corner);
                    if let Some(arc) = spliced_arc(enc, &removed, face, q) {
                        out.push(Move::Vertex {
                            forward: false,
                            vertex: v,
                            face,
                            corner: corner as u8,
                            arc,
                        });
                    }
                }
            }
        }
    }

    if move_set.contains(MoveKind::E1) {
        let d = Draft::from_encoding(enc);
        for (e, class) in tri.edge_classes().iter().enumerate() {
            let n = enc.edge_count(e);
            for &(face, s) in &class.face_sides {
                let arcs = enc.face(face);
                if arcs.is_empty() {
                    continue;
                }
                let side = tri.face_classes()[face].sides[s];
                let (gaps, _) = arcs.gap_regions();
                let pos =
                    |ci: usize| arcs.side_offset(s) + if side.forward { ci } else { n - 1 - ci };
                for i in 0..=n {
                    let gap = if 0 < i && i < n {
                        pos(i - 1).min(pos(i))
                    } else {
                        let at_start = (i == 0) == side.forward;
                        arcs.corner_gap(if at_start { s } else { (s + 1) % 3 })
                            .expect("nonempty")
                    };
                    for (a, b) in arcs.arcs() {
                        if gaps[a] == gaps[gap] || gaps[b] == gaps[gap] {
                            out.push(Move::Edge {
                                forward: true,
                                edge: e,
                                gap: i,
                                face,
                                side: s as u8,
                                arc: (a, b),
                            });
                        }
                    }
                }
                for i in 0..n.saturating_sub(1) {
                    let q = side_pair(&d, face, s, i);
                    if let Some(arc) = spliced_arc(enc, &[(e, i), (e, i + 1)], face, q) {
                        out.push(Move::Edge {
                            forward: false,
                            edge: e,
                            gap: i,
                            face,
                            side: s as u8,
                            arc,
                        });
                    }
                }
            }
        }
    }

    if move_set.contains(MoveKind::F2) || move_set.contains(MoveKind::F2Prime) {
        for (face, fc) in tri.face_classes().iter().enumerate() {
            let [(t0, f0), (t1, f1)] = fc.incidences;
            if t0 == t1 {
                continue;
            }
            let arcs = enc.face(face);
            let (gaps, _) = arcs.gap_regions();
            let list: Vec<(usize, usize)> = arcs.arcs().collect();
            for (i, &alpha) in list.iter().enumerate() {
                for &beta in &list[i + 1..] {
                    let ra = [gaps[alpha.0], gaps[alpha.1]];
                    if !ra.contains(&gaps[beta.0]) && !ra.contains(&gaps[beta.1]) {
                        continue;
                    }
                    // per side: which annulus flags are consistent, with the disk change
                    let mut options: [Vec<(u8, i64)>; 2] = Default::default();
                    let mut same = [false; 2];
                    for (k, (t, f)) in [(t0, f0), (t1, f1)].into_iter().enumerate() {
                        let b = boundary(t);
                        let (ca, cb) = (b.curve_at(f, alpha.0), b.curve_at(f, beta.0));
                        let pair: Vec<usize> = enc
                            .annuli(t)
                            .iter()
                            .flatten()
                            .map(|&p| b.curve_containing(p).expect("point exists"))
                            .collect();
                        same[k] = ca == cb;
                        if same[k] {
                            if !pair.contains(&ca) {
                                options[k].push((0, 1));
                            }
                            if pair.is_empty() {
                                options[k].push((1, -1));
                            }
                        } else if pair.contains(&ca) && pair.contains(&cb) {
                            options[k].push((1, 1));
                        } else if !pair.contains(&ca) && !pair.contains(&cb) {
                            options[k].push((0, -1));
                        }
                    }
                    let prime = same[0] != same[1];
                    let kind = if prime {
                        MoveKind::F2Prime
                    } else {
                        MoveKind::F2
                    };
                    if !move_set.contains(kind) {
                        continue;
                    }
                    for &(b0, d0) in &options[0] {
                        for &(b1, d1) in &options[1] {
                            if d0 + d1 == 0 {
                                out.push(Move::face(prime, face, alpha, beta, b0 | b1 << 1));
                            }
                        }
                    }
                }
            }
        }
    }

    if move_set.contains(MoveKind::Pinch) {
        for tet in 0..tri.tet_count() {
            if !enc.annuli(tet).is_empty() {
                continue;
            }
            let own: Vec<PointRef> = boundary(tet)
                .curves()
                .iter()
                .map(|c| c.least_point())
                .collect();
            for (id, sphere) in catalog.iter() {
                let theirs = sphere.encoding().boundary(tet);
                for &c1 in &own {
                    for c2 in theirs.curves() {
                        out.push(Move::Pinch {
                            forward: true,
                            tet,
                            curve: c1,
                            sphere: id,
                            sphere_curve: c2.least_point(),
                        });
                    }
                }
            }
        }
    }

    if move_set.contains(MoveKind::Unpinch) {
        for tet in 0..tri.tet_count() {
            if enc.annuli(tet).len() == 1 {
                for (id, _) in catalog.iter() {
                    if let Some(m) = unpinch_candidate(enc, tet, id, catalog) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

fn unpinch_candidate(
    enc: &SurfaceEncoding,
    tet: usize,
    id: usize,
    catalog: &SphereCatalog,
) -> Option<Move> {
    let tri = enc.triangulation();
    let sphere = catalog.get(id)?;
    let removed = sphere_points(enc, sphere)?;
    let [p1, p2] = enc.annuli(tet)[0];
    let is_gone = |p: PointRef| {
        let e = tri.tet_edge_class(tet, p.edge as usize);
        removed.contains(&(e, enc.class_index(tet, p)))
    };
    let (keep, gone) = match (is_gone(p1), is_gone(p2)) {
        (false, true) => (p1, p2),
        (true, false) => (p2, p1),
        _ => return None,
    };
    let placeholder = Move::Pinch {
        forward: false,
        tet,
        curve: keep,
        sphere: id,
        sphere_curve: gone,
    };
    let mut d = Draft::from_encoding(enc);
    d.annuli_mut(tet).clear();
    remap_annuli(enc, &mut d, &removed, &placeholder).ok()?;
    d.contract(&removed, &[]).ok()?;
    let light = d.build().ok()?;

    let e = tri.tet_edge_class(tet, keep.edge as usize);
    let ci = enc.class_index(tet, keep) - sphere.tail_count(e);
    let c1 = light.point_ref(tet, keep.edge as usize, ci);
    let b = light.boundary(tet);
    let c1 = b.curves()[b.curve_containing(c1)?].least_point();

    let e = tri.tet_edge_class(tet, gone.edge as usize);
    let j = enc.class_index(tet, gone);
    let j = if j < sphere.tail_count(e) {
        j
    } else {
        j - light.edge_count(e)
    };
    let s = sphere.encoding();
    let c2 = s.point_ref(tet, gone.edge as usize, j);
    let b = s.boundary(tet);
    let c2 = b.curves()[b.curve_containing(c2)?].least_point();
    Some(Move::Pinch {
        forward: false,
        tet,
        curve: c1,
        sphere: id,
        sphere_curve: c2,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::moves::apply;
    use crate::triangulation::Triangulation;

    fn setup() -> (SurfaceEncoding, SphereCatalog) {
        let tri = Arc::new(Triangulation::parse(include_str!("../../data/s3_2tet.tri")).unwrap());
        let catalog = SphereCatalog::vertex_links(&tri);
        (SurfaceEncoding::vertex_link(tri, 0).unwrap(), catalog)
    }

    #[test]
    fn no_kinds_no_neighbors() {
        let (link, catalog) = setup();
        let found = neighbors(&link, 20, &MoveSet::empty(), &catalog);
        assert!(found.moves.is_empty());
        assert_eq!(found.rejected_by_budget, 0);
    }

    #[test]
    fn vertex_link_is_isolated_under_tight_budget() {
        let (link, catalog) = setup();
        let found = neighbors(&link, 6, &"E1".parse().unwrap(), &catalog);
        assert!(found.moves.is_empty());
        assert!(found.rejected_by_budget > 0);
        assert!(neighbors(&link, 7, &MoveSet::standard(), &catalog)
            .moves
            .is_empty());
    }

    #[test]
    fn sorted_and_symmetric() {
        let (link, catalog) = setup();
        let found = neighbors(&link, 12, &MoveSet::all(), &catalog);
        let order: Vec<_> = found
            .moves
            .iter()
            .map(|n| (n.key.clone(), n.mv.to_string()))
            .collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
        for n in &found.moves {
            assert!(n.encoding.weight() <= 12);
            let back = neighbors(&n.encoding, 12, &MoveSet::all(), &catalog);
            assert!(back
                .moves
                .iter()
                .any(|b| b.mv == n.mv.inverse() && b.key == link.canonical_key()));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn random_walks_are_reversible(choices in proptest::collection::vec(any::<usize>(), 1..6)) {
            let (mut enc, catalog) = setup();
            let set = MoveSet::all();
            let mut seen = std::collections::HashMap::new();
            for c in choices {
                let found = neighbors(&enc, 10, &set, &catalog);
                if found.moves.is_empty() {
                    break;
                }
                let n = &found.moves[c % found.moves.len()];
                let before = enc.summary();
                let after = n.encoding.summary();
                prop_assert_eq!(before.euler_characteristic, after.euler_characteristic);
                prop_assert_eq!(before.components, after.components);
                prop_assert_eq!(enc.genus(), n.encoding.genus());
                let delta = n.mv.weight_delta(enc.triangulation(), &catalog).unwrap();
                prop_assert_eq!(enc.weight() as i64 + delta, n.encoding.weight() as i64);
                let back = apply(&n.encoding, &n.mv.inverse(), &catalog).unwrap();
                prop_assert_eq!(back.canonical_key(), enc.canonical_key());
                for e in [&enc, &n.encoding] {
                    let text = e.to_text();
                    if let Some(other) = seen.insert(e.canonical_key(), text.clone()) {
                        prop_assert_eq!(other, text);
                    }
                }
                enc = n.encoding.clone();
            }
        }
    }
}
