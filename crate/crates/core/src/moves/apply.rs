use std::collections::BTreeSet;

use super::{Move, MoveError, SphereCatalog};
use crate::surface::{ArcSystem, Draft, PointRef, SidePt, Summary, SurfaceEncoding};
use crate::triangulation::Triangulation;

type Res<T> = Result<T, MoveError>;

/// Applies a move. The result is guaranteed to be a valid encoding with the same
/// Euler characteristic and number of components; a backward move is accepted
/// only if the matching forward move rebuilds `enc` exactly.
pub fn apply(enc: &SurfaceEncoding, m: &Move, catalog: &SphereCatalog) -> Res<SurfaceEncoding> {
    apply_with(enc, &enc.summary(), m, catalog)
}

/// [`apply`] with the summary of `enc` already known.
pub(super) fn apply_with(
    enc: &SurfaceEncoding,
    before: &Summary,
    m: &Move,
    catalog: &SphereCatalog,
) -> Res<SurfaceEncoding> {
    let out = rewrite(enc, m, catalog)?;
    let after = out.summary();
    if !after.classification.is_valid() {
        return Err(MoveError::new(m, "result is not crudely almost normal"));
    }
    if after.euler_characteristic != before.euler_characteristic {
        return Err(MoveError::new(m, "Euler characteristic would change"));
    }
    if after.components != before.components {
        return Err(MoveError::new(m, "number of components would change"));
    }
    Ok(out)
}

/// The rewrite itself, without the topology checks.
fn rewrite(enc: &SurfaceEncoding, m: &Move, catalog: &SphereCatalog) -> Res<SurfaceEncoding> {
    Ok(match *m {
        Move::Vertex { forward: true, .. } => vertex_forward(enc, m)?,
        Move::Vertex { forward: false, .. } => {
            let light = vertex_contract(enc, m)?;
            verified(enc, m, catalog, light)?
        }
        Move::Edge { forward: true, .. } => edge_forward(enc, m)?,
        Move::Edge { forward: false, .. } => {
            let light = edge_contract(enc, m)?;
            verified(enc, m, catalog, light)?
        }
        Move::Face { .. } => face_move(enc, m)?,
        Move::Pinch { forward: true, .. } => pinch(enc, m, catalog)?,
        Move::Pinch { forward: false, .. } => {
            let light = unpinch_contract(enc, m, catalog)?;
            verified(enc, m, catalog, light)?
        }
    })
}

fn verified(
    heavy: &SurfaceEncoding,
    m: &Move,
    catalog: &SphereCatalog,
    light: Draft,
) -> Res<SurfaceEncoding> {
    let light = light
        .build()
        .map_err(|_| MoveError::new(m, "contraction is malformed"))?;
    let again = rewrite(&light, &m.inverse(), catalog)?;
    if again.canonical_key() != heavy.canonical_key() {
        return Err(MoveError::new(
            m,
            "surface is not the result of the inverse move",
        ));
    }
    Ok(light)
}

fn build(d: &Draft, m: &Move) -> Res<SurfaceEncoding> {
    d.build()
        .map_err(|_| MoveError::new(m, "result is malformed"))
}

/// The arc `(a, b)` of a face, checked to exist in a non-crossing system.
fn face_arc<'a>(
    enc: &'a SurfaceEncoding,
    m: &Move,
    face: usize,
    (a, b): (usize, usize),
) -> Res<&'a ArcSystem> {
    if face >= enc.faces().len() {
        return Err(MoveError::new(m, "no such face"));
    }
    let arcs = enc.face(face);
    if a >= b || b >= arcs.len() || arcs.partner(a) != b {
        return Err(MoveError::new(m, "no such arc"));
    }
    if !arcs.is_non_crossing() {
        return Err(MoveError::new(m, "face has crossing arcs"));
    }
    Ok(arcs)
}

/// Replaces the arc `sa`-`sb` by two arcs through the consecutive new points
/// `q1`, `q2` (in this cyclic order), without crossings.
fn reroute(d: &mut Draft, face: usize, [q1, q2]: [SidePt; 2], sa: SidePt, sb: SidePt) {
    let n = d.face_len(face);
    let from = d.position(face, q2);
    let dist = |p: SidePt| (d.position(face, p) + n - from) % n;
    let (x, y) = if dist(sa) < dist(sb) {
        (sb, sa)
    } else {
        (sa, sb)
    };
    d.add_arc(face, [q2, y]);
    d.add_arc(face, [x, q1]);
}

fn vertex_location(tri: &Triangulation, m: &Move) -> Res<(usize, usize, usize, (usize, usize))> {
    let Move::Vertex {
        vertex,
        face,
        corner,
        arc,
        ..
    } = *m
    else {
        unreachable!()
    };
    if vertex >= tri.vertex_count() || face >= tri.face_count() {
        return Err(MoveError::new(m, "no such vertex or face"));
    }
    if tri.face_classes()[face].corner_vertex[corner as usize] != vertex {
        return Err(MoveError::new(m, "face corner is not at the vertex"));
    }
    Ok((vertex, face, corner as usize, arc))
}

fn vertex_forward(enc: &SurfaceEncoding, m: &Move) -> Res<SurfaceEncoding> {
    let tri = enc.triangulation().clone();
    let (v, tau, k, (a, b)) = vertex_location(&tri, m)?;
    let arcs = face_arc(enc, m, tau, (a, b))?;
    let (gaps, _) = arcs.gap_regions();
    let corner = gaps[arcs.corner_gap(k).expect("face has points")];
    if corner != gaps[a] && corner != gaps[b] {
        return Err(MoveError::new(m, "arc does not bound the corner region"));
    }
    let mut d = Draft::from_encoding(enc);
    let (sa, sb) = (d.side_pt(tau, a), d.side_pt(tau, b));
    d.remove_arc(tau, sa);
    let shift = |d: &Draft, p: SidePt| SidePt {
        side: p.side,
        idx: p.idx + usize::from(tri.edge_classes()[d.edge_of(tau, p)].tail == v),
    };
    let (sa, sb) = (shift(&d, sa), shift(&d, sb));
    for (e, class) in tri.edge_classes().iter().enumerate() {
        if class.tail == v {
            d.insert_points(e, 0, 1);
        }
        if class.head == v {
            let n = d.count(e);
            d.insert_points(e, n, 1);
        }
    }
    for &(f, c) in &tri.vertex_classes()[v].face_corners {
        let q = d.corner_points(f, c);
        if (f, c) == (tau, k) {
            reroute(&mut d, f, q, sa, sb);
        } else {
            d.add_arc(f, q);
        }
    }
    let out = build(&d, m)?;
    let shift = |e: usize, ci: usize| ci + usize::from(tri.edge_classes()[e].tail == v);
    annulus_curves_kept(enc, &out, shift, m)?;
    Ok(out)
}

/// A tongue may merge curves of a tetrahedron, but not an annulus curve with
/// another curve: the annulus of the lighter surface could then not be
/// recovered from the heavier one. `shift` maps class indices of the lighter
/// surface to the heavier one.
fn annulus_curves_kept(
    light: &SurfaceEncoding,
    heavy: &SurfaceEncoding,
    shift: impl Fn(usize, usize) -> usize,
    m: &Move,
) -> Res<()> {
    let tri = light.triangulation();
    for t in 0..tri.tet_count() {
        if light.annuli(t).is_empty() {
            continue;
        }
        let (lb, hb) = (light.boundary(t), heavy.boundary(t));
        let image = |p: PointRef| {
            let e = tri.tet_edge_class(t, p.edge as usize);
            let ci = shift(e, light.class_index(t, p));
            hb.curve_containing(heavy.point_ref(t, p.edge as usize, ci))
                .expect("point exists")
        };
        for p in light.annuli(t).iter().flatten() {
            let target = image(*p);
            let own = lb.curve_containing(*p).expect("point exists");
            for (c, curve) in lb.curves().iter().enumerate() {
                if c != own && image(curve.least_point()) == target {
                    return Err(MoveError::new(m, "tongue would merge an annulus curve"));
                }
            }
        }
    }
    Ok(())
}

/// Moves annulus points that are about to be deleted to the least surviving
/// point of the same curve.
pub(super) fn remap_annuli(
    enc: &SurfaceEncoding,
    d: &mut Draft,
    removed: &[(usize, usize)],
    m: &Move,
) -> Res<()> {
    let tri = enc.triangulation();
    for t in 0..tri.tet_count() {
        if d.annuli(t).is_empty() {
            continue;
        }
        let boundary = enc.boundary(t);
        let gone = |p: PointRef| {
            let e = tri.tet_edge_class(t, p.edge as usize);
            removed.contains(&(e, enc.class_index(t, p)))
        };
        for i in 0..d.annuli(t).len() {
            for j in 0..2 {
                let p = d.point_ref(t, d.annuli(t)[i][j]);
                if !gone(p) {
                    continue;
                }
                let c = boundary.curve_containing(p).expect("annulus point exists");
                let Some(&keep) = boundary.curves()[c].points.iter().find(|&&q| !gone(q)) else {
                    return Err(MoveError::new(m, "annulus curve would disappear"));
                };
                let keep = d.tet_pt(t, keep);
                d.annuli_mut(t)[i][j] = keep;
            }
        }
    }
    Ok(())
}

/// Points at the ends of the edge classes at `v`, nearest `v`.
pub(super) fn vertex_ends(enc: &SurfaceEncoding, v: usize) -> Option<Vec<(usize, usize)>> {
    let mut removed = Vec::new();
    for (e, class) in enc.triangulation().edge_classes().iter().enumerate() {
        let n = enc.edge_count(e);
        let need = usize::from(class.tail == v) + usize::from(class.head == v);
        if n < need {
            return None;
        }
        if class.tail == v {
            removed.push((e, 0));
        }
        if class.head == v {
            removed.push((e, n - 1));
        }
    }
    Some(removed)
}

fn vertex_contract(enc: &SurfaceEncoding, m: &Move) -> Res<Draft> {
    let (v, tau, k, _) = vertex_location(enc.triangulation(), m)?;
    let removed =
        vertex_ends(enc, v).ok_or_else(|| MoveError::new(m, "missing points at the vertex"))?;
    let mut d = Draft::from_encoding(enc);
    let joins = [(tau, d.corner_points(tau, k))];
    remap_annuli(enc, &mut d, &removed, m)?;
    d.contract(&removed, &joins)
        .map_err(|_| MoveError::new(m, "no tongue at the vertex"))?;
    Ok(d)
}

/// For a backward move: the arc of the lighter surface obtained by splicing the
/// arcs at the join `q` in `face`, in the lighter surface's positions.
pub(super) fn spliced_arc(
    enc: &SurfaceEncoding,
    removed: &[(usize, usize)],
    face: usize,
    q: [SidePt; 2],
) -> Option<(usize, usize)> {
    let mut d = Draft::from_encoding(enc);
    let gone = |d: &Draft, p: SidePt| removed.contains(&(d.edge_of(face, p), p.idx));
    let x = d.partner(face, q[0])?;
    let y = d.partner(face, q[1])?;
    if gone(&d, x) || gone(&d, y) {
        return None;
    }
    for t in 0..enc.triangulation().tet_count() {
        d.annuli_mut(t).clear();
    }
    let shift = |d: &Draft, p: SidePt| {
        let e = d.edge_of(face, p);
        let below = removed
            .iter()
            .filter(|&&(f, i)| f == e && i < p.idx)
            .count();
        SidePt {
            side: p.side,
            idx: p.idx - below,
        }
    };
    let (x, y) = (shift(&d, x), shift(&d, y));
    d.contract(removed, &[(face, q)]).ok()?;
    let (a, b) = (d.position(face, x), d.position(face, y));
    Some((a.min(b), a.max(b)))
}

fn edge_location(
    tri: &Triangulation,
    m: &Move,
) -> Res<(usize, usize, usize, usize, (usize, usize))> {
    let Move::Edge {
        edge,
        gap,
        face,
        side,
        arc,
        ..
    } = *m
    else {
        unreachable!()
    };
    if edge >= tri.edge_count() || face >= tri.face_count() {
        return Err(MoveError::new(m, "no such edge or face"));
    }
    if tri.face_classes()[face].sides[side as usize].edge != edge {
        return Err(MoveError::new(m, "face side is not on the edge"));
    }
    Ok((edge, gap, face, side as usize, arc))
}

fn edge_forward(enc: &SurfaceEncoding, m: &Move) -> Res<SurfaceEncoding> {
    let tri = enc.triangulation().clone();
    let (e, i, tau, s, (a, b)) = edge_location(&tri, m)?;
    let n = enc.edge_count(e);
    if i > n {
        return Err(MoveError::new(m, "no such gap"));
    }
    let arcs = face_arc(enc, m, tau, (a, b))?;
    let side = tri.face_classes()[tau].sides[s];
    let pos = |ci: usize| arcs.side_offset(s) + if side.forward { ci } else { n - 1 - ci };
    let gap = if 0 < i && i < n {
        pos(i - 1).min(pos(i))
    } else {
        let at_start = (i == 0) == side.forward;
        let corner = if at_start { s } else { (s + 1) % 3 };
        arcs.corner_gap(corner).expect("face has points")
    };
    let (gaps, _) = arcs.gap_regions();
    if gaps[gap] != gaps[a] && gaps[gap] != gaps[b] {
        return Err(MoveError::new(
            m,
            "arc does not bound the region at the gap",
        ));
    }
    let mut d = Draft::from_encoding(enc);
    let (sa, sb) = (d.side_pt(tau, a), d.side_pt(tau, b));
    d.remove_arc(tau, sa);
    let shift = |d: &Draft, p: SidePt| SidePt {
        side: p.side,
        idx: if d.edge_of(tau, p) == e && p.idx >= i {
            p.idx + 2
        } else {
            p.idx
        },
    };
    let (sa, sb) = (shift(&d, sa), shift(&d, sb));
    d.insert_points(e, i, 2);
    for &(f, s2) in &tri.edge_classes()[e].face_sides {
        let p = SidePt {
            side: s2 as u8,
            idx: i,
        };
        let q = SidePt {
            side: s2 as u8,
            idx: i + 1,
        };
        if (f, s2) == (tau, s) {
            let ordered = if d.position(f, p) < d.position(f, q) {
                [p, q]
            } else {
                [q, p]
            };
            reroute(&mut d, f, ordered, sa, sb);
        } else {
            d.add_arc(f, [p, q]);
        }
    }
    let out = build(&d, m)?;
    let shift = |e2: usize, ci: usize| if e2 == e && ci >= i { ci + 2 } else { ci };
    annulus_curves_kept(enc, &out, shift, m)?;
    Ok(out)
}

/// The two points of a pair on one side, in cyclic order.
pub(super) fn side_pair(d: &Draft, face: usize, side: usize, i: usize) -> [SidePt; 2] {
    let p = SidePt {
        side: side as u8,
        idx: i,
    };
    let q = SidePt {
        side: side as u8,
        idx: i + 1,
    };
    if d.position(face, p) < d.position(face, q) {
        [p, q]
    } else {
        [q, p]
    }
}

fn edge_contract(enc: &SurfaceEncoding, m: &Move) -> Res<Draft> {
    let (e, i, tau, s, _) = edge_location(enc.triangulation(), m)?;
    if i + 2 > enc.edge_count(e) {
        return Err(MoveError::new(m, "no such pair of points"));
    }
    let removed = [(e, i), (e, i + 1)];
    let mut d = Draft::from_encoding(enc);
    let joins = [(tau, side_pair(&d, tau, s, i))];
    remap_annuli(enc, &mut d, &removed, m)?;
    d.contract(&removed, &joins)
        .map_err(|_| MoveError::new(m, "no tongue across the edge"))?;
    Ok(d)
}

/// The other pairing of the four endpoints of two non-crossing arcs.
pub(super) fn exchanged([(a, b), (c, d)]: [(usize, usize); 2]) -> [(usize, usize); 2] {
    let mut q = [a, b, c, d];
    q.sort_unstable();
    let nested = (a, b) == (q[0], q[3]) || (c, d) == (q[0], q[3]);
    if nested {
        [(q[0], q[1]), (q[2], q[3])]
    } else {
        [(q[0], q[3]), (q[1], q[2])]
    }
}

fn face_move(enc: &SurfaceEncoding, m: &Move) -> Res<SurfaceEncoding> {
    let Move::Face {
        prime,
        face,
        arcs: [alpha, beta],
        annulus_sides,
    } = *m
    else {
        unreachable!()
    };
    let tri = enc.triangulation();
    face_arc(enc, m, face, alpha)?;
    let arcs = face_arc(enc, m, face, beta)?;
    if alpha == beta {
        return Err(MoveError::new(m, "arcs coincide"));
    }
    let (gaps, _) = arcs.gap_regions();
    let ra = [gaps[alpha.0], gaps[alpha.1]];
    if !ra.contains(&gaps[beta.0]) && !ra.contains(&gaps[beta.1]) {
        return Err(MoveError::new(m, "arcs do not bound a common region"));
    }
    let incidences = tri.face_classes()[face].incidences;
    if incidences[0].0 == incidences[1].0 {
        return Err(MoveError::new(m, "face is glued to its own tetrahedron"));
    }
    let new_arcs = exchanged([alpha, beta]);
    let mut annuli: Vec<Vec<[PointRef; 2]>> = (0..tri.tet_count())
        .map(|t| enc.annuli(t).to_vec())
        .collect();
    let mut delta = 0i64;
    let mut same = [false; 2];
    for (i, &(t, f)) in incidences.iter().enumerate() {
        let boundary = enc.boundary(t);
        let (ca, cb) = (boundary.curve_at(f, alpha.0), boundary.curve_at(f, beta.0));
        let pair: Vec<usize> = match enc.annuli(t) {
            [] => Vec::new(),
            [[p, q]] => vec![
                boundary.curve_containing(*p).expect("point exists"),
                boundary.curve_containing(*q).expect("point exists"),
            ],
            _ => return Err(MoveError::new(m, "tetrahedron has several annuli")),
        };
        same[i] = ca == cb;
        let annulus = annulus_sides >> i & 1 == 1;
        match (same[i], annulus) {
            (true, false) => {
                if pair.contains(&ca) {
                    return Err(MoveError::new(m, "arcs lie on an annulus curve"));
                }
                delta += 1;
            }
            (true, true) => {
                if !pair.is_empty() {
                    return Err(MoveError::new(m, "tetrahedron already has an annulus"));
                }
                delta -= 1;
                annuli[t] = vec![[
                    boundary.point_at(f, new_arcs[0].0),
                    boundary.point_at(f, new_arcs[1].0),
                ]];
            }
            (false, false) => {
                if pair.contains(&ca) || pair.contains(&cb) {
                    return Err(MoveError::new(m, "arcs lie on an annulus curve"));
                }
                delta -= 1;
            }
            (false, true) => {
                if !(pair.contains(&ca) && pair.contains(&cb)) {
                    return Err(MoveError::new(m, "arcs are not on the annulus curves"));
                }
                delta += 1;
                annuli[t].clear();
            }
        }
    }
    if delta != 0 {
        return Err(MoveError::new(m, "Euler characteristic would change"));
    }
    if prime != (same[0] != same[1]) {
        return Err(MoveError::new(m, "wrong face move kind"));
    }
    let mut partner = arcs.partners().to_vec();
    for (x, y) in new_arcs {
        partner[x] = y;
        partner[y] = x;
    }
    let mut faces = enc.faces().to_vec();
    faces[face] = ArcSystem::new(face, arcs.side_counts(), partner).expect("same points");
    SurfaceEncoding::from_parts(tri.clone(), enc.counts().to_vec(), faces, annuli)
        .map_err(|_| MoveError::new(m, "result is malformed"))
}

fn pinch_location<'a>(
    enc: &SurfaceEncoding,
    m: &Move,
    catalog: &'a SphereCatalog,
) -> Res<(usize, PointRef, &'a super::CatalogSphere, PointRef)> {
    let Move::Pinch {
        tet,
        curve,
        sphere,
        sphere_curve,
        ..
    } = *m
    else {
        unreachable!()
    };
    let sphere = catalog
        .get(sphere)
        .ok_or_else(|| MoveError::new(m, "no such catalog sphere"))?;
    if tet >= enc.triangulation().tet_count() {
        return Err(MoveError::new(m, "no such tetrahedron"));
    }
    Ok((tet, curve, sphere, sphere_curve))
}

/// Whether `p` is the least point of a curve on the boundary of `tet`.
fn names_curve(enc: &SurfaceEncoding, tet: usize, p: PointRef) -> bool {
    let l = p.edge as usize;
    if l >= 6 || p.idx >= enc.edge_count(enc.triangulation().tet_edge_class(tet, l)) {
        return false;
    }
    let boundary = enc.boundary(tet);
    let c = boundary.curve_containing(p).expect("point exists");
    boundary.curves()[c].least_point() == p
}

fn pinch(enc: &SurfaceEncoding, m: &Move, catalog: &SphereCatalog) -> Res<SurfaceEncoding> {
    let (sigma, c1, sphere, c2) = pinch_location(enc, m, catalog)?;
    if !enc.annuli(sigma).is_empty() {
        return Err(MoveError::new(m, "tetrahedron already has an annulus"));
    }
    if !names_curve(enc, sigma, c1) || !names_curve(sphere.encoding(), sigma, c2) {
        return Err(MoveError::new(m, "no such curve"));
    }
    let tri = enc.triangulation();
    let mut d = Draft::from_encoding(enc);
    let ds = Draft::from_encoding(sphere.encoding());
    let c1 = d.tet_pt(sigma, c1);
    let c2 = ds.tet_pt(sigma, c2);
    let base: Vec<usize> = enc.counts().to_vec();
    for e in 0..tri.edge_count() {
        d.insert_points(e, 0, sphere.tail_count(e));
        let n = d.count(e);
        d.insert_points(e, n, sphere.head_count(e));
    }
    let place = |e: usize, j: usize| {
        if j < sphere.tail_count(e) {
            j
        } else {
            j + base[e]
        }
    };
    for f in 0..tri.face_count() {
        for &[p, q] in ds.arcs(f) {
            let map = |p: SidePt| SidePt {
                side: p.side,
                idx: place(ds.edge_of(f, p), p.idx),
            };
            d.add_arc(f, [map(p), map(q)]);
        }
    }
    let e1 = tri.tet_edge_class(sigma, c1.edge as usize);
    let e2 = tri.tet_edge_class(sigma, c2.edge as usize);
    let mut c1 = c1;
    c1.idx += sphere.tail_count(e1);
    let mut c2 = c2;
    c2.idx = place(e2, c2.idx);
    d.annuli_mut(sigma).push([c1, c2]);
    build(&d, m)
}

/// Points a catalog sphere occupies in a surface that contains it.
pub(super) fn sphere_points(
    enc: &SurfaceEncoding,
    sphere: &super::CatalogSphere,
) -> Option<Vec<(usize, usize)>> {
    let mut removed = Vec::new();
    for e in 0..enc.triangulation().edge_count() {
        let n = enc.edge_count(e);
        let (tail, head) = (sphere.tail_count(e), sphere.head_count(e));
        if n < tail + head {
            return None;
        }
        removed.extend((0..tail).map(|i| (e, i)));
        removed.extend((n - head..n).map(|i| (e, i)));
    }
    Some(removed)
}

fn unpinch_contract(enc: &SurfaceEncoding, m: &Move, catalog: &SphereCatalog) -> Res<Draft> {
    let (sigma, _, sphere, _) = pinch_location(enc, m, catalog)?;
    if enc.annuli(sigma).len() != 1 {
        return Err(MoveError::new(m, "tetrahedron has no annulus"));
    }
    let removed =
        sphere_points(enc, sphere).ok_or_else(|| MoveError::new(m, "sphere is not present"))?;
    let mut d = Draft::from_encoding(enc);
    d.annuli_mut(sigma).clear();
    remap_annuli(enc, &mut d, &removed, m)?;
    d.contract(&removed, &[])
        .map_err(|_| MoveError::new(m, "sphere is not a separate sheet"))?;
    Ok(d)
}

/// Cells of the triangulation: tetrahedra, face classes, edge classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cells {
    pub tets: BTreeSet<usize>,
    pub faces: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
}

impl Cells {
    pub fn is_subset(&self, other: &Cells) -> bool {
        self.tets.is_subset(&other.tets)
            && self.faces.is_subset(&other.faces)
            && self.edges.is_subset(&other.edges)
    }

    fn add_edge_star(&mut self, tri: &Triangulation, e: usize) {
        self.edges.insert(e);
        let class = &tri.edge_classes()[e];
        self.faces.extend(class.face_sides.iter().map(|&(f, _)| f));
        self.tets.extend(class.members.iter().map(|&(t, _)| t));
    }
}

/// Cells whose data a move may touch: the star of its location simplex; for
/// pinches also the cells met by the added sphere.
pub fn support(m: &Move, tri: &Triangulation, catalog: &SphereCatalog) -> Cells {
    let mut cells = Cells::default();
    match *m {
        Move::Vertex { vertex, .. } => {
            for (e, class) in tri.edge_classes().iter().enumerate() {
                if class.tail == vertex || class.head == vertex {
                    cells.add_edge_star(tri, e);
                }
            }
        }
        Move::Edge { edge, .. } => cells.add_edge_star(tri, edge),
        Move::Face { face, .. } => {
            cells.faces.insert(face);
            cells
                .tets
                .extend(tri.face_classes()[face].incidences.iter().map(|&(t, _)| t));
        }
        Move::Pinch { tet, sphere, .. } => {
            cells.tets.insert(tet);
            if let Some(s) = catalog.get(sphere) {
                for e in 0..tri.edge_count() {
                    if s.encoding().edge_count(e) > 0 {
                        cells.add_edge_star(tri, e);
                    }
                }
            }
        }
    }
    cells
}

/// Cells whose encoding data differ between two surfaces.
pub fn changed_cells(a: &SurfaceEncoding, b: &SurfaceEncoding) -> Cells {
    let tri = a.triangulation();
    Cells {
        edges: (0..tri.edge_count())
            .filter(|&e| a.edge_count(e) != b.edge_count(e))
            .collect(),
        faces: (0..tri.face_count())
            .filter(|&f| a.face(f) != b.face(f))
            .collect(),
        tets: (0..tri.tet_count())
            .filter(|&t| a.annuli(t) != b.annuli(t))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::moves::{neighbors, MoveKind, MoveSet};
    use crate::surface::{Classification, Violation};

    fn link() -> (SurfaceEncoding, SphereCatalog) {
        let tri = Arc::new(Triangulation::parse(include_str!("../../data/s3_2tet.tri")).unwrap());
        let catalog = SphereCatalog::vertex_links(&tri);
        (SurfaceEncoding::vertex_link(tri, 0).unwrap(), catalog)
    }

    fn only(kind: MoveKind) -> MoveSet {
        let mut set = MoveSet::empty();
        set.insert(kind);
        set
    }

    #[test]
    fn edge_tongue_adds_two_points() {
        let (link, catalog) = link();
        let found = neighbors(&link, 8, &only(MoveKind::E1), &catalog);
        assert!(!found.moves.is_empty());
        for n in &found.moves {
            assert!(n.mv.is_forward());
            assert_eq!(n.encoding.weight(), 8);
            assert_eq!(n.encoding.euler_characteristic(), 2);
            assert_eq!(n.encoding.components(), 1);
            let back = apply(&n.encoding, &n.mv.inverse(), &catalog).unwrap();
            assert_eq!(back.canonical_key(), link.canonical_key());
        }
    }

    #[test]
    fn vertex_tongue_round_trip() {
        let (link, catalog) = link();
        let found = neighbors(&link, 12, &only(MoveKind::V0), &catalog);
        assert!(!found.moves.is_empty());
        for n in &found.moves {
            let heavy = &n.encoding;
            assert_eq!(heavy.weight(), 12);
            assert_eq!(heavy.euler_characteristic(), 2);
            assert_eq!(heavy.components(), 1);
            assert_eq!(heavy.genus(), 0);
            let back = apply(heavy, &n.mv.inverse(), &catalog).unwrap();
            assert_eq!(back.weight(), 6);
            assert_eq!(back.canonical_key(), link.canonical_key());
        }
    }

    #[test]
    fn pinch_with_vertex_link() {
        let (link, catalog) = link();
        let found = neighbors(&link, 12, &only(MoveKind::Pinch), &catalog);
        assert!(!found.moves.is_empty());
        for n in &found.moves {
            let s = n.encoding.summary();
            assert_eq!(s.classification, Classification::CrudelyAlmostNormal);
            assert_eq!(n.encoding.weight(), 12);
            assert_eq!(s.euler_characteristic, 2);
            assert_eq!(s.components, 1);
            let back = apply(&n.encoding, &n.mv.inverse(), &catalog).unwrap();
            assert_eq!(back.canonical_key(), link.canonical_key());
        }
    }

    #[test]
    fn pinch_across_a_separating_curve_fails() {
        let (link, catalog) = link();
        let own = link.boundary(0);
        let theirs = catalog.get(0).unwrap().encoding().boundary(0);
        let mut separated = 0;
        for c1 in own.curves() {
            for c2 in theirs.curves() {
                let m = Move::Pinch {
                    forward: true,
                    tet: 0,
                    curve: c1.least_point(),
                    sphere: 0,
                    sphere_curve: c2.least_point(),
                };
                let out = rewrite(&link, &m, &catalog).unwrap();
                if out.validate()
                    == Classification::Invalid(Violation::AnnulusSeparation { tet: 0 })
                {
                    separated += 1;
                    assert!(apply(&link, &m, &catalog).is_err());
                }
            }
        }
        assert!(separated > 0);
    }

    #[test]
    fn pinch_needs_a_free_tetrahedron() {
        let (link, catalog) = link();
        let n = neighbors(&link, 12, &only(MoveKind::Pinch), &catalog)
            .moves
            .remove(0);
        let Move::Pinch { tet, .. } = n.mv else {
            unreachable!()
        };
        let again = Move::Pinch {
            forward: true,
            tet,
            curve: n.encoding.boundary(tet).curves()[0].least_point(),
            sphere: 0,
            sphere_curve: PointRef { edge: 0, idx: 0 },
        };
        assert!(apply(&n.encoding, &again, &catalog).is_err());
    }

    #[test]
    fn face_move_merges_curves() {
        let (link, catalog) = link();
        let mut set = only(MoveKind::E1);
        set.insert(MoveKind::F2Prime);
        let light = neighbors(&link, 8, &only(MoveKind::E1), &catalog)
            .moves
            .remove(0)
            .encoding;
        let moved: Vec<_> = neighbors(&light, 8, &set, &catalog)
            .moves
            .into_iter()
            .filter(|n| n.mv.kind() == MoveKind::F2Prime)
            .collect();
        assert!(!moved.is_empty());
        for n in moved {
            assert_eq!(n.encoding.weight(), 8);
            assert_eq!(n.encoding.euler_characteristic(), 2);
            let Move::Face { face, .. } = n.mv else {
                unreachable!()
            };
            let tets: Vec<usize> = light.triangulation().face_classes()[face]
                .incidences
                .iter()
                .map(|&(t, _)| t)
                .collect();
            let curves = |e: &SurfaceEncoding| {
                tets.iter()
                    .map(|&t| e.boundary(t).curves().len() as i64)
                    .collect::<Vec<_>>()
            };
            let (a, b) = (curves(&light), curves(&n.encoding));
            // one side merges two curves, the other splits one
            let mut change: Vec<i64> = a.iter().zip(&b).map(|(x, y)| y - x).collect();
            change.sort();
            assert_eq!(change, vec![-1, 1]);
            let back = apply(&n.encoding, &n.mv.inverse(), &catalog).unwrap();
            assert_eq!(back.canonical_key(), light.canonical_key());
        }
    }

    #[test]
    fn moves_stay_in_their_support() {
        let (link, catalog) = link();
        let mut frontier = vec![link];
        for _ in 0..2 {
            let mut next = Vec::new();
            for enc in &frontier {
                for n in neighbors(enc, 12, &MoveSet::all(), &catalog).moves {
                    let cells = changed_cells(enc, &n.encoding);
                    let allowed = support(&n.mv, enc.triangulation(), &catalog);
                    assert!(cells.is_subset(&allowed), "{}", n.mv);
                    next.push(n.encoding);
                }
            }
            next.truncate(40);
            frontier = next;
        }
    }
}
