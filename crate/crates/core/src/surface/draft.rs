//! Mutable editing form of an encoding, with points addressed by edge-class index
//! so that inserting or deleting points only shifts indices on one edge class.

use std::collections::HashMap;
use std::sync::Arc;

use super::{ArcSystem, PointRef, SurfaceEncoding, SurfaceError};
use crate::triangulation::Triangulation;

/// A point on a side of a face class, by its index along the edge class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SidePt {
    pub side: u8,
    pub idx: usize,
}

/// A point on a local edge of a tetrahedron, by its index along the edge class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TetPt {
    pub edge: u8,
    pub idx: usize,
}

#[derive(Clone, Debug)]
pub struct Draft {
    tri: Arc<Triangulation>,
    counts: Vec<usize>,
    arcs: Vec<Vec<[SidePt; 2]>>,
    annuli: Vec<Vec<[TetPt; 2]>>,
}

impl Draft {
    pub fn new(tri: Arc<Triangulation>) -> Self {
        Self {
            counts: vec![0; tri.edge_count()],
            arcs: vec![Vec::new(); tri.face_count()],
            annuli: vec![Vec::new(); tri.tet_count()],
            tri,
        }
    }

    pub fn from_encoding(enc: &SurfaceEncoding) -> Self {
        let mut draft = Self::new(enc.triangulation().clone());
        draft.counts = enc.counts().to_vec();
        for f in 0..draft.arcs.len() {
            let arcs: Vec<[SidePt; 2]> = enc
                .face(f)
                .arcs()
                .map(|(a, b)| [draft.side_pt(f, a), draft.side_pt(f, b)])
                .collect();
            draft.arcs[f] = arcs;
        }
        for t in 0..draft.annuli.len() {
            draft.annuli[t] = enc
                .annuli(t)
                .iter()
                .map(|&[a, b]| [draft.tet_pt(t, a), draft.tet_pt(t, b)])
                .collect();
        }
        draft
    }

    pub fn triangulation(&self) -> &Arc<Triangulation> {
        &self.tri
    }

    pub fn count(&self, edge: usize) -> usize {
        self.counts[edge]
    }

    fn side_edge(&self, face: usize, side: u8) -> usize {
        self.tri.face_classes()[face].sides[side as usize].edge
    }

    fn side_forward(&self, face: usize, side: u8) -> bool {
        self.tri.face_classes()[face].sides[side as usize].forward
    }

    /// Number of points on a face class under the current counts.
    pub fn face_len(&self, face: usize) -> usize {
        (0..3u8).map(|s| self.counts[self.side_edge(face, s)]).sum()
    }

    /// Edge class under a side of a face class.
    pub fn edge_of(&self, face: usize, p: SidePt) -> usize {
        self.side_edge(face, p.side)
    }

    /// Side point at cyclic position `pos` of a face, under the current counts.
    pub fn side_pt(&self, face: usize, pos: usize) -> SidePt {
        let mut rest = pos;
        for s in 0..3u8 {
            let n = self.counts[self.side_edge(face, s)];
            if rest < n {
                let idx = if self.side_forward(face, s) {
                    rest
                } else {
                    n - 1 - rest
                };
                return SidePt { side: s, idx };
            }
            rest -= n;
        }
        panic!("position {pos} out of range on face {face}");
    }

    /// Cyclic position of a side point under the current counts.
    pub fn position(&self, face: usize, p: SidePt) -> usize {
        let offset: usize = (0..p.side)
            .map(|s| self.counts[self.side_edge(face, s)])
            .sum();
        let n = self.counts[self.side_edge(face, p.side)];
        offset
            + if self.side_forward(face, p.side) {
                p.idx
            } else {
                n - 1 - p.idx
            }
    }

    /// The last point of the side ending at `corner` and the first point of the side
    /// starting there: the two points nearest the corner.
    pub fn corner_points(&self, face: usize, corner: usize) -> [SidePt; 2] {
        let before = ((corner + 2) % 3) as u8;
        let after = corner as u8;
        let last = |s: u8| {
            let n = self.counts[self.side_edge(face, s)];
            if self.side_forward(face, s) {
                n - 1
            } else {
                0
            }
        };
        let first = |s: u8| {
            let n = self.counts[self.side_edge(face, s)];
            if self.side_forward(face, s) {
                0
            } else {
                n - 1
            }
        };
        [
            SidePt {
                side: before,
                idx: last(before),
            },
            SidePt {
                side: after,
                idx: first(after),
            },
        ]
    }

    pub fn tet_pt(&self, tet: usize, p: PointRef) -> TetPt {
        let l = p.edge as usize;
        let n = self.counts[self.tri.tet_edge_class(tet, l)];
        let idx = if self.tri.tet_edge_agrees(tet, l) {
            p.idx
        } else {
            n - 1 - p.idx
        };
        TetPt { edge: p.edge, idx }
    }

    pub fn point_ref(&self, tet: usize, p: TetPt) -> PointRef {
        let l = p.edge as usize;
        let n = self.counts[self.tri.tet_edge_class(tet, l)];
        let idx = if self.tri.tet_edge_agrees(tet, l) {
            p.idx
        } else {
            n - 1 - p.idx
        };
        PointRef { edge: p.edge, idx }
    }

    /// Inserts `k` unattached points on edge class `edge` before class index `at`.
    pub fn insert_points(&mut self, edge: usize, at: usize, k: usize) {
        self.counts[edge] += k;
        for f in 0..self.arcs.len() {
            let sides: [bool; 3] = std::array::from_fn(|s| self.side_edge(f, s as u8) == edge);
            for arc in &mut self.arcs[f] {
                for p in arc.iter_mut() {
                    if sides[p.side as usize] && p.idx >= at {
                        p.idx += k;
                    }
                }
            }
        }
        for t in 0..self.annuli.len() {
            let on: [bool; 6] = std::array::from_fn(|l| self.tri.tet_edge_class(t, l) == edge);
            for pair in &mut self.annuli[t] {
                for p in pair.iter_mut() {
                    if on[p.edge as usize] && p.idx >= at {
                        p.idx += k;
                    }
                }
            }
        }
    }

    pub fn add_arc(&mut self, face: usize, arc: [SidePt; 2]) {
        self.arcs[face].push(arc);
    }

    pub fn arcs(&self, face: usize) -> &[[SidePt; 2]] {
        &self.arcs[face]
    }

    pub fn partner(&self, face: usize, p: SidePt) -> Option<SidePt> {
        self.arcs[face].iter().find_map(|&[a, b]| {
            if a == p {
                Some(b)
            } else if b == p {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Removes the arc ending at `p`, returning its other end.
    pub fn remove_arc(&mut self, face: usize, p: SidePt) -> Option<SidePt> {
        let i = self.arcs[face].iter().position(|arc| arc.contains(&p))?;
        let [a, b] = self.arcs[face].swap_remove(i);
        Some(if a == p { b } else { a })
    }

    pub fn annuli(&self, tet: usize) -> &[[TetPt; 2]] {
        &self.annuli[tet]
    }

    pub fn annuli_mut(&mut self, tet: usize) -> &mut Vec<[TetPt; 2]> {
        &mut self.annuli[tet]
    }

    /// Deletes the points `removed` (edge class, class index). Arcs through deleted
    /// points are spliced: following an arc into a deleted point continues along its
    /// `join` partner (if any) and the next arc, until a surviving point is reached.
    /// Closed chains of deleted points disappear. Fails if a chain dead-ends at a
    /// deleted point or an annulus refers to one.
    pub fn contract(
        &mut self,
        removed: &[(usize, usize)],
        joins: &[(usize, [SidePt; 2])],
    ) -> Result<(), ContractError> {
        let mut gone: Vec<Vec<usize>> = vec![Vec::new(); self.counts.len()];
        for &(e, i) in removed {
            if i >= self.counts[e] {
                return Err(ContractError);
            }
            gone[e].push(i);
        }
        for list in &mut gone {
            list.sort_unstable();
            list.dedup();
        }
        for f in 0..self.arcs.len() {
            let is_gone = |p: SidePt| {
                gone[self.side_edge(f, p.side)]
                    .binary_search(&p.idx)
                    .is_ok()
            };
            let mut real: HashMap<SidePt, SidePt> = HashMap::new();
            for &[a, b] in &self.arcs[f] {
                real.insert(a, b);
                real.insert(b, a);
            }
            let mut join: HashMap<SidePt, SidePt> = HashMap::new();
            for &(face, [a, b]) in joins {
                if face == f {
                    if !is_gone(a) || !is_gone(b) {
                        return Err(ContractError);
                    }
                    join.insert(a, b);
                    join.insert(b, a);
                }
            }
            let mut done: std::collections::HashSet<SidePt> = Default::default();
            let mut arcs = Vec::new();
            let mut starts: Vec<SidePt> = real.keys().copied().filter(|&p| !is_gone(p)).collect();
            starts.sort();
            for p in starts {
                if done.contains(&p) {
                    continue;
                }
                done.insert(p);
                let mut cur = p;
                loop {
                    let q = real[&cur];
                    if !is_gone(q) {
                        if !done.insert(q) && q != p {
                            return Err(ContractError);
                        }
                        arcs.push([p, q]);
                        break;
                    }
                    let Some(&j) = join.get(&q) else {
                        return Err(ContractError);
                    };
                    if j == p || !done.insert(j) {
                        return Err(ContractError);
                    }
                    cur = j;
                }
            }
            self.arcs[f] = arcs;
        }
        for t in 0..self.annuli.len() {
            for pair in &self.annuli[t] {
                for p in pair {
                    let e = self.tri.tet_edge_class(t, p.edge as usize);
                    if gone[e].binary_search(&p.idx).is_ok() {
                        return Err(ContractError);
                    }
                }
            }
        }
        let shift = |e: usize, idx: usize| idx - gone[e].partition_point(|&g| g < idx);
        for f in 0..self.arcs.len() {
            let edges: [usize; 3] = std::array::from_fn(|s| self.side_edge(f, s as u8));
            for arc in &mut self.arcs[f] {
                for p in arc.iter_mut() {
                    p.idx = shift(edges[p.side as usize], p.idx);
                }
            }
        }
        for t in 0..self.annuli.len() {
            let edges: [usize; 6] = std::array::from_fn(|l| self.tri.tet_edge_class(t, l));
            for pair in &mut self.annuli[t] {
                for p in pair.iter_mut() {
                    p.idx = shift(edges[p.edge as usize], p.idx);
                }
            }
        }
        for (e, list) in gone.iter().enumerate() {
            self.counts[e] -= list.len();
        }
        Ok(())
    }

    pub fn build(&self) -> Result<SurfaceEncoding, SurfaceError> {
        let mut faces = Vec::with_capacity(self.arcs.len());
        for (f, arcs) in self.arcs.iter().enumerate() {
            let side_counts: [usize; 3] =
                std::array::from_fn(|s| self.counts[self.side_edge(f, s as u8)]);
            let n: usize = side_counts.iter().sum();
            let mut partner = vec![usize::MAX; n];
            for &[a, b] in arcs {
                let in_range = |p: SidePt| p.idx < side_counts[p.side as usize];
                if !in_range(a) || !in_range(b) {
                    return Err(SurfaceError::Arcs(super::ArcError::NotInvolution {
                        face: f,
                        pos: n,
                    }));
                }
                let (pa, pb) = (self.position(f, a), self.position(f, b));
                if partner[pa] != usize::MAX || partner[pb] != usize::MAX {
                    return Err(SurfaceError::Arcs(super::ArcError::NotInvolution {
                        face: f,
                        pos: pa,
                    }));
                }
                partner[pa] = pb;
                partner[pb] = pa;
            }
            faces.push(ArcSystem::new(f, side_counts, partner)?);
        }
        let annuli = (0..self.annuli.len())
            .map(|t| {
                self.annuli[t]
                    .iter()
                    .map(|&[a, b]| [self.point_ref(t, a), self.point_ref(t, b)])
                    .collect()
            })
            .collect();
        SurfaceEncoding::from_parts(self.tri.clone(), self.counts.clone(), faces, annuli)
    }
}

/// A contraction met a deleted point it could not splice through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContractError;
