//! Boundary curves of a surface on the 2-sphere boundary of one tetrahedron.

use std::cell::OnceCell;

use super::{PointRef, SurfaceEncoding};
use crate::triangulation::{faces_of_edge, TET_EDGES};

/// Curves on `∂σ` for one tetrahedron `σ`; regions of `∂σ` minus the curves are
/// computed on first use.
#[derive(Clone, Debug)]
pub struct TetBoundary {
    tet: usize,
    counts: [usize; 6],
    /// `pos_ref[f][p]`: the point occurrence at cyclic position `p` of local face `f`.
    pos_ref: [Vec<PointRef>; 4],
    /// Curve through each point, indexed `edge_base[l] + j`.
    curve_of: Vec<usize>,
    edge_base: [usize; 6],
    curves: Vec<Curve>,
    regions: OnceCell<Regions>,
    /// Region-building input: per local face, the gap regions of its arc system
    /// and the gap containing each of its corners (by local vertex).
    faces: [FaceView; 4],
}

#[derive(Clone, Debug)]
struct FaceView {
    gaps: Vec<usize>,
    region_count: usize,
    corner_gap: [Option<usize>; 4],
    /// `(offset, flip)` per local edge on this face: local index `j` sits at
    /// cyclic position `offset + j`, or `offset + n - 1 - j` when flipped.
    place: [Option<(usize, bool)>; 6],
}

#[derive(Clone, Debug)]
struct Regions {
    gap_region: [Vec<usize>; 4],
    empty_face_region: [usize; 4],
    corner_region: [usize; 4],
    count: usize,
    /// Regions each curve bounds, ascending.
    of_curve: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Curve {
    /// Points of the curve, ascending.
    pub points: Vec<PointRef>,
    /// `(local face, a, b)` with `a < b` cyclic positions of the face class.
    pub arcs: Vec<(usize, usize, usize)>,
}

impl Curve {
    pub fn least_point(&self) -> PointRef {
        self.points[0]
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

impl TetBoundary {
    pub fn new(enc: &SurfaceEncoding, tet: usize) -> Self {
        let tri = enc.triangulation();
        let counts: [usize; 6] =
            std::array::from_fn(|l| enc.edge_count(tri.tet_edge_class(tet, l)));
        let mut edge_base = [0usize; 6];
        for l in 1..6 {
            edge_base[l] = edge_base[l - 1] + counts[l - 1];
        }

        let faces: [FaceView; 4] = std::array::from_fn(|f| {
            let slot = tri.face_slot(tet, f);
            let arcs = enc.face(slot.class);
            let fc = &tri.face_classes()[slot.class];
            let mut place = [None; 6];
            for (l, [x, y]) in TET_EDGES.iter().copied().enumerate() {
                if x == f || y == f {
                    continue;
                }
                let (cx, cy) = (slot.corner_of[x] as usize, slot.corner_of[y] as usize);
                // the side runs x -> y when cy follows cx
                let (s, local_along_side) = if (cx + 1) % 3 == cy {
                    (cx, true)
                } else {
                    (cy, false)
                };
                let agrees = tri.tet_edge_agrees(tet, l);
                let forward = fc.sides[s].forward;
                debug_assert_eq!(fc.sides[s].edge, tri.tet_edge_class(tet, l));
                debug_assert_eq!(agrees == forward, local_along_side);
                place[l] = Some((arcs.side_offset(s), !local_along_side));
            }
            let (gaps, region_count) = arcs.gap_regions();
            let corner_gap = std::array::from_fn(|v| {
                let c = slot.corner_of[v];
                if c == u8::MAX {
                    None
                } else {
                    arcs.corner_gap(c as usize)
                }
            });
            FaceView {
                gaps,
                region_count,
                corner_gap,
                place,
            }
        });

        let pos_of = |f: usize, l: usize, j: usize| -> usize {
            let (offset, flip) = faces[f].place[l].expect("edge lies on face");
            offset + if flip { counts[l] - 1 - j } else { j }
        };

        let mut pos_ref: [Vec<PointRef>; 4] = Default::default();
        for (f, table) in pos_ref.iter_mut().enumerate() {
            let slot = tri.face_slot(tet, f);
            *table = vec![PointRef { edge: 0, idx: 0 }; enc.face(slot.class).len()];
            for l in 0..6 {
                if faces[f].place[l].is_none() {
                    continue;
                }
                for j in 0..counts[l] {
                    table[pos_of(f, l, j)] = PointRef {
                        edge: l as u8,
                        idx: j,
                    };
                }
            }
        }

        let total = edge_base[5] + counts[5];
        let mut curve_of = vec![usize::MAX; total];
        let mut curves = Vec::new();
        for l in 0..6 {
            for j in 0..counts[l] {
                if curve_of[edge_base[l] + j] != usize::MAX {
                    continue;
                }
                let id = curves.len();
                let start = PointRef {
                    edge: l as u8,
                    idx: j,
                };
                let mut points = Vec::new();
                let mut arcs = Vec::new();
                let mut at = start;
                let mut face = faces_of_edge(l)[0];
                loop {
                    curve_of[edge_base[at.edge as usize] + at.idx] = id;
                    points.push(at);
                    let slot = tri.face_slot(tet, face);
                    let p = pos_of(face, at.edge as usize, at.idx);
                    let q = enc.face(slot.class).partner(p);
                    arcs.push((face, p.min(q), p.max(q)));
                    let next = pos_ref[face][q];
                    let [fa, fb] = faces_of_edge(next.edge as usize);
                    face = if fa == face { fb } else { fa };
                    at = next;
                    if at == start {
                        break;
                    }
                }
                points.sort_unstable();
                curves.push(Curve { points, arcs });
            }
        }

        Self {
            tet,
            counts,
            pos_ref,
            curve_of,
            edge_base,
            curves,
            regions: OnceCell::new(),
            faces,
        }
    }

    fn regions(&self) -> &Regions {
        self.regions.get_or_init(|| self.build_regions())
    }

    fn build_regions(&self) -> Regions {
        let mut base = [0usize; 4];
        let mut total = 0;
        for f in 0..4 {
            base[f] = total;
            total += self.faces[f].region_count;
        }
        let region_at = |f: usize, gap: Option<usize>| match gap {
            Some(g) => base[f] + self.faces[f].gaps[g],
            None => base[f],
        };
        let pos_of = |f: usize, l: usize, j: usize| {
            let (offset, flip) = self.faces[f].place[l].expect("edge lies on face");
            offset + if flip { self.counts[l] - 1 - j } else { j }
        };
        let mut parent: Vec<usize> = (0..total).collect();
        // glue the two faces along every segment of every local edge
        for l in 0..6 {
            let [x, y] = TET_EDGES[l];
            let n = self.counts[l];
            let faces = faces_of_edge(l);
            for s in 0..=n {
                let ids = faces.map(|f| {
                    let gap = if s == 0 {
                        self.faces[f].corner_gap[x]
                    } else if s == n {
                        self.faces[f].corner_gap[y]
                    } else {
                        Some(pos_of(f, l, s - 1).min(pos_of(f, l, s)))
                    };
                    region_at(f, gap)
                });
                union(&mut parent, ids[0], ids[1]);
            }
        }
        let mut canon = vec![usize::MAX; total];
        let mut count = 0;
        let mut relabel = |parent: &mut Vec<usize>, id: usize| {
            let r = find(parent, id);
            if canon[r] == usize::MAX {
                canon[r] = count;
                count += 1;
            }
            canon[r]
        };
        let mut gap_region: [Vec<usize>; 4] = Default::default();
        let mut empty_face_region = [0usize; 4];
        for f in 0..4 {
            gap_region[f] = self.faces[f]
                .gaps
                .iter()
                .map(|&g| relabel(&mut parent, base[f] + g))
                .collect();
            empty_face_region[f] = relabel(&mut parent, base[f]);
        }
        let corner_region = std::array::from_fn(|v| {
            let f = (v + 1) % 4;
            relabel(&mut parent, region_at(f, self.faces[f].corner_gap[v]))
        });
        let of_curve = self
            .curves
            .iter()
            .map(|c| {
                let mut r: Vec<usize> = c
                    .arcs
                    .iter()
                    .flat_map(|&(f, a, b)| [gap_region[f][a], gap_region[f][b]])
                    .collect();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        Regions {
            gap_region,
            empty_face_region,
            corner_region,
            count,
            of_curve,
        }
    }

    pub fn tet(&self) -> usize {
        self.tet
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve_containing(&self, point: PointRef) -> Option<usize> {
        let l = point.edge as usize;
        if l >= 6 || point.idx >= self.counts[l] {
            return None;
        }
        Some(self.curve_of[self.edge_base[l] + point.idx])
    }

    pub fn point_count(&self, local_edge: usize) -> usize {
        self.counts[local_edge]
    }

    /// Point occurrence at a cyclic position of local face `f`.
    pub fn point_at(&self, face: usize, pos: usize) -> PointRef {
        self.pos_ref[face][pos]
    }

    /// Curve through the arc occurrence at cyclic position `pos` of local face `f`.
    pub fn curve_at(&self, face: usize, pos: usize) -> usize {
        let r = self.pos_ref[face][pos];
        self.curve_of[self.edge_base[r.edge as usize] + r.idx]
    }

    pub fn region_count(&self) -> usize {
        self.regions().count
    }

    /// Region of `∂σ` containing the gap of local face `f` after position `gap`
    /// (`None` for a face without points).
    pub fn gap_region(&self, face: usize, gap: Option<usize>) -> usize {
        let r = self.regions();
        match gap {
            Some(g) => r.gap_region[face][g],
            None => r.empty_face_region[face],
        }
    }

    /// Region of `∂σ` containing local vertex `v`.
    pub fn corner_region(&self, vertex: usize) -> usize {
        self.regions().corner_region[vertex]
    }

    /// Regions of `∂σ` bounded by a curve, ascending.
    pub fn curve_regions(&self, curve: usize) -> &[usize] {
        &self.regions().of_curve[curve]
    }

    /// Two distinct curves are separated on the sphere by a third curve exactly
    /// when they bound no common region.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.curve_regions(a), self.curve_regions(b));
        ra.iter().any(|r| rb.contains(r))
    }
}
