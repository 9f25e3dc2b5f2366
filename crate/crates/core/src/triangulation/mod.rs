//! Closed orientable 3-manifold triangulations given by tetrahedron gluing tables.
//!
//! Face `j` of a tetrahedron is the face opposite vertex `j`. A gluing of face `j`
//! of tetrahedron `t` is a pair (neighbour, permutation) where the permutation maps
//! vertex labels of `t` to vertex labels of the neighbour; face `j` lands on face
//! `perm(j)` of the neighbour.
//!
//! All derived data (edge, vertex and face classes, their orientations and the
//! local layouts used by surface encodings) is computed once at construction.

mod parse;
mod perm;
mod subdivide;

use std::fmt::Write as _;

use thiserror::Error;

pub use perm::Perm4;

/// Local edges of a tetrahedron, as ordered vertex pairs `low < high`.
pub const TET_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Index of the local edge joining vertices `a` and `b` (in either order).
pub fn tet_edge_index(a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no tetrahedron edge joins {a} and {b}"),
    }
}

/// The two local faces of a tetrahedron containing local edge `edge`.
pub fn faces_of_edge(edge: usize) -> [usize; 2] {
    let [a, b] = TET_EDGES[edge];
    let mut out = [0; 2];
    let mut k = 0;
    for f in 0..4 {
        if f != a && f != b {
            out[k] = f;
            k += 1;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("no tetrahedra")]
    Empty,
    #[error("tetrahedron {tet} face {face}: unglued face")]
    Unglued { tet: usize, face: usize },
    #[error("tetrahedron {tet} face {face}: gluing refers to missing tetrahedron {target}")]
    MissingTetrahedron {
        tet: usize,
        face: usize,
        target: usize,
    },
    #[error("tetrahedron {tet} face {face}: non-involutive or fixed-point gluing")]
    NonInvolutive { tet: usize, face: usize },
    #[error("tetrahedron {tet} face {face}: gluing is not orientation-reversing for any orientation assignment")]
    NonOrientable { tet: usize, face: usize },
    #[error("tetrahedron {tet} edge {a}{b}: edge is identified with itself reversed")]
    ReversedEdge { tet: usize, a: usize, b: usize },
    #[error("Euler characteristic is {0}, expected 0")]
    EulerCharacteristic(i64),
}

impl TriangulationError {
    /// True for errors in the text itself rather than in the glued complex it describes.
    pub fn is_syntax(&self) -> bool {
        matches!(
            self,
            TriangulationError::Syntax { .. } | TriangulationError::Empty
        )
    }
}

/// One side of a face class, running from corner `k` to corner `k + 1 (mod 3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Side {
    pub edge: usize,
    /// Whether the side direction agrees with the edge class orientation.
    pub forward: bool,
}

#[derive(Clone, Debug)]
pub struct EdgeClass {
    /// Lexicographically least `(tet, local edge)` in the class; its low-to-high
    /// direction is the class orientation.
    pub rep: (usize, usize),
    pub tail: usize,
    pub head: usize,
    pub members: Vec<(usize, usize)>,
    /// Every `(face class, side)` lying on this edge class.
    pub face_sides: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct VertexClass {
    pub members: Vec<(usize, usize)>,
    /// Every `(face class, corner)` at this vertex class.
    pub face_corners: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct FaceClass {
    /// `(tet, face)` pairs; the first is the representative.
    pub incidences: [(usize, usize); 2],
    /// Local vertex labels (in the representative) of corners 0, 1, 2, ascending.
    pub corners: [usize; 3],
    pub sides: [Side; 3],
    pub corner_vertex: [usize; 3],
}

/// How a tetrahedron face sees its face class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceSlot {
    pub class: usize,
    pub incidence: usize,
    /// Corner of the face class for each local vertex; `u8::MAX` for the opposite vertex.
    pub corner_of: [u8; 4],
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
    tet_edge_class: Vec<[usize; 6]>,
    tet_edge_agrees: Vec<[bool; 6]>,
    tet_vertex_class: Vec<[usize; 4]>,
    face_slots: Vec<[FaceSlot; 4]>,
    edge_classes: Vec<EdgeClass>,
    vertex_classes: Vec<VertexClass>,
    face_classes: Vec<FaceClass>,
    orientation: Vec<i8>,
}

struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<u8>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            parity: vec![0; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, u8) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, par) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= par;
        (root, self.parity[x])
    }

    /// Returns false when the union contradicts an earlier relation.
    fn union(&mut self, a: usize, b: usize, rel: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ rel;
        true
    }
}

impl Triangulation {
    /// Validates a gluing table and computes all derived classes.
    pub fn from_gluings(gluings: Vec<[Gluing; 4]>) -> Result<Self, TriangulationError> {
        let n = gluings.len();
        if n == 0 {
            return Err(TriangulationError::Empty);
        }
        for (t, row) in gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                if g.tet >= n {
                    return Err(TriangulationError::MissingTetrahedron {
                        tet: t,
                        face: f,
                        target: g.tet,
                    });
                }
                let back_face = g.perm.apply(f);
                if (g.tet, back_face) == (t, f) {
                    return Err(TriangulationError::NonInvolutive { tet: t, face: f });
                }
                let back = gluings[g.tet][back_face];
                if back.tet != t || back.perm != g.perm.inverse() {
                    return Err(TriangulationError::NonInvolutive { tet: t, face: f });
                }
            }
        }

        // orientation
        let mut orientation = vec![0i8; n];
        for start in 0..n {
            if orientation[start] != 0 {
                continue;
            }
            orientation[start] = 1;
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                for (f, g) in gluings[t].iter().enumerate() {
                    let want = -g.perm.sign() * orientation[t];
                    if orientation[g.tet] == 0 {
                        orientation[g.tet] = want;
                        stack.push(g.tet);
                    } else if orientation[g.tet] != want {
                        return Err(TriangulationError::NonOrientable { tet: t, face: f });
                    }
                }
            }
        }

        // edge classes, with orientation parity
        let mut uf = ParityUnionFind::new(6 * n);
        for (t, row) in gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                for (l, &[a, b]) in TET_EDGES.iter().enumerate() {
                    if a == f || b == f {
                        continue;
                    }
                    let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                    let l2 = tet_edge_index(pa, pb);
                    let rel = u8::from(pa > pb);
                    if !uf.union(6 * t + l, 6 * g.tet + l2, rel) {
                        return Err(TriangulationError::ReversedEdge { tet: t, a, b });
                    }
                }
            }
        }
        let mut vuf = ParityUnionFind::new(4 * n);
        for (t, row) in gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                for v in 0..4 {
                    if v != f {
                        vuf.union(4 * t + v, 4 * g.tet + g.perm.apply(v), 0);
                    }
                }
            }
        }

        let mut vertex_root_id = std::collections::HashMap::new();
        let mut tet_vertex_class = vec![[0usize; 4]; n];
        let mut vertex_classes: Vec<VertexClass> = Vec::new();
        for t in 0..n {
            for v in 0..4 {
                let (root, _) = vuf.find(4 * t + v);
                let id = *vertex_root_id.entry(root).or_insert_with(|| {
                    vertex_classes.push(VertexClass {
                        members: Vec::new(),
                        face_corners: Vec::new(),
                    });
                    vertex_classes.len() - 1
                });
                vertex_classes[id].members.push((t, v));
                tet_vertex_class[t][v] = id;
            }
        }

        let mut edge_root_id = std::collections::HashMap::new();
        let mut tet_edge_class = vec![[0usize; 6]; n];
        let mut tet_edge_agrees = vec![[true; 6]; n];
        let mut rep_parity = Vec::new();
        let mut edge_classes: Vec<EdgeClass> = Vec::new();
        for t in 0..n {
            for l in 0..6 {
                let (root, par) = uf.find(6 * t + l);
                let id = *edge_root_id.entry(root).or_insert_with(|| {
                    let [a, b] = TET_EDGES[l];
                    edge_classes.push(EdgeClass {
                        rep: (t, l),
                        tail: tet_vertex_class[t][a],
                        head: tet_vertex_class[t][b],
                        members: Vec::new(),
                        face_sides: Vec::new(),
                    });
                    rep_parity.push(par);
                    edge_classes.len() - 1
                });
                edge_classes[id].members.push((t, l));
                tet_edge_class[t][l] = id;
                tet_edge_agrees[t][l] = par == rep_parity[id];
            }
        }

        let placeholder = FaceSlot {
            class: usize::MAX,
            incidence: 0,
            corner_of: [u8::MAX; 4],
        };
        let mut face_slots = vec![[placeholder; 4]; n];
        let mut face_classes: Vec<FaceClass> = Vec::new();
        for t in 0..n {
            for f in 0..4 {
                if face_slots[t][f].class != usize::MAX {
                    continue;
                }
                let g = gluings[t][f];
                let other = (g.tet, g.perm.apply(f));
                let mut corners = [0usize; 3];
                let mut k = 0;
                for v in 0..4 {
                    if v != f {
                        corners[k] = v;
                        k += 1;
                    }
                }
                let mut sides = [Side {
                    edge: 0,
                    forward: true,
                }; 3];
                for k in 0..3 {
                    let (x, y) = (corners[k], corners[(k + 1) % 3]);
                    let l = tet_edge_index(x, y);
                    sides[k] = Side {
                        edge: tet_edge_class[t][l],
                        forward: (x < y) == tet_edge_agrees[t][l],
                    };
                }
                let corner_vertex = [
                    tet_vertex_class[t][corners[0]],
                    tet_vertex_class[t][corners[1]],
                    tet_vertex_class[t][corners[2]],
                ];
                let id = face_classes.len();
                let mut rep_corner_of = [u8::MAX; 4];
                let mut other_corner_of = [u8::MAX; 4];
                for (k, &c) in corners.iter().enumerate() {
                    rep_corner_of[c] = k as u8;
                    other_corner_of[g.perm.apply(c)] = k as u8;
                }
                face_slots[t][f] = FaceSlot {
                    class: id,
                    incidence: 0,
                    corner_of: rep_corner_of,
                };
                face_slots[other.0][other.1] = FaceSlot {
                    class: id,
                    incidence: 1,
                    corner_of: other_corner_of,
                };
                face_classes.push(FaceClass {
                    incidences: [(t, f), other],
                    corners,
                    sides,
                    corner_vertex,
                });
            }
        }
        for (id, fc) in face_classes.iter().enumerate() {
            for k in 0..3 {
                edge_classes[fc.sides[k].edge].face_sides.push((id, k));
                vertex_classes[fc.corner_vertex[k]]
                    .face_corners
                    .push((id, k));
            }
        }

        let tri = Triangulation {
            gluings,
            tet_edge_class,
            tet_edge_agrees,
            tet_vertex_class,
            face_slots,
            edge_classes,
            vertex_classes,
            face_classes,
            orientation,
        };
        let chi = tri.euler_characteristic();
        if chi != 0 {
            return Err(TriangulationError::EulerCharacteristic(chi));
        }
        Ok(tri)
    }

    /// Parses the gluing-table text format.
    pub fn parse(text: &str) -> Result<Self, TriangulationError> {
        let rows = parse::parse_rows(text)?;
        Self::from_gluings(rows)
    }

    /// Canonical text form: one `tet` line per tetrahedron, single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (t, row) in self.gluings.iter().enumerate() {
            write!(out, "tet {t}:").unwrap();
            for g in row {
                write!(out, " {}/{}", g.tet, g.perm).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn barycentric_subdivision(&self) -> Triangulation {
        subdivide::barycentric(self)
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.vertex_classes
    }

    pub fn face_classes(&self) -> &[FaceClass] {
        &self.face_classes
    }

    pub fn edge_count(&self) -> usize {
        self.edge_classes.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_classes.len()
    }

    pub fn face_count(&self) -> usize {
        self.face_classes.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
            - self.tet_count() as i64
    }

    pub fn orientation(&self, tet: usize) -> i8 {
        self.orientation[tet]
    }

    pub fn tet_edge_class(&self, tet: usize, local_edge: usize) -> usize {
        self.tet_edge_class[tet][local_edge]
    }

    /// Whether the local low-to-high direction of a tetrahedron edge agrees with its class orientation.
    pub fn tet_edge_agrees(&self, tet: usize, local_edge: usize) -> bool {
        self.tet_edge_agrees[tet][local_edge]
    }

    pub fn tet_vertex_class(&self, tet: usize, vertex: usize) -> usize {
        self.tet_vertex_class[tet][vertex]
    }

    pub fn face_slot(&self, tet: usize, face: usize) -> FaceSlot {
        self.face_slots[tet][face]
    }

    /// Number of tetrahedron edges in the class.
    pub fn edge_degree(&self, edge: usize) -> Option<usize> {
        self.edge_classes.get(edge).map(|e| e.members.len())
    }

    /// Number of edge-class ends at the vertex class.
    pub fn vertex_degree(&self, vertex: usize) -> Option<usize> {
        if vertex >= self.vertex_count() {
            return None;
        }
        Some(
            self.edge_classes
                .iter()
                .map(|e| usize::from(e.tail == vertex) + usize::from(e.head == vertex))
                .sum(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const S3: &str = include_str!("../../data/s3_2tet.tri");

    #[test]
    fn reference_sphere_counts() {
        let tri = Triangulation::parse(S3).unwrap();
        assert_eq!(tri.tet_count(), 2);
        assert_eq!(tri.vertex_count(), 1);
        assert_eq!(tri.edge_count(), 3);
        assert_eq!(tri.face_count(), 4);
        assert_eq!(tri.euler_characteristic(), 0);
    }

    #[test]
    fn reference_sphere_degrees() {
        let tri = Triangulation::parse(S3).unwrap();
        let mut degrees: Vec<_> = (0..3).map(|e| tri.edge_degree(e).unwrap()).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 4, 7]);
        assert_eq!(tri.vertex_degree(0), Some(6));
        assert_eq!(tri.edge_degree(3), None);
        assert_eq!(tri.vertex_degree(1), None);
    }

    #[test]
    fn vertex_degrees_sum_to_twice_edges() {
        let tri = Triangulation::parse(S3).unwrap().barycentric_subdivision();
        let total: usize = (0..tri.vertex_count())
            .map(|v| tri.vertex_degree(v).unwrap())
            .sum();
        assert_eq!(total, 2 * tri.edge_count());
    }

    #[test]
    fn face_sides_cover_each_edge_by_degree() {
        let tri = Triangulation::parse(S3).unwrap();
        for e in 0..tri.edge_count() {
            assert_eq!(
                tri.edge_classes()[e].face_sides.len(),
                tri.edge_degree(e).unwrap()
            );
        }
    }

    #[test]
    fn fixed_point_gluing_is_rejected() {
        let text = "tet 0: 0/0123 0/0123 0/0123 0/0123\n";
        assert_eq!(
            Triangulation::parse(text).unwrap_err(),
            TriangulationError::NonInvolutive { tet: 0, face: 0 }
        );
    }

    #[test]
    fn empty_document_is_rejected() {
        assert_eq!(
            Triangulation::parse("# nothing here\n").unwrap_err(),
            TriangulationError::Empty
        );
        assert_eq!(TriangulationError::Empty.to_string(), "no tetrahedra");
    }

    #[test]
    fn even_gluing_between_consistently_oriented_tets_is_non_orientable() {
        // tet 0 face 0 glued to tet 1 face 0 by the identity (even) and the rest odd
        let text = "tet 0: 1/0123 1/0132 1/1023 1/1023\n\
                    tet 1: 0/0123 0/0132 0/1023 0/1023\n";
        let err = Triangulation::parse(text).unwrap_err();
        assert!(
            matches!(err, TriangulationError::NonOrientable { .. }),
            "{err}"
        );
    }

    #[test]
    fn text_round_trip_is_idempotent() {
        let tri = Triangulation::parse(S3).unwrap();
        let once = tri.to_text();
        let twice = Triangulation::parse(&once).unwrap().to_text();
        assert_eq!(once, twice);
    }
}
