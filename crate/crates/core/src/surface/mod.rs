//! Crudely (almost) normal surfaces up to normal isotopy, encoded combinatorially.
//!
//! An encoding records, for a fixed triangulation:
//!
//! * the number of surface points on each edge class, indexed along the class
//!   orientation;
//! * an [`ArcSystem`] per face class;
//! * per tetrahedron, the annulus pieces, each given by one point on each of its
//!   two boundary curves. Every other boundary curve bounds a disk piece.
//!
//! The canonical text form doubles as the [`CanonicalKey`].

mod arcs;
mod curves;
mod draft;
mod enumerate;
mod text;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::triangulation::Triangulation;

pub use arcs::{gap_regions, is_non_crossing, non_crossing_matchings, ArcError, ArcSystem};
pub use curves::{Curve, TetBoundary};
pub use draft::{ContractError, Draft, SidePt, TetPt};
pub use enumerate::enumerate_surfaces;
pub use text::SurfaceTextError;

/// A surface point seen from inside a tetrahedron: local edge and index along
/// the local low-to-high direction. Displayed as `edge.idx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointRef {
    pub edge: u8,
    pub idx: usize,
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.edge, self.idx)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("surface has {got} edge classes, triangulation has {expected}")]
    EdgeCount { expected: usize, got: usize },
    #[error("surface has {got} face classes, triangulation has {expected}")]
    FaceCount { expected: usize, got: usize },
    #[error("surface has {got} tetrahedra, triangulation has {expected}")]
    TetCount { expected: usize, got: usize },
    #[error("face {face} side {side} has {got} points, edge class {edge} has {expected}")]
    SideCount {
        face: usize,
        side: usize,
        edge: usize,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Arcs(#[from] ArcError),
    #[error("tetrahedron {tet}: annulus point {point} does not exist")]
    AnnulusPoint { tet: usize, point: PointRef },
}

/// The first violated constraint of an invalid encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    CrossingArcs { face: usize },
    DegenerateAnnulus { tet: usize },
    MultipleAnnuli { tet: usize },
    AnnulusSeparation { tet: usize },
}

impl Violation {
    pub fn reason(&self) -> &'static str {
        match self {
            Violation::CrossingArcs { .. } => "crossing arcs",
            Violation::DegenerateAnnulus { .. } => "degenerate annulus",
            Violation::MultipleAnnuli { .. } => "multiple annuli",
            Violation::AnnulusSeparation { .. } => "annulus separation",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CrossingArcs { face } => write!(f, "{} in face {face}", self.reason()),
            Violation::DegenerateAnnulus { tet }
            | Violation::MultipleAnnuli { tet }
            | Violation::AnnulusSeparation { tet } => {
                write!(f, "{} in tetrahedron {tet}", self.reason())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    CrudelyNormal,
    CrudelyAlmostNormal,
    Invalid(Violation),
}

impl Classification {
    pub fn is_valid(&self) -> bool {
        !matches!(self, Classification::Invalid(_))
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::CrudelyNormal => f.write_str("crudely_normal"),
            Classification::CrudelyAlmostNormal => f.write_str("crudely_almost_normal"),
            Classification::Invalid(v) => write!(f, "invalid({v})"),
        }
    }
}

/// Canonical serialization of an encoding; equal keys mean equal combinatorial data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("keys are ASCII")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Summary {
    pub classification: Classification,
    pub euler_characteristic: i64,
    pub components: usize,
}

#[derive(Clone, Debug)]
pub struct SurfaceEncoding {
    tri: Arc<Triangulation>,
    counts: Vec<usize>,
    faces: Vec<ArcSystem>,
    annuli: Vec<Vec<[PointRef; 2]>>,
}

impl PartialEq for SurfaceEncoding {
    fn eq(&self, other: &Self) -> bool {
        self.counts == other.counts && self.faces == other.faces && self.annuli == other.annuli
    }
}

impl Eq for SurfaceEncoding {}

impl SurfaceEncoding {
    /// Assembles an encoding, checking that every face agrees with the edge counts
    /// and every annulus point exists. Annulus pairs are normalised to the least
    /// point of each curve and sorted.
    pub fn from_parts(
        tri: Arc<Triangulation>,
        counts: Vec<usize>,
        faces: Vec<ArcSystem>,
        annuli: Vec<Vec<[PointRef; 2]>>,
    ) -> Result<Self, SurfaceError> {
        if counts.len() != tri.edge_count() {
            return Err(SurfaceError::EdgeCount {
                expected: tri.edge_count(),
                got: counts.len(),
            });
        }
        if faces.len() != tri.face_count() {
            return Err(SurfaceError::FaceCount {
                expected: tri.face_count(),
                got: faces.len(),
            });
        }
        if annuli.len() != tri.tet_count() {
            return Err(SurfaceError::TetCount {
                expected: tri.tet_count(),
                got: annuli.len(),
            });
        }
        for (id, (fc, arcs)) in tri.face_classes().iter().zip(&faces).enumerate() {
            for (s, side) in fc.sides.iter().enumerate() {
                let got = arcs.side_counts()[s];
                if got != counts[side.edge] {
                    return Err(SurfaceError::SideCount {
                        face: id,
                        side: s,
                        edge: side.edge,
                        expected: counts[side.edge],
                        got,
                    });
                }
            }
        }
        for (t, pairs) in annuli.iter().enumerate() {
            for point in pairs.iter().flatten() {
                let l = point.edge as usize;
                if l >= 6 || point.idx >= counts[tri.tet_edge_class(t, l)] {
                    return Err(SurfaceError::AnnulusPoint {
                        tet: t,
                        point: *point,
                    });
                }
            }
        }
        let mut enc = Self {
            tri,
            counts,
            faces,
            annuli,
        };
        for t in 0..enc.annuli.len() {
            if enc.annuli[t].is_empty() {
                continue;
            }
            let boundary = TetBoundary::new(&enc, t);
            let least = |p: PointRef| {
                let c = boundary.curve_containing(p).expect("checked above");
                boundary.curves()[c].least_point()
            };
            let mut pairs: Vec<[PointRef; 2]> = enc.annuli[t]
                .iter()
                .map(|&[a, b]| {
                    let (a, b) = (least(a), least(b));
                    if a <= b {
                        [a, b]
                    } else {
                        [b, a]
                    }
                })
                .collect();
            pairs.sort();
            enc.annuli[t] = pairs;
        }
        Ok(enc)
    }

    /// The encoding with no points at all.
    pub fn empty(tri: Arc<Triangulation>) -> Self {
        let faces = (0..tri.face_count())
            .map(|f| ArcSystem::new(f, [0; 3], Vec::new()).expect("empty system"))
            .collect();
        Self {
            counts: vec![0; tri.edge_count()],
            annuli: vec![Vec::new(); tri.tet_count()],
            faces,
            tri,
        }
    }

    /// The sphere linking vertex class `v`: one point near each end of an edge
    /// class at `v`, a corner arc at each face corner at `v`, a corner disk in
    /// each tetrahedron corner at `v`.
    pub fn vertex_link(tri: Arc<Triangulation>, v: usize) -> Option<Self> {
        if v >= tri.vertex_count() {
            return None;
        }
        let mut draft = Draft::new(tri.clone());
        for (e, class) in tri.edge_classes().iter().enumerate() {
            if class.tail == v {
                draft.insert_points(e, 0, 1);
            }
            if class.head == v {
                let n = draft.count(e);
                draft.insert_points(e, n, 1);
            }
        }
        for &(face, corner) in &tri.vertex_classes()[v].face_corners {
            let arc = draft.corner_points(face, corner);
            draft.add_arc(face, arc);
        }
        Some(draft.build().expect("vertex links are well formed"))
    }

    pub fn triangulation(&self) -> &Arc<Triangulation> {
        &self.tri
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn edge_count(&self, edge: usize) -> usize {
        self.counts[edge]
    }

    pub fn face(&self, face: usize) -> &ArcSystem {
        &self.faces[face]
    }

    pub fn faces(&self) -> &[ArcSystem] {
        &self.faces
    }

    pub fn annuli(&self, tet: usize) -> &[[PointRef; 2]] {
        &self.annuli[tet]
    }

    pub fn annulus_count(&self) -> usize {
        self.annuli.iter().map(Vec::len).sum()
    }

    pub fn boundary(&self, tet: usize) -> TetBoundary {
        TetBoundary::new(self, tet)
    }

    /// Number of points on the 1-skeleton.
    pub fn weight(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn arc_count(&self) -> usize {
        self.faces.iter().map(ArcSystem::arc_count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.weight() == 0
    }

    pub fn validate(&self) -> Classification {
        let boundaries: Vec<Option<TetBoundary>> = self
            .annuli
            .iter()
            .enumerate()
            .map(|(t, pairs)| (!pairs.is_empty()).then(|| self.boundary(t)))
            .collect();
        self.classify(|t| boundaries[t].as_ref().expect("tetrahedron with annuli"))
    }

    fn classify<'a>(&self, boundary: impl Fn(usize) -> &'a TetBoundary) -> Classification {
        for (f, arcs) in self.faces.iter().enumerate() {
            if !arcs.is_non_crossing() {
                return Classification::Invalid(Violation::CrossingArcs { face: f });
            }
        }
        for (t, pairs) in self.annuli.iter().enumerate() {
            if pairs.is_empty() {
                continue;
            }
            let boundary = boundary(t);
            let curve = |p: PointRef| boundary.curve_containing(p).expect("checked points");
            if pairs.iter().any(|&[a, b]| curve(a) == curve(b)) {
                return Classification::Invalid(Violation::DegenerateAnnulus { tet: t });
            }
            if pairs.len() > 1 {
                return Classification::Invalid(Violation::MultipleAnnuli { tet: t });
            }
            let [a, b] = pairs[0];
            if !boundary.adjacent(curve(a), curve(b)) {
                return Classification::Invalid(Violation::AnnulusSeparation { tet: t });
            }
        }
        if self.annulus_count() == 0 {
            Classification::CrudelyNormal
        } else {
            Classification::CrudelyAlmostNormal
        }
    }

    fn boundaries(&self) -> Vec<TetBoundary> {
        (0..self.tri.tet_count())
            .map(|t| self.boundary(t))
            .collect()
    }

    fn disks(&self, boundaries: &[TetBoundary]) -> usize {
        boundaries.iter().map(|b| b.curves().len()).sum::<usize>() - 2 * self.annulus_count()
    }

    pub fn disk_count(&self) -> usize {
        self.disks(&self.boundaries())
    }

    /// Points minus arcs plus disk pieces; annulus pieces contribute nothing.
    pub fn euler_characteristic(&self) -> i64 {
        self.chi(&self.boundaries())
    }

    fn chi(&self, boundaries: &[TetBoundary]) -> i64 {
        self.weight() as i64 - self.arc_count() as i64 + self.disks(boundaries) as i64
    }

    /// Classification, Euler characteristic and component count in one pass.
    pub fn summary(&self) -> Summary {
        let boundaries = self.boundaries();
        Summary {
            classification: self.classify(|t| &boundaries[t]),
            euler_characteristic: self.chi(&boundaries),
            components: self.labels(&boundaries).1,
        }
    }

    /// Component label of every piece boundary curve, indexed `[tet][curve]`,
    /// numbered in order of first appearance, plus the number of components.
    pub fn component_labels(&self) -> (Vec<Vec<usize>>, usize) {
        self.labels(&self.boundaries())
    }

    fn labels(&self, boundaries: &[TetBoundary]) -> (Vec<Vec<usize>>, usize) {
        let tri = &self.tri;
        let mut base = Vec::with_capacity(boundaries.len());
        let mut total = 0;
        for b in boundaries {
            base.push(total);
            total += b.curves().len();
        }
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };
        for (t, pairs) in self.annuli.iter().enumerate() {
            for &[a, b] in pairs {
                let ca = boundaries[t].curve_containing(a).expect("valid point");
                let cb = boundaries[t].curve_containing(b).expect("valid point");
                union(&mut parent, base[t] + ca, base[t] + cb);
            }
        }
        for (id, fc) in tri.face_classes().iter().enumerate() {
            let [(t0, f0), (t1, f1)] = fc.incidences;
            for (a, _) in self.faces[id].arcs() {
                let c0 = boundaries[t0].curve_at(f0, a);
                let c1 = boundaries[t1].curve_at(f1, a);
                union(&mut parent, base[t0] + c0, base[t1] + c1);
            }
        }
        let mut canon = vec![usize::MAX; total];
        let mut count = 0;
        let mut labels = Vec::with_capacity(boundaries.len());
        for (t, b) in boundaries.iter().enumerate() {
            let mut row = Vec::with_capacity(b.curves().len());
            for c in 0..b.curves().len() {
                let r = find(&mut parent, base[t] + c);
                if canon[r] == usize::MAX {
                    canon[r] = count;
                    count += 1;
                }
                row.push(canon[r]);
            }
            labels.push(row);
        }
        (labels, count)
    }

    pub fn components(&self) -> usize {
        self.component_labels().1
    }

    /// Total genus, from `χ = Σ (2 − 2 g_i)` over the components.
    pub fn genus(&self) -> usize {
        let twice = 2 * self.components() as i64 - self.euler_characteristic();
        (twice.max(0) / 2) as usize
    }

    pub fn to_text(&self) -> String {
        text::write(self)
    }

    pub fn parse(tri: Arc<Triangulation>, input: &str) -> Result<Self, SurfaceTextError> {
        text::parse(tri, input)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey(self.to_text().into_bytes())
    }

    /// Point of local edge `l` of `tet` at class index `class_idx`.
    pub fn point_ref(&self, tet: usize, l: usize, class_idx: usize) -> PointRef {
        let n = self.counts[self.tri.tet_edge_class(tet, l)];
        let idx = if self.tri.tet_edge_agrees(tet, l) {
            class_idx
        } else {
            n - 1 - class_idx
        };
        PointRef { edge: l as u8, idx }
    }

    /// Class index of a local point of `tet`.
    pub fn class_index(&self, tet: usize, p: PointRef) -> usize {
        let l = p.edge as usize;
        let n = self.counts[self.tri.tet_edge_class(tet, l)];
        if self.tri.tet_edge_agrees(tet, l) {
            p.idx
        } else {
            n - 1 - p.idx
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<Triangulation> {
        Arc::new(Triangulation::parse(include_str!("../../data/s3_2tet.tri")).unwrap())
    }

    /// Two parallel copies of the vertex link, the second one nearer the vertex.
    fn double_link(tri: &Arc<Triangulation>) -> Draft {
        let link = SurfaceEncoding::vertex_link(tri.clone(), 0).unwrap();
        let mut draft = Draft::from_encoding(&link);
        for (e, class) in tri.edge_classes().iter().enumerate() {
            if class.tail == 0 {
                draft.insert_points(e, 0, 1);
            }
            if class.head == 0 {
                let n = draft.count(e);
                draft.insert_points(e, n, 1);
            }
        }
        for &(face, corner) in &tri.vertex_classes()[0].face_corners {
            let arc = draft.corner_points(face, corner);
            draft.add_arc(face, arc);
        }
        draft
    }

    #[test]
    fn vertex_link_counts() {
        let tri = s3();
        let link = SurfaceEncoding::vertex_link(tri, 0).unwrap();
        assert_eq!(link.validate(), Classification::CrudelyNormal);
        assert_eq!(link.weight(), 6);
        assert_eq!(link.arc_count(), 12);
        assert_eq!(link.disk_count(), 8);
        assert_eq!(link.euler_characteristic(), 2);
        assert_eq!(link.components(), 1);
        assert_eq!(link.genus(), 0);
    }

    #[test]
    fn empty_surface() {
        let empty = SurfaceEncoding::empty(s3());
        assert_eq!(empty.validate(), Classification::CrudelyNormal);
        assert_eq!(empty.weight(), 0);
        assert_eq!(empty.euler_characteristic(), 0);
        assert_eq!(empty.components(), 0);
        let link = SurfaceEncoding::vertex_link(s3(), 0).unwrap();
        assert_ne!(empty.canonical_key(), link.canonical_key());
    }

    #[test]
    fn independent_copies_share_a_key() {
        let a = SurfaceEncoding::vertex_link(s3(), 0).unwrap();
        let b = SurfaceEncoding::vertex_link(s3(), 0).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn text_round_trip() {
        let tri = s3();
        let link = SurfaceEncoding::vertex_link(tri.clone(), 0).unwrap();
        let text = link.to_text();
        let back = SurfaceEncoding::parse(tri, &text).unwrap();
        assert_eq!(back, link);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn disjoint_links_weigh_twelve() {
        let tri = s3();
        let two = double_link(&tri).build().unwrap();
        assert_eq!(two.validate(), Classification::CrudelyNormal);
        assert_eq!(two.weight(), 12);
        assert_eq!(two.components(), 2);
        assert_eq!(two.euler_characteristic(), 4);
    }

    #[test]
    fn annulus_rules() {
        let tri = s3();
        let two = double_link(&tri).build().unwrap();
        let b = two.boundary(0);
        assert_eq!(b.curves().len(), 8);
        // curves at each tetrahedron corner: the outer one meets index 1 from the
        // vertex, the inner one index 0
        let corner_curves = |v: usize| -> (usize, usize) {
            let l = (0..6)
                .find(|&l| crate::triangulation::TET_EDGES[l].contains(&v))
                .unwrap();
            let [lo, _] = crate::triangulation::TET_EDGES[l];
            let (inner, outer) = if lo == v { (0, 1) } else { (3, 2) };
            let c = |idx| b.curve_containing(PointRef { edge: l as u8, idx }).unwrap();
            (c(inner), c(outer))
        };
        let (in0, out0) = corner_curves(0);
        let (in1, out1) = corner_curves(1);
        assert!(b.adjacent(in0, out0));
        assert!(!b.adjacent(in0, in1));
        assert!(b.adjacent(out0, out1));

        let point = |c: usize| b.curves()[c].least_point();
        let with = |pairs: Vec<[PointRef; 2]>| {
            let mut annuli = vec![Vec::new(); tri.tet_count()];
            annuli[0] = pairs;
            SurfaceEncoding::from_parts(
                tri.clone(),
                two.counts().to_vec(),
                two.faces().to_vec(),
                annuli,
            )
            .unwrap()
        };
        let tube = with(vec![[point(in0), point(out0)]]);
        assert_eq!(tube.validate(), Classification::CrudelyAlmostNormal);
        assert_eq!(tube.components(), 1);
        assert_eq!(tube.euler_characteristic(), 2);
        assert_eq!(
            with(vec![[point(in0), point(in1)]]).validate(),
            Classification::Invalid(Violation::AnnulusSeparation { tet: 0 })
        );
        assert_eq!(
            with(vec![[point(in0), point(out0)], [point(in1), point(out1)]]).validate(),
            Classification::Invalid(Violation::MultipleAnnuli { tet: 0 })
        );
        let other = b.curves()[in0].points[1];
        assert_eq!(
            with(vec![[point(in0), other]]).validate(),
            Classification::Invalid(Violation::DegenerateAnnulus { tet: 0 })
        );
        let text = tube.to_text();
        assert!(text.contains("annulus 0: "));
        assert_eq!(SurfaceEncoding::parse(tri, &text).unwrap(), tube);
    }

    #[test]
    fn crossing_arcs_are_invalid() {
        let tri = s3();
        let link = SurfaceEncoding::vertex_link(tri.clone(), 0).unwrap();
        let mut faces = link.faces().to_vec();
        let f = &faces[0];
        // 6 points: 0-3 1-4 2-5 pairwise cross
        faces[0] = ArcSystem::new(0, f.side_counts(), vec![3, 4, 5, 0, 1, 2]).unwrap();
        let bad = SurfaceEncoding::from_parts(
            tri.clone(),
            link.counts().to_vec(),
            faces,
            vec![Vec::new(); 2],
        )
        .unwrap();
        assert_eq!(
            bad.validate(),
            Classification::Invalid(Violation::CrossingArcs { face: 0 })
        );
    }

    #[test]
    fn text_errors_are_classified() {
        let tri = s3();
        let syntax =
            SurfaceEncoding::parse(tri.clone(), "surface 3 4 2\nedges 2 2 x\nend\n").unwrap_err();
        assert!(syntax.is_syntax());
        let missing_edge =
            SurfaceEncoding::parse(tri.clone(), "surface 4 4 2\nedges 0 0 0 0\nend\n").unwrap_err();
        assert!(matches!(missing_edge, SurfaceTextError::Mismatch { .. }));
        let no_end =
            SurfaceEncoding::parse(tri.clone(), "surface 3 4 2\nedges 0 0 0\n").unwrap_err();
        assert!(no_end.is_syntax());
        let unmatched =
            SurfaceEncoding::parse(tri, "surface 3 4 2\nedges 2 0 0\nend\n").unwrap_err();
        assert!(matches!(unmatched, SurfaceTextError::Invalid(_)));
    }

    #[test]
    fn enumeration_small() {
        let tri = s3();
        let zero = enumerate_surfaces(&tri, 0);
        assert_eq!(zero.len(), 1);
        assert!(zero[0].is_empty());
        let up_to_four = enumerate_surfaces(&tri, 4);
        let mut keys: Vec<CanonicalKey> = up_to_four
            .iter()
            .map(SurfaceEncoding::canonical_key)
            .collect();
        keys.dedup();
        assert_eq!(keys.len(), up_to_four.len());
        for enc in &up_to_four {
            assert!(enc.validate().is_valid());
            let back = SurfaceEncoding::parse(tri.clone(), &enc.to_text()).unwrap();
            assert_eq!(&back, enc);
            let curves: usize = (0..tri.tet_count())
                .map(|t| enc.boundary(t).curves().len())
                .sum();
            assert_eq!(
                enc.euler_characteristic(),
                enc.weight() as i64 - enc.arc_count() as i64
                    + (curves - 2 * enc.annulus_count()) as i64
            );
        }
    }
}
