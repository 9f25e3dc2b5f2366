use super::{Gluing, Perm4, Triangulation};

/// Barycentric subdivision. Tetrahedron `24 * t + r` is the flag simplex of
/// tetrahedron `t` indexed by the `r`-th permutation `π` (lexicographic order):
/// its vertex 0 is original vertex `π(0)`, vertex 1 the barycentre of edge
/// `π(0)π(1)`, vertex 2 the barycentre of face `π(0)π(1)π(2)`, vertex 3 the
/// barycentre of `t`. Every new gluing is the identity on labels.
pub(super) fn barycentric(tri: &Triangulation) -> Triangulation {
    let perms = Perm4::all();
    let rank = |p: Perm4| perms.iter().position(|&q| q == p).expect("permutation");
    let n = tri.tet_count();
    let mut rows = Vec::with_capacity(24 * n);
    for t in 0..n {
        for &pi in &perms {
            let mut row = [Gluing {
                tet: 0,
                perm: Perm4::IDENTITY,
            }; 4];
            for (k, slot) in row.iter_mut().enumerate().take(3) {
                let swapped = pi.compose(Perm4::transposition(k, k + 1));
                *slot = Gluing {
                    tet: 24 * t + rank(swapped),
                    perm: Perm4::IDENTITY,
                };
            }
            let outer = tri.gluing(t, pi.apply(3));
            row[3] = Gluing {
                tet: 24 * outer.tet + rank(outer.perm.compose(pi)),
                perm: Perm4::IDENTITY,
            };
            rows.push(row);
        }
    }
    Triangulation::from_gluings(rows).expect("subdivision of a valid triangulation is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: &str = include_str!("../../data/s3_2tet.tri");

    #[test]
    fn one_subdivision_of_the_sphere() {
        let tri = Triangulation::parse(S3).unwrap();
        let sub = tri.barycentric_subdivision();
        assert_eq!(sub.tet_count(), 48);
        assert_eq!(sub.euler_characteristic(), 0);
        assert_eq!(
            sub.vertex_count(),
            tri.vertex_count() + tri.edge_count() + tri.face_count() + tri.tet_count()
        );
        assert_eq!(sub.vertex_count(), 10);
    }

    #[test]
    fn twice_gives_1152() {
        let sub = Triangulation::parse(S3)
            .unwrap()
            .barycentric_subdivision()
            .barycentric_subdivision();
        assert_eq!(sub.tet_count(), 1152);
        assert_eq!(sub.euler_characteristic(), 0);
    }

    #[test]
    fn original_vertex_keeps_its_edge_ends() {
        // Each original vertex becomes a vertex whose edge ends are the subdivided
        // edges leaving it: one per original edge end, face corner and tet corner.
        let tri = Triangulation::parse(S3).unwrap();
        let sub = tri.barycentric_subdivision();
        let original = sub.tet_vertex_class(0, 0);
        let v = 0;
        let ends = tri.vertex_degree(v).unwrap();
        let face_corners = tri.vertex_classes()[v].face_corners.len();
        let tet_corners = tri.vertex_classes()[v].members.len();
        assert_eq!(
            sub.vertex_degree(original).unwrap(),
            ends + face_corners + tet_corners
        );
    }
}
