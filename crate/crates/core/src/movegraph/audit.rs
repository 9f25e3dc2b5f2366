use std::collections::BTreeMap;

use thiserror::Error;

use super::MoveGraph;
use crate::moves::{apply, MoveKind, SphereCatalog};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    /// Edges checked, by kind of the stored move.
    pub edges_by_kind: BTreeMap<MoveKind, usize>,
}

impl AuditReport {
    pub fn edges(&self) -> usize {
        self.edges_by_kind.values().sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("vertex {vertex} has weight {weight} above the budget")]
    OverBudget { vertex: usize, weight: usize },
    #[error("edge {edge} ({mv}): {reason}")]
    Edge {
        edge: usize,
        mv: String,
        reason: String,
    },
}

/// Re-checks every edge of a graph: the move leads from source to target, its
/// inverse leads back, topology is preserved and the weight changes as listed
/// in the move table.
pub fn audit(g: &MoveGraph, catalog: &SphereCatalog) -> Result<AuditReport, AuditError> {
    let mut report = AuditReport::default();
    for (vertex, v) in g.vertices().iter().enumerate() {
        if v.encoding.weight() > g.budget() {
            return Err(AuditError::OverBudget {
                vertex,
                weight: v.encoding.weight(),
            });
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        let fail = |reason: String| AuditError::Edge {
            edge: i,
            mv: e.mv.to_string(),
            reason,
        };
        let (u, v) = (&g.vertices()[e.source], &g.vertices()[e.target]);
        let there = apply(&u.encoding, &e.mv, catalog).map_err(|err| fail(err.to_string()))?;
        if there.canonical_key() != v.key {
            return Err(fail("move does not reach the target".into()));
        }
        let back =
            apply(&v.encoding, &e.mv.inverse(), catalog).map_err(|err| fail(err.to_string()))?;
        if back.canonical_key() != u.key {
            return Err(fail("inverse does not return to the source".into()));
        }
        let (a, b) = (&u.encoding, &v.encoding);
        if a.euler_characteristic() != b.euler_characteristic() {
            return Err(fail("Euler characteristic changed".into()));
        }
        if a.genus() != b.genus() || a.components() != b.components() {
            return Err(fail("genus or components changed".into()));
        }
        let delta =
            e.mv.weight_delta(a.triangulation(), catalog)
                .ok_or_else(|| fail("unknown location".into()))?;
        if a.weight() as i64 + delta != b.weight() as i64 {
            return Err(fail(format!(
                "weight changed by {}, table says {delta}",
                b.weight() as i64 - a.weight() as i64
            )));
        }
        *report.edges_by_kind.entry(e.mv.kind()).or_default() += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::movegraph::{build, BuildOptions};
    use crate::surface::SurfaceEncoding;
    use crate::triangulation::Triangulation;

    #[test]
    fn built_graph_passes() {
        let tri = Arc::new(Triangulation::parse(include_str!("../../data/s3_2tet.tri")).unwrap());
        let catalog = SphereCatalog::vertex_links(&tri);
        let link = SurfaceEncoding::vertex_link(tri, 0).unwrap();
        let g = build(
            &link,
            &catalog,
            &BuildOptions::new(12, "V0,PINCH,UNPINCH".parse().unwrap()),
        )
        .unwrap();
        let report = audit(&g, &catalog).unwrap();
        assert_eq!(report.edges(), g.edge_count());
        assert!(report.edges_by_kind.contains_key(&MoveKind::V0));
        assert!(
            report.edges_by_kind.contains_key(&MoveKind::Pinch)
                || report.edges_by_kind.contains_key(&MoveKind::Unpinch)
        );
    }
}
