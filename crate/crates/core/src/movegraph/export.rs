use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{MoveGraph, Stats, Vertex};
use crate::moves::{Move, MoveSet};
use crate::surface::{CanonicalKey, SurfaceEncoding};
use crate::triangulation::Triangulation;

/// Schema name written into every JSON export; bumped with the version on any
/// incompatible change.
pub const SCHEMA: &str = "heegraph/movegraph";
const SCHEMA_VERSION: u32 = 1;

/// First 12 hex digits of the SHA-256 of a key.
pub fn short_hash(key: &CanonicalKey) -> String {
    hex::encode(Sha256::digest(key.as_bytes()))[..12].to_string()
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("unknown export format {0:?} (expected json or dot)")]
    UnknownFormat(String),
    #[error("malformed graph document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {schema} version {version}")]
    Schema { schema: String, version: u32 },
    #[error("graph document: {0}")]
    Content(String),
}

/// Where a graph came from: hashes of the input files and the parameters that
/// influence the result.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub triangulation_sha256: String,
    pub seed_sha256: String,
    pub catalog: Vec<String>,
    pub parameters: BTreeMap<String, String>,
}

impl Provenance {
    pub fn from_inputs(triangulation: &[u8], seed: &[u8]) -> Self {
        Self {
            triangulation_sha256: sha256_hex(triangulation),
            seed_sha256: sha256_hex(seed),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    pub hash: String,
    pub weight: usize,
    pub encoding: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub source: usize,
    pub target: usize,
    #[serde(rename = "move")]
    pub mv: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub vertices: usize,
    pub edges: usize,
    pub rank: i64,
    pub rejected_by_budget: usize,
    pub levels: usize,
}

/// JSON form of a graph. Everything in it is independent of worker count and
/// timing, so equal inputs give byte-identical documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema: String,
    pub version: u32,
    /// `complete` or `partial`.
    pub status: String,
    pub provenance: Provenance,
    pub budget: usize,
    pub move_set: String,
    pub seed: usize,
    pub rank: i64,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub stats: StatsRecord,
}

impl GraphDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ExportError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        if doc.schema != SCHEMA || doc.version != SCHEMA_VERSION {
            return Err(ExportError::Schema {
                schema: doc.schema,
                version: doc.version,
            });
        }
        Ok(doc)
    }

    pub fn is_complete(&self) -> bool {
        self.status == "complete"
    }

    /// Rebuilds the graph, re-parsing every encoding and move.
    pub fn to_graph(&self, tri: Arc<Triangulation>) -> Result<MoveGraph, ExportError> {
        let bad = |what: String| ExportError::Content(what);
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(bad(format!("vertex {i} has id {}", v.id)));
            }
            let encoding = SurfaceEncoding::parse(tri.clone(), &v.encoding)
                .map_err(|e| bad(format!("vertex {i}: {e}")))?;
            vertices.push(Vertex {
                key: encoding.canonical_key(),
                encoding,
            });
        }
        if vertices.windows(2).any(|w| w[0].key >= w[1].key) {
            return Err(bad("vertices are not in key order".into()));
        }
        let n = vertices.len();
        if self.seed >= n {
            return Err(bad("seed is not a vertex".into()));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            if e.source >= n || e.target >= n {
                return Err(bad(format!("edge {i} has an unknown endpoint")));
            }
            let mv: Move =
                e.mv.parse()
                    .map_err(|err| bad(format!("edge {i}: {err}")))?;
            edges.push((e.source, e.target, mv));
        }
        let move_set: MoveSet = self
            .move_set
            .parse()
            .map_err(|err| bad(format!("move set: {err}")))?;
        let stats = Stats {
            rejected_by_budget: self.stats.rejected_by_budget,
            levels: self.stats.levels,
            ..Stats::default()
        };
        Ok(MoveGraph::assemble(
            vertices,
            self.seed,
            edges,
            self.budget,
            move_set,
            self.is_complete(),
            stats,
        ))
    }
}

impl MoveGraph {
    pub fn to_document(&self, provenance: Provenance) -> GraphDocument {
        let stats = self.stats();
        GraphDocument {
            schema: SCHEMA.to_string(),
            version: SCHEMA_VERSION,
            status: if self.is_complete() {
                "complete"
            } else {
                "partial"
            }
            .to_string(),
            provenance,
            budget: self.budget(),
            move_set: self.move_set().to_string(),
            seed: self.seed(),
            rank: self.rank(),
            vertices: self
                .vertices()
                .iter()
                .enumerate()
                .map(|(id, v)| VertexRecord {
                    id,
                    hash: short_hash(&v.key),
                    weight: v.encoding.weight(),
                    encoding: v.encoding.to_text(),
                })
                .collect(),
            edges: self
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    source: e.source,
                    target: e.target,
                    mv: e.mv.to_string(),
                })
                .collect(),
            stats: StatsRecord {
                vertices: stats.vertices,
                edges: stats.edges,
                rank: stats.rank,
                rejected_by_budget: stats.rejected_by_budget,
                levels: stats.levels,
            },
        }
    }

    /// Exports as `json` or `dot`.
    pub fn export(&self, format: &str, provenance: Provenance) -> Result<String, ExportError> {
        match format {
            "json" => Ok(self.to_document(provenance).to_json()),
            "dot" => Ok(self.to_dot()),
            other => Err(ExportError::UnknownFormat(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::movegraph::{build, BuildOptions};
    use crate::moves::SphereCatalog;

    fn setup() -> (Arc<Triangulation>, SurfaceEncoding, SphereCatalog) {
        let tri = Arc::new(Triangulation::parse(include_str!("../../data/s3_2tet.tri")).unwrap());
        let catalog = SphereCatalog::vertex_links(&tri);
        (
            tri.clone(),
            SurfaceEncoding::vertex_link(tri, 0).unwrap(),
            catalog,
        )
    }

    #[test]
    fn single_vertex_json() {
        let (_, link, catalog) = setup();
        let g = build(&link, &catalog, &BuildOptions::new(6, MoveSet::empty())).unwrap();
        let doc = g.to_document(Provenance::default());
        assert_eq!(doc.rank, 0);
        assert_eq!(doc.status, "complete");
        let json: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(json["rank"], 0);
        assert_eq!(json["vertices"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let (tri, link, catalog) = setup();
        let g = build(
            &link,
            &catalog,
            &BuildOptions::new(8, "E1,F2'".parse().unwrap()),
        )
        .unwrap();
        let text = g
            .export("json", Provenance::from_inputs(b"t", b"s"))
            .unwrap();
        let doc = GraphDocument::from_json(&text).unwrap();
        let back = doc.to_graph(tri).unwrap();
        assert_eq!(back.edges(), g.edges());
        let keys = |g: &MoveGraph| {
            g.vertices()
                .iter()
                .map(|v| v.key.clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(keys(&back), keys(&g));
        assert_eq!(back.seed(), g.seed());
        assert_eq!(back.to_document(doc.provenance.clone()).to_json(), text);
    }

    #[test]
    fn dot_has_one_node_per_vertex() {
        let (_, link, catalog) = setup();
        let g = build(
            &link,
            &catalog,
            &BuildOptions::new(8, "E1".parse().unwrap()),
        )
        .unwrap();
        let dot = g.export("dot", Provenance::default()).unwrap();
        let nodes = dot.lines().filter(|l| l.contains("[label=\"w")).count();
        assert_eq!(nodes, g.vertex_count());
        assert_eq!(
            dot.lines().filter(|l| l.contains(" -- ")).count(),
            g.edge_count()
        );
    }

    #[test]
    fn rejects_unknown_format_and_schema() {
        let (_, link, catalog) = setup();
        let g = build(&link, &catalog, &BuildOptions::new(6, MoveSet::empty())).unwrap();
        assert!(matches!(
            g.export("svg", Provenance::default()),
            Err(ExportError::UnknownFormat(_))
        ));
        let text = g
            .export("json", Provenance::default())
            .unwrap()
            .replace("\"version\": 1", "\"version\": 9");
        assert!(matches!(
            GraphDocument::from_json(&text),
            Err(ExportError::Schema { .. })
        ));
    }
}
