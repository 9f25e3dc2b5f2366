//! The graph of surfaces reachable from a seed by moves within a weight budget.
//!
//! Vertices are canonical keys, sorted; vertex 0 is not necessarily the seed.
//! Each undirected edge is stored once, from the endpoint with the smaller key,
//! with the move that leads from that endpoint to the other.

mod audit;
mod build;
mod export;
mod generators;

use std::collections::HashMap;
use std::time::Duration;

use crate::moves::{Move, MoveSet};
use crate::surface::{CanonicalKey, SurfaceEncoding};

pub use audit::{audit, AuditError, AuditReport};
pub use build::{build, BuildError, BuildOptions, Limits};
pub use export::{
    short_hash, EdgeRecord, ExportError, GraphDocument, Provenance, StatsRecord, VertexRecord,
    SCHEMA,
};
pub use generators::{generators, replay, GeneratorError, GeneratorSet, ReplayError};

#[derive(Clone, Debug)]
pub struct Vertex {
    pub key: CanonicalKey,
    pub encoding: SurfaceEncoding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub mv: Move,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub vertices: usize,
    pub edges: usize,
    pub rank: i64,
    /// Candidate moves skipped because they would exceed the budget, summed
    /// over all expanded vertices.
    pub rejected_by_budget: usize,
    /// Breadth-first levels expanded.
    pub levels: usize,
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub struct MoveGraph {
    vertices: Vec<Vertex>,
    index: HashMap<CanonicalKey, usize>,
    edges: Vec<Edge>,
    seed: usize,
    budget: usize,
    move_set: MoveSet,
    complete: bool,
    stats: Stats,
}

impl MoveGraph {
    /// Assembles a graph from explicit parts. Vertices are re-sorted by key and
    /// edges normalized; the graph is marked complete.
    pub fn from_parts(
        encodings: Vec<SurfaceEncoding>,
        seed: usize,
        edges: Vec<(usize, usize, Move)>,
        budget: usize,
        move_set: MoveSet,
    ) -> Self {
        let keyed: Vec<(CanonicalKey, usize)> = encodings
            .iter()
            .enumerate()
            .map(|(i, e)| (e.canonical_key(), i))
            .collect();
        let mut order = keyed.clone();
        order.sort();
        let mut new_id = vec![0; encodings.len()];
        for (pos, (_, old)) in order.iter().enumerate() {
            new_id[*old] = pos;
        }
        let mut slots: Vec<Option<SurfaceEncoding>> = encodings.into_iter().map(Some).collect();
        let vertices: Vec<Vertex> = order
            .into_iter()
            .map(|(key, old)| Vertex {
                key,
                encoding: slots[old].take().expect("each vertex once"),
            })
            .collect();
        let edges = edges
            .into_iter()
            .map(|(u, v, mv)| (new_id[u], new_id[v], mv))
            .collect();
        Self::assemble(
            vertices,
            new_id[seed],
            edges,
            budget,
            move_set,
            true,
            Stats::default(),
        )
    }

    pub(crate) fn assemble(
        vertices: Vec<Vertex>,
        seed: usize,
        edges: Vec<(usize, usize, Move)>,
        budget: usize,
        move_set: MoveSet,
        complete: bool,
        mut stats: Stats,
    ) -> Self {
        let mut edges: Vec<(usize, usize, String, Move)> = edges
            .into_iter()
            .map(|(u, v, mv)| {
                if u <= v {
                    (u, v, mv)
                } else {
                    (v, u, mv.inverse())
                }
            })
            .map(|(u, v, mv)| (u, v, mv.to_string(), mv))
            .collect();
        edges.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
        edges.dedup_by(|a, b| (a.0, a.1, &a.2) == (b.0, b.1, &b.2));
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(source, target, _, mv)| Edge { source, target, mv })
            .collect();
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.key.clone(), i))
            .collect();
        stats.vertices = vertices.len();
        stats.edges = edges.len();
        stats.rank = edges.len() as i64 - vertices.len() as i64 + 1;
        Self {
            vertices,
            index,
            edges,
            seed,
            budget,
            move_set,
            complete,
            stats,
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn seed(&self) -> usize {
        self.seed
    }

    pub fn seed_vertex(&self) -> &Vertex {
        &self.vertices[self.seed]
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn move_set(&self) -> &MoveSet {
        &self.move_set
    }

    /// False for a graph cut short by a limit.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    /// `|E| - |V| + 1`, the rank of the free fundamental group.
    pub fn rank(&self) -> i64 {
        self.stats.rank
    }

    /// Graphviz rendering with nodes named by short key hashes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph movegraph {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = if i == self.seed {
                ", shape=doublecircle"
            } else {
                ""
            };
            out.push_str(&format!(
                "  \"{}\" [label=\"w{}\"{shape}];\n",
                short_hash(&v.key),
                v.encoding.weight()
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                short_hash(&self.vertices[e.source].key),
                short_hash(&self.vertices[e.target].key),
                e.mv
            ));
        }
        out.push_str("}\n");
        out
    }
}
