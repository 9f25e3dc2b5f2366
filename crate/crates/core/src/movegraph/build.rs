use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use super::{MoveGraph, Stats, Vertex};
use crate::moves::{neighbors, Move, MoveSet, Neighbors, SphereCatalog};
use crate::surface::{CanonicalKey, Classification, SurfaceEncoding};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: Option<usize>,
    pub max_time: Option<Duration>,
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub budget: usize,
    pub move_set: MoveSet,
    pub workers: usize,
    pub limits: Limits,
}

impl BuildOptions {
    pub fn new(budget: usize, move_set: MoveSet) -> Self {
        Self {
            budget,
            move_set,
            workers: 1,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("seed surface is invalid: {0}")]
    SeedInvalid(String),
    #[error("seed surface is not crudely normal")]
    SeedNotCrudelyNormal,
    #[error("seed weight {weight} exceeds the budget {budget}")]
    SeedOverBudget { weight: usize, budget: usize },
    #[error("worker pool: {0}")]
    Workers(#[from] rayon::ThreadPoolBuildError),
    #[error("{limit} limit exceeded after {} vertices; graph is partial", partial.vertex_count())]
    LimitExceeded {
        limit: &'static str,
        partial: Box<MoveGraph>,
    },
}

/// Breadth-first closure of `seed` under [`neighbors`]. Frontiers are expanded
/// in parallel and merged in key order, so the result does not depend on the
/// number of workers. Limits are checked between levels.
pub fn build(
    seed: &SurfaceEncoding,
    catalog: &SphereCatalog,
    options: &BuildOptions,
) -> Result<MoveGraph, BuildError> {
    match seed.validate() {
        Classification::CrudelyNormal => {}
        Classification::CrudelyAlmostNormal => return Err(BuildError::SeedNotCrudelyNormal),
        Classification::Invalid(v) => return Err(BuildError::SeedInvalid(v.reason().to_string())),
    }
    if seed.weight() > options.budget {
        return Err(BuildError::SeedOverBudget {
            weight: seed.weight(),
            budget: options.budget,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()?;
    let start = Instant::now();

    let mut found: HashMap<CanonicalKey, SurfaceEncoding> = HashMap::new();
    let seed_key = seed.canonical_key();
    found.insert(seed_key.clone(), seed.clone());
    let mut frontier = vec![(seed_key.clone(), seed.clone())];
    let mut edges: Vec<(CanonicalKey, CanonicalKey, Move)> = Vec::new();
    let mut stats = Stats::default();
    let mut cut = None;

    while !frontier.is_empty() {
        if let Some(max) = options.limits.max_time {
            if start.elapsed() > max {
                cut = Some("time");
                break;
            }
        }
        let expanded: Vec<Neighbors> = pool.install(|| {
            frontier
                .par_iter()
                .map(|(_, enc)| neighbors(enc, options.budget, &options.move_set, catalog))
                .collect()
        });
        stats.levels += 1;
        let mut next = Vec::new();
        for ((key, _), found_here) in frontier.iter().zip(expanded) {
            stats.rejected_by_budget += found_here.rejected_by_budget;
            for n in found_here.moves {
                if &n.key == key {
                    continue;
                }
                if !found.contains_key(&n.key) {
                    found.insert(n.key.clone(), n.encoding.clone());
                    next.push((n.key.clone(), n.encoding));
                }
                if key < &n.key {
                    edges.push((key.clone(), n.key, n.mv));
                } else {
                    edges.push((n.key, key.clone(), n.mv.inverse()));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        frontier = next;
        if let Some(max) = options.limits.max_vertices {
            if found.len() > max {
                cut = Some("vertex");
                break;
            }
        }
    }
    stats.wall_time = start.elapsed();

    let mut vertices: Vec<Vertex> = found
        .into_iter()
        .map(|(key, encoding)| Vertex { key, encoding })
        .collect();
    vertices.sort_by(|a, b| a.key.cmp(&b.key));
    let id = |k: &CanonicalKey| {
        vertices
            .binary_search_by(|v| v.key.cmp(k))
            .expect("endpoint is a vertex")
    };
    let edges: Vec<(usize, usize, Move)> = edges
        .into_iter()
        .map(|(u, v, m)| (id(&u), id(&v), m))
        .collect();
    let seed_id = id(&seed_key);
    let graph = MoveGraph::assemble(
        vertices,
        seed_id,
        edges,
        options.budget,
        options.move_set.clone(),
        cut.is_none(),
        stats,
    );
    match cut {
        None => Ok(graph),
        Some(limit) => Err(BuildError::LimitExceeded {
            limit,
            partial: Box::new(graph),
        }),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::triangulation::Triangulation;

    fn setup() -> (SurfaceEncoding, SphereCatalog) {
        let tri = Arc::new(Triangulation::parse(include_str!("../../data/s3_2tet.tri")).unwrap());
        let catalog = SphereCatalog::vertex_links(&tri);
        (SurfaceEncoding::vertex_link(tri, 0).unwrap(), catalog)
    }

    #[test]
    fn seed_over_budget() {
        let (link, catalog) = setup();
        let err = build(&link, &catalog, &BuildOptions::new(5, MoveSet::standard())).unwrap_err();
        assert!(matches!(
            err,
            BuildError::SeedOverBudget {
                weight: 6,
                budget: 5
            }
        ));
    }

    #[test]
    fn no_moves_single_vertex() {
        let (link, catalog) = setup();
        let g = build(&link, &catalog, &BuildOptions::new(12, MoveSet::empty())).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.rank(), 0);
        assert!(g.is_complete());
    }

    #[test]
    fn edge_tongues_at_weight_eight() {
        let (link, catalog) = setup();
        let g = build(
            &link,
            &catalog,
            &BuildOptions::new(8, "E1".parse().unwrap()),
        )
        .unwrap();
        assert!(g.vertex_count() > 1);
        assert!(g.vertices().iter().all(|v| v.encoding.weight() <= 8));
        assert!(g.stats().rejected_by_budget > 0);
        assert!(g.edges().iter().all(|e| e.source < e.target));
        assert_eq!(g.seed_vertex().key, link.canonical_key());
    }

    #[test]
    fn worker_count_does_not_matter() {
        let (link, catalog) = setup();
        let mut options = BuildOptions::new(8, "E1,F2'".parse().unwrap());
        let one = build(&link, &catalog, &options).unwrap();
        options.workers = 4;
        let four = build(&link, &catalog, &options).unwrap();
        assert_eq!(one.edges(), four.edges());
        let keys = |g: &MoveGraph| {
            g.vertices()
                .iter()
                .map(|v| v.key.clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(keys(&one), keys(&four));
    }

    #[test]
    fn vertex_limit_gives_partial_graph() {
        let (link, catalog) = setup();
        let mut options = BuildOptions::new(8, "E1".parse().unwrap());
        options.limits.max_vertices = Some(3);
        match build(&link, &catalog, &options) {
            Err(BuildError::LimitExceeded { limit, partial }) => {
                assert_eq!(limit, "vertex");
                assert!(!partial.is_complete());
                assert!(partial.vertex_count() > 3);
            }
            other => panic!("expected a partial graph, got {other:?}"),
        }
    }
}
