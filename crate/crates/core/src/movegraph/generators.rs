use std::collections::VecDeque;

use thiserror::Error;

use super::MoveGraph;
use crate::moves::{apply, Move, MoveError, SphereCatalog};
use crate::surface::SurfaceEncoding;

/// Free generators of the fundamental group of a graph, as move loops at the seed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorSet {
    pub loops: Vec<Vec<Move>>,
    pub rank: usize,
}

impl GeneratorSet {
    /// One loop per line: `loop <i>: <move> <move> ...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.loops.iter().enumerate() {
            out.push_str(&format!("loop {i}:"));
            for m in l {
                out.push(' ');
                out.push_str(&m.to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("graph is partial; generators need a complete graph")]
    Partial,
}

/// Spanning-tree generators: a breadth-first tree from the seed, with edges
/// taken in canonical order, and one loop for every edge outside it.
pub fn generators(g: &MoveGraph) -> Result<GeneratorSet, GeneratorError> {
    if !g.is_complete() {
        return Err(GeneratorError::Partial);
    }
    let n = g.vertex_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.source].push(i);
        if e.target != e.source {
            incident[e.target].push(i);
        }
    }
    // parent edge of each vertex, and whether it is traversed forwards
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut reached = vec![false; n];
    let mut in_tree = vec![false; g.edge_count()];
    let mut queue = VecDeque::from([g.seed()]);
    reached[g.seed()] = true;
    while let Some(u) = queue.pop_front() {
        for &i in &incident[u] {
            let e = &g.edges()[i];
            let (v, forward) = if e.source == u {
                (e.target, true)
            } else {
                (e.source, false)
            };
            if !reached[v] {
                reached[v] = true;
                in_tree[i] = true;
                parent[v] = Some((i, forward));
                queue.push_back(v);
            }
        }
    }
    let path_to = |mut v: usize| {
        let mut path = Vec::new();
        while let Some((i, forward)) = parent[v] {
            let e = &g.edges()[i];
            if forward {
                path.push(e.mv);
                v = e.source;
            } else {
                path.push(e.mv.inverse());
                v = e.target;
            }
        }
        path.reverse();
        path
    };
    let mut loops = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if in_tree[i] {
            continue;
        }
        let mut l = path_to(e.source);
        l.push(e.mv);
        l.extend(path_to(e.target).into_iter().rev().map(|m| m.inverse()));
        loops.push(l);
    }
    Ok(GeneratorSet {
        rank: loops.len(),
        loops,
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {step}: {error}")]
    Inapplicable { step: usize, error: MoveError },
    #[error("loop ends at a different surface")]
    Mismatch,
}

/// Applies the moves of `path` in order starting at `seed` and checks that the
/// walk returns to `seed`.
pub fn replay(
    seed: &SurfaceEncoding,
    path: &[Move],
    catalog: &SphereCatalog,
) -> Result<(), ReplayError> {
    let mut enc = seed.clone();
    for (step, m) in path.iter().enumerate() {
        enc = apply(&enc, m, catalog).map_err(|error| ReplayError::Inapplicable { step, error })?;
    }
    if enc.canonical_key() == seed.canonical_key() {
        Ok(())
    } else {
        Err(ReplayError::Mismatch)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::movegraph::{build, BuildOptions};
    use crate::moves::MoveSet;
    use crate::triangulation::Triangulation;

    fn setup() -> (SurfaceEncoding, SphereCatalog) {
        let tri = Arc::new(Triangulation::parse(include_str!("../../data/s3_2tet.tri")).unwrap());
        let catalog = SphereCatalog::vertex_links(&tri);
        (SurfaceEncoding::vertex_link(tri, 0).unwrap(), catalog)
    }

    #[test]
    fn tree_has_no_generators() {
        let (link, catalog) = setup();
        let g = build(
            &link,
            &catalog,
            &BuildOptions::new(8, "E1".parse().unwrap()),
        )
        .unwrap();
        assert_eq!(g.rank(), 0);
        assert_eq!(generators(&g).unwrap(), GeneratorSet::default());
    }

    #[test]
    fn self_loop_is_one_generator() {
        let (link, _) = setup();
        let m: crate::moves::Move = "F2@f0[0-1,2-3,ann=-]".parse().unwrap();
        let g = MoveGraph::from_parts(vec![link], 0, vec![(0, 0, m)], 6, MoveSet::all());
        let set = generators(&g).unwrap();
        assert_eq!(set.rank, 1);
        assert_eq!(set.loops, vec![vec![m]]);
    }

    #[test]
    fn loops_replay_to_the_seed() {
        let (link, catalog) = setup();
        let g = build(
            &link,
            &catalog,
            &BuildOptions::new(8, "E1,F2'".parse().unwrap()),
        )
        .unwrap();
        let set = generators(&g).unwrap();
        assert!(set.rank > 0);
        assert_eq!(set.rank as i64, g.rank());
        for l in &set.loops {
            replay(&link, l, &catalog).unwrap();
        }
        let mut cut = set.loops[0].clone();
        cut.pop();
        assert!(replay(&link, &cut, &catalog).is_err());
        assert_eq!(replay(&link, &[], &catalog), Ok(()));
    }

    #[test]
    fn partial_graph_is_refused() {
        let (link, catalog) = setup();
        let mut options = BuildOptions::new(8, "E1".parse().unwrap());
        options.limits.max_vertices = Some(2);
        let Err(crate::movegraph::BuildError::LimitExceeded { partial, .. }) =
            build(&link, &catalog, &options)
        else {
            panic!("expected a partial graph");
        };
        assert_eq!(generators(&partial), Err(GeneratorError::Partial));
    }
}
