//! Brute-force reference computations for tests.
//!
//! Nothing here shares code with the main modules' search logic: the oracle
//! reads the triangulation text itself, enumerates matchings by trying every
//! pairing, and talks to the surface and move modules only through their text
//! forms (parse, validate, apply, print).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::moves::{apply, Move, SphereCatalog};
use crate::surface::{Classification, SurfaceEncoding};
use crate::triangulation::Triangulation;

/// Largest weight the exhaustive searches accept.
pub const WEIGHT_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("odd number of boundary points ({0})")]
    OddTotal(usize),
    #[error("weight {0} is above the oracle cap of {WEIGHT_CAP}")]
    AboveCap(usize),
    #[error("bad input: {0}")]
    Input(String),
}

/// All non-crossing perfect matchings of the boundary points of a triangle with
/// the given number of points per side, points numbered cyclically. Each
/// matching is a sorted list of pairs `(a, b)` with `a < b`.
pub fn oracle_matchings(
    points_per_side: (usize, usize, usize),
) -> Result<Vec<Vec<(usize, usize)>>, OracleError> {
    let n = points_per_side.0 + points_per_side.1 + points_per_side.2;
    if n % 2 == 1 {
        return Err(OracleError::OddTotal(n));
    }
    Ok(matchings_on(n))
}

fn matchings_on(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut all = Vec::new();
    let mut used = vec![false; n];
    let mut current = Vec::new();
    every_pairing(&mut used, &mut current, &mut all);
    all.retain(|m| {
        m.iter()
            .all(|&(a, b)| m.iter().all(|&(c, d)| !(a < c && c < b && b < d)))
    });
    for m in &mut all {
        m.sort();
    }
    all.sort();
    all
}

fn every_pairing(
    used: &mut [bool],
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let Some(a) = used.iter().position(|u| !u) else {
        out.push(current.clone());
        return;
    };
    used[a] = true;
    for b in a + 1..used.len() {
        if !used[b] {
            used[b] = true;
            current.push((a, b));
            every_pairing(used, current, out);
            current.pop();
            used[b] = false;
        }
    }
    used[a] = false;
}

const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn edge_of(a: usize, b: usize) -> usize {
    EDGES
        .iter()
        .position(|&(x, y)| (x, y) == (a.min(b), a.max(b)))
        .expect("distinct vertices")
}

/// What the oracle needs to know about a triangulation, computed from its text.
struct Table {
    tets: usize,
    /// Edge class of each local edge.
    edge_class: Vec<[usize; 6]>,
    edges: usize,
    vertex_class: Vec<[usize; 4]>,
    vertices: usize,
    /// For each face class: its representative tetrahedron and local face, and
    /// the edge class under each of its three sides.
    faces: Vec<(usize, usize, [usize; 3])>,
}

impl Table {
    fn read(text: &str) -> Result<Self, OracleError> {
        let mut glue: Vec<[(usize, [usize; 4]); 4]> = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() != 6 || words[0] != "tet" {
                return Err(OracleError::Input(format!("unreadable line `{line}`")));
            }
            let mut row = [(0, [0; 4]); 4];
            for (f, w) in words[2..].iter().enumerate() {
                let (n, p) = w
                    .split_once('/')
                    .ok_or_else(|| OracleError::Input(format!("bad gluing `{w}`")))?;
                let n = n
                    .parse()
                    .map_err(|_| OracleError::Input(format!("bad gluing `{w}`")))?;
                let mut perm = [0; 4];
                for (i, ch) in p.chars().enumerate().take(4) {
                    perm[i] = ch
                        .to_digit(10)
                        .ok_or_else(|| OracleError::Input(format!("bad gluing `{w}`")))?
                        as usize;
                }
                row[f] = (n, perm);
            }
            glue.push(row);
        }
        let tets = glue.len();

        // edge classes by flood fill across glued faces, in order of least member
        let mut edge_class = vec![[usize::MAX; 6]; tets];
        let mut edges = 0;
        for t in 0..tets {
            for l in 0..6 {
                if edge_class[t][l] != usize::MAX {
                    continue;
                }
                let mut stack = vec![(t, l)];
                edge_class[t][l] = edges;
                while let Some((s, k)) = stack.pop() {
                    let (a, b) = EDGES[k];
                    for f in (0..4).filter(|&f| f != a && f != b) {
                        let (n, p) = glue[s][f];
                        let k2 = edge_of(p[a], p[b]);
                        if edge_class[n][k2] == usize::MAX {
                            edge_class[n][k2] = edges;
                            stack.push((n, k2));
                        }
                    }
                }
                edges += 1;
            }
        }

        let mut vertex_class = vec![[usize::MAX; 4]; tets];
        let mut vertices = 0;
        for t in 0..tets {
            for v in 0..4 {
                if vertex_class[t][v] != usize::MAX {
                    continue;
                }
                let mut stack = vec![(t, v)];
                vertex_class[t][v] = vertices;
                while let Some((s, u)) = stack.pop() {
                    for f in (0..4).filter(|&f| f != u) {
                        let (n, p) = glue[s][f];
                        if vertex_class[n][p[u]] == usize::MAX {
                            vertex_class[n][p[u]] = vertices;
                            stack.push((n, p[u]));
                        }
                    }
                }
                vertices += 1;
            }
        }

        let mut seen = vec![[false; 4]; tets];
        let mut faces = Vec::new();
        for t in 0..tets {
            for f in 0..4 {
                if seen[t][f] {
                    continue;
                }
                let (n, p) = glue[t][f];
                seen[t][f] = true;
                seen[n][p[f]] = true;
                let c: Vec<usize> = (0..4).filter(|&v| v != f).collect();
                let sides = [0, 1, 2].map(|k| edge_class[t][edge_of(c[k], c[(k + 1) % 3])]);
                faces.push((t, f, sides));
            }
        }
        Ok(Self {
            tets,
            edge_class,
            edges,
            vertex_class,
            vertices,
            faces,
        })
    }
}

/// Counts, per-edge, read back from a surface text.
fn counts_of(text: &str) -> Vec<usize> {
    text.lines()
        .find_map(|l| l.strip_prefix("edges"))
        .map(|rest| {
            rest.split_whitespace()
                .filter_map(|w| w.parse().ok())
                .collect()
        })
        .unwrap_or_default()
}

fn weight_of(text: &str) -> usize {
    counts_of(text).iter().sum()
}

fn parse_valid(tri: &Arc<Triangulation>, text: &str) -> Option<SurfaceEncoding> {
    let enc = SurfaceEncoding::parse(tri.clone(), text).ok()?;
    enc.validate().is_valid().then_some(enc)
}

/// Every valid crudely almost normal surface of weight at most `max_weight`, as
/// canonical texts.
pub fn oracle_surfaces(
    triangulation_text: &str,
    max_weight: usize,
) -> Result<BTreeSet<String>, OracleError> {
    if max_weight > WEIGHT_CAP {
        return Err(OracleError::AboveCap(max_weight));
    }
    let table = Table::read(triangulation_text)?;
    let tri = Arc::new(
        Triangulation::parse(triangulation_text).map_err(|e| OracleError::Input(e.to_string()))?,
    );
    let mut matchings: HashMap<usize, Vec<Vec<(usize, usize)>>> = HashMap::new();
    let mut out = BTreeSet::new();

    let mut counts = vec![0; table.edges];
    loop {
        if counts.iter().sum::<usize>() <= max_weight {
            surfaces_with_counts(&table, &tri, &counts, &mut matchings, &mut out);
        }
        // next count vector, odometer style
        let mut i = 0;
        while i < counts.len() {
            counts[i] += 1;
            if counts[i] <= max_weight {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
    }
    Ok(out)
}

fn surfaces_with_counts(
    table: &Table,
    tri: &Arc<Triangulation>,
    counts: &[usize],
    matchings: &mut HashMap<usize, Vec<Vec<(usize, usize)>>>,
    out: &mut BTreeSet<String>,
) {
    let sizes: Vec<usize> = table
        .faces
        .iter()
        .map(|(_, _, sides)| sides.iter().map(|&e| counts[e]).sum())
        .collect();
    if sizes.iter().any(|n| n % 2 == 1) {
        return;
    }
    for &n in &sizes {
        matchings.entry(n).or_insert_with(|| matchings_on(n));
    }
    let options: Vec<&Vec<Vec<(usize, usize)>>> = sizes.iter().map(|n| &matchings[n]).collect();
    let mut choice = vec![0; options.len()];
    loop {
        let mut head = format!(
            "surface {} {} {}\nedges",
            table.edges,
            table.faces.len(),
            table.tets
        );
        for c in counts {
            head.push_str(&format!(" {c}"));
        }
        head.push('\n');
        for (f, (&k, opts)) in choice.iter().zip(&options).enumerate() {
            head.push_str(&format!("face {f}:"));
            for (a, b) in &opts[k] {
                head.push_str(&format!(" {a}-{b}"));
            }
            head.push('\n');
        }
        with_annuli(table, tri, counts, &head, out);

        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
}

/// Adds the surface `head` (all lines but `end`) with every combination of
/// per-tetrahedron annulus choices that validates.
fn with_annuli(
    table: &Table,
    tri: &Arc<Triangulation>,
    counts: &[usize],
    head: &str,
    out: &mut BTreeSet<String>,
) {
    let mut per_tet: Vec<Vec<Option<String>>> = Vec::new();
    for t in 0..table.tets {
        let mut points = Vec::new();
        for l in 0..6 {
            for j in 0..counts[table.edge_class[t][l]] {
                points.push(format!("{l}.{j}"));
            }
        }
        let mut lines = BTreeSet::new();
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                let text = format!("{head}annulus {t}: {p} {q}\nend\n");
                if let Some(enc) = parse_valid(tri, &text) {
                    let canon = enc.to_text();
                    let line = canon
                        .lines()
                        .find(|l| l.starts_with("annulus"))
                        .expect("one annulus")
                        .to_string();
                    lines.insert(line);
                }
            }
        }
        let mut opts = vec![None];
        opts.extend(lines.into_iter().map(Some));
        per_tet.push(opts);
    }
    let mut choice = vec![0; per_tet.len()];
    loop {
        let mut text = head.to_string();
        for (t, &k) in choice.iter().enumerate() {
            if let Some(line) = &per_tet[t][k] {
                text.push_str(line);
                text.push('\n');
            }
        }
        text.push_str("end\n");
        if let Some(enc) = parse_valid(tri, &text) {
            out.insert(enc.to_text());
        }
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < per_tet[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
}

/// Points on each face, read back from a surface text through its counts.
fn face_sizes(table: &Table, counts: &[usize]) -> Vec<usize> {
    table
        .faces
        .iter()
        .map(|(_, _, sides)| sides.iter().map(|&e| counts[e]).sum())
        .collect()
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect()
}

/// Every move text of the allowed kinds whose location numbers are in range for
/// a surface with the given counts. Most of them do not apply.
fn move_texts(
    table: &Table,
    counts: &[usize],
    kinds: &BTreeSet<String>,
    spheres: &[Vec<usize>],
) -> Vec<String> {
    let sizes = face_sizes(table, counts);
    let mut out = Vec::new();
    for sign in ['+', '-'] {
        if kinds.contains("V0") {
            for v in 0..table.vertices {
                for (f, &(t, face, _)) in table.faces.iter().enumerate() {
                    let corners: Vec<usize> = (0..4).filter(|&x| x != face).collect();
                    for (c, &x) in corners.iter().enumerate() {
                        if table.vertex_class[t][x] != v {
                            continue;
                        }
                        for (a, b) in pairs(sizes[f]) {
                            out.push(format!("V0{sign}@v{v}[f{f}.{c},{a}-{b}]"));
                        }
                    }
                }
            }
        }
        if kinds.contains("E1") {
            for (e, &n) in counts.iter().enumerate() {
                for gap in 0..=n {
                    for (f, (_, _, sides)) in table.faces.iter().enumerate() {
                        for (s, &edge) in sides.iter().enumerate() {
                            if edge != e {
                                continue;
                            }
                            for (a, b) in pairs(sizes[f]) {
                                out.push(format!("E1{sign}@e{e}[{gap},f{f}.{s},{a}-{b}]"));
                            }
                        }
                    }
                }
            }
        }
    }
    for (kind, present) in [("F2", kinds.contains("F2")), ("F2'", kinds.contains("F2'"))] {
        if !present {
            continue;
        }
        for (f, &n) in sizes.iter().enumerate() {
            let ps = pairs(n);
            for &(a, b) in &ps {
                for &(c, d) in &ps {
                    if [a, b].contains(&c) || [a, b].contains(&d) {
                        continue;
                    }
                    for ann in ["-", "0", "1", "01"] {
                        out.push(format!("{kind}@f{f}[{a}-{b},{c}-{d},ann={ann}]"));
                    }
                }
            }
        }
    }
    for (kind, present) in [
        ("PINCH", kinds.contains("PINCH")),
        ("UNPINCH", kinds.contains("UNPINCH")),
    ] {
        if !present {
            continue;
        }
        for t in 0..table.tets {
            for (s, sphere) in spheres.iter().enumerate() {
                for l in 0..6 {
                    for j in 0..counts[table.edge_class[t][l]] {
                        for l2 in 0..6 {
                            for j2 in 0..sphere[table.edge_class[t][l2]] {
                                out.push(format!("{kind}@t{t}[{l}.{j},s{s},{l2}.{j2}]"));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Fixed point of the seed under every move text of the listed kinds (comma
/// separated, e.g. `E1,F2'`), keeping results of weight at most `max_weight`.
/// Pinches use the vertex-link catalog.
pub fn oracle_closure(
    triangulation_text: &str,
    seed_text: &str,
    max_weight: usize,
    kinds: &str,
) -> Result<BTreeSet<String>, OracleError> {
    if max_weight > WEIGHT_CAP {
        return Err(OracleError::AboveCap(max_weight));
    }
    let table = Table::read(triangulation_text)?;
    let tri = Arc::new(
        Triangulation::parse(triangulation_text).map_err(|e| OracleError::Input(e.to_string()))?,
    );
    let kinds: BTreeSet<String> = kinds
        .split(',')
        .map(str::trim)
        .filter(|k| !k.is_empty())
        .map(String::from)
        .collect();
    let known = ["V0", "E1", "F2", "F2'", "PINCH", "UNPINCH"];
    if let Some(k) = kinds.iter().find(|k| !known.contains(&k.as_str())) {
        return Err(OracleError::Input(format!("unknown move kind `{k}`")));
    }
    let catalog = SphereCatalog::vertex_links(&tri);
    let spheres: Vec<Vec<usize>> = catalog
        .iter()
        .map(|(_, s)| counts_of(&s.encoding().to_text()))
        .collect();

    let seed = parse_valid(&tri, seed_text)
        .ok_or_else(|| OracleError::Input("seed is not a valid surface".into()))?;
    let seed = seed.to_text();
    if weight_of(&seed) > max_weight {
        return Err(OracleError::Input("seed is above the weight limit".into()));
    }
    let mut found = BTreeMap::new();
    found.insert(seed.clone(), ());
    let mut queue = VecDeque::from([seed]);
    while let Some(text) = queue.pop_front() {
        let enc = SurfaceEncoding::parse(tri.clone(), &text).expect("stored texts parse");
        for mt in move_texts(&table, &counts_of(&text), &kinds, &spheres) {
            let Ok(m) = mt.parse::<Move>() else {
                continue;
            };
            let Ok(next) = apply(&enc, &m, &catalog) else {
                continue;
            };
            let next = next.to_text();
            if weight_of(&next) <= max_weight && !found.contains_key(&next) {
                found.insert(next.clone(), ());
                queue.push_back(next);
            }
        }
    }
    Ok(found.into_keys().collect())
}

/// Whether a canonical surface text classifies as crudely normal.
pub fn is_crudely_normal(triangulation_text: &str, surface_text: &str) -> bool {
    let Ok(tri) = Triangulation::parse(triangulation_text) else {
        return false;
    };
    SurfaceEncoding::parse(Arc::new(tri), surface_text)
        .map(|e| e.validate() == Classification::CrudelyNormal)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: &str = include_str!("../data/s3_2tet.tri");

    fn link_text() -> String {
        let tri = Arc::new(Triangulation::parse(S3).unwrap());
        SurfaceEncoding::vertex_link(tri, 0).unwrap().to_text()
    }

    #[test]
    fn matching_counts() {
        assert_eq!(
            oracle_matchings((0, 0, 0)).unwrap(),
            vec![Vec::<(usize, usize)>::new()]
        );
        assert_eq!(oracle_matchings((2, 0, 0)).unwrap(), vec![vec![(0, 1)]]);
        assert_eq!(oracle_matchings((2, 2, 2)).unwrap().len(), 5);
        assert_eq!(oracle_matchings((1, 1, 1)), Err(OracleError::OddTotal(3)));
        assert_eq!(oracle_matchings((4, 2, 4)).unwrap().len(), 42);
    }

    #[test]
    fn table_matches_the_triangulation() {
        let table = Table::read(S3).unwrap();
        let tri = Triangulation::parse(S3).unwrap();
        assert_eq!(table.edges, tri.edge_count());
        assert_eq!(table.vertices, tri.vertex_count());
        assert_eq!(table.faces.len(), tri.face_count());
    }

    #[test]
    fn weight_zero_is_the_empty_surface() {
        let all = oracle_surfaces(S3, 0).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all.iter().next().unwrap().contains("edges 0 0 0"));
    }

    #[test]
    fn weight_six_contains_the_vertex_link() {
        assert!(oracle_surfaces(S3, 9).is_err());
        let link = link_text();
        // the link has weight 6; checking membership among surfaces with its counts
        // is enough and much cheaper than the whole weight-6 set
        let table = Table::read(S3).unwrap();
        let tri = Arc::new(Triangulation::parse(S3).unwrap());
        let mut out = BTreeSet::new();
        surfaces_with_counts(
            &table,
            &tri,
            &counts_of(&link),
            &mut HashMap::new(),
            &mut out,
        );
        assert!(out.contains(&link));
        assert!(is_crudely_normal(S3, &link));
    }

    #[test]
    fn closures() {
        let link = link_text();
        assert_eq!(
            oracle_closure(S3, &link, 8, "").unwrap(),
            BTreeSet::from([link.clone()])
        );
        let closed = oracle_closure(S3, &link, 8, "E1").unwrap();
        assert!(closed.len() > 1);
        for s in closed.iter().take(2) {
            let again = oracle_closure(S3, s, 8, "E1").unwrap();
            assert_eq!(again, closed);
        }
        assert_eq!(
            oracle_closure(S3, &link, 9, "E1"),
            Err(OracleError::AboveCap(9))
        );
    }
}
