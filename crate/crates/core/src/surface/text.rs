//! Text form of surface encodings.
//!
//! ```text
//! surface <edge classes> <face classes> <tetrahedra>
//! edges <n0> <n1> ...
//! face <i>: <a>-<b> <c>-<d> ...
//! annulus <t>: <l>.<j> <l>.<j>
//! end
//! ```
//!
//! `edges` lists the point count of every edge class. Each `face` line gives the
//! arcs of a face class as pairs of cyclic positions: side 0 (corner 0 to
//! corner 1), side 1, side 2, each side ordered along its direction. An
//! `annulus` line pairs two boundary curves of tetrahedron `t`, each named by one
//! of its points (local edge `l`, index `j` from the lower local vertex).
//! `#` starts a comment. The canonical form lists every face, arcs sorted with
//! `a < b`, annuli by least points, and is used as the canonical key.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use super::{ArcSystem, PointRef, SurfaceEncoding, SurfaceError};
use crate::triangulation::Triangulation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceTextError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Mismatch { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] SurfaceError),
}

impl SurfaceTextError {
    pub fn is_syntax(&self) -> bool {
        matches!(self, SurfaceTextError::Syntax { .. })
    }
}

pub(super) fn write(enc: &SurfaceEncoding) -> String {
    let tri = enc.triangulation();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "surface {} {} {}",
        tri.edge_count(),
        tri.face_count(),
        tri.tet_count()
    );
    out.push_str("edges");
    for n in enc.counts() {
        let _ = write!(out, " {n}");
    }
    out.push('\n');
    for (f, arcs) in enc.faces().iter().enumerate() {
        let _ = write!(out, "face {f}:");
        for (a, b) in arcs.arcs() {
            let _ = write!(out, " {a}-{b}");
        }
        out.push('\n');
    }
    for t in 0..tri.tet_count() {
        for [a, b] in enc.annuli(t) {
            let _ = writeln!(out, "annulus {t}: {a} {b}");
        }
    }
    out.push_str("end\n");
    out
}

fn syntax(line: usize, message: impl Into<String>) -> SurfaceTextError {
    SurfaceTextError::Syntax {
        line,
        message: message.into(),
    }
}

fn mismatch(line: usize, message: impl Into<String>) -> SurfaceTextError {
    SurfaceTextError::Mismatch {
        line,
        message: message.into(),
    }
}

fn number(line: usize, token: &str) -> Result<usize, SurfaceTextError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("expected a number, found `{token}`")))
}

/// Splits `<keyword> <index>: <rest>`.
fn indexed<'a>(
    line: usize,
    rest: &'a str,
    keyword: &str,
) -> Result<(usize, &'a str), SurfaceTextError> {
    let (head, tail) = rest
        .split_once(':')
        .ok_or_else(|| syntax(line, format!("expected `{keyword} <index>:`")))?;
    Ok((number(line, head.trim())?, tail))
}

fn point(line: usize, token: &str) -> Result<PointRef, SurfaceTextError> {
    let (l, j) = token
        .split_once('.')
        .ok_or_else(|| syntax(line, format!("expected `<edge>.<index>`, found `{token}`")))?;
    let edge = number(line, l)?;
    if edge >= 6 {
        return Err(mismatch(line, format!("local edge {edge} does not exist")));
    }
    Ok(PointRef {
        edge: edge as u8,
        idx: number(line, j)?,
    })
}

pub(super) fn parse(
    tri: Arc<Triangulation>,
    input: &str,
) -> Result<SurfaceEncoding, SurfaceTextError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "empty surface document"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    if words.len() != 4 || words[0] != "surface" {
        return Err(syntax(
            ln,
            "expected `surface <edges> <faces> <tetrahedra>`",
        ));
    }
    let dims = [
        number(ln, words[1])?,
        number(ln, words[2])?,
        number(ln, words[3])?,
    ];
    let expected = [tri.edge_count(), tri.face_count(), tri.tet_count()];
    for (what, (got, want)) in ["edge classes", "face classes", "tetrahedra"]
        .iter()
        .zip(dims.iter().zip(expected))
    {
        if *got != want {
            return Err(mismatch(
                ln,
                format!("surface declares {got} {what}, triangulation has {want}"),
            ));
        }
    }

    let (ln, edge_line) = lines
        .next()
        .ok_or_else(|| syntax(ln + 1, "missing `edges` line"))?;
    let mut words = edge_line.split_whitespace();
    if words.next() != Some("edges") {
        return Err(syntax(ln, "expected `edges <counts>`"));
    }
    let counts = words
        .map(|w| number(ln, w))
        .collect::<Result<Vec<_>, _>>()?;
    if counts.len() != tri.edge_count() {
        return Err(mismatch(
            ln,
            format!(
                "{} edge counts given, triangulation has {} edge classes",
                counts.len(),
                tri.edge_count()
            ),
        ));
    }

    let mut partners: Vec<Option<Vec<usize>>> = vec![None; tri.face_count()];
    let mut annuli: Vec<Vec<[PointRef; 2]>> = vec![Vec::new(); tri.tet_count()];
    let mut finished = false;
    let mut last = ln;
    for (ln, line) in lines {
        last = ln;
        if finished {
            return Err(syntax(ln, "text after `end`"));
        }
        if line == "end" {
            finished = true;
        } else if let Some(rest) = line.strip_prefix("face ") {
            let (f, arcs) = indexed(ln, rest, "face")?;
            if f >= tri.face_count() {
                return Err(mismatch(ln, format!("face class {f} does not exist")));
            }
            if partners[f].is_some() {
                return Err(mismatch(ln, format!("face class {f} listed twice")));
            }
            let fc = &tri.face_classes()[f];
            let n: usize = fc.sides.iter().map(|s| counts[s.edge]).sum();
            let mut partner = vec![usize::MAX; n];
            for token in arcs.split_whitespace() {
                let (a, b) = token
                    .split_once('-')
                    .ok_or_else(|| syntax(ln, format!("expected `<a>-<b>`, found `{token}`")))?;
                let (a, b) = (number(ln, a)?, number(ln, b)?);
                if a >= n || b >= n {
                    return Err(mismatch(
                        ln,
                        format!("arc {a}-{b} is out of range for {n} points on face class {f}"),
                    ));
                }
                if a == b || partner[a] != usize::MAX || partner[b] != usize::MAX {
                    return Err(mismatch(ln, format!("arc {a}-{b} reuses a point")));
                }
                partner[a] = b;
                partner[b] = a;
            }
            partners[f] = Some(partner);
        } else if let Some(rest) = line.strip_prefix("annulus ") {
            let (t, points) = indexed(ln, rest, "annulus")?;
            if t >= tri.tet_count() {
                return Err(mismatch(ln, format!("tetrahedron {t} does not exist")));
            }
            let pts: Vec<&str> = points.split_whitespace().collect();
            if pts.len() != 2 {
                return Err(syntax(ln, "an annulus names exactly two points"));
            }
            annuli[t].push([point(ln, pts[0])?, point(ln, pts[1])?]);
        } else {
            return Err(syntax(ln, format!("unexpected line `{line}`")));
        }
    }
    if !finished {
        return Err(syntax(last, "missing `end`"));
    }

    let mut faces = Vec::with_capacity(partners.len());
    for (f, partner) in partners.into_iter().enumerate() {
        let fc = &tri.face_classes()[f];
        let side_counts = [
            counts[fc.sides[0].edge],
            counts[fc.sides[1].edge],
            counts[fc.sides[2].edge],
        ];
        faces.push(
            ArcSystem::new(f, side_counts, partner.unwrap_or_default())
                .map_err(SurfaceError::from)?,
        );
    }
    Ok(SurfaceEncoding::from_parts(tri, counts, faces, annuli)?)
}
