//! Elementary moves and pinches as local rewrites of surface encodings.
//!
//! | kind      | location                          | weight change          |
//! |-----------|-----------------------------------|------------------------|
//! | `V0±`     | vertex, face corner, arc          | ± degree of the vertex |
//! | `E1±`     | edge, gap, face side, arc         | ± 2                    |
//! | `F2`/`F2'`| face, two arcs, annulus sides     | 0                      |
//! | `PINCH`   | tetrahedron, curve, sphere, curve | + sphere weight        |
//! | `UNPINCH` | same as `PINCH`                   | − sphere weight        |
//!
//! `V0+` pushes a tongue of the surface across a vertex `v`: a new point appears
//! at the `v` end of every edge class at `v`, every face corner at `v` gains a
//! corner arc except one, where the arc `a-b` bounding the corner region is
//! rerouted around the corner. `E1+` does the same across an edge class: two new
//! points at gap `i` (between class points `i - 1` and `i`), a bigon arc on every
//! face side of the edge but one, and a rerouted arc there. `F2`/`F2'` exchange
//! the pairing of the endpoints of two arcs of one face that bound a common
//! region of the face. `PINCH` adds a catalog sphere and tubes it to the surface
//! inside one tetrahedron, making the two boundary curves an annulus piece.
//!
//! Location data of `V0`, `E1`, `PINCH` and `UNPINCH` always refers to the
//! lighter of the two surfaces, so a move and its inverse carry the same data.
//!
//! Text form: `V0+@v<v>[f<face>.<corner>,<a>-<b>]`, `E1-@e<e>[<i>,f<face>.<side>,<a>-<b>]`,
//! `F2'@f<face>[<a>-<b>,<c>-<d>,ann=<sides>]` with sides `-`, `0`, `1` or `01`,
//! `PINCH@t<tet>[<l>.<j>,s<sphere>,<l>.<j>]`.

mod apply;
mod catalog;
mod neighbors;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::surface::PointRef;

pub use apply::{apply, changed_cells, support, Cells};
pub use catalog::{CatalogError, CatalogSphere, SphereCatalog};
pub use neighbors::{neighbors, Neighbor, Neighbors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    V0,
    E1,
    F2,
    F2Prime,
    Pinch,
    Unpinch,
}

impl MoveKind {
    pub const ALL: [MoveKind; 6] = [
        MoveKind::V0,
        MoveKind::E1,
        MoveKind::F2,
        MoveKind::F2Prime,
        MoveKind::Pinch,
        MoveKind::Unpinch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::V0 => "V0",
            MoveKind::E1 => "E1",
            MoveKind::F2 => "F2",
            MoveKind::F2Prime => "F2'",
            MoveKind::Pinch => "PINCH",
            MoveKind::Unpinch => "UNPINCH",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveKind {
    type Err = MoveParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| MoveParseError(format!("unknown move kind `{s}`")))
    }
}

/// A set of move kinds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveSet(BTreeSet<MoveKind>);

impl MoveSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Vertex, edge and prime face moves plus pinches in both directions.
    pub fn standard() -> Self {
        [
            MoveKind::V0,
            MoveKind::E1,
            MoveKind::F2Prime,
            MoveKind::Pinch,
            MoveKind::Unpinch,
        ]
        .into_iter()
        .collect()
    }

    pub fn all() -> Self {
        MoveKind::ALL.into_iter().collect()
    }

    pub fn contains(&self, kind: MoveKind) -> bool {
        self.0.contains(&kind)
    }

    pub fn insert(&mut self, kind: MoveKind) {
        self.0.insert(kind);
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = MoveKind> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<MoveKind> for MoveSet {
    fn from_iter<I: IntoIterator<Item = MoveKind>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for MoveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(|k| k.name()).collect();
        f.write_str(&names.join(","))
    }
}

/// Comma-separated kinds; the empty string is the empty set.
impl FromStr for MoveSet {
    type Err = MoveParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(MoveKind::from_str)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Vertex {
        forward: bool,
        vertex: usize,
        face: usize,
        corner: u8,
        arc: (usize, usize),
    },
    Edge {
        forward: bool,
        edge: usize,
        gap: usize,
        face: usize,
        side: u8,
        arc: (usize, usize),
    },
    Face {
        prime: bool,
        face: usize,
        arcs: [(usize, usize); 2],
        /// Bit `i` set: the tetrahedron of the face's incidence `i` gains or loses an annulus.
        annulus_sides: u8,
    },
    Pinch {
        forward: bool,
        tet: usize,
        curve: PointRef,
        sphere: usize,
        sphere_curve: PointRef,
    },
}

impl Move {
    /// A face move with its arcs normalised (`a < b`, pairs ascending).
    pub fn face(
        prime: bool,
        face: usize,
        a: (usize, usize),
        b: (usize, usize),
        annulus_sides: u8,
    ) -> Self {
        let order = |(x, y): (usize, usize)| if x < y { (x, y) } else { (y, x) };
        let (a, b) = (order(a), order(b));
        let arcs = if a <= b { [a, b] } else { [b, a] };
        Move::Face {
            prime,
            face,
            arcs,
            annulus_sides,
        }
    }

    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Vertex { .. } => MoveKind::V0,
            Move::Edge { .. } => MoveKind::E1,
            Move::Face { prime: false, .. } => MoveKind::F2,
            Move::Face { prime: true, .. } => MoveKind::F2Prime,
            Move::Pinch { forward: true, .. } => MoveKind::Pinch,
            Move::Pinch { forward: false, .. } => MoveKind::Unpinch,
        }
    }

    pub fn inverse(&self) -> Move {
        match *self {
            Move::Vertex {
                forward,
                vertex,
                face,
                corner,
                arc,
            } => Move::Vertex {
                forward: !forward,
                vertex,
                face,
                corner,
                arc,
            },
            Move::Edge {
                forward,
                edge,
                gap,
                face,
                side,
                arc,
            } => Move::Edge {
                forward: !forward,
                edge,
                gap,
                face,
                side,
                arc,
            },
            Move::Face {
                prime,
                face,
                arcs,
                annulus_sides,
            } => {
                let [x, y] = apply::exchanged(arcs);
                Move::face(prime, face, x, y, annulus_sides)
            }
            Move::Pinch {
                forward,
                tet,
                curve,
                sphere,
                sphere_curve,
            } => Move::Pinch {
                forward: !forward,
                tet,
                curve,
                sphere,
                sphere_curve,
            },
        }
    }

    /// Whether the move makes the surface heavier (or keeps its weight, for face moves).
    pub fn is_forward(&self) -> bool {
        match self {
            Move::Vertex { forward, .. }
            | Move::Edge { forward, .. }
            | Move::Pinch { forward, .. } => *forward,
            Move::Face { .. } => true,
        }
    }

    /// Exact weight change, given the triangulation and catalog the move refers to.
    pub fn weight_delta(
        &self,
        tri: &crate::triangulation::Triangulation,
        catalog: &SphereCatalog,
    ) -> Option<i64> {
        let sign = |forward: bool| if forward { 1 } else { -1 };
        Some(match *self {
            Move::Vertex {
                forward, vertex, ..
            } => sign(forward) * tri.vertex_degree(vertex)? as i64,
            Move::Edge { forward, .. } => sign(forward) * 2,
            Move::Face { .. } => 0,
            Move::Pinch {
                forward, sphere, ..
            } => sign(forward) * catalog.get(sphere)?.weight() as i64,
        })
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |forward: bool| if forward { '+' } else { '-' };
        match *self {
            Move::Vertex {
                forward,
                vertex,
                face,
                corner,
                arc: (a, b),
            } => write!(f, "V0{}@v{vertex}[f{face}.{corner},{a}-{b}]", sign(forward)),
            Move::Edge {
                forward,
                edge,
                gap,
                face,
                side,
                arc: (a, b),
            } => write!(
                f,
                "E1{}@e{edge}[{gap},f{face}.{side},{a}-{b}]",
                sign(forward)
            ),
            Move::Face {
                prime,
                face,
                arcs: [(a, b), (c, d)],
                annulus_sides,
            } => {
                let sides = match annulus_sides {
                    0 => "-",
                    1 => "0",
                    2 => "1",
                    _ => "01",
                };
                let name = if prime { "F2'" } else { "F2" };
                write!(f, "{name}@f{face}[{a}-{b},{c}-{d},ann={sides}]")
            }
            Move::Pinch {
                forward,
                tet,
                curve,
                sphere,
                sphere_curve,
            } => {
                let name = if forward { "PINCH" } else { "UNPINCH" };
                write!(f, "{name}@t{tet}[{curve},s{sphere},{sphere_curve}]")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed move: {0}")]
pub struct MoveParseError(String);

fn bad(text: &str) -> MoveParseError {
    MoveParseError(format!("`{text}`"))
}

fn num(text: &str, s: &str) -> Result<usize, MoveParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(text));
    }
    s.parse().map_err(|_| bad(text))
}

fn prefixed(text: &str, s: &str, prefix: char) -> Result<usize, MoveParseError> {
    num(text, s.strip_prefix(prefix).ok_or_else(|| bad(text))?)
}

fn pair(text: &str, s: &str, sep: char) -> Result<(usize, usize), MoveParseError> {
    let (a, b) = s.split_once(sep).ok_or_else(|| bad(text))?;
    Ok((num(text, a)?, num(text, b)?))
}

fn face_slot(text: &str, s: &str) -> Result<(usize, u8), MoveParseError> {
    let (face, k) = pair(text, s.strip_prefix('f').ok_or_else(|| bad(text))?, '.')?;
    if k > 2 {
        return Err(bad(text));
    }
    Ok((face, k as u8))
}

fn point(text: &str, s: &str) -> Result<PointRef, MoveParseError> {
    let (l, j) = pair(text, s, '.')?;
    if l > 5 {
        return Err(bad(text));
    }
    Ok(PointRef {
        edge: l as u8,
        idx: j,
    })
}

fn ordered(text: &str, arc: (usize, usize)) -> Result<(usize, usize), MoveParseError> {
    if arc.0 < arc.1 {
        Ok(arc)
    } else {
        Err(bad(text))
    }
}

/// Accepts exactly the canonical text of a move.
impl FromStr for Move {
    type Err = MoveParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let m = parse_move(text)?;
        if m.to_string() != text {
            return Err(bad(text));
        }
        Ok(m)
    }
}

fn parse_move(text: &str) -> Result<Move, MoveParseError> {
    let (head, rest) = text.split_once('@').ok_or_else(|| bad(text))?;
    let (location, params) = rest.split_once('[').ok_or_else(|| bad(text))?;
    let params = params.strip_suffix(']').ok_or_else(|| bad(text))?;
    let params: Vec<&str> = params.split(',').collect();
    let signed = |name: &str| -> Option<bool> {
        match head.strip_prefix(name)? {
            "+" => Some(true),
            "-" => Some(false),
            _ => None,
        }
    };
    if let Some(forward) = signed("V0") {
        let [slot, arc] = params[..] else {
            return Err(bad(text));
        };
        let (face, corner) = face_slot(text, slot)?;
        return Ok(Move::Vertex {
            forward,
            vertex: prefixed(text, location, 'v')?,
            face,
            corner,
            arc: ordered(text, pair(text, arc, '-')?)?,
        });
    }
    if let Some(forward) = signed("E1") {
        let [gap, slot, arc] = params[..] else {
            return Err(bad(text));
        };
        let (face, side) = face_slot(text, slot)?;
        return Ok(Move::Edge {
            forward,
            edge: prefixed(text, location, 'e')?,
            gap: num(text, gap)?,
            face,
            side,
            arc: ordered(text, pair(text, arc, '-')?)?,
        });
    }
    match head {
        "F2" | "F2'" => {
            let [a, b, sides] = params[..] else {
                return Err(bad(text));
            };
            let annulus_sides = match sides.strip_prefix("ann=").ok_or_else(|| bad(text))? {
                "-" => 0,
                "0" => 1,
                "1" => 2,
                "01" => 3,
                _ => return Err(bad(text)),
            };
            Ok(Move::face(
                head == "F2'",
                prefixed(text, location, 'f')?,
                pair(text, a, '-')?,
                pair(text, b, '-')?,
                annulus_sides,
            ))
        }
        "PINCH" | "UNPINCH" => {
            let [c1, s, c2] = params[..] else {
                return Err(bad(text));
            };
            Ok(Move::Pinch {
                forward: head == "PINCH",
                tet: prefixed(text, location, 't')?,
                curve: point(text, c1)?,
                sphere: prefixed(text, s, 's')?,
                sphere_curve: point(text, c2)?,
            })
        }
        _ => Err(bad(text)),
    }
}

/// Why a move does not apply to a surface.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{mv} not applicable: {reason}")]
pub struct MoveError {
    pub mv: String,
    pub reason: &'static str,
}

impl MoveError {
    pub(crate) fn new(mv: &Move, reason: &'static str) -> Self {
        Self {
            mv: mv.to_string(),
            reason,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for text in [
            "V0+@v0[f2.1,4-7]",
            "V0-@v3[f0.0,0-1]",
            "E1+@e2[0,f1.2,3-4]",
            "E1-@e0[5,f3.0,0-11]",
            "F2@f3[0-5,1-2,ann=-]",
            "F2'@f0[0-1,2-3,ann=01]",
            "F2'@f1[0-3,1-2,ann=1]",
            "PINCH@t1[2.0,s0,5.1]",
            "UNPINCH@t0[0.0,s2,3.1]",
        ] {
            let m: Move = text.parse().unwrap();
            assert_eq!(m.to_string(), text);
        }
    }

    #[test]
    fn rejects_malformed() {
        for text in [
            "",
            "V0@v0[f2.1,4-7]",
            "V0+@v0[f2.3,4-7]",
            "E1+@e2[f1.2,3-4]",
            "F2@f3[5-0,1-2,ann=-]",
            "F2@f3[0-5,1-2,ann=2]",
            "PINCH@t1[6.0,s0,5.1]",
            "PINCH@t1[2.0,s0,5.1",
            "X@t1[]",
        ] {
            assert!(text.parse::<Move>().is_err(), "{text}");
        }
    }

    #[test]
    fn inverses() {
        let m: Move = "F2'@f0[0-1,2-3,ann=1]".parse().unwrap();
        assert_eq!(m.inverse().to_string(), "F2'@f0[0-3,1-2,ann=1]");
        assert_eq!(m.inverse().inverse(), m);
        let v: Move = "V0+@v0[f2.1,4-7]".parse().unwrap();
        assert_eq!(v.inverse().to_string(), "V0-@v0[f2.1,4-7]");
        assert_eq!(v.inverse().inverse(), v);
        let p: Move = "PINCH@t1[2.0,s0,5.1]".parse().unwrap();
        assert_eq!(p.inverse().kind(), MoveKind::Unpinch);
    }

    #[test]
    fn move_sets() {
        let s: MoveSet = "V0,E1,F2',PINCH,UNPINCH".parse().unwrap();
        assert_eq!(s, MoveSet::standard());
        assert_eq!(s.to_string(), "V0,E1,F2',PINCH,UNPINCH");
        assert!("".parse::<MoveSet>().unwrap().is_empty());
        assert!("V7".parse::<MoveSet>().is_err());
    }
}
