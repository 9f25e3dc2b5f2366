//! Arc systems: the trace of a surface on one face class, as a perfect matching of
//! the boundary points in their cyclic order around the triangle.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArcError {
    #[error("face {face}: {points} boundary points cannot be perfectly matched")]
    OddPoints { face: usize, points: usize },
    #[error("face {face}: matching has {got} entries for {points} points")]
    Length {
        face: usize,
        got: usize,
        points: usize,
    },
    #[error("face {face}: position {pos} is not matched consistently")]
    NotInvolution { face: usize, pos: usize },
}

/// The arcs of a face class. Positions run cyclically around the triangle: side 0
/// (corner 0 to corner 1), then side 1, then side 2; `partner[p]` is the other end
/// of the arc at position `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArcSystem {
    face: usize,
    side_counts: [usize; 3],
    partner: Vec<usize>,
}

impl ArcSystem {
    pub fn new(
        face: usize,
        side_counts: [usize; 3],
        partner: Vec<usize>,
    ) -> Result<Self, ArcError> {
        let points: usize = side_counts.iter().sum();
        if points % 2 == 1 {
            return Err(ArcError::OddPoints { face, points });
        }
        if partner.len() != points {
            return Err(ArcError::Length {
                face,
                got: partner.len(),
                points,
            });
        }
        for (p, &q) in partner.iter().enumerate() {
            if q >= points || q == p || partner[q] != p {
                return Err(ArcError::NotInvolution { face, pos: p });
            }
        }
        Ok(Self {
            face,
            side_counts,
            partner,
        })
    }

    pub fn face(&self) -> usize {
        self.face
    }

    pub fn side_counts(&self) -> [usize; 3] {
        self.side_counts
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn partner(&self, pos: usize) -> usize {
        self.partner[pos]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// First cyclic position on `side`.
    pub fn side_offset(&self, side: usize) -> usize {
        self.side_counts[..side].iter().sum()
    }

    /// `(side, index along the side direction)` of a position.
    pub fn locate(&self, pos: usize) -> (usize, usize) {
        let mut rest = pos;
        for s in 0..3 {
            if rest < self.side_counts[s] {
                return (s, rest);
            }
            rest -= self.side_counts[s];
        }
        panic!("position {pos} out of range");
    }

    /// Arcs as `(a, b)` with `a < b`, ordered by `a`.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(p, &q)| p < q)
            .map(|(p, &q)| (p, q))
    }

    pub fn arc_count(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn is_non_crossing(&self) -> bool {
        is_non_crossing(&self.partner)
    }

    /// Gap `g` is the boundary stretch from position `g` to position `g + 1` (cyclically).
    /// The gap just before corner `c`'s first point is the one containing the corner.
    pub fn corner_gap(&self, corner: usize) -> Option<usize> {
        let n = self.len();
        (n > 0).then(|| (self.side_offset(corner) + n - 1) % n)
    }

    /// Region of the triangle (cut along the arcs) containing each gap, for a
    /// non-crossing system; regions are numbered in order of first gap.
    pub fn gap_regions(&self) -> (Vec<usize>, usize) {
        gap_regions(&self.partner)
    }
}

/// Whether a perfect matching on cyclically ordered points has no crossing pair.
pub fn is_non_crossing(partner: &[usize]) -> bool {
    let mut stack = Vec::new();
    for (p, &q) in partner.iter().enumerate() {
        if q > p {
            stack.push(p);
        } else if stack.pop() != Some(q) {
            return false;
        }
    }
    stack.is_empty()
}

/// Region index per gap (gap `g` runs from position `g` to `g + 1`), and the
/// number of regions, for a non-crossing matching. Region 0 is the one
/// containing the wrap-around gap.
pub fn gap_regions(partner: &[usize]) -> (Vec<usize>, usize) {
    let mut gaps = vec![0; partner.len()];
    let mut stack = Vec::new();
    let mut current = 0;
    let mut next = 1;
    for (p, &q) in partner.iter().enumerate() {
        if q > p {
            stack.push(current);
            current = next;
            next += 1;
        } else {
            // meaningless (but harmless) for crossing systems
            current = stack.pop().unwrap_or(0);
        }
        gaps[p] = current;
    }
    (gaps, next)
}

/// Every non-crossing perfect matching of `n` cyclically ordered points, in a
/// deterministic order. There are Catalan(n/2) of them for even `n`.
pub fn non_crossing_matchings(n: usize) -> Vec<Vec<usize>> {
    if n % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; n];
    fill(&mut partner, 0, &mut out);
    out
}

fn fill(partner: &mut Vec<usize>, from: usize, out: &mut Vec<Vec<usize>>) {
    let n = partner.len();
    let Some(first) = (from..n).find(|&p| partner[p] == usize::MAX) else {
        out.push(partner.clone());
        return;
    };
    // `first` pairs with a later free point leaving an even number of points
    // between them. A matched point after `first` closes an enclosing arc, which
    // the new arc must not cross.
    for j in first + 1..n {
        if partner[j] != usize::MAX {
            break;
        }
        if (j - first - 1) % 2 == 0 {
            partner[first] = j;
            partner[j] = first;
            fill(partner, first + 1, out);
            partner[first] = usize::MAX;
            partner[j] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(k: usize) -> usize {
        let mut c = 1usize;
        for i in 0..k {
            c = c * 2 * (2 * i + 1) / (i + 2);
        }
        c
    }

    #[test]
    fn counts_are_catalan() {
        for k in 0..=6 {
            assert_eq!(
                non_crossing_matchings(2 * k).len(),
                catalan(k),
                "n = {}",
                2 * k
            );
        }
        assert!(non_crossing_matchings(3).is_empty());
    }

    #[test]
    fn generated_matchings_are_valid_and_distinct() {
        let all = non_crossing_matchings(8);
        let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for m in &all {
            assert!(is_non_crossing(m));
            for (p, &q) in m.iter().enumerate() {
                assert_eq!(m[q], p);
            }
        }
    }

    #[test]
    fn crossing_is_detected() {
        assert!(!is_non_crossing(&[2, 3, 0, 1]));
        assert!(is_non_crossing(&[1, 0, 3, 2]));
        assert!(is_non_crossing(&[3, 2, 1, 0]));
    }

    #[test]
    fn regions_of_three_corner_arcs() {
        // positions 0..6, arcs (0,5) (1,2) (3,4): gaps 0, 2 and 4 face all three arcs
        let partner = vec![5, 2, 1, 4, 3, 0];
        let (gaps, count) = gap_regions(&partner);
        assert_eq!(count, 4);
        assert_eq!(gaps[0], gaps[2]);
        assert_eq!(gaps[2], gaps[4]);
        let mut others = vec![gaps[0], gaps[1], gaps[3], gaps[5]];
        others.dedup();
        assert_eq!(others.len(), 4);
    }

    #[test]
    fn rejects_malformed_systems() {
        assert!(matches!(
            ArcSystem::new(0, [1, 0, 0], vec![0]),
            Err(ArcError::OddPoints { .. })
        ));
        assert!(matches!(
            ArcSystem::new(0, [1, 1, 0], vec![0, 1]),
            Err(ArcError::NotInvolution { .. })
        ));
        assert!(matches!(
            ArcSystem::new(0, [1, 1, 0], vec![1]),
            Err(ArcError::Length { .. })
        ));
    }

    #[test]
    fn locate_and_offsets_agree() {
        let a = ArcSystem::new(0, [2, 0, 2], vec![3, 2, 1, 0]).unwrap();
        assert_eq!(a.side_offset(2), 2);
        assert_eq!(a.locate(3), (2, 1));
        assert_eq!(a.corner_gap(0), Some(3));
        assert_eq!(a.corner_gap(1), Some(1));
        assert_eq!(a.corner_gap(2), Some(1));
    }
}
