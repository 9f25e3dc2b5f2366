//! Exhaustive enumeration of valid encodings up to a weight bound.

use std::sync::Arc;

use super::{non_crossing_matchings, ArcSystem, PointRef, SurfaceEncoding};
use crate::triangulation::Triangulation;

/// Every valid crudely almost normal encoding of weight at most `max_weight`,
/// sorted by canonical key. Intended for small bounds: the count grows quickly.
pub fn enumerate_surfaces(tri: &Arc<Triangulation>, max_weight: usize) -> Vec<SurfaceEncoding> {
    let mut out = Vec::new();
    let mut counts = vec![0; tri.edge_count()];
    for_each_counts(&mut counts, 0, max_weight, &mut |counts| {
        surfaces_with_counts(tri, counts, &mut out);
    });
    out.sort_by_cached_key(SurfaceEncoding::canonical_key);
    out
}

fn for_each_counts(counts: &mut Vec<usize>, i: usize, budget: usize, f: &mut dyn FnMut(&[usize])) {
    if i == counts.len() {
        f(counts);
        return;
    }
    for n in 0..=budget {
        counts[i] = n;
        for_each_counts(counts, i + 1, budget - n, f);
    }
    counts[i] = 0;
}

fn surfaces_with_counts(
    tri: &Arc<Triangulation>,
    counts: &[usize],
    out: &mut Vec<SurfaceEncoding>,
) {
    let mut choices: Vec<(usize, [usize; 3], Vec<Vec<usize>>)> = Vec::new();
    for (f, fc) in tri.face_classes().iter().enumerate() {
        let sides = [
            counts[fc.sides[0].edge],
            counts[fc.sides[1].edge],
            counts[fc.sides[2].edge],
        ];
        let n: usize = sides.iter().sum();
        if n % 2 == 1 {
            return;
        }
        choices.push((f, sides, non_crossing_matchings(n)));
    }
    let mut pick = vec![0usize; choices.len()];
    loop {
        let faces: Vec<ArcSystem> = choices
            .iter()
            .zip(&pick)
            .map(|((f, sides, all), &i)| {
                ArcSystem::new(*f, *sides, all[i].clone()).expect("generated")
            })
            .collect();
        let base = SurfaceEncoding::from_parts(
            tri.clone(),
            counts.to_vec(),
            faces,
            vec![Vec::new(); tri.tet_count()],
        )
        .expect("consistent by construction");
        with_annuli(&base, out);

        // odometer over the per-face matchings
        let mut k = 0;
        loop {
            if k == pick.len() {
                return;
            }
            pick[k] += 1;
            if pick[k] < choices[k].2.len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

fn with_annuli(base: &SurfaceEncoding, out: &mut Vec<SurfaceEncoding>) {
    let tri = base.triangulation();
    let options: Vec<Vec<Option<[PointRef; 2]>>> = (0..tri.tet_count())
        .map(|t| {
            let boundary = base.boundary(t);
            let curves = boundary.curves();
            let mut opts = vec![None];
            for a in 0..curves.len() {
                for b in a + 1..curves.len() {
                    if boundary.adjacent(a, b) {
                        opts.push(Some([curves[a].least_point(), curves[b].least_point()]));
                    }
                }
            }
            opts
        })
        .collect();
    let mut pick = vec![0usize; options.len()];
    loop {
        let annuli: Vec<Vec<[PointRef; 2]>> = options
            .iter()
            .zip(&pick)
            .map(|(opts, &i)| opts[i].into_iter().collect())
            .collect();
        let enc = SurfaceEncoding::from_parts(
            tri.clone(),
            base.counts().to_vec(),
            base.faces().to_vec(),
            annuli,
        )
        .expect("points exist");
        if enc.validate().is_valid() {
            out.push(enc);
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                return;
            }
            pick[k] += 1;
            if pick[k] < options[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}
