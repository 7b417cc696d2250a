#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rectinf::geom::{PointSet, QueryPoint};

/// Query points on the half-grid spanned by the input coordinates, with a
/// margin of one step outside the bounding box.
pub fn grid_queries(ps: &PointSet<i64>, rng: &mut ChaCha8Rng, count: usize) -> Vec<QueryPoint<i64>> {
    let mut xs: Vec<i64> = ps.points.iter().map(|p| p.x).collect();
    let mut ys: Vec<i64> = ps.points.iter().map(|p| p.y).collect();
    xs.sort_unstable();
    ys.sort_unstable();
    let pick = |v: &[i64], rng: &mut ChaCha8Rng| {
        let s = rng.gen_range(0..2 * v.len() + 1);
        match s {
            0 => 2 * v[0] - 2,
            s if s == 2 * v.len() => 2 * v[v.len() - 1] + 2,
            s if s % 2 == 1 => 2 * v[s / 2],
            s => v[s / 2 - 1] + v[s / 2],
        }
    };
    (0..count).map(|_| QueryPoint::halves(pick(&xs, rng), pick(&ys, rng))).collect()
}
