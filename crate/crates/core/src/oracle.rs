//! Slow, direct reference implementations used as ground truth in tests.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::geom::{wide, Coord, PointSet, QueryPoint, Rect};

/// Largest instance accepted by [`brute_mis`].
pub const MIS_CAP: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance of size {n} exceeds the exhaustive-search cap {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
}

/// Undirected edges stored as `(small id, large id)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSet {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl EdgeSet {
    pub fn new(n: usize) -> Self {
        EdgeSet { n, edges: BTreeSet::new() }
    }

    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        assert_ne!(a, b, "self-loop");
        self.edges.insert((a.min(b), a.max(b)))
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (a, b) in self.iter() {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// Exact empty-rectangle graph.
///
/// For every point, scan the points to its right in x order while tracking the
/// nearest y seen above and below; a point is a neighbour exactly when it beats
/// that running bound.
pub fn brute_rig<T: Coord>(ps: &PointSet<T>) -> EdgeSet {
    let mut es = EdgeSet::new(ps.len());
    for (i, &a) in ps.by_x.iter().enumerate() {
        let ya = ps.points[a].y;
        let mut above: Option<T> = None;
        let mut below: Option<T> = None;
        for &b in &ps.by_x[i + 1..] {
            let yb = ps.points[b].y;
            if yb > ya {
                if above.is_none_or(|m| yb < m) {
                    es.insert(a, b);
                    above = Some(yb);
                }
            } else if below.is_none_or(|m| yb > m) {
                es.insert(a, b);
                below = Some(yb);
            }
        }
    }
    es
}

/// Rank-space prefix counts: `count(x0, x1, y0, y1)` is the number of points
/// with x-rank in `[x0, x1)` and y-rank in `[y0, y1)`.
struct RankCounts {
    n: usize,
    pre: Vec<u32>,
}

impl RankCounts {
    fn new<T: Coord>(ps: &PointSet<T>) -> Self {
        let n = ps.len();
        let w = n + 1;
        let mut pre = vec![0u32; w * w];
        for id in 0..n {
            pre[(ps.x_rank[id] + 1) * w + ps.y_rank[id] + 1] = 1;
        }
        for i in 1..w {
            for j in 1..w {
                pre[i * w + j] += pre[(i - 1) * w + j] + pre[i * w + j - 1] - pre[(i - 1) * w + j - 1];
            }
        }
        RankCounts { n, pre }
    }

    fn count(&self, x0: usize, x1: usize, y0: usize, y1: usize) -> u32 {
        if x0 >= x1 || y0 >= y1 {
            return 0;
        }
        let w = self.n + 1;
        self.pre[x1 * w + y1] + self.pre[x0 * w + y0] - self.pre[x0 * w + y1] - self.pre[x1 * w + y0]
    }
}

/// Pairs whose rectangle holds at most `k` points besides its two corners.
pub fn brute_k_rig<T: Coord>(ps: &PointSet<T>, k: usize) -> EdgeSet {
    let rc = RankCounts::new(ps);
    let mut es = EdgeSet::new(ps.len());
    for a in 0..ps.len() {
        for b in a + 1..ps.len() {
            let (xa, xb) = (ps.x_rank[a], ps.x_rank[b]);
            let (ya, yb) = (ps.y_rank[a], ps.y_rank[b]);
            let inside = rc.count(xa.min(xb) + 1, xa.max(xb), ya.min(yb) + 1, ya.max(yb));
            if inside as usize <= k {
                es.insert(a, b);
            }
        }
    }
    es
}

/// All empty rectangles of the instance.
pub fn rects<T: Coord>(ps: &PointSet<T>) -> Vec<Rect<T>> {
    brute_rig(ps).iter().map(|(a, b)| ps.rect(a, b)).collect()
}

/// Cached empty rectangles for repeated oracle queries on one instance.
pub struct Oracle<'a, T> {
    pub ps: &'a PointSet<T>,
    pub edges: EdgeSet,
    pub rects: Vec<Rect<T>>,
}

impl<'a, T: Coord> Oracle<'a, T> {
    pub fn new(ps: &'a PointSet<T>) -> Self {
        let edges = brute_rig(ps);
        let rects = edges.iter().map(|(a, b)| ps.rect(a, b)).collect();
        Oracle { ps, edges, rects }
    }

    pub fn depth(&self, q: &QueryPoint<T>) -> u64 {
        self.rects.iter().filter(|r| r.contains(q)).count() as u64
    }

    pub fn hull_member(&self, q: &QueryPoint<T>) -> bool {
        self.rects.iter().any(|r| r.contains(q))
    }

    /// Grid index of every rectangle: x and y rank ranges of its corners.
    fn rank_boxes(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let ps = self.ps;
        self.edges.iter().map(move |(a, b)| {
            let (xa, xb) = (ps.x_rank[a], ps.x_rank[b]);
            let (ya, yb) = (ps.y_rank[a], ps.y_rank[b]);
            (xa.min(xb), xa.max(xb), ya.min(yb), ya.max(yb))
        })
    }

    /// Deepest location over all grid vertices, edge midpoints and cell centres.
    pub fn max_depth(&self) -> (QueryPoint<T>, u64) {
        let n = self.ps.len();
        assert!(n >= 2, "max depth needs two points");
        let g = 2 * n - 1;
        let mut diff = vec![0i64; (g + 1) * (g + 1)];
        for (x0, x1, y0, y1) in self.rank_boxes() {
            let (x0, x1, y0, y1) = (2 * x0, 2 * x1 + 1, 2 * y0, 2 * y1 + 1);
            diff[x0 * (g + 1) + y0] += 1;
            diff[x1 * (g + 1) + y0] -= 1;
            diff[x0 * (g + 1) + y1] -= 1;
            diff[x1 * (g + 1) + y1] += 1;
        }
        let mut best = (0usize, 0usize, -1i64);
        let mut acc = vec![0i64; (g + 1) * (g + 1)];
        for i in 0..g {
            for j in 0..g {
                let mut v = diff[i * (g + 1) + j];
                if i > 0 {
                    v += acc[(i - 1) * (g + 1) + j];
                }
                if j > 0 {
                    v += acc[i * (g + 1) + j - 1];
                }
                if i > 0 && j > 0 {
                    v -= acc[(i - 1) * (g + 1) + j - 1];
                }
                acc[i * (g + 1) + j] = v;
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let xs: Vec<T> = self.ps.by_x.iter().map(|&i| self.ps.points[i].x).collect();
        let ys: Vec<T> = self.ps.by_y.iter().map(|&i| self.ps.points[i].y).collect();
        let half = |v: &[T], s: usize| if s.is_multiple_of(2) { v[s / 2] + v[s / 2] } else { v[s / 2] + v[s / 2 + 1] };
        (QueryPoint::halves(half(&xs, best.0), half(&ys, best.1)), best.2 as u64)
    }

    /// Exact area of the union of all empty rectangles.
    pub fn union_area(&self) -> i128 {
        let n = self.ps.len();
        if n < 2 {
            return 0;
        }
        let c = n - 1;
        let mut diff = vec![0i32; (c + 1) * (c + 1)];
        for (x0, x1, y0, y1) in self.rank_boxes() {
            diff[x0 * (c + 1) + y0] += 1;
            diff[x1 * (c + 1) + y0] -= 1;
            diff[x0 * (c + 1) + y1] -= 1;
            diff[x1 * (c + 1) + y1] += 1;
        }
        let xs: Vec<i128> = self.ps.by_x.iter().map(|&i| wide(self.ps.points[i].x)).collect();
        let ys: Vec<i128> = self.ps.by_y.iter().map(|&i| wide(self.ps.points[i].y)).collect();
        let mut acc = vec![0i32; (c + 1) * (c + 1)];
        let mut area = 0i128;
        for i in 0..c {
            for j in 0..c {
                let mut v = diff[i * (c + 1) + j];
                if i > 0 {
                    v += acc[(i - 1) * (c + 1) + j];
                }
                if j > 0 {
                    v += acc[i * (c + 1) + j - 1];
                }
                if i > 0 && j > 0 {
                    v -= acc[(i - 1) * (c + 1) + j - 1];
                }
                acc[i * (c + 1) + j] = v;
                if v > 0 {
                    area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
                }
            }
        }
        area
    }
}

pub fn brute_depth<T: Coord>(ps: &PointSet<T>, q: &QueryPoint<T>) -> u64 {
    Oracle::new(ps).depth(q)
}

pub fn brute_max_depth<T: Coord>(ps: &PointSet<T>) -> (QueryPoint<T>, u64) {
    Oracle::new(ps).max_depth()
}

pub fn brute_hull_member<T: Coord>(ps: &PointSet<T>, q: &QueryPoint<T>) -> bool {
    Oracle::new(ps).hull_member(q)
}

/// Maximum set of pairwise disjoint (as closed sets) empty rectangles.
pub fn brute_mis<T: Coord>(ps: &PointSet<T>) -> Result<Vec<Rect<T>>, OracleError> {
    if ps.len() > MIS_CAP {
        return Err(OracleError::InstanceTooLarge { n: ps.len(), cap: MIS_CAP });
    }
    let rs = rects(ps);
    assert!(rs.len() <= 128);
    let conflict: Vec<u128> = rs
        .iter()
        .map(|a| rs.iter().enumerate().filter(|(_, b)| a.intersects(b)).fold(0u128, |m, (j, _)| m | 1 << j))
        .collect();

    fn search(conflict: &[u128], cand: u128, chosen: u128, size: u32, best: &mut (u32, u128)) {
        if size + cand.count_ones() <= best.0 {
            return;
        }
        if cand == 0 {
            *best = (size, chosen);
            return;
        }
        let i = cand.trailing_zeros() as usize;
        search(conflict, cand & !conflict[i], chosen | 1 << i, size + 1, best);
        search(conflict, cand & !(1u128 << i), chosen, size, best);
    }

    let all = if rs.len() == 128 { u128::MAX } else { (1u128 << rs.len()) - 1 };
    let mut best = (0, 0u128);
    search(&conflict, all, 0, 0, &mut best);
    Ok((0..rs.len()).filter(|&i| best.1 >> i & 1 == 1).map(|i| rs[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::validate;

    fn chain3() -> PointSet<i64> {
        validate(&[(1, 1), (2, 2), (3, 3)]).unwrap()
    }

    #[test]
    fn chain_edges() {
        let es = brute_rig(&chain3());
        assert_eq!(es.edges.into_iter().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(brute_k_rig(&chain3(), 1).len(), 3);
    }

    #[test]
    fn k_equal_n_is_complete() {
        let ps = validate(&[(3i64, 1), (1, 4), (4, 5), (2, 2), (5, 3)]).unwrap();
        assert_eq!(brute_k_rig(&ps, 5).len(), 10);
    }

    #[test]
    fn depth_examples() {
        let ps = validate(&[(0i64, 0), (3, 3)]).unwrap();
        assert_eq!(brute_depth(&ps, &QueryPoint::at(1, 1)), 1);
        assert_eq!(brute_depth(&chain3(), &QueryPoint::at(10, 10)), 0);
        assert_eq!(brute_max_depth(&ps).1, 1);
        let (w, d) = brute_max_depth(&chain3());
        assert_eq!((w, d), (QueryPoint::at(2, 2), 2));
    }

    #[test]
    fn hull_member_examples() {
        let ps = chain3();
        assert!(brute_hull_member(&ps, &QueryPoint::halves(3, 3)));
        assert!(!brute_hull_member(&ps, &QueryPoint::halves(3, 5)));
        for p in &ps.points {
            assert!(brute_hull_member(&ps, &QueryPoint::of(p)));
        }
    }

    #[test]
    fn mis_examples() {
        let ps = validate(&[(0i64, 0), (3, 3)]).unwrap();
        assert_eq!(brute_mis(&ps).unwrap().len(), 1);
        assert_eq!(brute_mis(&chain3()).unwrap().len(), 1);
        let big: Vec<(i64, i64)> = (0..15).map(|i| (i, i)).collect();
        assert!(matches!(brute_mis(&validate(&big).unwrap()), Err(OracleError::InstanceTooLarge { .. })));
    }

    #[test]
    fn union_area_of_chain() {
        let ps = chain3();
        let o = Oracle::new(&ps);
        assert_eq!(o.union_area(), 2);
    }
}
