//! Approximate rectangular depth over the biclique cover.
//!
//! Coordinates are mapped to slots: the i-th smallest coordinate becomes `2i`,
//! the gap above it `2i + 1`, and the region below everything `-1`. Depth is
//! constant on every slot cell, so all structures here work on integers.

use std::collections::HashMap;

use thiserror::Error;

use crate::cover::{build_cover, Biclique, BicliqueCover, Orientation};
use crate::geom::{Coord, PointSet, QueryPoint, Rect};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DepthError {
    #[error("epsilon {0} is outside (0, 1)")]
    EpsOutOfRange(f64),
    #[error("depth needs at least two points, got {0}")]
    TooFewPoints(usize),
}

const INF: i64 = i64::MAX / 4;

/// Maps doubled query coordinates to slots and back.
#[derive(Debug, Clone)]
pub struct SlotMap<T> {
    xs: Vec<T>,
    ys: Vec<T>,
}

fn slot_of<T: Coord>(v: &[T], c2: T) -> i64 {
    let below = v.partition_point(|&a| a + a < c2);
    if below < v.len() && v[below] + v[below] == c2 {
        2 * below as i64
    } else {
        2 * below as i64 - 1
    }
}

fn unslot<T: Coord>(v: &[T], s: i64) -> T {
    let two = T::one() + T::one();
    let n = v.len() as i64;
    if s < 0 {
        v[0] + v[0] - two
    } else if s >= 2 * n - 1 {
        v[v.len() - 1] + v[v.len() - 1] + two
    } else if s % 2 == 0 {
        v[s as usize / 2] + v[s as usize / 2]
    } else {
        v[s as usize / 2] + v[s as usize / 2 + 1]
    }
}

impl<T: Coord> SlotMap<T> {
    pub fn new(ps: &PointSet<T>) -> Self {
        SlotMap {
            xs: ps.by_x.iter().map(|&i| ps.points[i].x).collect(),
            ys: ps.by_y.iter().map(|&i| ps.points[i].y).collect(),
        }
    }

    pub fn slot(&self, q: &QueryPoint<T>) -> (i64, i64) {
        (slot_of(&self.xs, q.x2), slot_of(&self.ys, q.y2))
    }

    pub fn query(&self, sx: i64, sy: i64) -> QueryPoint<T> {
        QueryPoint::halves(unslot(&self.xs, sx), unslot(&self.ys, sy))
    }
}

/// Error parameters derived from epsilon: per-factor error `delta`, growth
/// ratio of the geometric levels and the number of exact levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub eps: f64,
    pub delta: f64,
    pub ratio: f64,
    pub exact: usize,
}

impl Params {
    pub fn new(eps: f64) -> Result<Self, DepthError> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(DepthError::EpsOutOfRange(eps));
        }
        let delta = 1.0 - (1.0 - eps).sqrt();
        Ok(Params { eps, delta, ratio: delta / 4.0, exact: (8.0 / delta).ceil() as usize })
    }
}

/// A level curve sits between the `alpha`-th and `beta`-th staircases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Band {
    pub alpha: usize,
    pub beta: usize,
}

/// Selected levels for a side of `t` points.
pub fn level_schedule(t: usize, p: &Params) -> Vec<Band> {
    let mut alphas: Vec<usize> = (1..=t.min(p.exact)).collect();
    while let Some(&a) = alphas.last() {
        if a >= t {
            break;
        }
        let next = ((1.0 + p.ratio) * a as f64).ceil() as usize;
        alphas.push(next.max(a + 1).min(t));
    }
    let m = alphas.len();
    (0..m)
        .map(|j| {
            let a = alphas[j];
            let beta = if a <= p.exact || a == t { a } else { alphas[j + 1] };
            Band { alpha: a, beta }
        })
        .collect()
}

/// Simplified staircases of one side: points sorted by x with y decreasing,
/// counting how many of them a query dominates (closed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseLevels {
    pub pts: Vec<(i64, i64)>,
    pub bands: Vec<Band>,
    /// Corners of each curve, x increasing and y decreasing. The region of
    /// level `j` is the union of the closed quadrants above-right of them.
    pub curves: Vec<Vec<(i64, i64)>>,
}

impl StaircaseLevels {
    pub fn build(pts: Vec<(i64, i64)>, p: &Params) -> Self {
        debug_assert!(pts.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1));
        let t = pts.len();
        let bands = level_schedule(t, p);
        let curves = bands
            .iter()
            .map(|b| {
                let chunk = b.beta - b.alpha + 1;
                let windows = t - b.beta + 1;
                (0..windows.div_ceil(chunk))
                    .map(|c| {
                        let e = ((c + 1) * chunk).min(windows) - 1;
                        (pts[e + b.alpha - 1].0, pts[e].1)
                    })
                    .collect()
            })
            .collect();
        StaircaseLevels { pts, bands, curves }
    }

    /// Number of points dominated by `z`.
    pub fn count(&self, z: (i64, i64)) -> usize {
        let e = self.pts.partition_point(|q| q.0 <= z.0);
        let s = self.pts.partition_point(|q| q.1 > z.1);
        e.saturating_sub(s)
    }

    /// Level value at `z`: the largest `alpha` whose curve region holds `z`.
    pub fn value(&self, z: (i64, i64)) -> usize {
        let inside = |c: &[(i64, i64)]| {
            let i = c.partition_point(|q| q.0 <= z.0);
            i > 0 && c[i - 1].1 <= z.1
        };
        let j = self.curves.partition_point(|c| inside(c));
        if j == 0 {
            0
        } else {
            self.bands[j - 1].alpha
        }
    }

    /// Interior-disjoint rectangles of constant level inside the closed
    /// `cell`, weighted by `scale * alpha`.
    fn cells(&self, cell: Cell, scale: u64, out: &mut Vec<Cell>) {
        let height = |c: &[(i64, i64)], x: i64| {
            let i = c.partition_point(|q| q.0 <= x);
            if i == 0 {
                INF
            } else {
                c[i - 1].1
            }
        };
        for (j, cur) in self.curves.iter().enumerate() {
            let next: &[(i64, i64)] = self.curves.get(j + 1).map_or(&[], |c| c);
            let mut xs: Vec<i64> = cur.iter().chain(next).map(|q| q.0).filter(|&x| x > cell.x0 && x <= cell.x1).collect();
            xs.push(cell.x0);
            xs.sort_unstable();
            xs.dedup();
            let w = scale * self.bands[j].alpha as u64;
            for (i, &xa) in xs.iter().enumerate() {
                let xb = xs.get(i + 1).map_or(cell.x1, |&x| x - 1);
                let lo = height(cur, xa).max(cell.y0);
                let hi = if next.is_empty() { cell.y1 } else { (height(next, xa) - 1).min(cell.y1) };
                if lo <= hi && lo < INF {
                    out.push(Cell { x0: xa, x1: xb, y0: lo, y1: hi, weight: w });
                }
            }
        }
    }
}

/// Approximate count of sorted values at or below `z`, as intervals of
/// constant value.
fn steps_up(vals: &[i64], p: &Params) -> Vec<(i64, i64, u64)> {
    let bands = level_schedule(vals.len(), p);
    bands
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let hi = bands.get(j + 1).map_or(INF, |n| vals[n.alpha - 1] - 1);
            (vals[b.alpha - 1], hi, b.alpha as u64)
        })
        .collect()
}

/// Approximate count of values at or above `z`.
fn steps_down(vals: &[i64], p: &Params) -> Vec<(i64, i64, u64)> {
    let mut neg: Vec<i64> = vals.iter().map(|v| -v).collect();
    neg.sort_unstable();
    steps_up(&neg, p).into_iter().map(|(lo, hi, v)| (-hi, -lo, v)).collect()
}

/// Closed slot rectangle with a weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
    pub weight: u64,
}

impl Cell {
    fn clip(&self, o: &Cell) -> Option<Cell> {
        let c = Cell {
            x0: self.x0.max(o.x0),
            x1: self.x1.min(o.x1),
            y0: self.y0.max(o.y0),
            y1: self.y1.min(o.y1),
            weight: self.weight,
        };
        (c.x0 <= c.x1 && c.y0 <= c.y1).then_some(c)
    }

    fn area(x0: i64, x1: i64, y0: i64, y1: i64) -> Cell {
        Cell { x0, x1, y0, y1, weight: 0 }
    }

    pub fn contains(&self, z: (i64, i64)) -> bool {
        self.x0 <= z.0 && z.0 <= self.x1 && self.y0 <= z.1 && z.1 <= self.y1
    }
}

/// A biclique in a frame where the lower side is dominated by the upper one:
/// anti-dominance bicliques get their x slots negated.
struct Framed {
    flip: bool,
    lower: Vec<(i64, i64)>,
    upper: Vec<(i64, i64)>,
}

fn frame<T: Coord>(ps: &PointSet<T>, b: &Biclique) -> Framed {
    let flip = b.orientation == Orientation::AntiDominance;
    let at = |id: usize| {
        let sx = 2 * ps.x_rank[id] as i64;
        (if flip { -sx } else { sx }, 2 * ps.y_rank[id] as i64)
    };
    let side = |ids: &[usize]| {
        let mut v: Vec<(i64, i64)> = ids.iter().map(|&i| at(i)).collect();
        v.sort_unstable();
        v
    };
    Framed { flip, lower: side(&b.left), upper: side(&b.right) }
}

impl Framed {
    fn depth(&self, z: (i64, i64)) -> u64 {
        let z = if self.flip { (-z.0, z.1) } else { z };
        let k = self.lower.iter().filter(|b| b.0 <= z.0 && b.1 <= z.1).count() as u64;
        let l = self.upper.iter().filter(|a| a.0 >= z.0 && a.1 >= z.1).count() as u64;
        k * l
    }

    /// Interior-disjoint weighted cells approximating `k * l` to within
    /// `(1 - delta)^2`.
    fn cells(&self, p: &Params) -> Vec<Cell> {
        let (b, a) = (&self.lower, &self.upper);
        let (t, s) = (b.len() as u64, a.len() as u64);
        let (b_x0, b_x1) = (b[0].0, b[b.len() - 1].0);
        let (b_y0, b_y1) = (b[b.len() - 1].1, b[0].1);
        let (a_x0, a_x1) = (a[0].0, a[a.len() - 1].0);
        let (a_y0, a_y1) = (a[a.len() - 1].1, a[0].1);
        let mut out = Vec::new();

        let lower = StaircaseLevels::build(b.clone(), p);
        lower.cells(Cell::area(b_x0, b_x1 - 1, b_y0, b_y1 - 1), s, &mut out);

        let neg: Vec<(i64, i64)> = a.iter().rev().map(|q| (-q.0, -q.1)).collect();
        let upper = StaircaseLevels::build(neg, p);
        let mut flipped = Vec::new();
        upper.cells(Cell::area(-a_x1, -a_x0 - 1, -a_y1, -a_y0 - 1), t, &mut flipped);
        out.extend(flipped.into_iter().map(|c| Cell { x0: -c.x1, x1: -c.x0, y0: -c.y1, y1: -c.y0, weight: c.weight }));

        let bx: Vec<i64> = b.iter().map(|q| q.0).collect();
        let mut by: Vec<i64> = b.iter().map(|q| q.1).collect();
        by.reverse();
        let ax: Vec<i64> = a.iter().map(|q| q.0).collect();
        let ay: Vec<i64> = a.iter().map(|q| q.1).collect();
        let grid = |out: &mut Vec<Cell>, cell: Cell, xs: &[(i64, i64, u64)], ys: &[(i64, i64, u64)]| {
            for &(x0, x1, u) in xs {
                for &(y0, y1, v) in ys {
                    let c = Cell { x0, x1, y0, y1, weight: u * v };
                    out.extend(c.clip(&cell));
                }
            }
        };
        grid(&mut out, Cell::area(b_x0, a_x0, b_y1, a_y1), &steps_up(&bx, p), &steps_down(&ay, p));
        grid(&mut out, Cell::area(b_x1, a_x1, b_y0, b_y1 - 1), &steps_down(&ax, p), &steps_up(&by, p));
        let tall = [(-INF, INF, t)];
        grid(&mut out, Cell::area(a_x0 + 1, a_x1, b_y1, a_y0), &steps_down(&ax, p), &tall);

        if self.flip {
            for c in &mut out {
                (c.x0, c.x1) = (-c.x1, -c.x0);
            }
        }
        out
    }
}

/// Exact depth of `q`, summed over the bicliques of `cover`.
pub fn cover_depth<T: Coord>(ps: &PointSet<T>, cover: &BicliqueCover, q: &QueryPoint<T>) -> u64 {
    let z = SlotMap::new(ps).slot(q);
    cover.bicliques.iter().map(|b| frame(ps, b).depth(z)).sum()
}

/// Persistent segment tree over y slots: range add, point query.
#[derive(Debug, Clone, Default)]
struct Persistent {
    left: Vec<u32>,
    right: Vec<u32>,
    add: Vec<i64>,
}

impl Persistent {
    fn new() -> Self {
        Persistent { left: vec![0], right: vec![0], add: vec![0] }
    }

    fn copy(&mut self, v: u32) -> u32 {
        let v = v as usize;
        self.left.push(self.left[v]);
        self.right.push(self.right[v]);
        self.add.push(self.add[v]);
        (self.add.len() - 1) as u32
    }

    #[allow(clippy::too_many_arguments)]
    fn update(&mut self, v: u32, lo: usize, hi: usize, a: usize, b: usize, w: i64) -> u32 {
        let u = self.copy(v);
        if a <= lo && hi <= b {
            self.add[u as usize] += w;
            return u;
        }
        let mid = (lo + hi) / 2;
        if a < mid {
            let l = self.update(self.left[u as usize], lo, mid, a, b, w);
            self.left[u as usize] = l;
        }
        if b > mid {
            let r = self.update(self.right[u as usize], mid, hi, a, b, w);
            self.right[u as usize] = r;
        }
        u
    }

    fn query(&self, mut v: u32, size: usize, at: usize) -> i64 {
        let (mut lo, mut hi) = (0, size);
        let mut sum = 0;
        while v != 0 {
            sum += self.add[v as usize];
            let mid = (lo + hi) / 2;
            if at < mid {
                v = self.left[v as usize];
                hi = mid;
            } else {
                v = self.right[v as usize];
                lo = mid;
            }
        }
        sum
    }
}

/// Range add with a global maximum.
struct MaxTree {
    size: usize,
    best: Vec<i64>,
    arg: Vec<usize>,
    lazy: Vec<i64>,
}

impl MaxTree {
    fn new(size: usize) -> Self {
        let mut t = MaxTree { size, best: vec![0; 4 * size], arg: vec![0; 4 * size], lazy: vec![0; 4 * size] };
        t.init(1, 0, size);
        t
    }

    fn init(&mut self, v: usize, lo: usize, hi: usize) {
        self.arg[v] = lo;
        if hi - lo > 1 {
            let mid = (lo + hi) / 2;
            self.init(2 * v, lo, mid);
            self.init(2 * v + 1, mid, hi);
        }
    }

    fn add(&mut self, a: usize, b: usize, w: i64) {
        self.go(1, 0, self.size, a, b, w);
    }

    fn go(&mut self, v: usize, lo: usize, hi: usize, a: usize, b: usize, w: i64) {
        if b <= lo || hi <= a {
            return;
        }
        if a <= lo && hi <= b {
            self.best[v] += w;
            self.lazy[v] += w;
            return;
        }
        let mid = (lo + hi) / 2;
        self.go(2 * v, lo, mid, a, b, w);
        self.go(2 * v + 1, mid, hi, a, b, w);
        let (l, r) = (2 * v, 2 * v + 1);
        let pick = if self.best[l] >= self.best[r] { l } else { r };
        self.best[v] = self.best[pick] + self.lazy[v];
        self.arg[v] = self.arg[pick];
    }
}

/// Weighted cells of every biclique overlaid for stabbing-sum queries.
#[derive(Debug, Clone)]
pub struct DepthIndex<T> {
    pub params: Params,
    pub slots: SlotMap<T>,
    /// Cells with the index of the biclique they came from.
    pub cells: Vec<(Cell, usize)>,
    pub cover: BicliqueCover,
    tree: Persistent,
    /// Slot x of each snapshot and its root.
    snapshots: Vec<(i64, u32)>,
    size: usize,
}

/// Sweep events: at `x`, add `weight` to y-slots `[y0, y1]` (shifted by one).
fn events(cells: &[(Cell, usize)]) -> Vec<(i64, usize, usize, i64)> {
    let mut ev: Vec<(i64, usize, usize, i64)> = Vec::with_capacity(2 * cells.len());
    for (c, _) in cells {
        let (a, b) = ((c.y0 + 1) as usize, (c.y1 + 2) as usize);
        ev.push((c.x0, a, b, c.weight as i64));
        ev.push((c.x1 + 1, a, b, -(c.weight as i64)));
    }
    ev.sort_unstable_by_key(|e| e.0);
    ev
}

pub fn build_depth_index<T: Coord>(ps: &PointSet<T>, eps: f64) -> Result<DepthIndex<T>, DepthError> {
    let params = Params::new(eps)?;
    if ps.len() < 2 {
        return Err(DepthError::TooFewPoints(ps.len()));
    }
    let cover = build_cover(ps);
    let mut cells = Vec::new();
    for (i, b) in cover.bicliques.iter().enumerate() {
        cells.extend(frame(ps, b).cells(&params).into_iter().filter(|c| c.weight > 0).map(|c| (c, i)));
    }
    let size = 2 * ps.len() + 1;
    let mut tree = Persistent::new();
    let mut snapshots: Vec<(i64, u32)> = Vec::new();
    let mut root = 0u32;
    for (x, a, b, w) in events(&cells) {
        root = tree.update(root, 0, size, a, b, w);
        match snapshots.last_mut() {
            Some(last) if last.0 == x => last.1 = root,
            _ => snapshots.push((x, root)),
        }
    }
    Ok(DepthIndex { params, slots: SlotMap::new(ps), cells, cover, tree, snapshots, size })
}

impl<T: Coord> DepthIndex<T> {
    /// Approximate depth at slot coordinates.
    pub fn depth_at(&self, sx: i64, sy: i64) -> u64 {
        let i = self.snapshots.partition_point(|s| s.0 <= sx);
        if i == 0 || sy < -1 || (sy + 1) as usize >= self.size {
            return 0;
        }
        self.tree.query(self.snapshots[i - 1].1, self.size, (sy + 1) as usize) as u64
    }

    pub fn rect_count(&self) -> usize {
        self.cells.len()
    }

    /// Deepest cell of the overlay.
    pub fn max_depth(&self) -> (QueryPoint<T>, u64) {
        let mut t = MaxTree::new(self.size);
        let mut best = (0i64, 0i64, 0i64);
        let ev = events(&self.cells);
        let mut i = 0;
        while i < ev.len() {
            let x = ev[i].0;
            while i < ev.len() && ev[i].0 == x {
                t.add(ev[i].1, ev[i].2, ev[i].3);
                i += 1;
            }
            if t.best[1] > best.2 {
                best = (x, t.arg[1] as i64 - 1, t.best[1]);
            }
        }
        (self.slots.query(best.0, best.1), best.2 as u64)
    }
}

pub fn query_depth<T: Coord>(ix: &DepthIndex<T>, q: &QueryPoint<T>) -> u64 {
    let (sx, sy) = ix.slots.slot(q);
    ix.depth_at(sx, sy)
}

pub fn approx_max_depth<T: Coord>(ps: &PointSet<T>, eps: f64) -> Result<(QueryPoint<T>, u64), DepthError> {
    Ok(build_depth_index(ps, eps)?.max_depth())
}

/// Parts of each biclique split by the vertical median lines of a recursive
/// halving of the x order. Node `id` covers x ranks `[lo, hi)` and its line
/// runs between ranks `mid - 1` and `mid`.
/// Lower and upper ids of one crossing sub-biclique.
type Crossing = (Vec<usize>, Vec<usize>);

struct Split {
    /// Per node: the crossing parts of each biclique as (lower ids, upper ids).
    nodes: HashMap<usize, Vec<Crossing>>,
    ranges: HashMap<usize, (usize, usize)>,
}

fn split<T: Coord>(ps: &PointSet<T>, cover: &BicliqueCover) -> Split {
    let mut nodes: HashMap<usize, Vec<Crossing>> = HashMap::new();
    let mut ranges = HashMap::new();
    let n = ps.len();
    for b in &cover.bicliques {
        // Left-in-x side first; sides are x sorted.
        let lower_left = b.orientation == Orientation::Dominance;
        let (l, r) = if lower_left { (&b.left, &b.right) } else { (&b.right, &b.left) };
        let mut stack = vec![(1usize, 0usize, n, l.as_slice(), r.as_slice())];
        while let Some((id, lo, hi, l, r)) = stack.pop() {
            if hi - lo < 2 || l.is_empty() || r.is_empty() {
                continue;
            }
            let mid = (lo + hi) / 2;
            let lcut = l.partition_point(|&i| ps.x_rank[i] < mid);
            let rcut = r.partition_point(|&i| ps.x_rank[i] < mid);
            if lcut > 0 && rcut < r.len() {
                let (ll, rr) = (l[..lcut].to_vec(), r[rcut..].to_vec());
                let entry = if lower_left { (ll, rr) } else { (rr, ll) };
                nodes.entry(id).or_default().push(entry);
                ranges.insert(id, (lo, hi));
            }
            stack.push((2 * id, lo, mid, &l[..lcut], &r[..rcut]));
            stack.push((2 * id + 1, mid, hi, &l[lcut..], &r[rcut..]));
        }
    }
    Split { nodes, ranges }
}

/// Point of maximum depth restricted to the rectangles split by one of the
/// median lines; the value reported is the exact depth at that point.
pub fn log_approx_max_depth<T: Coord>(ps: &PointSet<T>) -> Result<(QueryPoint<T>, u64), DepthError> {
    if ps.len() < 2 {
        return Err(DepthError::TooFewPoints(ps.len()));
    }
    let cover = build_cover(ps);
    let sp = split(ps, &cover);
    let ys = |ids: &[usize]| {
        let mut v: Vec<i64> = ids.iter().map(|&i| 2 * ps.y_rank[i] as i64).collect();
        v.sort_unstable();
        v
    };
    let mut best = (0i64, 0i64, 0i64);
    for (&id, parts) in &sp.nodes {
        let mut ev: Vec<(i64, i64)> = Vec::new();
        for (lower, upper) in parts {
            let (by, ay) = (ys(lower), ys(upper));
            let mut bps: Vec<i64> = by.iter().copied().chain(ay.iter().map(|y| y + 1)).collect();
            bps.sort_unstable();
            bps.dedup();
            for w in bps.windows(2) {
                let y = w[0];
                let k = by.partition_point(|&v| v <= y) as i64;
                let l = (ay.len() - ay.partition_point(|&v| v < y)) as i64;
                if k * l > 0 {
                    ev.push((w[0], k * l));
                    ev.push((w[1], -k * l));
                }
            }
        }
        ev.sort_unstable();
        let mut acc = 0;
        for (y, d) in ev {
            acc += d;
            if acc > best.2 {
                let mid = (sp.ranges[&id].0 + sp.ranges[&id].1) / 2;
                best = (2 * mid as i64 - 1, y, acc);
            }
        }
    }
    let q = SlotMap::new(ps).query(best.0, best.1);
    let value = cover_depth(ps, &cover, &q);
    Ok((q, value))
}

/// Pairwise disjoint empty rectangles: per median line, one rectangle per
/// crossing biclique (innermost pair) and a greedy interval selection; the
/// best level of the recursion wins.
pub fn approx_mis<T: Coord>(ps: &PointSet<T>) -> Result<Vec<Rect<T>>, DepthError> {
    if ps.len() < 2 {
        return Err(DepthError::TooFewPoints(ps.len()));
    }
    let cover = build_cover(ps);
    let sp = split(ps, &cover);
    let mut levels: HashMap<u32, Vec<Rect<T>>> = HashMap::new();
    let y = |i: usize| ps.y_rank[i];
    let mut ids: Vec<&usize> = sp.nodes.keys().collect();
    ids.sort_unstable();
    for id in ids {
        let mut cands: Vec<(usize, usize, usize, usize)> = sp.nodes[id]
            .iter()
            .map(|(lower, upper)| {
                let b = *lower.iter().max_by_key(|&&i| y(i)).expect("non-empty");
                let a = *upper.iter().min_by_key(|&&i| y(i)).expect("non-empty");
                (y(a), y(b), b, a)
            })
            .collect();
        cands.sort_unstable();
        let mut last: Option<usize> = None;
        let chosen = levels.entry(usize::BITS - id.leading_zeros()).or_default();
        for (top, bottom, b, a) in cands {
            if last.is_none_or(|l| bottom > l) {
                chosen.push(ps.rect(b, a));
                last = Some(top);
            }
        }
    }
    let best = levels.into_iter().max_by_key(|(lvl, v)| (v.len(), std::cmp::Reverse(*lvl)));
    Ok(best.map(|(_, v)| v).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::validate;

    #[test]
    fn schedule_covers_every_level_up_to_t() {
        let p = Params::new(0.5).unwrap();
        for t in [1usize, 2, 5, 40, 41, 500, 10_000] {
            let s = level_schedule(t, &p);
            assert_eq!(s[0].alpha, 1);
            assert_eq!(s.last().unwrap().alpha, t);
            for w in s.windows(2) {
                assert!(w[0].alpha < w[1].alpha && w[0].beta <= w[1].alpha);
                let bound = (1.0 - p.delta) * (w[1].beta as f64 - 1.0);
                assert!(w[0].alpha as f64 >= bound, "t={t} {:?}", w);
            }
        }
    }

    #[test]
    fn slots_round_trip() {
        let ps = validate(&[(0i64, 5), (4, 1), (9, 3)]).unwrap();
        let m = SlotMap::new(&ps);
        assert_eq!(m.slot(&QueryPoint::at(4, 3)), (2, 2));
        assert_eq!(m.slot(&QueryPoint::halves(3, 3)), (1, 1));
        assert_eq!(m.slot(&QueryPoint::at(-7, 7)), (-1, 5));
        assert_eq!(m.query(1, 3), QueryPoint::halves(4, 8));
    }

    #[test]
    fn two_points() {
        let ps = validate(&[(0i64, 0), (4, 4)]).unwrap();
        let ix = build_depth_index(&ps, 0.3).unwrap();
        assert_eq!(query_depth(&ix, &QueryPoint::at(2, 3)), 1);
        assert_eq!(query_depth(&ix, &QueryPoint::at(4, 4)), 1);
        assert_eq!(query_depth(&ix, &QueryPoint::at(5, 4)), 0);
        assert_eq!(ix.max_depth().1, 1);
        assert_eq!(log_approx_max_depth(&ps).unwrap().1, 1);
        assert_eq!(approx_mis(&ps).unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_eps() {
        let ps = validate(&[(0i64, 0), (4, 4)]).unwrap();
        for e in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(matches!(build_depth_index(&ps, e), Err(DepthError::EpsOutOfRange(_))));
        }
    }
}
