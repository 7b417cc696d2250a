//! Biclique covers of the empty-rectangle graph.
//!
//! Points are bucketed by y into a balanced tree of strips. Each strip runs its
//! points through range stacks in x order, so the stack content after the
//! first `i` points is the staircase of those points. For a query point `p`,
//! the quadrant below-left of `p` splits into O(log n) strips; walking them
//! from the top, each strip contributes the part of its staircase that lies
//! right of everything seen above, reported as canonical sets. `p` is
//! registered on every returned set and each set with registrants becomes a
//! biclique. The anti-dominance half reuses the same engine after mirroring x.
//!
//! With `k` extra levels the stacks hold, per level `j`, the points having
//! exactly `j` dominators inside the strip prefix; this yields covers of the
//! graph of rectangles with at most `k` interior points.

use std::time::Instant;

use serde::Serialize;

use crate::chains::{Keyed, NodeRef};
use crate::geom::{Coord, PointSet};
use crate::oracle::{brute_k_rig, brute_rig, EdgeSet};
use crate::rangestack::{buffer_params, Part, RangeStack, Version};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    /// `left` is below-left of `right`.
    Dominance,
    /// `left` is below-right of `right`.
    AntiDominance,
}

/// Complete bipartite graph `left x right`, both sides in increasing x order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Biclique {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub orientation: Orientation,
}

impl Biclique {
    pub fn weight(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn edge_count(&self) -> usize {
        self.left.len() * self.right.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CoverStats {
    pub count: usize,
    pub weight: usize,
    pub edges: usize,
    /// Bicliques whose canonical side has more than one point.
    pub nonsingleton: usize,
    /// Total size of all canonical sets created by the strip stacks.
    pub canonical_weight: usize,
    pub build_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BicliqueCover {
    pub bicliques: Vec<Biclique>,
    pub stats: CoverStats,
}

impl BicliqueCover {
    fn new(bicliques: Vec<Biclique>, canonical_weight: usize, started: Instant) -> Self {
        let stats = CoverStats {
            count: bicliques.len(),
            weight: bicliques.iter().map(Biclique::weight).sum(),
            edges: bicliques.iter().map(Biclique::edge_count).sum(),
            nonsingleton: bicliques.iter().filter(|b| b.left.len() > 1).count(),
            canonical_weight,
            build_ms: started.elapsed().as_secs_f64() * 1e3,
        };
        BicliqueCover { bicliques, stats }
    }

    /// Every covered pair, with multiplicity, as `(small id, large id)`.
    pub fn expand(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.stats.edges);
        for b in &self.bicliques {
            for &l in &b.left {
                for &r in &b.right {
                    out.push((l.min(r), l.max(r)));
                }
            }
        }
        out
    }

    pub fn edge_set(&self, n: usize) -> EdgeSet {
        let mut es = EdgeSet::new(n);
        for (a, b) in self.expand() {
            es.insert(a, b);
        }
        es
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Elem {
    xr: u32,
    yr: u32,
}

impl Keyed for Elem {
    type Key = u32;
    fn key(&self) -> u32 {
        self.xr
    }
}

#[derive(Debug, Clone, Copy)]
struct Config {
    levels: usize,
    buffered: bool,
    block: usize,
    scan_leaves: bool,
}

const NONE: usize = usize::MAX;

struct Strip {
    lo: usize,
    hi: usize,
    left: usize,
    right: usize,
    xs: Vec<u32>,
    stacks: Vec<RangeStack<Elem>>,
    checkpoints: Vec<Version>,
    registrants: Vec<Vec<Vec<u32>>>,
}

impl Strip {
    fn is_leaf(&self) -> bool {
        self.hi - self.lo == 1
    }

    fn has_stacks(&self) -> bool {
        !self.stacks.is_empty()
    }
}

/// Rank-space cover engine for one orientation.
struct Engine {
    cfg: Config,
    n: usize,
    yr_of_xr: Vec<u32>,
    xr_of_yr: Vec<u32>,
    strips: Vec<Strip>,
    root: usize,
}

impl Engine {
    fn new(xr_of_yr: Vec<u32>, cfg: Config) -> Self {
        let n = xr_of_yr.len();
        let mut yr_of_xr = vec![0u32; n];
        for (yr, &xr) in xr_of_yr.iter().enumerate() {
            yr_of_xr[xr as usize] = yr as u32;
        }
        let mut e = Engine { cfg, n, yr_of_xr, xr_of_yr, strips: Vec::new(), root: NONE };
        let blocks = n.div_ceil(cfg.block);
        if blocks > 0 {
            let all: Vec<u32> = (0..n as u32).collect();
            e.root = e.build_strip(0, blocks, all);
        }
        e
    }

    fn build_strip(&mut self, lo: usize, hi: usize, xs: Vec<u32>) -> usize {
        let (mut left, mut right) = (NONE, NONE);
        if hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let cut = (mid * self.cfg.block) as u32;
            let (below, above): (Vec<u32>, Vec<u32>) = xs.iter().partition(|&&x| self.yr_of_xr[x as usize] < cut);
            left = self.build_strip(lo, mid, below);
            right = self.build_strip(mid, hi, above);
        }
        let mut s = Strip {
            lo,
            hi,
            left,
            right,
            xs,
            stacks: Vec::new(),
            checkpoints: Vec::new(),
            registrants: Vec::new(),
        };
        if !(s.is_leaf() && self.cfg.scan_leaves) {
            self.fill_stacks(&mut s);
        }
        self.strips.push(s);
        self.strips.len() - 1
    }

    fn fill_stacks(&self, s: &mut Strip) {
        let levels = self.cfg.levels;
        let t = s.xs.len();
        s.stacks = (0..levels)
            .map(|_| if self.cfg.buffered { RangeStack::buffered(t) } else { RangeStack::new() })
            .collect();
        s.checkpoints = Vec::with_capacity((t + 1) * levels);
        s.checkpoints.extend(s.stacks.iter().map(|st| st.version()));
        for &xr in &s.xs {
            let e = Elem { xr, yr: self.yr_of_xr[xr as usize] };
            let mut carry = vec![e];
            for st in s.stacks.iter_mut() {
                let k = st.count_top_while(|q| q.yr < e.yr);
                let popped = if k > 0 { st.top_elements(k) } else { Vec::new() };
                if k > 0 {
                    st.pop(k).expect("k within size");
                }
                for c in carry {
                    st.push(c).expect("carried keys exceed the remaining top");
                }
                carry = popped;
            }
            s.checkpoints.extend(s.stacks.iter().map(|st| st.version()));
        }
        s.registrants = s.stacks.iter().map(|st| vec![Vec::new(); st.canonical_count()]).collect();
    }

    /// Strips covering block range `[0, m)`, highest first.
    fn prefix_strips(&self, m: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(i) = stack.pop() {
            let s = &self.strips[i];
            if s.lo >= m {
                continue;
            }
            if s.hi <= m {
                out.push(i);
            } else {
                stack.push(s.left);
                stack.push(s.right);
            }
        }
        out.sort_by_key(|&i| std::cmp::Reverse(self.strips[i].lo));
        out
    }

    /// Runs every point as a query. Returns per-point singleton partners.
    fn query_all(&mut self) -> Vec<Vec<u32>> {
        let k = self.cfg.levels - 1;
        let mut singles = vec![Vec::new(); self.n];
        for yr in 0..self.n {
            let xr = self.xr_of_yr[yr];
            let b = yr / self.cfg.block;
            let mut comps = self.prefix_strips(b);
            let mut scan: Vec<Elem> = (b * self.cfg.block..yr)
                .map(|y| Elem { xr: self.xr_of_yr[y], yr: y as u32 })
                .filter(|q| q.xr < xr)
                .collect();
            let leaves = comps.iter().take_while(|&&c| !self.strips[c].has_stacks()).count();
            for top in comps.drain(..leaves) {
                let s = &self.strips[top];
                let until = s.xs.partition_point(|&x| x < xr);
                scan.extend(s.xs[..until].iter().map(|&x| Elem { xr: x, yr: self.yr_of_xr[x as usize] }));
            }
            // Largest x-ranks among quadrant points already passed, descending.
            let mut upper: Vec<u32> = Vec::with_capacity(k + 2);
            for q in Self::scan_staircase(&scan, k) {
                singles[xr as usize].push(q.xr);
            }
            merge_upper(&mut upper, scan.iter().map(|q| q.xr), k + 1);
            for ci in comps {
                let s = &mut self.strips[ci];
                let i = s.xs.partition_point(|&x| x < xr);
                if i == 0 {
                    continue;
                }
                for lvl in 0..=k {
                    let v = s.checkpoints[i * (k + 1) + lvl];
                    let lo = upper.get(k - lvl).map_or(0, |&t| t + 1);
                    for part in s.stacks[lvl].report_at(v, lo, xr - 1).expect("recorded version") {
                        match part {
                            Part::Canonical(r) => s.registrants[lvl][r as usize].push(xr),
                            Part::Loose(es) => singles[xr as usize].extend(es.iter().map(|q| q.xr)),
                        }
                    }
                }
                let from = i.saturating_sub(k + 1);
                merge_upper(&mut upper, s.xs[from..i].iter().copied(), k + 1);
            }
        }
        singles
    }

    /// Points of the topmost region with at most `k` dominators inside it.
    fn scan_staircase(scan: &[Elem], k: usize) -> Vec<Elem> {
        if k == 0 {
            let mut by_x = scan.to_vec();
            by_x.sort_unstable_by_key(|q| std::cmp::Reverse(q.xr));
            let mut best = None;
            let mut out = Vec::new();
            for q in by_x {
                if best.is_none_or(|b| q.yr > b) {
                    best = Some(q.yr);
                    out.push(q);
                }
            }
            return out;
        }
        scan.iter()
            .filter(|q| scan.iter().filter(|s| s.xr > q.xr && s.yr > q.yr).count() <= k)
            .copied()
            .collect()
    }

    /// `(canonical x-ranks, registrant x-ranks)` for every registered set, and
    /// the total weight of all canonical sets.
    #[allow(clippy::type_complexity)]
    fn families(&self) -> (Vec<(Vec<u32>, Vec<u32>)>, usize) {
        let mut out = Vec::new();
        let mut weight = 0;
        for s in &self.strips {
            for (st, regs) in s.stacks.iter().zip(&s.registrants) {
                weight += st.canonical_weight();
                for (r, who) in regs.iter().enumerate() {
                    if !who.is_empty() {
                        let run = st.arena().run(r as NodeRef).iter().map(|q| q.xr).collect();
                        out.push((run, who.clone()));
                    }
                }
            }
        }
        (out, weight)
    }
}

/// Keep the `keep` largest values of `upper` plus `more`, descending.
fn merge_upper(upper: &mut Vec<u32>, more: impl Iterator<Item = u32>, keep: usize) {
    upper.extend(more);
    upper.sort_unstable_by(|a, b| b.cmp(a));
    upper.truncate(keep);
}

fn run_orientation<T: Coord>(ps: &PointSet<T>, o: Orientation, cfg: Config) -> (Vec<Biclique>, usize) {
    let n = ps.len();
    let xr = |id: usize| match o {
        Orientation::Dominance => ps.x_rank[id],
        Orientation::AntiDominance => n - 1 - ps.x_rank[id],
    };
    let mut id_of_xr = vec![0usize; n];
    for id in 0..n {
        id_of_xr[xr(id)] = id;
    }
    let xr_of_yr: Vec<u32> = ps.by_y.iter().map(|&id| xr(id) as u32).collect();
    let mut eng = Engine::new(xr_of_yr, cfg);
    let singles = eng.query_all();
    let (fams, canonical_weight) = eng.families();
    let side = |v: &[u32]| {
        let mut ids: Vec<usize> = v.iter().map(|&r| id_of_xr[r as usize]).collect();
        ids.sort_unstable_by_key(|&id| ps.x_rank[id]);
        ids
    };
    let mut out: Vec<Biclique> = fams
        .iter()
        .map(|(l, r)| Biclique { left: side(l), right: side(r), orientation: o })
        .collect();
    for (p, s) in singles.iter().enumerate() {
        if !s.is_empty() {
            out.push(Biclique { left: side(s), right: vec![id_of_xr[p]], orientation: o });
        }
    }
    (out, canonical_weight)
}

fn build<T: Coord>(ps: &PointSet<T>, cfg: Config) -> BicliqueCover {
    let started = Instant::now();
    let mut all = Vec::new();
    let mut cw = 0;
    if ps.len() >= 2 {
        for o in [Orientation::Dominance, Orientation::AntiDominance] {
            let (bs, w) = run_orientation(ps, o, cfg);
            all.extend(bs);
            cw += w;
        }
    }
    BicliqueCover::new(all, cw, started)
}

/// Cover with one biclique per registered canonical set (unbuffered stacks).
pub fn build_cover_basic<T: Coord>(ps: &PointSet<T>) -> BicliqueCover {
    build(ps, Config { levels: 1, buffered: false, block: 1, scan_leaves: false })
}

/// Strip floor used by [`build_cover`]: `3 * ceil(log2 n)`.
pub fn strip_floor(n: usize) -> usize {
    buffer_params(n).0
}

/// Cover with O(n) bicliques: buffered stacks, leaf strips of `strip_floor(n)`
/// points answered by scanning, singleton partners merged into stars.
pub fn build_cover<T: Coord>(ps: &PointSet<T>) -> BicliqueCover {
    let block = strip_floor(ps.len());
    build(ps, Config { levels: 1, buffered: true, block, scan_leaves: true })
}

/// Cover of the pairs whose rectangle holds at most `k` other points.
pub fn build_k_cover<T: Coord>(ps: &PointSet<T>, k: usize) -> BicliqueCover {
    build(ps, Config { levels: k + 1, buffered: false, block: 1, scan_leaves: false })
}

/// One biclique viewed as the rectangle family spanned by its two staircases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectFamily<'a> {
    /// Side with the smaller y-coordinates.
    pub lower: &'a [usize],
    pub upper: &'a [usize],
    pub orientation: Orientation,
}

impl RectFamily<'_> {
    pub fn len(&self) -> usize {
        self.lower.len() * self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// True iff the two sides of `b` sit in opposite quadrants as its orientation says.
pub fn separated<T: Coord>(ps: &PointSet<T>, b: &Biclique) -> bool {
    if b.left.is_empty() || b.right.is_empty() {
        return false;
    }
    let x = |i: &usize| ps.points[*i].x;
    let y = |i: &usize| ps.points[*i].y;
    let (lx0, lx1) = (b.left.iter().map(x).min().unwrap(), b.left.iter().map(x).max().unwrap());
    let (rx0, rx1) = (b.right.iter().map(x).min().unwrap(), b.right.iter().map(x).max().unwrap());
    let ly1 = b.left.iter().map(y).max().unwrap();
    let ry0 = b.right.iter().map(y).min().unwrap();
    let horizontal = ly1 < ry0;
    let vertical = match b.orientation {
        Orientation::Dominance => lx1 < rx0,
        Orientation::AntiDominance => rx1 < lx0,
    };
    horizontal && vertical
}

/// True iff the ids, read in x order, have strictly decreasing y.
pub fn is_staircase<T: Coord>(ps: &PointSet<T>, ids: &[usize]) -> bool {
    ids.windows(2).all(|w| {
        let (a, b) = (&ps.points[w[0]], &ps.points[w[1]]);
        a.x < b.x && a.y > b.y
    })
}

/// Each biclique as an implicit rectangle family; panics on a family whose
/// sides are not quadrant-separated.
pub fn rect_families<'a, T: Coord>(
    c: &'a BicliqueCover,
    ps: &'a PointSet<T>,
) -> impl Iterator<Item = RectFamily<'a>> + 'a {
    c.bicliques.iter().map(move |b| {
        assert!(separated(ps, b), "biclique sides are not quadrant-separated");
        RectFamily { lower: &b.left, upper: &b.right, orientation: b.orientation }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    DuplicateEdge(usize, usize),
    MissingEdge(usize, usize),
    ExtraEdge(usize, usize),
    NotSeparated { biclique: usize },
    SharedPoint { biclique: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    pub ok: bool,
    pub count: usize,
    pub weight: usize,
    pub edges: usize,
    pub expected_edges: usize,
    pub violations: Vec<Violation>,
}

/// Check `c` against the exact graph of `ps`.
pub fn verify_cover<T: Coord>(c: &BicliqueCover, ps: &PointSet<T>) -> CoverReport {
    verify_cover_against(c, ps, &brute_rig(ps))
}

/// Check a cover of the at-most-`k` graph against its brute-force edge set.
pub fn verify_k_cover<T: Coord>(c: &BicliqueCover, ps: &PointSet<T>, k: usize) -> CoverReport {
    verify_cover_against(c, ps, &brute_k_rig(ps, k))
}

pub fn verify_cover_against<T: Coord>(c: &BicliqueCover, ps: &PointSet<T>, expected: &EdgeSet) -> CoverReport {
    let mut violations = Vec::new();
    for (i, b) in c.bicliques.iter().enumerate() {
        if b.left.iter().any(|l| b.right.contains(l)) {
            violations.push(Violation::SharedPoint { biclique: i });
        } else if !separated(ps, b) {
            violations.push(Violation::NotSeparated { biclique: i });
        }
    }
    let mut seen = EdgeSet::new(ps.len());
    for (a, b) in c.expand() {
        if a == b {
            continue;
        }
        if !seen.insert(a, b) {
            violations.push(Violation::DuplicateEdge(a, b));
        } else if !expected.contains(a, b) {
            violations.push(Violation::ExtraEdge(a, b));
        }
    }
    for (a, b) in expected.iter() {
        if !seen.contains(a, b) {
            violations.push(Violation::MissingEdge(a, b));
        }
    }
    CoverReport {
        ok: violations.is_empty(),
        count: c.stats.count,
        weight: c.stats.weight,
        edges: c.stats.edges,
        expected_edges: expected.len(),
        violations,
    }
}
