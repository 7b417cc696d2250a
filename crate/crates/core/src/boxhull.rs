//! Union of all empty rectangles: membership, witnesses, boundary and an
//! interior-disjoint decomposition.

use thiserror::Error;

use crate::chains::{maxima, Chain, ChainKind};
use crate::geom::{wide, Coord, Point, PointSet, QueryPoint, Rect, Xy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HullError {
    #[error("query point is outside the hull")]
    NotInHull,
    #[error("hull needs at least two points, got {0}")]
    TooFewPoints(usize),
}

/// The four extremal staircases, each as x-increasing coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowSet<T> {
    /// Nothing up-right (y decreasing).
    pub maxima: Vec<Xy<T>>,
    /// Nothing down-left (y decreasing).
    pub minima: Vec<Xy<T>>,
    /// Nothing up-left (y increasing).
    pub anti_maxima: Vec<Xy<T>>,
    /// Nothing down-right (y increasing).
    pub anti_minima: Vec<Xy<T>>,
}

impl<T: Coord> ShadowSet<T> {
    /// Is `q` (doubled coordinates) in the interior of one of the shadows?
    fn shades(&self, q: &QueryPoint<T>) -> bool {
        let two = |v: T| v + v;
        let left = |c: &[Xy<T>]| c.partition_point(|p| two(p.x) < q.x2);
        let right = |c: &[Xy<T>]| c.partition_point(|p| two(p.x) <= q.x2);
        let i = left(&self.maxima);
        if i > 0 && two(self.maxima[i - 1].y) < q.y2 {
            return true;
        }
        let i = right(&self.minima);
        if i < self.minima.len() && two(self.minima[i].y) > q.y2 {
            return true;
        }
        let i = right(&self.anti_maxima);
        if i < self.anti_maxima.len() && two(self.anti_maxima[i].y) < q.y2 {
            return true;
        }
        let i = left(&self.anti_minima);
        i > 0 && two(self.anti_minima[i - 1].y) > q.y2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxHull<T> {
    pub chains: [Chain; 4],
    pub shadows: ShadowSet<T>,
    /// Closed rectilinear polygon, clockwise from the leftmost point. It may
    /// touch itself at a vertex where two staircases meet.
    pub boundary: Vec<Xy<T>>,
    pub bbox: (Xy<T>, Xy<T>),
}

pub fn build_hull<T: Coord>(ps: &PointSet<T>) -> Result<BoxHull<T>, HullError> {
    if ps.len() < 2 {
        return Err(HullError::TooFewPoints(ps.len()));
    }
    let chains = [
        maxima(ps, ChainKind::MaxDominance),
        maxima(ps, ChainKind::MinDominance),
        maxima(ps, ChainKind::MaxAnti),
        maxima(ps, ChainKind::MinAnti),
    ];
    let xy = |c: &Chain| -> Vec<Xy<T>> {
        c.ids.iter().map(|&i| Xy { x: ps.points[i].x, y: ps.points[i].y }).collect()
    };
    let shadows = ShadowSet {
        maxima: xy(&chains[0]),
        minima: xy(&chains[1]),
        anti_maxima: xy(&chains[2]),
        anti_minima: xy(&chains[3]),
    };
    let boundary = boundary_of(&shadows);
    let bbox = ps.bbox().expect("non-empty");
    Ok(BoxHull { chains, shadows, boundary, bbox })
}

fn boundary_of<T: Coord>(s: &ShadowSet<T>) -> Vec<Xy<T>> {
    let mut out: Vec<Xy<T>> = Vec::new();
    let mut push = |v: Xy<T>| {
        if out.last() != Some(&v) {
            out.push(v);
        }
    };
    // Left to top: up, then right.
    for w in s.anti_maxima.windows(2) {
        push(w[0]);
        push(Xy { x: w[0].x, y: w[1].y });
    }
    // Top to right: right, then down.
    for w in s.maxima.windows(2) {
        push(w[0]);
        push(Xy { x: w[1].x, y: w[0].y });
    }
    // Right to bottom: down, then left.
    for w in s.anti_minima.windows(2).rev() {
        push(w[1]);
        push(Xy { x: w[1].x, y: w[0].y });
    }
    // Bottom to left: left, then up.
    for w in s.minima.windows(2).rev() {
        push(w[1]);
        push(Xy { x: w[0].x, y: w[1].y });
    }
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

impl<T: Coord> BoxHull<T> {
    /// Closed membership.
    pub fn contains(&self, q: &QueryPoint<T>) -> bool {
        let (lo, hi) = self.bbox;
        let inside = lo.x + lo.x <= q.x2 && q.x2 <= hi.x + hi.x && lo.y + lo.y <= q.y2 && q.y2 <= hi.y + hi.y;
        inside && !self.shadows.shades(q)
    }

    /// Area enclosed by the boundary.
    pub fn area(&self) -> i128 {
        let b = &self.boundary;
        let mut twice = 0i128;
        for i in 0..b.len() {
            let (p, q) = (b[i], b[(i + 1) % b.len()]);
            twice += wide(p.x) * wide(q.y) - wide(q.x) * wide(p.y);
        }
        twice.abs() / 2
    }

    /// Vertices of the rectilinear convex hull: the chain points and the
    /// inner corners of each staircase.
    pub fn ortho_hull_vertices(&self) -> Vec<Xy<T>> {
        let s = &self.shadows;
        let mut out = Vec::new();
        let mut corners = |c: &[Xy<T>], inner: fn(Xy<T>, Xy<T>) -> Xy<T>| {
            out.extend_from_slice(c);
            out.extend(c.windows(2).map(|w| inner(w[0], w[1])));
        };
        corners(&s.anti_maxima, |a, b| Xy { x: b.x, y: a.y });
        corners(&s.maxima, |a, b| Xy { x: a.x, y: b.y });
        corners(&s.anti_minima, |a, b| Xy { x: a.x, y: b.y });
        corners(&s.minima, |a, b| Xy { x: b.x, y: a.y });
        out
    }
}

/// An empty rectangle of the point set containing `q`.
pub fn witness_rect<T: Coord>(ps: &PointSet<T>, h: &BoxHull<T>, q: &QueryPoint<T>) -> Result<Rect<T>, HullError> {
    if !h.contains(q) {
        return Err(HullError::NotInHull);
    }
    // Points scaled by four; the probe is nudged diagonally by one unit so no
    // input point shares a coordinate with it.
    let pts: Vec<(i128, i128)> = ps.points.iter().map(|p| (4 * wide(p.x), 4 * wide(p.y))).collect();
    for (dx, dy) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
        let probe = (2 * wide(q.x2) + dx, 2 * wide(q.y2) + dy);
        if let Some((a, b)) = witness_at(h, &pts, probe) {
            let (pa, pb) = (pts[a], pts[b]);
            let covers = |v: i128, s: i128, t: i128| s.min(t) <= v && v <= s.max(t);
            if covers(probe.0, pa.0, pb.0) && covers(probe.1, pa.1, pb.1) {
                return Ok(ps.rect(a, b));
            }
        }
    }
    Err(HullError::NotInHull)
}

/// Supports of an empty rectangle that should contain `probe`, if the case
/// analysis applies.
fn witness_at<T: Coord>(h: &BoxHull<T>, pts: &[(i128, i128)], probe: (i128, i128)) -> Option<(usize, usize)> {
    let (qx, qy) = probe;
    let quadrant = |i: usize| match (pts[i].0 > qx, pts[i].1 > qy) {
        (true, true) => 0,
        (false, true) => 1,
        (false, false) => 2,
        (true, false) => 3,
    };
    // Lowest point in each upper quadrant, highest in each lower one.
    let mut ext: [Option<usize>; 4] = [None; 4];
    for i in 0..pts.len() {
        let k = quadrant(i);
        let better = |j: usize| if k < 2 { pts[i].1 < pts[j].1 } else { pts[i].1 > pts[j].1 };
        if ext[k].is_none_or(better) {
            ext[k] = Some(i);
        }
    }
    let consecutive = |c: &Chain| {
        let ids = &c.ids;
        let i = ids.partition_point(|&id| pts[id].0 < qx);
        (i > 0 && i < ids.len()).then(|| (ids[i - 1], ids[i]))
    };
    match ext {
        [None, ..] => consecutive(&h.chains[0]),
        [_, None, ..] => consecutive(&h.chains[2]),
        [_, _, None, _] => consecutive(&h.chains[1]),
        [.., None] => consecutive(&h.chains[3]),
        [Some(p1), Some(p2), Some(p3), Some(p4)] => {
            let y = |i: usize| pts[i].1;
            let (a, a_hi) = if y(p1) < y(p2) { (p1, p2) } else { (p2, p1) };
            let (b, b_lo) = if y(p3) > y(p4) { (p3, p4) } else { (p4, p3) };
            let (qa, qb) = (quadrant(a), quadrant(b));
            if qa + 2 == qb || qb + 2 == qa {
                return Some((a, b));
            }
            // Both on one side: the slab between `a_hi` and `b_lo` is empty on
            // the other side; take the point of the slab nearest the vertical line.
            let right = qa == 0;
            let (lo, hi) = (y(b_lo), y(a_hi));
            let near = (0..pts.len())
                .filter(|&i| lo < pts[i].1 && pts[i].1 < hi && (pts[i].0 > qx) == right)
                .min_by_key(|&i| if right { pts[i].0 } else { -pts[i].0 })?;
            let partner = if pts[near].1 > qy { b_lo } else { a_hi };
            Some((near, partner))
        }
    }
}

/// One cell of the interior-disjoint decomposition, together with the pair of
/// points whose empty rectangle contains it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HullPiece<T> {
    pub lo: Xy<T>,
    pub hi: Xy<T>,
    pub support: (usize, usize),
}

impl<T: Coord> HullPiece<T> {
    pub fn area(&self) -> i128 {
        (wide(self.hi.x) - wide(self.lo.x)) * (wide(self.hi.y) - wide(self.lo.y))
    }

    pub fn interiors_overlap(&self, o: &HullPiece<T>) -> bool {
        self.lo.x < o.hi.x && o.lo.x < self.hi.x && self.lo.y < o.hi.y && o.lo.y < self.hi.y
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointCover<T> {
    pub pieces: Vec<HullPiece<T>>,
}

impl<T: Coord> DisjointCover<T> {
    /// Supporting rectangles, one per piece.
    pub fn support_rects(&self, ps: &PointSet<T>) -> Vec<Rect<T>> {
        self.pieces.iter().map(|p| ps.rect(p.support.0, p.support.1)).collect()
    }

    pub fn area(&self) -> i128 {
        self.pieces.iter().map(HullPiece::area).sum()
    }
}

/// Left-to-right sweep keeping the top-right and bottom-right staircases.
pub fn disjoint_cover<T: Coord>(ps: &PointSet<T>) -> Result<DisjointCover<T>, HullError> {
    if ps.len() < 2 {
        return Err(HullError::TooFewPoints(ps.len()));
    }
    let pt = |i: usize| -> &Point<T> { &ps.points[i] };
    let xy = |x: T, y: T| Xy { x, y };
    // Top-right staircase (y decreasing) and bottom-right one (y increasing).
    let mut top: Vec<usize> = vec![ps.by_x[0]];
    let mut bottom: Vec<usize> = vec![ps.by_x[0]];
    let mut pieces = Vec::new();
    for &id in &ps.by_x[1..] {
        let p = pt(id);
        let last = pt(*top.last().expect("non-empty"));
        // The part of the chain that `p` eclipses, and the chain point just before it.
        let (chain, other) = if p.y > last.y { (&mut top, &mut bottom) } else { (&mut bottom, &mut top) };
        let from = if p.y > last.y {
            chain.partition_point(|&c| pt(c).y > p.y)
        } else {
            chain.partition_point(|&c| pt(c).y < p.y)
        };
        let gone = &chain[from..];
        for (k, &c) in gone.iter().enumerate() {
            let q = pt(c);
            let next = gone.get(k + 1).map_or(p.x, |&d| pt(d).x);
            let (lo, hi) = if p.y > q.y { (q.y, p.y) } else { (p.y, q.y) };
            pieces.push(HullPiece { lo: xy(q.x, lo), hi: xy(next, hi), support: (c, id) });
        }
        if let Some(&b) = from.checked_sub(1).map(|i| &chain[i]) {
            let (q, x0) = (pt(b), pt(gone[0]).x);
            let (lo, hi) = if p.y > q.y { (q.y, p.y) } else { (p.y, q.y) };
            pieces.push(HullPiece { lo: xy(x0, lo), hi: xy(p.x, hi), support: (b, id) });
        }
        chain.truncate(from);
        chain.push(id);
        other.push(id);
    }
    Ok(DisjointCover { pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::validate;

    #[test]
    fn two_points() {
        let ps = validate(&[(0i64, 0), (10, 10)]).unwrap();
        let h = build_hull(&ps).unwrap();
        assert_eq!(h.area(), 100);
        assert!(h.contains(&QueryPoint::at(5, 5)));
        assert!(h.contains(&QueryPoint::at(10, 0)));
        assert!(!h.contains(&QueryPoint::at(11, 11)));
        assert_eq!(witness_rect(&ps, &h, &QueryPoint::at(3, 4)).unwrap().support, (0, 1));
        assert_eq!(disjoint_cover(&ps).unwrap().pieces.len(), 1);
    }

    #[test]
    fn adding_a_point_shrinks_the_hull() {
        let ps = validate(&[(0i64, 0), (10, 10), (5, 5)]).unwrap();
        let h = build_hull(&ps).unwrap();
        assert_eq!(h.area(), 50);
        assert!(!h.contains(&QueryPoint::at(2, 8)));
        assert_eq!(witness_rect(&ps, &h, &QueryPoint::at(2, 8)), Err(HullError::NotInHull));
        assert_eq!(disjoint_cover(&ps).unwrap().pieces.len(), 2);
    }

    #[test]
    fn anti_chain_boundary() {
        let ps = validate(&[(0i64, 2), (1, 1), (2, 0)]).unwrap();
        let h = build_hull(&ps).unwrap();
        assert_eq!(h.area(), 2);
        assert!(h.contains(&QueryPoint::halves(1, 3)));
        assert!(!h.contains(&QueryPoint::halves(3, 3)));
    }
}
