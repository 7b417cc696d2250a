//! Points, rectangles, dominance predicates and input validation.
//!
//! Coordinates are exact signed integers. Query points may sit on half-integer
//! positions and are stored with doubled coordinates.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{PrimInt, Signed};
use thiserror::Error;

/// Exact signed integer coordinate type.
pub trait Coord: PrimInt + Signed + Hash + Debug + Display + Send + Sync + 'static {}

impl<T> Coord for T where T: PrimInt + Signed + Hash + Debug + Display + Send + Sync + 'static {}

/// Widen a coordinate for overflow-free area and sum arithmetic.
#[inline]
pub fn wide<T: Coord>(v: T) -> i128 {
    v.to_i128().expect("coordinate fits in i128")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("points {0} and {1} share an x-coordinate")]
    DuplicateX(usize, usize),
    #[error("points {0} and {1} share a y-coordinate")]
    DuplicateY(usize, usize),
    #[error("a rectangle needs two distinct supports, got {0} twice")]
    SameSupport(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
    pub id: usize,
}

impl<T: Coord> Point<T> {
    pub fn new(x: T, y: T, id: usize) -> Self {
        Point { x, y, id }
    }
}

/// True iff `q` is strictly below-left of `p`.
#[inline]
pub fn dominates<T: Coord>(p: &Point<T>, q: &Point<T>) -> bool {
    q.x < p.x && q.y < p.y
}

/// True iff `p` is strictly up-left of `q`.
#[inline]
pub fn anti_dominates<T: Coord>(p: &Point<T>, q: &Point<T>) -> bool {
    p.x < q.x && p.y > q.y
}

/// A plain coordinate pair used for rectangle corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Xy<T> {
    pub x: T,
    pub y: T,
}

/// Closed axis-parallel rectangle together with the pair of points spanning it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect<T> {
    pub lo: Xy<T>,
    pub hi: Xy<T>,
    pub support: (usize, usize),
}

pub fn rect_of<T: Coord>(p: &Point<T>, q: &Point<T>) -> Result<Rect<T>, GeomError> {
    if p.id == q.id {
        return Err(GeomError::SameSupport(p.id));
    }
    Ok(Rect {
        lo: Xy { x: p.x.min(q.x), y: p.y.min(q.y) },
        hi: Xy { x: p.x.max(q.x), y: p.y.max(q.y) },
        support: (p.id, q.id),
    })
}

impl<T: Coord> Rect<T> {
    pub fn contains_point(&self, p: &Point<T>) -> bool {
        self.lo.x <= p.x && p.x <= self.hi.x && self.lo.y <= p.y && p.y <= self.hi.y
    }

    pub fn contains(&self, q: &QueryPoint<T>) -> bool {
        let two = |v: T| v + v;
        two(self.lo.x) <= q.x2 && q.x2 <= two(self.hi.x) && two(self.lo.y) <= q.y2 && q.y2 <= two(self.hi.y)
    }

    /// True iff the closed rectangles share at least one point.
    pub fn intersects(&self, o: &Rect<T>) -> bool {
        self.lo.x <= o.hi.x && o.lo.x <= self.hi.x && self.lo.y <= o.hi.y && o.lo.y <= self.hi.y
    }

    /// True iff the open interiors overlap.
    pub fn interiors_overlap(&self, o: &Rect<T>) -> bool {
        self.lo.x < o.hi.x && o.lo.x < self.hi.x && self.lo.y < o.hi.y && o.lo.y < self.hi.y
    }

    pub fn area(&self) -> i128 {
        (wide(self.hi.x) - wide(self.lo.x)) * (wide(self.hi.y) - wide(self.lo.y))
    }
}

/// Query location with coordinates `(x2 / 2, y2 / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QueryPoint<T> {
    pub x2: T,
    pub y2: T,
}

impl<T: Coord> QueryPoint<T> {
    pub fn at(x: T, y: T) -> Self {
        QueryPoint { x2: x + x, y2: y + y }
    }

    pub fn halves(x2: T, y2: T) -> Self {
        QueryPoint { x2, y2 }
    }

    pub fn of(p: &Point<T>) -> Self {
        Self::at(p.x, p.y)
    }

    /// Compare the query's x with an integer coordinate.
    pub fn cmp_x(&self, v: T) -> Ordering {
        self.x2.cmp(&(v + v))
    }

    pub fn cmp_y(&self, v: T) -> Ordering {
        self.y2.cmp(&(v + v))
    }

    pub fn as_f64(&self) -> (f64, f64) {
        (
            self.x2.to_f64().unwrap_or(f64::NAN) / 2.0,
            self.y2.to_f64().unwrap_or(f64::NAN) / 2.0,
        )
    }
}

impl<T: Coord> Display for QueryPoint<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let part = |v: T, f: &mut std::fmt::Formatter<'_>| {
            let two = T::one() + T::one();
            if v % two == T::zero() {
                write!(f, "{}", v / two)
            } else {
                let w = wide(v);
                let sign = if w < 0 { "-" } else { "" };
                write!(f, "{}{}.5", sign, w.abs() / 2)
            }
        };
        part(self.x2, f)?;
        write!(f, " ")?;
        part(self.y2, f)
    }
}

/// A validated point set in general position with both sort orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet<T> {
    pub points: Vec<Point<T>>,
    pub by_x: Vec<usize>,
    pub by_y: Vec<usize>,
    pub x_rank: Vec<usize>,
    pub y_rank: Vec<usize>,
}

pub fn validate<T: Coord>(raw: &[(T, T)]) -> Result<PointSet<T>, GeomError> {
    let points: Vec<Point<T>> = raw.iter().enumerate().map(|(i, &(x, y))| Point::new(x, y, i)).collect();
    let mut by_x: Vec<usize> = (0..points.len()).collect();
    by_x.sort_by_key(|&i| (points[i].x, i));
    let mut by_y: Vec<usize> = (0..points.len()).collect();
    by_y.sort_by_key(|&i| (points[i].y, i));
    for w in by_x.windows(2) {
        if points[w[0]].x == points[w[1]].x {
            return Err(GeomError::DuplicateX(w[0], w[1]));
        }
    }
    for w in by_y.windows(2) {
        if points[w[0]].y == points[w[1]].y {
            return Err(GeomError::DuplicateY(w[0], w[1]));
        }
    }
    let mut x_rank = vec![0; points.len()];
    let mut y_rank = vec![0; points.len()];
    for (r, &i) in by_x.iter().enumerate() {
        x_rank[i] = r;
    }
    for (r, &i) in by_y.iter().enumerate() {
        y_rank[i] = r;
    }
    Ok(PointSet { points, by_x, by_y, x_rank, y_rank })
}

impl<T: Coord> PointSet<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, id: usize) -> &Point<T> {
        &self.points[id]
    }

    pub fn coords(&self) -> Vec<(T, T)> {
        self.points.iter().map(|p| (p.x, p.y)).collect()
    }

    pub fn rect(&self, a: usize, b: usize) -> Rect<T> {
        rect_of(&self.points[a], &self.points[b]).expect("distinct supports")
    }

    /// Smallest rectangle holding every point.
    pub fn bbox(&self) -> Option<(Xy<T>, Xy<T>)> {
        let first = self.by_x.first()?;
        let last = self.by_x.last()?;
        let lo = Xy { x: self.points[*first].x, y: self.points[self.by_y[0]].y };
        let hi = Xy { x: self.points[*last].x, y: self.points[*self.by_y.last()?].y };
        Some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point<i64> {
        Point::new(x, y, 0)
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&p(2, 2), &p(1, 1)));
        assert!(!dominates(&p(2, 1), &p(1, 2)));
        assert!(!dominates(&p(1, 1), &p(1, 1)));
        assert!(anti_dominates(&p(1, 2), &p(2, 1)));
        assert!(!anti_dominates(&p(2, 1), &p(1, 2)));
        assert!(!anti_dominates(&p(1, 1), &p(2, 2)));
    }

    #[test]
    fn rect_corners() {
        let r = rect_of(&Point::new(1i64, 3, 0), &Point::new(4, 1, 1)).unwrap();
        assert_eq!((r.lo, r.hi), (Xy { x: 1, y: 1 }, Xy { x: 4, y: 3 }));
        let r = rect_of(&Point::new(0i64, 0, 0), &Point::new(2, 2, 1)).unwrap();
        assert_eq!((r.lo, r.hi), (Xy { x: 0, y: 0 }, Xy { x: 2, y: 2 }));
        let r = rect_of(&Point::new(5i64, 5, 0), &Point::new(5, 9, 1)).unwrap();
        assert_eq!(r.lo.x, r.hi.x);
        assert_eq!(rect_of(&p(1, 1), &p(2, 2)), Err(GeomError::SameSupport(0)));
    }

    #[test]
    fn validate_rejects_ties() {
        let ps = validate(&[(1i64, 1), (2, 2)]).unwrap();
        assert_eq!(ps.by_x, vec![0, 1]);
        assert_eq!(validate(&[(1i64, 1), (1, 2)]), Err(GeomError::DuplicateX(0, 1)));
        assert_eq!(validate(&[(1i64, 5), (2, 5)]), Err(GeomError::DuplicateY(0, 1)));
    }

    #[test]
    fn closed_containment_and_halves() {
        let r = rect_of(&Point::new(0i64, 0, 0), &Point::new(2, 2, 1)).unwrap();
        assert!(r.contains(&QueryPoint::at(2, 0)));
        assert!(r.contains(&QueryPoint::halves(3, 1)));
        assert!(!r.contains(&QueryPoint::halves(5, 1)));
        assert_eq!(QueryPoint::halves(-3i64, 4).to_string(), "-1.5 2");
    }
}
