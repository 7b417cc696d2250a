//! Instance generators, scaling experiments and structural fuzzing.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chains::{maxima, ChainKind};
use crate::cover::build_cover;
use crate::geom::{validate, Coord, PointSet, QueryPoint};
use crate::oracle::brute_rig;

/// Side length of the integer grid used by [`gen_uniform`].
pub const GRID: i64 = 1 << 40;
/// Largest instance accepted by [`structural_fuzz`].
pub const FUZZ_CAP: usize = 60;
/// Horizontal spreading factor of [`gen_lower_bound`].
pub const SPREAD: i64 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("no sizes given")]
    NoSizes,
    #[error("no seeds given")]
    NoSeeds,
    #[error("size {n} exceeds the cap {cap}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub parameters: Vec<(String, u64)>,
    pub seed: Option<u64>,
    pub points: PointSet<i64>,
}

fn instance(name: &str, parameters: Vec<(&str, u64)>, seed: Option<u64>, raw: &[(i64, i64)]) -> Instance {
    Instance {
        name: name.to_string(),
        parameters: parameters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        seed,
        points: validate(raw).expect("generator output is in general position"),
    }
}

/// Lower anti-chain `(i, -i)` and upper anti-chain `(m + j, m + 1 - j)`.
pub fn gen_two_diagonals(m: usize) -> Instance {
    let m = m as i64;
    let mut raw: Vec<(i64, i64)> = (1..=m).map(|i| (i, -i)).collect();
    raw.extend((1..=m).map(|j| (m + j, m + 1 - j)));
    instance("two-diagonals", vec![("m", m as u64)], None, &raw)
}

/// Left chain `(-i, 2i)` and right chain `(2nK - i, 2i + 1)` for `i = 1..n`.
pub fn gen_lower_bound(n: usize) -> Instance {
    let m = n as i64;
    let mut raw: Vec<(i64, i64)> = (1..=m).map(|i| (-i, 2 * i)).collect();
    raw.extend((1..=m).map(|i| (2 * m * SPREAD - i, 2 * i + 1)));
    instance("lower-bound", vec![("n", n as u64)], None, &raw)
}

/// `n` points with distinct coordinates drawn uniformly from the grid.
pub fn gen_uniform(n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let mut seen = HashSet::with_capacity(n);
        (0..n)
            .map(|_| loop {
                let v = rng.gen_range(0..GRID);
                if seen.insert(v) {
                    break v;
                }
            })
            .collect::<Vec<i64>>()
    };
    let xs = draw(&mut rng);
    let ys = draw(&mut rng);
    let raw: Vec<(i64, i64)> = xs.into_iter().zip(ys).collect();
    instance("uniform", vec![("n", n as u64)], Some(seed), &raw)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub edges: usize,
    pub cover_weight: usize,
    pub biclique_count: usize,
    pub maxima_len: usize,
    /// `edges / (n ln n)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub sanity: ExperimentRow,
    pub band: (f64, f64),
    pub spread: f64,
    pub pass: bool,
}

fn measure(family: &str, seed: u64, ps: &PointSet<i64>) -> ExperimentRow {
    let c = build_cover(ps);
    let n = ps.len();
    ExperimentRow {
        family: family.to_string(),
        n,
        seed,
        edges: c.stats.edges,
        cover_weight: c.stats.weight,
        biclique_count: c.stats.count,
        maxima_len: maxima(ps, ChainKind::MaxDominance).ids.len(),
        ratio: c.stats.edges as f64 / (n as f64 * (n as f64).ln()),
    }
}

/// Edge counts of uniform instances through cover expansion.
pub fn edge_count_experiment(ns: &[usize], seeds: &[u64]) -> Result<ExperimentReport, LabError> {
    if ns.is_empty() {
        return Err(LabError::NoSizes);
    }
    if seeds.is_empty() {
        return Err(LabError::NoSeeds);
    }
    let mut rows = Vec::new();
    for &n in ns {
        for &seed in seeds {
            rows.push(measure("uniform", seed, &gen_uniform(n, seed).points));
        }
    }
    let sanity = measure("two-diagonals", 0, &gen_two_diagonals(2).points);
    let lo = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let spread = hi / lo;
    Ok(ExperimentReport { pass: spread <= 4.0 && sanity.edges == 6, rows, sanity, band: (lo, hi), spread })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundRow {
    pub n: usize,
    pub cover_weight: usize,
    /// `cover_weight / (n log2 n)`.
    pub c: f64,
}

/// Cover weight on [`gen_lower_bound`] for each size.
pub fn lower_bound_experiment(ns: &[usize]) -> Vec<LowerBoundRow> {
    ns.iter()
        .map(|&n| {
            let w = build_cover(&gen_lower_bound(n).points).stats.weight;
            LowerBoundRow { n, cover_weight: w, c: w as f64 / (n as f64 * (n as f64).log2()) }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzRow {
    pub n: usize,
    pub seed: u64,
    pub edges: usize,
    pub clique_number: usize,
    /// Vertex sets of complete tripartite subgraphs with all sides of size two.
    pub tricliques: Vec<[usize; 6]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub rows: Vec<FuzzRow>,
    pub k5_found: usize,
    pub tricliques_found: usize,
}

pub fn structural_fuzz(ns: &[usize], seeds: &[u64]) -> Result<FuzzReport, LabError> {
    if ns.is_empty() {
        return Err(LabError::NoSizes);
    }
    if seeds.is_empty() {
        return Err(LabError::NoSeeds);
    }
    if let Some(&n) = ns.iter().find(|&&n| n > FUZZ_CAP) {
        return Err(LabError::TooLarge { n, cap: FUZZ_CAP });
    }
    let mut rows = Vec::new();
    for &n in ns {
        for &seed in seeds {
            let ps = gen_uniform(n, seed).points;
            let adj = adjacency_masks(&ps);
            rows.push(FuzzRow {
                n,
                seed,
                edges: adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2,
                clique_number: clique_number(&adj),
                tricliques: tricliques(&adj),
            });
        }
    }
    Ok(FuzzReport {
        k5_found: rows.iter().filter(|r| r.clique_number >= 5).count(),
        tricliques_found: rows.iter().map(|r| r.tricliques.len()).sum(),
        rows,
    })
}

/// Neighbourhoods as bit masks (at most 64 points).
pub fn adjacency_masks<T: Coord>(ps: &PointSet<T>) -> Vec<u64> {
    assert!(ps.len() <= 64);
    let mut adj = vec![0u64; ps.len()];
    for (a, b) in brute_rig(ps).iter() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    adj
}

/// Size of a maximum clique, by Bron-Kerbosch with pivoting.
pub fn clique_number(adj: &[u64]) -> usize {
    fn bk(adj: &[u64], r: usize, mut p: u64, mut x: u64, best: &mut usize) {
        if p == 0 {
            if x == 0 {
                *best = (*best).max(r);
            }
            return;
        }
        if r + p.count_ones() as usize <= *best {
            return;
        }
        let u = (p | x).trailing_zeros() as usize;
        let mut cand = p & !adj[u];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            bk(adj, r + 1, p & adj[v], x & adj[v], best);
            p &= !(1 << v);
            x |= 1 << v;
            cand &= !(1 << v);
        }
    }
    let all = if adj.len() == 64 { u64::MAX } else { (1u64 << adj.len()) - 1 };
    let mut best = 0;
    bk(adj, 0, all, 0, &mut best);
    best
}

/// Complete tripartite subgraphs `K(2,2,2)`, one witness per first side.
pub fn tricliques(adj: &[u64]) -> Vec<[usize; 6]> {
    let n = adj.len();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let common = adj[u] & adj[v];
            let mut rest = common;
            'search: while rest != 0 {
                let g1 = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let mut others = rest;
                while others != 0 {
                    let g2 = others.trailing_zeros() as usize;
                    others &= others - 1;
                    let bs = adj[g1] & adj[g2] & common & !(1 << g1 | 1 << g2);
                    if bs.count_ones() >= 2 {
                        let b1 = bs.trailing_zeros() as usize;
                        let b2 = (bs & (bs - 1)).trailing_zeros() as usize;
                        out.push([u, v, g1, g2, b1, b2]);
                        break 'search;
                    }
                }
            }
        }
    }
    out
}

/// A point contained in rectangles of pairwise disjoint support pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterPoint<T> {
    pub center: QueryPoint<T>,
    pub pairs: Vec<(usize, usize)>,
}

/// Intersection of the x-median line with the y-median of the two halves,
/// with opposite quadrants matched point by point.
pub fn center_point<T: Coord>(ps: &PointSet<T>) -> CenterPoint<T> {
    let n = ps.len();
    assert!(n >= 2, "center point needs two points");
    let m = n / 2;
    let left = &ps.by_x[..m];
    let right = &ps.by_x[n - m..];
    let x = |i: usize| ps.points[i].x;
    let y = |i: usize| ps.points[i].y;
    let x2 = if n.is_multiple_of(2) { x(left[m - 1]) + x(right[0]) } else { x(ps.by_x[m]) + x(ps.by_x[m]) };
    let mut ys: Vec<T> = left.iter().chain(right).map(|&i| y(i)).collect();
    ys.sort_unstable();
    let y2 = ys[m - 1] + ys[m];
    let below = |i: &&usize| y(**i) + y(**i) < y2;
    let (ll, ul): (Vec<&usize>, Vec<&usize>) = left.iter().partition(below);
    let (lr, ur): (Vec<&usize>, Vec<&usize>) = right.iter().partition(below);
    debug_assert_eq!(ll.len(), ur.len());
    let pairs = ur.iter().zip(&ll).chain(ul.iter().zip(&lr)).map(|(a, b)| (**a, **b)).collect();
    CenterPoint { center: QueryPoint::halves(x2, y2), pairs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_diagonal_counts() {
        assert_eq!(brute_rig(&gen_two_diagonals(2).points).len(), 6);
        assert_eq!(brute_rig(&gen_two_diagonals(1).points).len(), 1);
        assert_eq!(brute_rig(&gen_two_diagonals(16).points).len(), 286);
    }

    #[test]
    fn uniform_is_deterministic() {
        assert_eq!(gen_uniform(100, 7), gen_uniform(100, 7));
        assert_ne!(gen_uniform(100, 7).points, gen_uniform(100, 8).points);
        assert_eq!(gen_uniform(1000, 3).points.len(), 1000);
    }

    #[test]
    fn experiment_rejects_empty_inputs() {
        assert_eq!(edge_count_experiment(&[64], &[]), Err(LabError::NoSeeds));
        assert_eq!(edge_count_experiment(&[], &[1]), Err(LabError::NoSizes));
        assert!(matches!(structural_fuzz(&[61], &[1]), Err(LabError::TooLarge { .. })));
    }

    #[test]
    fn chain_of_five_has_clique_number_two() {
        let ps = validate(&(0..5).map(|i| (i, i)).collect::<Vec<(i64, i64)>>()).unwrap();
        assert_eq!(clique_number(&adjacency_masks(&ps)), 2);
        assert!(clique_number(&adjacency_masks(&gen_two_diagonals(3).points)) <= 4);
    }

    #[test]
    fn center_of_convex_quadruple() {
        let ps = validate(&[(0i64, 2), (2, 0), (4, 3), (1, 5)]).unwrap();
        let c = center_point(&ps);
        assert_eq!(c.center, QueryPoint::halves(3, 5));
        assert_eq!(c.pairs.len(), 2);
        let two = validate(&[(0i64, 0), (3, 3)]).unwrap();
        let c = center_point(&two);
        assert_eq!(c.center, QueryPoint::halves(3, 3));
        assert_eq!(c.pairs, vec![(1, 0)]);
    }
}
