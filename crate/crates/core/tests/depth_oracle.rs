mod common;

use common::grid_queries;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rectinf::cover::build_cover;
use rectinf::depth::{
    approx_max_depth, build_depth_index, cover_depth, level_schedule, log_approx_max_depth, query_depth, Params,
    StaircaseLevels,
};
use rectinf::geom::{validate, PointSet, QueryPoint};
use rectinf::lab::{gen_two_diagonals, gen_uniform};
use rectinf::oracle::{brute_depth, brute_max_depth, Oracle};

fn check_contract(ps: &PointSet<i64>, eps: f64, queries: usize, seed: u64) {
    let ix = build_depth_index(ps, eps).unwrap();
    let o = Oracle::new(ps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for q in grid_queries(ps, &mut rng, queries) {
        let d = o.depth(&q);
        let a = query_depth(&ix, &q);
        assert!(a <= d && a as f64 >= (1.0 - eps) * d as f64, "eps={eps} at {q}: got {a}, true {d}");
    }
}

#[test]
fn two_diagonals_small() {
    let ps = gen_two_diagonals(2).points;
    let q = QueryPoint::halves(5, 1);
    assert_eq!(brute_depth(&ps, &q), 4);
    for eps in [0.5, 0.25, 0.1] {
        let ix = build_depth_index(&ps, eps).unwrap();
        let a = query_depth(&ix, &q);
        assert!(a <= 4 && a as f64 >= ((1.0 - eps) * 4.0).ceil());
        assert_eq!(query_depth(&ix, &q), a);
        assert_eq!(query_depth(&ix, &QueryPoint::at(100, 100)), 0);
    }
    // Closed rectangles: the lower edge touches all four cross rectangles at (2, -1).
    assert_eq!(brute_max_depth(&ps).1, 5);
    assert_eq!(brute_depth(&ps, &QueryPoint::at(2, -1)), 5);
}

#[test]
fn two_diagonals_four() {
    let ps = gen_two_diagonals(4).points;
    assert_eq!(brute_max_depth(&ps).1, 16);
    check_contract(&ps, 0.5, 1000, 1);
    let (q, v) = approx_max_depth(&ps, 0.5).unwrap();
    assert!(v <= 16 && v as f64 >= 8.0);
    assert!(brute_depth(&ps, &q) >= v);
    let (q, v) = log_approx_max_depth(&ps).unwrap();
    assert_eq!(v, brute_depth(&ps, &q));
    assert!(v >= 2);
}

#[test]
fn random_contract() {
    for (n, seed) in [(30usize, 1u64), (120, 2), (300, 3)] {
        let ps = gen_uniform(n, seed).points;
        for eps in [0.5, 0.25, 0.1] {
            check_contract(&ps, eps, 600, seed);
        }
    }
}

#[test]
fn max_depth_contract() {
    for seed in 0..6 {
        let ps = gen_uniform(200, seed).points;
        let (_, dmax) = brute_max_depth(&ps);
        for eps in [0.5, 0.25] {
            let (q, v) = approx_max_depth(&ps, eps).unwrap();
            assert!(v <= dmax && v as f64 >= (1.0 - eps) * dmax as f64, "seed {seed}: {v} vs {dmax}");
            assert!(brute_depth(&ps, &q) >= v);
        }
    }
}

#[test]
fn log_approx_is_exact_at_witness() {
    let ps = gen_uniform(400, 2).points;
    let (_, dmax) = brute_max_depth(&ps);
    let (q, v) = log_approx_max_depth(&ps).unwrap();
    assert_eq!(v, brute_depth(&ps, &q));
    assert!(v as f64 >= dmax as f64 / (4.0 * 400f64.log2()), "{v} vs {dmax}");
    let two = validate(&[(0i64, 0), (4, 4)]).unwrap();
    assert_eq!(log_approx_max_depth(&two).unwrap().1, 1);
}

#[test]
fn cover_depth_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in 0..5 {
        let ps = gen_uniform(60, seed).points;
        let c = build_cover(&ps);
        let o = Oracle::new(&ps);
        for q in grid_queries(&ps, &mut rng, 300) {
            assert_eq!(cover_depth(&ps, &c, &q), o.depth(&q));
        }
    }
}

/// An anti-chain in slot coordinates with random gaps.
fn staircase(t: usize, rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
    use rand::Rng;
    let (mut x, mut y) = (0i64, 4 * t as i64 * 3);
    (0..t)
        .map(|_| {
            x += 2 * rng.gen_range(1..3);
            y -= 2 * rng.gen_range(1..3);
            (x, y)
        })
        .collect()
}

#[test]
fn staircase_levels_sandwich_and_complexity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for eps in [0.5, 0.25, 0.1] {
        let p = Params::new(eps).unwrap();
        for t in [1usize, 7, 60, 400] {
            let pts = staircase(t, &mut rng);
            let lv = StaircaseLevels::build(pts.clone(), &p);
            assert_eq!(lv.bands, level_schedule(t, &p));
            let (x1, y1) = (pts[t - 1].0 + 1, pts[0].1 + 1);
            for (band, curve) in lv.bands.iter().zip(&lv.curves) {
                let gap = band.beta - band.alpha + 1;
                assert!(curve.len() <= t / gap + 1, "eps={eps} t={t} {band:?}: {} corners", curve.len());
                for &c in curve {
                    let k = lv.count(c);
                    assert!(k >= band.alpha && k <= band.beta, "corner {c:?} dominates {k}, band {band:?}");
                }
            }
            for x in -1..=x1 {
                for y in (-1..=y1).step_by(3) {
                    let k = lv.count((x, y));
                    let v = lv.value((x, y));
                    assert!(v <= k && v as f64 >= (1.0 - p.delta) * k as f64, "t={t} ({x},{y}): {v} vs {k}");
                    if k <= p.exact {
                        assert_eq!(v, k);
                    }
                }
            }
        }
    }
}

#[test]
fn cells_are_disjoint_per_biclique() {
    let ps = gen_uniform(150, 4).points;
    let ix = build_depth_index(&ps, 0.25).unwrap();
    let mut by: Vec<Vec<_>> = vec![Vec::new(); ix.cover.bicliques.len()];
    for (c, b) in &ix.cells {
        by[*b].push(*c);
    }
    for cells in by {
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                let overlap = a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
                assert!(!overlap, "{a:?} {b:?}");
            }
        }
    }
}

fn assert_independent(ps: &PointSet<i64>, rects: &[rectinf::geom::Rect<i64>]) {
    let rig = rectinf::oracle::brute_rig(ps);
    for (i, a) in rects.iter().enumerate() {
        assert!(rig.contains(a.support.0, a.support.1), "{a:?} is not empty");
        for b in &rects[i + 1..] {
            assert!(!a.intersects(b), "{a:?} meets {b:?}");
        }
    }
}

#[test]
fn mis_against_brute_force() {
    use rectinf::depth::approx_mis;
    use rectinf::oracle::brute_mis;
    for seed in 0..20 {
        let n = 2 + seed as usize % 11;
        let ps = gen_uniform(n, seed).points;
        let got = approx_mis(&ps).unwrap();
        assert_independent(&ps, &got);
        let opt = brute_mis(&ps).unwrap().len();
        assert!(got.len() as f64 >= opt as f64 / (4.0 * (n as f64).log2()), "seed {seed}: {} vs {opt}", got.len());
    }
    let ps = gen_uniform(12, 4).points;
    assert!(!approx_mis(&ps).unwrap().is_empty());
    let chain = validate(&(0..8).map(|i| (i, i)).collect::<Vec<(i64, i64)>>()).unwrap();
    assert_independent(&chain, &approx_mis(&chain).unwrap());
    for seed in 0..5 {
        let ps = gen_uniform(300, seed).points;
        assert_independent(&ps, &approx_mis(&ps).unwrap());
    }
}
