use proptest::prelude::*;
use rectinf::chains::{maxima, ChainKind, NodeArena};
use rectinf::cover::{build_cover, build_cover_basic};
use rectinf::geom::{anti_dominates, dominates, rect_of, validate, Point, PointSet};
use rectinf::lab::{center_point, gen_lower_bound, gen_uniform};
use rectinf::oracle::brute_rig;
use rectinf::rangestack::RangeStack;

/// Point sets in general position: two independent permutations, scaled.
fn point_set(max_n: usize) -> impl Strategy<Value = PointSet<i64>> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let perm = || Just((0..n as i64).collect::<Vec<_>>()).prop_shuffle();
            (perm(), perm(), 1i64..5, -50i64..50)
        })
        .prop_map(|(xs, ys, scale, shift)| {
            let raw: Vec<(i64, i64)> = xs.into_iter().zip(ys).map(|(x, y)| (x * scale + shift, y * 3 - shift)).collect();
            validate(&raw).unwrap()
        })
}

fn slow_rig(ps: &PointSet<i64>) -> Vec<(usize, usize)> {
    let n = ps.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let r = ps.rect(a, b);
            if (0..n).all(|c| c == a || c == b || !r.contains_point(ps.point(c))) {
                out.push((a, b));
            }
        }
    }
    out
}

fn slow_maxima(ps: &PointSet<i64>, kind: ChainKind) -> Vec<usize> {
    let beats = |q: &Point<i64>, p: &Point<i64>| match kind {
        ChainKind::MaxDominance => dominates(q, p),
        ChainKind::MinDominance => dominates(p, q),
        ChainKind::MaxAnti => anti_dominates(q, p),
        ChainKind::MinAnti => anti_dominates(p, q),
    };
    ps.by_x.iter().copied().filter(|&i| !ps.points.iter().any(|q| beats(q, ps.point(i)))).collect()
}

#[derive(Debug, Clone)]
enum Op {
    Push(u64),
    Pop(usize),
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exactly_one_relation_holds(ps in point_set(12)) {
        for p in &ps.points {
            for q in &ps.points {
                if p.id == q.id {
                    continue;
                }
                let held = [dominates(p, q), dominates(q, p), anti_dominates(p, q), anti_dominates(q, p)];
                prop_assert_eq!(held.iter().filter(|&&h| h).count(), 1);
                let (a, b) = (rect_of(p, q).unwrap(), rect_of(q, p).unwrap());
                prop_assert_eq!((a.lo, a.hi), (b.lo, b.hi));
                prop_assert!(a.contains_point(p) && a.contains_point(q));
            }
        }
    }

    #[test]
    fn maxima_match_pairwise_filter(ps in point_set(40)) {
        for kind in [ChainKind::MaxDominance, ChainKind::MinDominance, ChainKind::MaxAnti, ChainKind::MinAnti] {
            prop_assert_eq!(maxima(&ps, kind).ids, slow_maxima(&ps, kind));
        }
    }

    #[test]
    fn rig_matches_triple_loop(ps in point_set(40)) {
        let want = slow_rig(&ps);
        let brute = brute_rig(&ps);
        prop_assert_eq!(brute.len(), want.len());
        prop_assert!(want.iter().all(|&(a, b)| brute.contains(a, b)));
        for cover in [build_cover_basic(&ps), build_cover(&ps)] {
            let mut got: Vec<(usize, usize)> = cover.expand().into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
            got.sort_unstable();
            prop_assert_eq!(&got, &want);
        }
    }

    #[test]
    fn stack_versions_replay(
        ops in prop::collection::vec(prop_oneof![3 => (1u64..5).prop_map(Op::Push), 1 => (1usize..6).prop_map(Op::Pop)], 0..300),
        buffered in any::<bool>(),
    ) {
        let mut st: RangeStack<u64> = if buffered { RangeStack::buffered(300) } else { RangeStack::new() };
        let mut shadow = vec![Vec::new()];
        let mut cur: Vec<u64> = Vec::new();
        let mut key = 0;
        for op in ops {
            match op {
                Op::Push(d) => {
                    key += d;
                    st.push(key).unwrap();
                    cur.push(key);
                }
                Op::Pop(k) => {
                    if st.pop(k).is_err() {
                        prop_assert!(k > cur.len());
                        continue;
                    }
                    cur.truncate(cur.len() - k);
                }
            }
            shadow.push(cur.clone());
        }
        prop_assert_eq!(st.version() as usize, shadow.len() - 1);
        for (v, want) in shadow.iter().enumerate() {
            prop_assert_eq!(&st.content_at(v as u32).unwrap(), want);
            let (lo, hi) = (key / 3, 2 * key / 3 + 1);
            let got = st.expand(&st.report_at(v as u32, lo, hi).unwrap());
            let filtered: Vec<u64> = want.iter().copied().filter(|&k| lo <= k && k <= hi).collect();
            prop_assert_eq!(got, filtered);
        }
    }

    #[test]
    fn stitch_of_separated_sets(upper in point_set(30), lower in point_set(30), gap in 0i64..200) {
        // Upper set shifted above the lower one; x ranges interleave freely.
        let mut raw: Vec<(i64, i64)> = lower.coords().iter().map(|&(x, y)| (2 * x, y)).collect();
        let top = raw.iter().map(|p| p.1).max().unwrap();
        let bottom = upper.coords().iter().map(|p| p.1).min().unwrap();
        raw.extend(upper.coords().iter().map(|&(x, y)| (2 * x + 1 + 2 * gap, y - bottom + top + 1)));
        let all = validate(&raw).unwrap();
        let split = lower.len();
        let chain_of = |ids: Vec<usize>| -> Vec<Point<i64>> { ids.into_iter().map(|i| *all.point(i)).collect() };
        let mut arena = NodeArena::new();
        let up_ps = validate(&raw[split..]).unwrap();
        let lo_ps = validate(&raw[..split]).unwrap();
        let up: Vec<Point<i64>> = maxima(&up_ps, ChainKind::MaxDominance).ids.iter().map(|&i| *up_ps.point(i)).collect();
        let lo: Vec<Point<i64>> = maxima(&lo_ps, ChainKind::MaxDominance).ids.iter().map(|&i| *lo_ps.point(i)).collect();
        let ru = arena.build_balanced(&up).unwrap();
        let rl = arena.build_balanced(&lo).unwrap();
        let left = arena.interval_nodes(ru, i64::MIN, i64::MAX);
        let right = arena.interval_nodes(rl, i64::MIN, i64::MAX);
        let stitched = arena.stitch(&left, &right);
        let got: Vec<(i64, i64)> = arena.expand(&stitched.rep).iter().map(|p| (p.x, p.y)).collect();
        let want: Vec<(i64, i64)> = chain_of(maxima(&all, ChainKind::MaxDominance).ids).iter().map(|p| (p.x, p.y)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn lower_bound_cross_edges(n in 1usize..40) {
        let ps = gen_lower_bound(n).points;
        let rig = brute_rig(&ps);
        for l in 0..n {
            for r in l..n {
                prop_assert!(rig.contains(l, n + r), "l{} r{}", l + 1, r + 1);
            }
        }
    }
}

#[test]
fn lower_bound_two_is_complete() {
    assert_eq!(brute_rig(&gen_lower_bound(2).points).len(), 6);
}

#[test]
fn maxima_length_mean() {
    let n = 10_000;
    let total: usize = (0..100).map(|s| maxima(&gen_uniform(n, s).points, ChainKind::MaxDominance).ids.len()).sum();
    let mean = total as f64 / 100.0;
    let ln = (n as f64).ln();
    assert!(mean >= ln - 2.0 && mean <= ln + 3.0, "mean {mean}");
}

#[test]
fn center_point_pairs() {
    for seed in 0..20 {
        let ps = gen_uniform(100, seed).points;
        let c = center_point(&ps);
        let mut used = vec![false; ps.len()];
        for &(a, b) in &c.pairs {
            assert!(!used[a] && !used[b]);
            used[a] = true;
            used[b] = true;
            assert!(ps.rect(a, b).contains(&c.center));
        }
        assert!(c.pairs.len() >= ps.len() / 4, "{} pairs", c.pairs.len());
    }
}
