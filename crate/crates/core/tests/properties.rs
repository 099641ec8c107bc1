mod common;

use active_medoids::active::{active_kmedoids, estimate_cross_group};
use active_medoids::baseline::{floyd_warshall, random_rival, Budget};
use active_medoids::kmedoids::{assign, kmedoids, objective, KmedoidsParams};
use active_medoids::{
    nmi, nmi_with, upper_bound_valid_within, ActiveParams, DistanceBook, DistanceOracle,
    Dissimilarity, NmiVariant, Objective, Status,
};
use common::{dijkstra, euclid, label_pair, points, truth};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Op {
    Ask(usize, usize),
    Chain(usize, usize, usize, usize),
}

fn ops(n: usize) -> impl Strategy<Value = Vec<Op>> {
    let ask = (0..n, 0..n).prop_map(|(i, j)| Op::Ask(i, j));
    let chain = (0..n, 0..n, 0..n, 0..n).prop_map(|(a, x, y, b)| Op::Chain(a, x, y, b));
    prop::collection::vec(prop_oneof![ask, chain], 0..200)
}

/// Exact edges along a spanning path plus the pairs selected by `keep`, and
/// the book after Floyd-Warshall.
fn sparse_fw(d: &active_medoids::Dataset, keep: &[bool]) -> (DistanceBook, DistanceBook) {
    let n = d.len();
    let mut book = DistanceBook::new(n);
    let mut slot = 0;
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || keep[slot % keep.len()] {
                book.set_exact(i, j, euclid(d.point(i), d.point(j))).unwrap();
            }
            slot += 1;
        }
    }
    let edges = book.clone();
    floyd_warshall(&mut book).unwrap();
    (book, edges)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn book_stays_sound_and_monotone(d in points(20..=20, 2..=4), script in ops(20)) {
        let t = truth(&d);
        let mut book = DistanceBook::new(20);
        for op in script {
            let before: Vec<_> = book.pairs().collect();
            match op {
                Op::Ask(i, j) if i != j => book.set_exact(i, j, t.dist(i, j)).unwrap(),
                Op::Chain(a, x, y, b) if a != b => {
                    let leg = |p: usize, q: usize| if p == q { 0.0 } else { book.value(p, q) };
                    let c = leg(a, x) + leg(x, y) + leg(y, b);
                    book.relax_upper(a, b, c).unwrap();
                }
                _ => continue,
            }
            for ((i, j, old), (_, _, new)) in before.iter().zip(book.pairs()) {
                prop_assert!(new.value <= old.value);
                if old.status == Status::Exact {
                    prop_assert_eq!(new, *old);
                }
                prop_assert!(t.dist(*i, *j) <= new.value + 1e-9);
            }
        }
        prop_assert!(upper_bound_valid_within(&book, &t, 1e-9).unwrap());
    }

    #[test]
    fn floyd_warshall_matches_dijkstra_exactly_on_integer_weights(
        xs in prop::collection::vec(-1000i32..1000, 3..=20),
        keep in prop::collection::vec(any::<bool>(), 190),
    ) {
        // collinear integer points: every distance and every path sum is exact
        let d = active_medoids::Dataset::new("line", 1, xs.iter().map(|&x| f64::from(x)).collect(), None, vec![]).unwrap();
        let (book, edges) = sparse_fw(&d, &keep);
        for s in 0..d.len() {
            let sp = dijkstra(&edges, s);
            for v in (0..d.len()).filter(|&v| v != s) {
                prop_assert_eq!(book.value(s, v), sp[v], "{}->{}", s, v);
            }
        }
    }

    #[test]
    fn floyd_warshall_matches_dijkstra_on_real_weights(
        d in points(3..=20, 2..=3),
        keep in prop::collection::vec(any::<bool>(), 190),
    ) {
        // different summation orders may differ in the last bits
        let (book, edges) = sparse_fw(&d, &keep);
        for s in 0..d.len() {
            let sp = dijkstra(&edges, s);
            for v in (0..d.len()).filter(|&v| v != s) {
                let got = book.value(s, v);
                prop_assert!((got - sp[v]).abs() <= 4.0 * f64::EPSILON * sp[v], "{}->{}: {} vs {}", s, v, got, sp[v]);
            }
        }
    }

    #[test]
    fn floyd_warshall_output_is_metric(d in points(3..=16, 2..=3), seed in any::<u64>(), share in 0.1f64..1.0) {
        let mut o = DistanceOracle::euclidean(&d);
        let n = d.len();
        let out = random_rival(&mut o, 1, Budget::from_ratio(n, share).unwrap(), 10, seed).unwrap();
        let b = &out.book;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i != j && j != k && i != k {
                        let (ij, jk, ik) = (b.value(i, j), b.value(j, k), b.value(i, k));
                        if ij.is_finite() && jk.is_finite() {
                            prop_assert!(ik <= (ij + jk) * (1.0 + 1e-12));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn random_rival_tightens_with_nested_budgets(d in points(10..=40, 2..=4), seed in any::<u64>(), lo in 0.0f64..1.0, hi in 0.0f64..1.0) {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let n = d.len();
        let t = truth(&d);
        let mut small = DistanceOracle::euclidean(&d);
        let mut large = DistanceOracle::euclidean(&d);
        let a = random_rival(&mut small, 2, Budget::from_ratio(n, lo).unwrap(), 20, seed).unwrap();
        let b = random_rival(&mut large, 2, Budget::from_ratio(n, hi).unwrap(), 20, seed).unwrap();
        for ((_, _, x), (_, _, y)) in a.book.pairs().zip(b.book.pairs()) {
            prop_assert!(y.value <= x.value);
        }
        prop_assert!(a.ledger.pairs().all(|(i, j)| b.ledger.contains(i, j)));
        prop_assert!(upper_bound_valid_within(&b.book, &t, 1e-9).unwrap());
    }

    #[test]
    fn active_books_are_sound_and_complete(
        d in points(2..=200, 1..=6),
        k in 1usize..5,
        s in 0usize..3,
        b in 2usize..5,
        seed in any::<u64>(),
    ) {
        let k = k.min(d.len());
        let params = ActiveParams::new(k, seed).with_picks(s).with_branching(b);
        let mut o = DistanceOracle::euclidean(&d);
        let out = active_kmedoids(&mut o, &params).unwrap();
        let t = truth(&d);
        prop_assert!(upper_bound_valid_within(&out.book, &t, 1e-9).unwrap());
        prop_assert_eq!(out.book.count(Status::Unknown), 0);
        prop_assert_eq!(out.book.count(Status::Exact), out.ledger.asked());
        let r = out.ledger.ratio().unwrap();
        prop_assert!((0.0..=1.0).contains(&r));
        prop_assert!(out.book.pairs().all(|(i, j, e)| (e.status == Status::Exact) == out.ledger.contains(i, j)));
    }

    #[test]
    fn kmedoids_invariants(d in points(2..=60, 1..=4), k in 1usize..6, seed in any::<u64>(), squared in any::<bool>()) {
        let k = k.min(d.len());
        let t = truth(&d);
        let kind = if squared { Objective::Squared } else { Objective::Plain };
        let p = KmedoidsParams::new(k, seed).with_objective(kind);
        let r = kmedoids(&t, &p).unwrap();
        prop_assert_eq!(&r, &kmedoids(&t, &p).unwrap());
        prop_assert_eq!(r.medoids.len(), k);
        prop_assert!(r.medoids.windows(2).all(|w| w[0] < w[1]));
        for (c, &m) in r.medoids.iter().enumerate() {
            prop_assert_eq!(r.assignment[m], c);
        }
        prop_assert_eq!(&r.assignment, &assign(&t, &r.medoids));
        for i in 0..d.len() {
            let mine = t.dist(i, r.medoids[r.assignment[i]]);
            prop_assert!(r.medoids.iter().all(|&m| t.dist(i, m) >= mine));
        }
        prop_assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(r.iterations_run <= p.max_iter);
        prop_assert_eq!(r.objective, objective(&t, &r.assignment, &r.medoids, kind).unwrap());
        let recount: f64 = (0..d.len()).map(|i| {
            let v = t.dist(i, r.medoids[r.assignment[i]]);
            if squared { v * v } else { v }
        }).sum();
        prop_assert!((recount - r.objective).abs() <= 1e-9 * recount.max(1.0));
    }

    #[test]
    fn nmi_is_symmetric_and_bounded((a, b) in label_pair(1..80, 5)) {
        for v in [NmiVariant::Geometric, NmiVariant::Arithmetic, NmiVariant::Max] {
            let ab = nmi_with(&a, &b, v).unwrap();
            prop_assert_eq!(ab, nmi_with(&b, &a, v).unwrap());
            prop_assert!((0.0..=1.0).contains(&ab));
        }
        prop_assert_eq!(nmi(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn nmi_ignores_relabeling((a, b) in label_pair(1..80, 5), perm in Just([0usize, 1, 2, 3, 4]).prop_shuffle()) {
        let relabeled: Vec<usize> = a.iter().map(|&l| perm[l]).collect();
        let words: Vec<String> = b.iter().map(|l| format!("class-{l}")).collect();
        prop_assert_eq!(nmi(&a, &b).unwrap(), nmi(&relabeled, &b).unwrap());
        prop_assert_eq!(nmi(&a, &b).unwrap(), nmi(&a, &words).unwrap());
    }

    #[test]
    fn nmi_matches_direct_formula((a, b) in label_pair(2..80, 4)) {
        let n = a.len() as f64;
        let mut joint = [[0.0f64; 4]; 4];
        for (&x, &y) in a.iter().zip(&b) {
            joint[x][y] += 1.0;
        }
        let pa: Vec<f64> = (0..4).map(|x| joint[x].iter().sum::<f64>() / n).collect();
        let pb: Vec<f64> = (0..4).map(|y| (0..4).map(|x| joint[x][y]).sum::<f64>() / n).collect();
        let h = |p: &[f64]| -p.iter().filter(|&&q| q > 0.0).map(|q| q * q.ln()).sum::<f64>();
        let mut mi = 0.0;
        for x in 0..4 {
            for y in 0..4 {
                let pxy = joint[x][y] / n;
                if pxy > 0.0 {
                    mi += pxy * (pxy / (pa[x] * pb[y])).ln();
                }
            }
        }
        let (ha, hb) = (h(&pa), h(&pb));
        let expected = match (ha > 1e-15, hb > 1e-15) {
            (false, false) => 1.0,
            (true, true) => mi / (ha * hb).sqrt(),
            _ => 0.0,
        };
        prop_assert!((nmi(&a, &b).unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn cross_group_estimates_dominate_truth_and_shortest_paths() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(60);
    for round in 0..20 {
        let xs: Vec<f64> = (0..120).map(|_| rng.random_range(-10.0..10.0)).collect();
        let d = active_medoids::Dataset::new("r", 2, xs, None, vec![]).unwrap();
        let t = truth(&d);
        let groups = [(0..30).collect::<Vec<_>>(), (30..60).collect::<Vec<_>>()];
        let mut book = DistanceBook::new(60);
        for g in &groups {
            for (a, &i) in g.iter().enumerate() {
                for &j in &g[a + 1..] {
                    book.set_exact(i, j, t.dist(i, j)).unwrap();
                }
            }
        }
        let chosen = [vec![0, 7, 14, 21], vec![30, 38, 46, 59]];
        for &x in &chosen[0] {
            for &y in &chosen[1] {
                book.set_exact(x, y, t.dist(x, y)).unwrap();
            }
        }
        let edges = book.clone();
        estimate_cross_group(&mut book, &groups, &chosen).unwrap();
        for &a in &groups[0] {
            let sp = dijkstra(&edges, a);
            for &b in &groups[1] {
                let v = book.value(a, b);
                assert!(v.is_finite(), "round {round}: ({a},{b}) unestimated");
                assert!(v + 1e-9 >= t.dist(a, b), "round {round}: ({a},{b}) below truth");
                assert!(v + 1e-9 >= sp[b], "round {round}: ({a},{b}) below shortest path");
            }
        }
    }
}
