use proptest::prelude::*;
use thrackle_core::arrangement::{build_arrangement, max_face_incidence};
use thrackle_core::bisection::{balance_bounds, bisection_width_exact, bisection_width_heuristic, AbstractGraph};
use thrackle_core::ds::{is_ds_sequence, lambda3_upper, lambda_brute};
use thrackle_core::extremal::has_disjoint_biclique;
use thrackle_core::gen::{generate, random_graph, random_segments, Family};
use thrackle_core::geometry::Point;

fn seg(a: (i64, i64), b: (i64, i64)) -> Vec<Point> {
    vec![Point::int(a.0, a.1), Point::int(b.0, b.1)]
}

#[test]
fn small_arrangements() {
    let one = build_arrangement(&[seg((0, 0), (1, 0))]).unwrap();
    assert_eq!((one.v(), one.e(), one.f(), one.components), (2, 1, 1, 1));

    let cross = build_arrangement(&[seg((0, 0), (2, 2)), seg((0, 2), (2, 0))]).unwrap();
    assert_eq!((cross.v(), cross.e(), cross.f()), (5, 4, 1));

    let tri = build_arrangement(&[seg((-1, 0), (5, 0)), seg((0, -1), (3, 5)), seg((4, -1), (1, 5))]).unwrap();
    assert_eq!((tri.v(), tri.e(), tri.f(), tri.components), (9, 9, 2, 1));
    assert!(tri.euler_holds());

    let apart = build_arrangement(&[seg((0, 0), (1, 0)), seg((0, 3), (1, 3))]).unwrap();
    assert_eq!(apart.components, 2);
    assert!(apart.euler_holds());
}

#[test]
fn random_arrangements_obey_euler_and_face_bound() {
    for seed in 0..30 {
        let arcs = random_segments(1 + (seed as usize % 10), seed);
        let a = build_arrangement(&arcs).unwrap();
        assert!(a.euler_holds(), "seed {seed}");
        let (_, inc) = max_face_incidence(&a);
        assert!(inc as f64 <= lambda3_upper(2 * arcs.len() as u64), "seed {seed}");
    }
}

fn naive_ds(u: &[u8], s: usize) -> bool {
    if u.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    for a in 0..4u8 {
        for b in 0..4u8 {
            if a == b {
                continue;
            }
            let mut want = a;
            let mut len = 0;
            for &x in u {
                if x == want {
                    len += 1;
                    want = if want == a { b } else { a };
                }
            }
            if len >= s + 2 {
                return false;
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn ds_predicate_matches_naive(u in prop::collection::vec(0u8..4, 0..10), s in 1usize..4) {
        prop_assert_eq!(is_ds_sequence(&u, s), naive_ds(&u, s));
    }
}

#[test]
fn lambda_small_values() {
    for n in 1..=4 {
        assert_eq!(lambda_brute(n, 1).unwrap(), n);
        assert_eq!(lambda_brute(n, 2).unwrap(), 2 * n - 1);
    }
    assert_eq!(lambda_brute(1, 3).unwrap(), 1);
    assert_eq!(lambda_brute(2, 3).unwrap(), 4);
    assert_eq!(lambda_brute(3, 2).unwrap(), 5);
}

fn brute_width(g: &AbstractGraph) -> usize {
    let (lo, hi) = balance_bounds(g.n);
    (0u32..1 << g.n)
        .filter(|m| (lo..=hi).contains(&(m.count_ones() as usize)))
        .map(|m| g.cut_size(&(0..g.n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
        .min()
        .unwrap()
}

#[test]
fn exact_bisection_matches_enumeration() {
    for seed in 0..25u64 {
        let n = 2 + (seed as usize % 9);
        let g = AbstractGraph::new(n, random_graph(n, 0.4, seed)).unwrap();
        let exact = bisection_width_exact(&g).unwrap();
        assert_eq!(exact.width, brute_width(&g), "seed {seed}");
        assert_eq!(g.cut_size(&(0..n).map(|i| exact.part1.contains(&i)).collect::<Vec<_>>()), exact.width);
        for h in 0..3 {
            assert!(bisection_width_heuristic(&g, h).unwrap().width >= exact.width);
        }
    }
}

#[test]
fn biclique_detection() {
    let star = generate(Family::StarThrackle { n: 7 }, 0).unwrap();
    assert!(has_disjoint_biclique(&star, 1).unwrap().is_none());
    let m = generate(Family::PlaneMatching { k: 4 }, 0).unwrap();
    assert!(has_disjoint_biclique(&m, 2).unwrap().is_some());
    let c = generate(Family::TwoCluster { t: 2 }, 0).unwrap();
    assert!(has_disjoint_biclique(&c, 2).unwrap().is_some());
}
