use thrackle_core::drawing::{classify_pair, intersection_graph, is_simple, pair_table, validate, Drawing, EdgeId, Relation, Side, VertexId};
use thrackle_core::extremal::BoundConstants;
use thrackle_core::gen::{generate, tangled, touch_pair, Family};
use thrackle_core::geometry::Point;
use thrackle_core::transforms::{
    alpha, perturb_tangencies, recursive_decomposition, split_vertices, strip_crossing_formula, strip_redraw, TransformError,
};

#[test]
fn star_split() {
    let d = generate(Family::Star { k: 5 }, 0).unwrap();
    let (s, cert) = split_vertices(&d, 2).unwrap();
    assert_eq!(s.n(), 8);
    assert_eq!(s.m(), 5);
    assert!(s.max_degree() <= 2);
    assert!(is_simple(&s));
    assert_eq!(cert.vertex_map[&VertexId(0)].len(), 3);
    let g = intersection_graph(&s);
    assert_eq!(g.edge_count(), 10);
}

#[test]
fn split_untouched_when_degree_fits() {
    let d = generate(Family::ConvexComplete { n: 4 }, 0).unwrap();
    let (s, _) = split_vertices(&d, 3).unwrap();
    assert_eq!(s, d);
    let one = generate(Family::PlaneMatching { k: 1 }, 0).unwrap();
    assert_eq!(split_vertices(&one, 2).unwrap().0, one);
    assert!(matches!(split_vertices(&d, 2), Err(TransformError::DeltaTooSmall { .. })));
}

fn crossing_pair() -> Drawing {
    let mut d = Drawing::new();
    for (i, (x, y, s)) in [(0, 10, Side::A), (10, 10, Side::A), (10, 0, Side::B), (0, 0, Side::B)].into_iter().enumerate() {
        d.add_vertex(VertexId(i as u32), Point::int(x, y)).unwrap();
        d.set_side(VertexId(i as u32), s).unwrap();
    }
    d.add_segment_edge(EdgeId(0), VertexId(0), VertexId(2)).unwrap();
    d.add_segment_edge(EdgeId(1), VertexId(1), VertexId(3)).unwrap();
    d
}

#[test]
fn strip_on_crossing_pair() {
    let r = strip_redraw(&crossing_pair()).unwrap();
    assert_eq!(r.pairs.len(), 1);
    let p = &r.pairs[0];
    assert_eq!((p.inside, p.outside), (1, 1));
    assert!(r.parity_holds());
    assert!(r.k_all_odd());
    assert_eq!(r.odd_crossing_pairs(), 0);
}

#[test]
fn strip_on_matching() {
    let d = generate(Family::PlaneMatching { k: 2 }, 0).unwrap();
    let r = strip_redraw(&d).unwrap();
    assert_eq!(r.pairs[0].outside, 0);
    assert_eq!(r.pairs[0].inside, 1);
    assert_eq!(r.odd_crossing_pairs(), 1);
}

#[test]
fn strip_needs_labels() {
    let d = generate(Family::Star { k: 2 }, 0).unwrap();
    assert!(matches!(strip_redraw(&d), Err(TransformError::MissingBipartition(_))));
}

#[test]
fn perturb_fixtures() {
    for d in [touch_pair(), tangled()] {
        let before = pair_table(&d);
        let p = perturb_tangencies(&d).unwrap();
        assert!(validate(&p).is_valid());
        assert!(is_simple(&p));
        assert_eq!((p.n(), p.m()), (d.n(), d.m()));
        let after = pair_table(&p);
        for (k, c) in &before.classes {
            if c.relation == Relation::Tangent {
                assert_eq!(after.classes[k].relation, Relation::Disjoint);
            } else {
                assert_eq!(&after.classes[k], c);
            }
        }
        assert_eq!(perturb_tangencies(&p).unwrap(), p);
    }
    let d = touch_pair();
    assert_eq!(classify_pair(&d, EdgeId(0), EdgeId(1)).unwrap().relation, Relation::Tangent);
}

#[test]
fn decomposition_small() {
    let d = generate(Family::RandomHub { n: 8, m: 10, hub: 4 }, 1).unwrap();
    let t = recursive_decomposition(&d, 1, &BoundConstants::with_n0(10)).unwrap();
    assert!(t.root.leaf);
    let d = generate(Family::RandomBipartite { n: 30, m: 40 }, 3).unwrap();
    let t = recursive_decomposition(&d, 1, &BoundConstants::with_n0(10)).unwrap();
    assert!(t.depth() >= 1);
    assert!(t.conserves_edges());
    assert!(t.balanced());
}

#[test]
fn formula_and_alpha() {
    for a in 0..=50 {
        for b in 0..=50 {
            assert_eq!(strip_crossing_formula(a, b), a * b);
        }
    }
    let mut prev = f64::INFINITY;
    for t in 1..=100 {
        let a = alpha(t);
        assert!(a > 1.0 && a < prev);
        prev = a;
    }
}
