use thrackle_core::drawing::{classify_drawing, is_simple, pair_table, validate, Drawing, EdgeId, Relation, VertexId, Violation};
use thrackle_core::gen::{generate, Family};
use thrackle_core::geometry::Point;
use thrackle_core::io::{drawing_from_json, drawing_to_json};

fn v(i: u32) -> VertexId {
    VertexId(i)
}

fn e(i: u32) -> EdgeId {
    EdgeId(i)
}

fn base() -> Drawing {
    let mut d = Drawing::new();
    for (i, (x, y)) in [(0, 0), (2, 2), (0, 2), (2, 0), (1, 5)].into_iter().enumerate() {
        d.add_vertex(v(i as u32), Point::int(x, y)).unwrap();
    }
    d
}

#[test]
fn crossing_pair_is_thrackle() {
    let mut d = base();
    d.add_segment_edge(e(0), v(0), v(1)).unwrap();
    d.add_segment_edge(e(1), v(2), v(3)).unwrap();
    assert!(validate(&d).is_valid());
    let t = pair_table(&d);
    assert_eq!(t.get(e(0), e(1)).unwrap().relation, Relation::Crossing);
    assert!(classify_drawing(&d).is_thrackle);
}

#[test]
fn violations_reported() {
    let mut d = base();
    d.add_segment_edge(e(0), v(0), v(1)).unwrap();
    d.add_segment_edge(e(1), v(1), v(0)).unwrap();
    assert!(validate(&d).violations.iter().any(|x| matches!(x, Violation::ParallelEdges { .. })));

    let mut d = base();
    d.add_vertex(v(9), Point::int(1, 1)).unwrap();
    d.add_segment_edge(e(0), v(0), v(1)).unwrap();
    assert!(validate(&d).violations.iter().any(|x| matches!(x, Violation::VertexOnArc { .. })));

    let mut d = base();
    d.add_vertex(v(5), Point::int(1, 0)).unwrap();
    d.add_segment_edge(e(0), v(0), v(1)).unwrap();
    d.add_segment_edge(e(1), v(2), v(3)).unwrap();
    d.add_segment_edge(e(2), v(4), v(5)).unwrap();
    assert!(validate(&d).violations.iter().any(|x| matches!(x, Violation::TriplePoint { .. })));
}

#[test]
fn double_crossing_is_not_simple() {
    let mut d = Drawing::new();
    for (i, (x, y)) in [(0, 0), (4, 0), (1, -2), (3, -2)].into_iter().enumerate() {
        d.add_vertex(v(i as u32), Point::int(x, y)).unwrap();
    }
    d.add_segment_edge(e(0), v(0), v(1)).unwrap();
    d.add_edge(e(1), v(2), v(3), vec![Point::int(1, -2), Point::int(2, 1), Point::int(3, -2)]).unwrap();
    assert!(validate(&d).is_valid());
    assert_eq!(pair_table(&d).get(e(0), e(1)).unwrap().crossings, 2);
    assert!(!is_simple(&d));
}

#[test]
fn families_round_trip_and_are_deterministic() {
    let families = [
        Family::StarThrackle { n: 7 },
        Family::PlaneMatching { k: 4 },
        Family::TwoCluster { t: 2 },
        Family::Star { k: 5 },
        Family::ConvexComplete { n: 5 },
        Family::RandomBipartite { n: 8, m: 10 },
        Family::RandomHub { n: 10, m: 12, hub: 6 },
        Family::Tangled,
        Family::TouchPair,
    ];
    for f in families {
        let a = generate(f, 3).unwrap();
        let b = generate(f, 3).unwrap();
        let text = drawing_to_json(&a);
        assert_eq!(text, drawing_to_json(&b), "{f:?} not deterministic");
        assert!(validate(&a).is_valid(), "{f:?} invalid");
        let back = drawing_from_json(&text).unwrap();
        assert_eq!(drawing_to_json(&back), text);
        assert_eq!(pair_table(&back), pair_table(&a));
    }
    assert!(classify_drawing(&generate(Family::StarThrackle { n: 9 }, 0).unwrap()).is_thrackle);
    let t = classify_drawing(&generate(Family::Tangled, 0).unwrap());
    assert!(t.is_tangled_thrackle && !t.is_thrackle);
}

#[test]
fn rejects_bad_documents() {
    assert!(drawing_from_json("{").is_err());
    assert!(drawing_from_json(r#"{"version":99,"vertices":[],"edges":[]}"#).is_err());
    let dangling = r#"{"version":1,"vertices":[{"id":0,"x":"0","y":"0"}],"edges":[{"id":0,"tail":0,"head":1,"points":[]}]}"#;
    assert!(drawing_from_json(dangling).is_err());
}
