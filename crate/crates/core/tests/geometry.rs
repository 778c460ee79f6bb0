use num_rational::BigRational;
use proptest::prelude::*;
use thrackle_core::geometry::{
    arc_intersections, orientation, segment_intersection, EventKind, Point, Segment, SegmentIntersection,
};

fn pt((x, y): (i64, i64)) -> Point {
    Point::int(x, y)
}

fn coord() -> impl Strategy<Value = (i64, i64)> {
    (-12i64..12, -12i64..12)
}

fn cross(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 - b.0, a.1 - b.1)
}

/// Cramer's rule on machine integers.
fn oracle(p1: (i64, i64), p2: (i64, i64), p3: (i64, i64), p4: (i64, i64)) -> SegmentIntersection {
    let (d1, d2, w) = (sub(p2, p1), sub(p4, p3), sub(p3, p1));
    let den = cross(d1, d2);
    if den == 0 {
        if cross(w, d1) != 0 {
            return SegmentIntersection::Empty;
        }
        let key = |p: (i64, i64)| if d1.0 != 0 { p.0 } else { p.1 };
        let (a0, a1) = (key(p1).min(key(p2)), key(p1).max(key(p2)));
        let (b0, b1) = (key(p3).min(key(p4)), key(p3).max(key(p4)));
        let (lo, hi) = (a0.max(b0), a1.min(b1));
        return if lo < hi {
            SegmentIntersection::DegenerateOverlap
        } else if lo == hi {
            let p = [p1, p2].into_iter().find(|&p| key(p) == lo).unwrap();
            SegmentIntersection::Point(pt(p))
        } else {
            SegmentIntersection::Empty
        };
    }
    let (tn, un) = (cross(w, d2), cross(w, d1));
    let inside = |n: i64| if den > 0 { 0 <= n && n <= den } else { den <= n && n <= 0 };
    if !inside(tn) || !inside(un) {
        return SegmentIntersection::Empty;
    }
    let t = BigRational::new(tn.into(), den.into());
    SegmentIntersection::Point(pt(p1).add(&pt(d1).scale(&t)))
}

proptest! {
    #[test]
    fn orientation_antisymmetric(a in coord(), b in coord(), c in coord()) {
        let (a, b, c) = (pt(a), pt(b), pt(c));
        prop_assert_eq!(orientation(&a, &b, &c), -orientation(&b, &a, &c));
        prop_assert_eq!(orientation(&a, &b, &c), orientation(&b, &c, &a));
    }

    #[test]
    fn segments_match_oracle(p1 in coord(), p2 in coord(), p3 in coord(), p4 in coord()) {
        prop_assume!(p1 != p2 && p3 != p4);
        let s1 = Segment::new(pt(p1), pt(p2)).unwrap();
        let s2 = Segment::new(pt(p3), pt(p4)).unwrap();
        prop_assert_eq!(segment_intersection(&s1, &s2), oracle(p1, p2, p3, p4));
        prop_assert_eq!(segment_intersection(&s2, &s1), oracle(p3, p4, p1, p2));
    }

    #[test]
    fn arc_events_symmetric(a in prop::collection::vec(coord(), 2..5), b in prop::collection::vec(coord(), 2..5)) {
        let a: Vec<Point> = a.into_iter().map(pt).collect();
        let b: Vec<Point> = b.into_iter().map(pt).collect();
        if let (Ok(ab), Ok(ba)) = (arc_intersections(&a, &b), arc_intersections(&b, &a)) {
            prop_assert_eq!(ab.len(), ba.len());
            for (x, y) in ab.iter().zip(&ba) {
                prop_assert_eq!(&x.location, &y.location);
                prop_assert_eq!(x.kind, y.kind);
                prop_assert_eq!(x.pos_a, y.pos_b);
            }
        }
    }
}

#[test]
fn crossing_touch_and_t_junction() {
    let x1 = [Point::int(0, 0), Point::int(2, 2)];
    let x2 = [Point::int(0, 2), Point::int(2, 0)];
    let ev = arc_intersections(&x1, &x2).unwrap();
    assert_eq!(ev.len(), 1);
    assert_eq!(ev[0].kind, EventKind::ProperCrossing);

    let v1 = [Point::int(0, 0), Point::int(1, 1), Point::int(2, 0)];
    let v2 = [Point::int(0, 2), Point::int(1, 1), Point::int(2, 2)];
    assert_eq!(arc_intersections(&v1, &v2).unwrap()[0].kind, EventKind::Touch);

    let t = [Point::int(1, 1), Point::int(1, 3)];
    assert_eq!(arc_intersections(&x1, &t).unwrap()[0].kind, EventKind::Touch);
}
