//! Exact predicates over rational points, segments and polylines.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `p/q` or `-p/q`. The result is reduced.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let r: BigRational = s.parse().ok()?;
    Some(r)
}

pub fn format_scalar(s: &Scalar) -> String {
    s.to_string()
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point { x: int(x), y: int(y) }
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn add(&self, o: &Point) -> Point {
        Point { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point { x: &self.x * k, y: &self.y * k }
    }

    pub fn dot(&self, o: &Point) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> Scalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        let h = ratio(1, 2);
        Point { x: (&self.x + &o.x) * &h, y: (&self.y + &o.y) * &h }
    }

    /// Point along `self -> o` at parameter `t`.
    pub fn lerp(&self, o: &Point, t: &Scalar) -> Point {
        self.add(&o.sub(self).scale(t))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

pub fn to_f64(s: &Scalar) -> f64 {
    use num_traits::ToPrimitive;
    s.to_f64().unwrap_or(f64::NAN)
}

fn sign(s: &Scalar) -> i32 {
    if s.is_positive() {
        1
    } else if s.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of (q - p) x (r - p).
pub fn orientation(p: &Point, q: &Point, r: &Point) -> i32 {
    sign(&q.sub(p).cross(&r.sub(p)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Option<Segment> {
        if a == b {
            None
        } else {
            Some(Segment { a, b })
        }
    }

    /// Parameter of a point known to lie on the supporting line.
    pub fn param(&self, p: &Point) -> Scalar {
        param_on(&self.a, &self.b, p)
    }

    pub fn contains(&self, p: &Point) -> bool {
        on_segment(&self.a, &self.b, p)
    }
}

pub(crate) fn param_on(a: &Point, b: &Point, p: &Point) -> Scalar {
    if a.x != b.x {
        (&p.x - &a.x) / (&b.x - &a.x)
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}

fn in_box(a: &Point, b: &Point, p: &Point) -> bool {
    let (xl, xh) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (yl, yh) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    xl <= &p.x && &p.x <= xh && yl <= &p.y && &p.y <= yh
}

/// Closed segment membership.
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    in_box(a, b, p) && orientation(a, b, p) == 0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentIntersection {
    Empty,
    Point(Point),
    DegenerateOverlap,
}

pub fn segment_intersection(s1: &Segment, s2: &Segment) -> SegmentIntersection {
    seg_seg(&s1.a, &s1.b, &s2.a, &s2.b)
}

fn boxes_disjoint(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let (ax0, ax1) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (cx0, cx1) = if c.x <= d.x { (&c.x, &d.x) } else { (&d.x, &c.x) };
    if ax1 < cx0 || cx1 < ax0 {
        return true;
    }
    let (ay0, ay1) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    let (cy0, cy1) = if c.y <= d.y { (&c.y, &d.y) } else { (&d.y, &c.y) };
    ay1 < cy0 || cy1 < ay0
}

pub(crate) fn seg_seg(a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentIntersection {
    if boxes_disjoint(a, b, c, d) {
        return SegmentIntersection::Empty;
    }
    let o1 = orientation(c, d, a);
    let o2 = orientation(c, d, b);
    let o3 = orientation(a, b, c);
    let o4 = orientation(a, b, d);
    if o1 == 0 && o2 == 0 {
        // collinear: intersect the parameter intervals along a-b
        let tc = param_on(a, b, c);
        let td = param_on(a, b, d);
        let (lo, hi) = if tc <= td { (tc, td) } else { (td, tc) };
        let zero = Scalar::zero();
        let one = Scalar::one();
        let l = if lo > zero { lo } else { zero };
        let h = if hi < one { hi } else { one };
        return match l.cmp(&h) {
            Ordering::Greater => SegmentIntersection::Empty,
            Ordering::Equal => SegmentIntersection::Point(a.lerp(b, &l)),
            Ordering::Less => SegmentIntersection::DegenerateOverlap,
        };
    }
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return SegmentIntersection::Empty;
    }
    if o1 == 0 {
        return SegmentIntersection::Point(a.clone());
    }
    if o2 == 0 {
        return SegmentIntersection::Point(b.clone());
    }
    if o3 == 0 {
        return SegmentIntersection::Point(c.clone());
    }
    if o4 == 0 {
        return SegmentIntersection::Point(d.clone());
    }
    let r = b.sub(a);
    let s = d.sub(c);
    let t = c.sub(a).cross(&s) / r.cross(&s);
    SegmentIntersection::Point(a.lerp(b, &t))
}

/// Compares direction vectors by angle in [0, 2pi), starting at the positive x axis.
pub fn angle_cmp(u: &Point, v: &Point) -> Ordering {
    fn half(p: &Point) -> u8 {
        if p.y.is_positive() || (p.y.is_zero() && p.x.is_positive()) {
            0
        } else {
            1
        }
    }
    half(u).cmp(&half(v)).then_with(|| {
        let c = u.cross(v);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    ProperCrossing,
    Touch,
    SharedEndpoint,
}

/// Where a point sits on a polyline: at a polyline vertex, or inside a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArcPosition {
    Vertex(usize),
    Segment(usize),
}

impl ArcPosition {
    pub fn is_endpoint(&self, len: usize) -> bool {
        matches!(*self, ArcPosition::Vertex(i) if i == 0 || i + 1 == len)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionEvent {
    pub location: Point,
    pub kind: EventKind,
    pub pos_a: ArcPosition,
    pub pos_b: ArcPosition,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("arcs share a sub-segment of positive length")]
    DegenerateOverlap,
    #[error("bad polyline: {0}")]
    BadPolyline(&'static str),
    #[error("point {0} occurs more than once along an arc")]
    RepeatedPoint(Box<Point>),
}

/// Checks the polyline preconditions: at least two points, no zero-length
/// segments, no self-intersection.
pub fn check_polyline(p: &[Point]) -> Result<(), GeometryError> {
    if p.len() < 2 {
        return Err(GeometryError::BadPolyline("fewer than two points"));
    }
    if p.windows(2).any(|w| w[0] == w[1]) {
        return Err(GeometryError::BadPolyline("zero-length segment"));
    }
    if !self_intersection_points(p).is_empty() {
        return Err(GeometryError::BadPolyline("self-intersection"));
    }
    Ok(())
}

/// Points where a polyline meets itself other than at the shared vertex of
/// consecutive segments. Overlaps are reported via their shared endpoint set.
pub fn self_intersection_points(p: &[Point]) -> Vec<Point> {
    let mut out = BTreeSet::new();
    let n = p.len();
    if n < 2 {
        return Vec::new();
    }
    for i in 0..n - 1 {
        for j in i + 1..n - 1 {
            match seg_seg(&p[i], &p[i + 1], &p[j], &p[j + 1]) {
                SegmentIntersection::Empty => {}
                SegmentIntersection::DegenerateOverlap => {
                    out.insert(p[j].clone());
                }
                SegmentIntersection::Point(q) => {
                    if !(j == i + 1 && q == p[j]) {
                        out.insert(q);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// All positions of `q` along the polyline.
pub fn locate_on_polyline(p: &[Point], q: &Point) -> Vec<ArcPosition> {
    let mut out = Vec::new();
    for (i, v) in p.iter().enumerate() {
        if v == q {
            out.push(ArcPosition::Vertex(i));
        }
    }
    for i in 0..p.len().saturating_sub(1) {
        if q != &p[i] && q != &p[i + 1] && on_segment(&p[i], &p[i + 1], q) {
            out.push(ArcPosition::Segment(i));
        }
    }
    out
}

/// Direction vectors of the pieces of the polyline leaving `q` at `pos`.
pub fn germs(p: &[Point], pos: ArcPosition, q: &Point) -> Vec<Point> {
    match pos {
        ArcPosition::Segment(i) => vec![p[i].sub(q), p[i + 1].sub(q)],
        ArcPosition::Vertex(i) => {
            let mut g = Vec::with_capacity(2);
            if i > 0 {
                g.push(p[i - 1].sub(q));
            }
            if i + 1 < p.len() {
                g.push(p[i + 1].sub(q));
            }
            g
        }
    }
}

/// Rotation test on germs leaving a common point. Crossing iff the two arcs'
/// germs alternate around the point. Fewer than four germs never alternate.
pub fn rotation_kind(ga: &[Point], gb: &[Point]) -> Result<EventKind, GeometryError> {
    if ga.len() < 2 || gb.len() < 2 {
        return Ok(EventKind::Touch);
    }
    let mut all: Vec<(Point, u8)> = ga
        .iter()
        .map(|g| (g.clone(), 0u8))
        .chain(gb.iter().map(|g| (g.clone(), 1u8)))
        .collect();
    all.sort_by(|x, y| angle_cmp(&x.0, &y.0));
    for w in all.windows(2) {
        if w[0].1 != w[1].1 && angle_cmp(&w[0].0, &w[1].0) == Ordering::Equal {
            return Err(GeometryError::DegenerateOverlap);
        }
    }
    let l: Vec<u8> = all.iter().map(|x| x.1).collect();
    if l[0] != l[1] && l[1] != l[2] && l[2] != l[3] {
        Ok(EventKind::ProperCrossing)
    } else {
        Ok(EventKind::Touch)
    }
}

/// Classifies a common point given its positions on both arcs.
pub fn classify_point(
    a: &[Point],
    pa: ArcPosition,
    b: &[Point],
    pb: ArcPosition,
    q: &Point,
) -> Result<EventKind, GeometryError> {
    if pa.is_endpoint(a.len()) && pb.is_endpoint(b.len()) {
        return Ok(EventKind::SharedEndpoint);
    }
    rotation_kind(&germs(a, pa, q), &germs(b, pb, q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of(p: &[Point]) -> BBox {
        let mut min = p[0].clone();
        let mut max = p[0].clone();
        for q in &p[1..] {
            if q.x < min.x {
                min.x = q.x.clone();
            }
            if q.y < min.y {
                min.y = q.y.clone();
            }
            if q.x > max.x {
                max.x = q.x.clone();
            }
            if q.y > max.y {
                max.y = q.y.clone();
            }
        }
        BBox { min, max }
    }

    pub fn overlaps(&self, o: &BBox) -> bool {
        !(self.max.x < o.min.x || o.max.x < self.min.x || self.max.y < o.min.y || o.max.y < self.min.y)
    }
}

/// Distinct common points of two polylines (which may self-intersect).
pub fn common_points(a: &[Point], b: &[Point]) -> Result<BTreeSet<Point>, GeometryError> {
    let mut pts = BTreeSet::new();
    if !BBox::of(a).overlaps(&BBox::of(b)) {
        return Ok(pts);
    }
    for i in 0..a.len() - 1 {
        for j in 0..b.len() - 1 {
            match seg_seg(&a[i], &a[i + 1], &b[j], &b[j + 1]) {
                SegmentIntersection::Empty => {}
                SegmentIntersection::Point(q) => {
                    pts.insert(q);
                }
                SegmentIntersection::DegenerateOverlap => return Err(GeometryError::DegenerateOverlap),
            }
        }
    }
    Ok(pts)
}

/// Every common point of two arcs, classified by the rotation test.
pub fn arc_intersections(a: &[Point], b: &[Point]) -> Result<Vec<IntersectionEvent>, GeometryError> {
    check_polyline(a)?;
    check_polyline(b)?;
    events_unchecked(a, b)
}

/// Like `arc_intersections` without the polyline checks. Each common point must
/// still occur at a single position along each arc.
pub fn events_unchecked(a: &[Point], b: &[Point]) -> Result<Vec<IntersectionEvent>, GeometryError> {
    let pts = common_points(a, b)?;
    let mut out = Vec::with_capacity(pts.len());
    for q in pts {
        let la = locate_on_polyline(a, &q);
        let lb = locate_on_polyline(b, &q);
        if la.len() != 1 || lb.len() != 1 {
            return Err(GeometryError::RepeatedPoint(Box::new(q)));
        }
        let kind = classify_point(a, la[0], b, lb[0], &q)?;
        out.push(IntersectionEvent { location: q, kind, pos_a: la[0], pos_b: lb[0] });
    }
    Ok(out)
}

/// Squared distance from `p` to the closed segment a-b.
pub fn dist2_point_segment(p: &Point, a: &Point, b: &Point) -> Scalar {
    let ab = b.sub(a);
    let t = p.sub(a).dot(&ab) / ab.norm2();
    let t = if t.is_negative() {
        Scalar::zero()
    } else if t > Scalar::one() {
        Scalar::one()
    } else {
        t
    };
    p.sub(&a.lerp(b, &t)).norm2()
}

/// Squared distance from `p` to a polyline.
pub fn dist2_point_polyline(p: &Point, poly: &[Point]) -> Scalar {
    poly.windows(2)
        .map(|w| dist2_point_segment(p, &w[0], &w[1]))
        .min()
        .expect("polyline has a segment")
}

/// Largest power of two `r` (possibly negative exponent) with `r^2 <= bound`.
/// `bound` must be positive.
pub fn pow2_below_sqrt(bound: &Scalar) -> Scalar {
    assert!(bound.is_positive());
    let mut r = Scalar::one();
    let two = int(2);
    if &(&r * &r) <= bound {
        loop {
            let n = &r * &two;
            if &(&n * &n) > bound {
                return r;
            }
            r = n;
        }
    }
    loop {
        r = &r / &two;
        if &(&r * &r) <= bound {
            return r;
        }
    }
}

/// Twice the signed area of a closed polygon given by its vertex cycle.
pub fn signed_area2(poly: &[Point]) -> Scalar {
    let n = poly.len();
    let mut s = Scalar::zero();
    for i in 0..n {
        s += poly[i].cross(&poly[(i + 1) % n]);
    }
    s
}

/// Winding number of a closed polygon around `q`; `q` must not lie on it.
pub fn winding_number(poly: &[Point], q: &Point) -> i32 {
    let n = poly.len();
    let mut w = 0;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        if a.y <= q.y {
            if b.y > q.y && orientation(a, b, q) > 0 {
                w += 1;
            }
        } else if b.y <= q.y && orientation(a, b, q) < 0 {
            w -= 1;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    #[test]
    fn orientation_basic() {
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orientation(&p(0, 0), &p(1, 1), &p(2, 2)), 0);
        assert_eq!(orientation(&p(0, 0), &p(0, 1), &p(1, 0)), -1);
    }

    #[test]
    fn segment_cases() {
        let s = |a, b| Segment::new(a, b).unwrap();
        assert_eq!(
            segment_intersection(&s(p(0, 0), p(2, 2)), &s(p(0, 2), p(2, 0))),
            SegmentIntersection::Point(p(1, 1))
        );
        assert_eq!(segment_intersection(&s(p(0, 0), p(1, 0)), &s(p(0, 1), p(1, 1))), SegmentIntersection::Empty);
        assert_eq!(
            segment_intersection(&s(p(0, 0), p(2, 0)), &s(p(1, 0), p(3, 0))),
            SegmentIntersection::DegenerateOverlap
        );
        assert_eq!(
            segment_intersection(&s(p(0, 0), p(1, 0)), &s(p(1, 0), p(3, 0))),
            SegmentIntersection::Point(p(1, 0))
        );
        assert_eq!(segment_intersection(&s(p(0, 0), p(1, 0)), &s(p(2, 0), p(3, 0))), SegmentIntersection::Empty);
    }

    #[test]
    fn touch_at_shared_bend() {
        let a = vec![p(0, 0), p(1, 1), p(2, 0)];
        let b = vec![p(0, 2), p(1, 1), p(2, 2)];
        let ev = arc_intersections(&a, &b).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, EventKind::Touch);
        assert_eq!(ev[0].location, p(1, 1));
    }

    #[test]
    fn crossing_at_bend_of_one_arc() {
        let a = vec![p(0, 0), p(1, 1), p(2, 0)];
        let b = vec![p(1, 0), p(1, 2)];
        let ev = arc_intersections(&a, &b).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, EventKind::ProperCrossing);
    }

    #[test]
    fn pow2_bound() {
        let r = pow2_below_sqrt(&ratio(1, 10));
        assert_eq!(r, ratio(1, 4));
        let r = pow2_below_sqrt(&int(17));
        assert_eq!(r, int(4));
    }

    #[test]
    fn winding() {
        let sq = vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)];
        assert_eq!(winding_number(&sq, &p(1, 1)), 1);
        assert_eq!(winding_number(&sq, &p(3, 1)), 0);
        assert_eq!(signed_area2(&sq), int(8));
    }
}
