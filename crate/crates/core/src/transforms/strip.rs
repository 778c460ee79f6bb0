use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{require_simple, strip_crossing_formula, TransformError};
use crate::drawing::{pair_table, Drawing, EdgeId, Relation, Side, VertexId};
use crate::geometry::{common_points, int, ratio, seg_seg, Point, Scalar, SegmentIntersection};
use crate::serde_scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedrawnVertex {
    pub id: VertexId,
    #[serde(with = "serde_scalar::point")]
    pub point: Point,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedrawnArc {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    /// May cross itself inside the strip.
    #[serde(with = "serde_scalar::points")]
    pub points: Vec<Point>,
    /// Number of times the edge traverses the strip.
    pub k: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCrossings {
    pub e: EdgeId,
    pub f: EdgeId,
    pub independent: bool,
    /// Crossings of the pair in the input drawing.
    pub input_crossings: usize,
    /// Common points strictly between y = 0 and y = 1.
    pub inside: usize,
    pub outside: usize,
}

impl PairCrossings {
    pub fn total(&self) -> usize {
        self.inside + self.outside
    }
}

/// The redrawn drawing: class B below y = 0, class A above y = 1 and
/// mirrored, strip traversals reconnected by straight segments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedrawnDrawing {
    pub vertices: Vec<RedrawnVertex>,
    pub arcs: Vec<RedrawnArc>,
    pub pairs: Vec<PairCrossings>,
    /// Shear slope s of (x, y) -> (x, y + s x) applied first.
    #[serde(with = "serde_scalar")]
    pub shear: Scalar,
    /// Whether x and y were exchanged before shearing.
    pub swapped: bool,
    /// Whether y was negated after shearing.
    pub flipped: bool,
    /// Height of the cut line in the mapped input.
    #[serde(with = "serde_scalar")]
    pub cut: Scalar,
}

impl RedrawnDrawing {
    /// Independent pairs crossing an odd number of times.
    pub fn odd_crossing_pairs(&self) -> usize {
        self.pairs.iter().filter(|p| p.independent && p.total() % 2 == 1).count()
    }

    /// Independent pairs that cross in the input cross evenly here.
    pub fn parity_holds(&self) -> bool {
        self.pairs.iter().filter(|p| p.independent && p.input_crossings > 0).all(|p| p.total() % 2 == 0)
    }

    pub fn k_all_odd(&self) -> bool {
        self.arcs.iter().all(|a| a.k % 2 == 1)
    }
}

#[derive(Clone)]
struct LinearMap {
    swapped: bool,
    shear: Scalar,
    flipped: bool,
}

impl LinearMap {
    fn apply(&self, p: &Point) -> Point {
        let (x, y) = if self.swapped { (p.y.clone(), p.x.clone()) } else { (p.x.clone(), p.y.clone()) };
        let y = &y + &self.shear * &x;
        Point::new(x, if self.flipped { -y } else { y })
    }
}

fn shears() -> Vec<Scalar> {
    let mut v = vec![Scalar::zero()];
    for k in 1..=4 {
        for s in [int(k), ratio(1, k)] {
            if !v.contains(&s) {
                v.push(s.clone());
                v.push(-s);
            }
        }
    }
    v
}

/// First map (in a fixed order) putting every class-A vertex strictly above
/// every class-B vertex.
fn separating_map(d: &Drawing) -> Option<LinearMap> {
    for swapped in [false, true] {
        for shear in shears() {
            for flipped in [false, true] {
                let m = LinearMap { swapped, shear: shear.clone(), flipped };
                let mut max_b: Option<Scalar> = None;
                let mut min_a: Option<Scalar> = None;
                for (v, p) in d.vertices() {
                    let y = m.apply(p).y;
                    match d.sides()[v] {
                        Side::A => {
                            if min_a.as_ref().is_none_or(|c| &y < c) {
                                min_a = Some(y);
                            }
                        }
                        Side::B => {
                            if max_b.as_ref().is_none_or(|c| &y > c) {
                                max_b = Some(y);
                            }
                        }
                    }
                }
                match (max_b, min_a) {
                    (Some(b), Some(a)) if b < a => return Some(m),
                    (None, _) | (_, None) => return Some(m),
                    _ => {}
                }
            }
        }
    }
    None
}

struct Traversal {
    x: Scalar,
    upward: bool,
}

pub fn strip_redraw(d: &Drawing) -> Result<RedrawnDrawing, TransformError> {
    require_simple(d)?;
    for v in d.vertices().keys() {
        if !d.sides().contains_key(v) {
            return Err(TransformError::MissingBipartition(*v));
        }
    }
    for (e, ed) in d.edges() {
        if d.sides()[&ed.tail] == d.sides()[&ed.head] {
            return Err(TransformError::NotBipartite(*e));
        }
    }
    let table = pair_table(d);
    if let Some(&(a, b)) = table.tangent_pairs().first() {
        return Err(TransformError::HasTangency(a, b));
    }
    if let Some((&(a, b), _)) = table.classes.iter().find(|(_, c)| c.touches > 0) {
        return Err(TransformError::HasTangency(a, b));
    }
    let map = separating_map(d).ok_or(TransformError::NotSeparable)?;
    let verts: BTreeMap<VertexId, Point> = d.vertices().iter().map(|(v, p)| (*v, map.apply(p))).collect();
    let arcs: BTreeMap<EdgeId, Vec<Point>> = d.edges().iter().map(|(e, ed)| (*e, ed.arc.iter().map(|p| map.apply(p)).collect())).collect();

    let cut = choose_cut(d, &verts, &arcs);
    let above = |p: &Point| p.y > cut;

    // traversals of the cut line per edge, in arc order
    let mut trav: BTreeMap<EdgeId, Vec<Traversal>> = BTreeMap::new();
    for (e, a) in &arcs {
        let mut list = Vec::new();
        for w in a.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            if above(p) != above(q) {
                let t = (&cut - &p.y) / (&q.y - &p.y);
                list.push(Traversal { x: &p.x + t * (&q.x - &p.x), upward: above(q) });
            }
        }
        trav.insert(*e, list);
    }
    for (e, list) in &trav {
        if list.len() % 2 == 0 {
            return Err(TransformError::Verification(format!("{e} meets the cut line an even number of times")));
        }
    }

    let below_map = |p: &Point| Point::new(p.x.clone(), &p.y - &cut);
    let above_map = |p: &Point| Point::new(-p.x.clone(), &p.y - &cut + Scalar::one());
    let place = |p: &Point| if above(p) { above_map(p) } else { below_map(p) };

    // the intermediate drawing with vertical strip segments must classify like the input
    let mut gp = Drawing::new();
    for (v, p) in &verts {
        gp.add_vertex(*v, Point::new(p.x.clone(), if above(p) { &p.y - &cut + Scalar::one() } else { &p.y - &cut }))
            .expect("fresh id");
    }
    for (e, a) in &arcs {
        let ed = &d.edges()[e];
        let mut pts = Vec::new();
        let mut it = trav[e].iter();
        for (i, p) in a.iter().enumerate() {
            if i > 0 && above(&a[i - 1]) != above(p) {
                let t = it.next().expect("traversal");
                let (lo, hi) = (Point::new(t.x.clone(), Scalar::zero()), Point::new(t.x.clone(), Scalar::one()));
                if t.upward {
                    pts.extend([lo, hi]);
                } else {
                    pts.extend([hi, lo]);
                }
            }
            pts.push(Point::new(p.x.clone(), if above(p) { &p.y - &cut + Scalar::one() } else { &p.y - &cut }));
        }
        gp.add_edge(*e, ed.tail, ed.head, pts).expect("endpoints kept");
    }
    let gp_table = pair_table(&gp);
    if gp_table.classes != table.classes {
        return Err(TransformError::Verification("stretched drawing classifies differently".into()));
    }

    // tilt offsets for the reconnecting segments
    let mut xs: Vec<Scalar> = trav.values().flatten().map(|t| t.x.clone()).collect();
    xs.sort();
    let mut gap: Option<Scalar> = None;
    for w in xs.windows(2) {
        let g = &w[1] - &w[0];
        if gap.as_ref().is_none_or(|c| &g < c) {
            gap = Some(g);
        }
    }
    let scale = gap.unwrap_or_else(Scalar::one) / int(4);
    let count = xs.len() as i64;
    let mut sigma: BTreeMap<Scalar, Scalar> = BTreeMap::new();
    let mut ok = false;
    // three reconnecting segments are concurrent exactly when their points
    // (x, sigma) are collinear, so retries draw fresh weights rather than rescale
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for attempt in 0..24 {
        sigma = xs
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let r = i as i64 + 1;
                let w = if attempt == 0 {
                    ratio(r * r + r, (count + 1) * (count + 2))
                } else {
                    ratio(rng.gen_range(1..=4096), 4096)
                };
                (x.clone(), &scale * w)
            })
            .collect();
        if diagonals_in_general_position(&sigma) {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(TransformError::DegenerateAfterPerturbation);
    }

    let mut out_arcs = Vec::new();
    for (e, a) in &arcs {
        let ed = &d.edges()[e];
        let mut pts = Vec::new();
        let mut it = trav[e].iter();
        for (i, p) in a.iter().enumerate() {
            if i > 0 && above(&a[i - 1]) != above(p) {
                let t = it.next().expect("traversal");
                let s = &sigma[&t.x];
                let bottom = Point::new(t.x.clone(), Scalar::zero());
                let tilted = Point::new(-t.x.clone() + s, Scalar::one());
                let top = Point::new(-t.x.clone(), Scalar::one());
                if t.upward {
                    pts.extend([bottom, tilted, top]);
                } else {
                    pts.extend([top, tilted, bottom]);
                }
            }
            pts.push(place(p));
        }
        out_arcs.push(RedrawnArc { id: *e, tail: ed.tail, head: ed.head, points: pts, k: trav[e].len() as u64 });
    }

    let vertices: Vec<RedrawnVertex> =
        verts.iter().map(|(v, p)| RedrawnVertex { id: *v, point: place(p), side: d.sides()[v] }).collect();
    let vpos: BTreeMap<VertexId, Point> = vertices.iter().map(|v| (v.id, v.point.clone())).collect();
    let mut pairs = Vec::new();
    for i in 0..out_arcs.len() {
        for j in i + 1..out_arcs.len() {
            let (a, b) = (&out_arcs[i], &out_arcs[j]);
            let ends_a = [a.tail, a.head];
            let shared: BTreeSet<Point> =
                [b.tail, b.head].iter().filter(|v| ends_a.contains(v)).map(|v| vpos[v].clone()).collect();
            let pts = common_points(&a.points, &b.points).map_err(|e| TransformError::Verification(e.to_string()))?;
            let (mut inside, mut outside) = (0, 0);
            for q in pts.iter().filter(|q| !shared.contains(q)) {
                if q.y.is_positive() && q.y < Scalar::one() {
                    inside += 1;
                } else {
                    outside += 1;
                }
            }
            let input = table.get(a.id, b.id).expect("pair");
            if inside as u64 != strip_crossing_formula(a.k, b.k) || outside != input.crossings {
                return Err(TransformError::Verification(format!("crossing count mismatch for {} and {}", a.id, b.id)));
            }
            pairs.push(PairCrossings {
                e: a.id,
                f: b.id,
                independent: !shared_ids(&ends_a, &[b.tail, b.head]),
                input_crossings: input.crossings,
                inside,
                outside,
            });
        }
    }
    let r = RedrawnDrawing { vertices, arcs: out_arcs, pairs, shear: map.shear, swapped: map.swapped, flipped: map.flipped, cut };
    debug_assert!(r.pairs.iter().all(|p| !(p.independent && p.total() % 2 == 1)
        || table.get(p.e, p.f).is_some_and(|c| c.relation == Relation::Disjoint)));
    Ok(r)
}

fn shared_ids(a: &[VertexId; 2], b: &[VertexId; 2]) -> bool {
    b.iter().any(|v| a.contains(v))
}

/// Cut height strictly between the classes, off every bend and every
/// intersection point.
fn choose_cut(d: &Drawing, verts: &BTreeMap<VertexId, Point>, arcs: &BTreeMap<EdgeId, Vec<Point>>) -> Scalar {
    let ys = |s: Side| verts.iter().filter(move |(v, _)| d.sides()[v] == s).map(|(_, p)| p.y.clone());
    let lo = ys(Side::B).max();
    let hi = ys(Side::A).min();
    let mut forbidden: BTreeSet<Scalar> = arcs.values().flatten().map(|p| p.y.clone()).collect();
    let list: Vec<&Vec<Point>> = arcs.values().collect();
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            if let Ok(pts) = common_points(list[i], list[j]) {
                forbidden.extend(pts.into_iter().map(|p| p.y));
            }
        }
    }
    let (lo, hi) = match (lo, hi) {
        (Some(l), Some(h)) => (l, h),
        (Some(l), None) => (l.clone(), forbidden.last().cloned().unwrap_or(l) + int(2)),
        (None, Some(h)) => (forbidden.first().cloned().unwrap_or(h.clone()) - int(2), h),
        (None, None) => (int(0), int(1)),
    };
    let mut cuts: Vec<Scalar> = forbidden.into_iter().filter(|y| y > &lo && y < &hi).collect();
    cuts.insert(0, lo);
    cuts.push(hi);
    (&cuts[0] + &cuts[1]) / int(2)
}

/// No three reconnecting segments pass through one point, and no two share
/// an endpoint.
fn diagonals_in_general_position(sigma: &BTreeMap<Scalar, Scalar>) -> bool {
    let segs: Vec<(Point, Point)> = sigma
        .iter()
        .map(|(x, s)| (Point::new(x.clone(), Scalar::zero()), Point::new(-x.clone() + s, Scalar::one())))
        .collect();
    let tops: BTreeSet<&Point> = segs.iter().map(|s| &s.1).collect();
    if tops.len() != segs.len() {
        return false;
    }
    let mut seen = BTreeSet::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            match seg_seg(&segs[i].0, &segs[i].1, &segs[j].0, &segs[j].1) {
                SegmentIntersection::Point(q) => {
                    if !seen.insert(q) {
                        return false;
                    }
                }
                SegmentIntersection::DegenerateOverlap => return false,
                SegmentIntersection::Empty => {}
            }
        }
    }
    true
}
