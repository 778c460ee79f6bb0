//! Planar subdivision induced by a family of pseudo-segments.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{
    angle_cmp, check_polyline, events_unchecked, locate_on_polyline, param_on, signed_area2, winding_number,
    ArcPosition, BBox, EventKind, GeometryError, Point, Scalar,
};
use crate::serde_scalar;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("arc {arc} is not a simple polyline: {reason}")]
    BadArc { arc: usize, reason: String },
    #[error("arcs {first} and {second} meet in more than one point")]
    NotPseudoSegments { first: usize, second: usize },
    #[error("three or more arcs share the interior point {location}")]
    TriplePoint { location: String },
    #[error("arcs {first} and {second} overlap")]
    DegenerateOverlap { first: usize, second: usize },
    #[error("face traversal is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubEdge {
    pub arc: usize,
    /// Position of this piece along its arc, starting at 0.
    pub index: usize,
    pub tail: usize,
    pub head: usize,
    #[serde(with = "serde_scalar::points")]
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub bounded: bool,
    /// Boundary cycle enclosing the face (none for the unbounded face).
    pub outer: Option<usize>,
    /// Outer boundary cycles of components lying inside the face.
    pub holes: Vec<usize>,
    /// Distinct subdivision edges in the closure of the face.
    pub edges: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contact {
    pub arcs: (usize, usize),
    #[serde(with = "serde_scalar::point")]
    pub location: Point,
    pub kind: EventKind,
    pub vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub half_edges: Vec<usize>,
    pub area2: Scalar,
    pub component: usize,
    polygon: Vec<Point>,
    bbox: BBox,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub arcs: Vec<Vec<Point>>,
    pub vertices: Vec<Point>,
    pub edges: Vec<SubEdge>,
    pub faces: Vec<Face>,
    pub contacts: Vec<Contact>,
    pub components: usize,
    pub cycles: Vec<Cycle>,
    next: Vec<usize>,
    half_face: Vec<usize>,
}

fn key_of(pos: ArcPosition, arc: &[Point], q: &Point) -> (usize, Scalar) {
    match pos {
        ArcPosition::Vertex(k) if k + 1 == arc.len() => (k - 1, Scalar::one()),
        ArcPosition::Vertex(k) => (k, Scalar::zero()),
        ArcPosition::Segment(k) => (k, param_on(&arc[k], &arc[k + 1], q)),
    }
}

fn half_points(e: &SubEdge, h: usize) -> Vec<Point> {
    if h.is_multiple_of(2) {
        e.points.clone()
    } else {
        e.points.iter().rev().cloned().collect()
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            x
        } else {
            let r = self.find(p);
            self.0[x] = r;
            r
        }
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn build_arrangement(arcs: &[Vec<Point>]) -> Result<Arrangement, ArrangementError> {
    for (i, a) in arcs.iter().enumerate() {
        check_polyline(a).map_err(|e| ArrangementError::BadArc { arc: i, reason: e.to_string() })?;
    }
    let m = arcs.len();
    let boxes: Vec<BBox> = arcs.iter().map(|a| BBox::of(a)).collect();
    let mut breaks: Vec<BTreeMap<(usize, Scalar), Point>> = arcs
        .iter()
        .map(|a| {
            let mut b = BTreeMap::new();
            b.insert((0, Scalar::zero()), a[0].clone());
            b.insert((a.len() - 2, Scalar::one()), a[a.len() - 1].clone());
            b
        })
        .collect();
    let mut raw_contacts = Vec::new();
    let mut interior: BTreeMap<Point, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..m {
        for j in i + 1..m {
            if !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            let evs = events_unchecked(&arcs[i], &arcs[j]).map_err(|e| match e {
                GeometryError::DegenerateOverlap => ArrangementError::DegenerateOverlap { first: i, second: j },
                other => ArrangementError::BadArc { arc: i, reason: other.to_string() },
            })?;
            if evs.len() > 1 {
                return Err(ArrangementError::NotPseudoSegments { first: i, second: j });
            }
            for ev in evs {
                let q = &ev.location;
                breaks[i].insert(key_of(ev.pos_a, &arcs[i], q), q.clone());
                breaks[j].insert(key_of(ev.pos_b, &arcs[j], q), q.clone());
                if !ev.pos_a.is_endpoint(arcs[i].len()) {
                    interior.entry(q.clone()).or_default().insert(i);
                }
                if !ev.pos_b.is_endpoint(arcs[j].len()) {
                    interior.entry(q.clone()).or_default().insert(j);
                }
                raw_contacts.push(((i, j), q.clone(), ev.kind));
            }
        }
    }
    if let Some((p, _)) = interior.iter().find(|(_, s)| s.len() >= 3) {
        return Err(ArrangementError::TriplePoint { location: p.to_string() });
    }

    let mut vid: BTreeMap<Point, usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut vertex_of = |p: &Point, vertices: &mut Vec<Point>| -> usize {
        if let Some(&v) = vid.get(p) {
            return v;
        }
        vertices.push(p.clone());
        vid.insert(p.clone(), vertices.len() - 1);
        vertices.len() - 1
    };
    let mut edges = Vec::new();
    for (ai, arc) in arcs.iter().enumerate() {
        let bp: Vec<(&(usize, Scalar), &Point)> = breaks[ai].iter().collect();
        for (index, w) in bp.windows(2).enumerate() {
            let ((s0, _), p0) = (w[0].0, w[0].1);
            let ((s1, t1), p1) = (w[1].0, w[1].1);
            let mut pts = vec![p0.clone()];
            for (k, q) in arc.iter().enumerate().take(s1 + 1).skip(s0 + 1) {
                if k < *s1 || t1.is_positive() {
                    pts.push(q.clone());
                }
            }
            pts.push(p1.clone());
            let tail = vertex_of(p0, &mut vertices);
            let head = vertex_of(p1, &mut vertices);
            edges.push(SubEdge { arc: ai, index, tail, head, points: pts });
        }
    }
    let contacts = raw_contacts
        .into_iter()
        .map(|(arcs, location, kind)| {
            let vertex = vid[&location];
            Contact { arcs, location, kind, vertex }
        })
        .collect();

    let nv = vertices.len();
    let nh = 2 * edges.len();
    let origin = |h: usize| if h.is_multiple_of(2) { edges[h / 2].tail } else { edges[h / 2].head };
    let germ = |h: usize| {
        let e = &edges[h / 2];
        if h.is_multiple_of(2) {
            e.points[1].sub(&e.points[0])
        } else {
            let k = e.points.len();
            e.points[k - 2].sub(&e.points[k - 1])
        }
    };
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for h in 0..nh {
        out[origin(h)].push(h);
    }
    let germs: Vec<Point> = (0..nh).map(germ).collect();
    let mut slot = vec![0usize; nh];
    for list in out.iter_mut() {
        list.sort_by(|&a, &b| angle_cmp(&germs[a], &germs[b]));
        for w in list.windows(2) {
            if angle_cmp(&germs[w[0]], &germs[w[1]]).is_eq() {
                return Err(ArrangementError::Inconsistent("two edges leave a vertex in one direction".into()));
            }
        }
        for (i, &h) in list.iter().enumerate() {
            slot[h] = i;
        }
    }
    let next: Vec<usize> = (0..nh)
        .map(|h| {
            let t = h ^ 1;
            let list = &out[origin(t)];
            list[(slot[t] + list.len() - 1) % list.len()]
        })
        .collect();

    let mut dsu = Dsu((0..nv).collect());
    for e in &edges {
        dsu.union(e.tail, e.head);
    }
    let mut comp_id = BTreeMap::new();
    for v in 0..nv {
        let r = dsu.find(v);
        let k = comp_id.len();
        comp_id.entry(r).or_insert(k);
    }
    let components = comp_id.len();

    let mut cycle_of = vec![usize::MAX; nh];
    let mut cycles = Vec::new();
    for start in 0..nh {
        if cycle_of[start] != usize::MAX {
            continue;
        }
        let mut hs = Vec::new();
        let mut h = start;
        loop {
            cycle_of[h] = cycles.len();
            hs.push(h);
            h = next[h];
            if h == start {
                break;
            }
            if cycle_of[h] != usize::MAX {
                return Err(ArrangementError::Inconsistent("half-edge walk does not close".into()));
            }
        }
        let mut polygon = Vec::new();
        for &h in &hs {
            let pts = half_points(&edges[h / 2], h);
            polygon.extend(pts[..pts.len() - 1].iter().cloned());
        }
        let area2 = signed_area2(&polygon);
        let component = comp_id[&dsu.find(origin(start))];
        let bbox = BBox::of(&polygon);
        cycles.push(Cycle { half_edges: hs, area2, component, polygon, bbox });
    }

    let mut outer_of_comp = vec![usize::MAX; components];
    for (ci, c) in cycles.iter().enumerate() {
        if !c.area2.is_positive() {
            if outer_of_comp[c.component] != usize::MAX {
                return Err(ArrangementError::Inconsistent("component with two outer boundaries".into()));
            }
            outer_of_comp[c.component] = ci;
        }
    }
    if outer_of_comp.contains(&usize::MAX) {
        return Err(ArrangementError::Inconsistent("component without an outer boundary".into()));
    }

    let mut faces = vec![Face { bounded: false, outer: None, holes: Vec::new(), edges: BTreeSet::new() }];
    let mut face_of_cycle = vec![usize::MAX; cycles.len()];
    for (ci, c) in cycles.iter().enumerate() {
        if c.area2.is_positive() {
            face_of_cycle[ci] = faces.len();
            faces.push(Face { bounded: true, outer: Some(ci), holes: Vec::new(), edges: BTreeSet::new() });
        }
    }
    let mut rep = vec![usize::MAX; components];
    for v in 0..nv {
        let c = comp_id[&dsu.find(v)];
        if rep[c] == usize::MAX {
            rep[c] = v;
        }
    }
    for comp in 0..components {
        let q = &vertices[rep[comp]];
        let host = innermost(&cycles, q, Some(comp));
        let f = host.map_or(0, |ci| face_of_cycle[ci]);
        face_of_cycle[outer_of_comp[comp]] = f;
        faces[f].holes.push(outer_of_comp[comp]);
    }
    let mut half_face = vec![0; nh];
    for h in 0..nh {
        let f = face_of_cycle[cycle_of[h]];
        half_face[h] = f;
        faces[f].edges.insert(h / 2);
    }

    let a = Arrangement { arcs: arcs.to_vec(), vertices, edges, faces, contacts, components, cycles, next, half_face };
    if !a.euler_holds() {
        return Err(ArrangementError::Inconsistent("Euler relation fails".into()));
    }
    Ok(a)
}

/// Smallest positive cycle winding around `q`, ignoring one component.
fn innermost(cycles: &[Cycle], q: &Point, skip: Option<usize>) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (ci, c) in cycles.iter().enumerate() {
        if !c.area2.is_positive() || Some(c.component) == skip {
            continue;
        }
        if q.x < c.bbox.min.x || q.x > c.bbox.max.x || q.y < c.bbox.min.y || q.y > c.bbox.max.y {
            continue;
        }
        if winding_number(&c.polygon, q) != 0 && best.is_none_or(|b| c.area2 < cycles[b].area2) {
            best = Some(ci);
        }
    }
    best
}

impl Arrangement {
    pub fn v(&self) -> usize {
        self.vertices.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn f(&self) -> usize {
        self.faces.len()
    }

    /// V - E + F = 1 + C.
    pub fn euler_holds(&self) -> bool {
        self.v() as i64 - self.e() as i64 + self.f() as i64 == 1 + self.components as i64
    }

    pub fn next_half_edge(&self, h: usize) -> usize {
        self.next[h]
    }

    /// Faces on the two sides of a subdivision edge (forward side first).
    pub fn faces_of_edge(&self, e: usize) -> (usize, usize) {
        (self.half_face[2 * e], self.half_face[2 * e + 1])
    }

    /// True when `q` lies on one of the arcs.
    pub fn on_arcs(&self, q: &Point) -> bool {
        self.arcs.iter().any(|a| !locate_on_polyline(a, q).is_empty())
    }

    /// Face containing a point off the arcs.
    pub fn locate(&self, q: &Point) -> Option<usize> {
        if self.on_arcs(q) {
            return None;
        }
        let f = innermost(&self.cycles, q, None).map_or(0, |ci| {
            self.faces.iter().position(|f| f.outer == Some(ci)).expect("positive cycle bounds a face")
        });
        Some(f)
    }

    /// Subdivision edge having `q` in its relative interior.
    pub fn edge_containing(&self, q: &Point) -> Option<usize> {
        self.edges.iter().position(|e| {
            let pos = locate_on_polyline(&e.points, q);
            pos.len() == 1 && !pos[0].is_endpoint(e.points.len())
        })
    }

    pub fn export(&self) -> ArrangementExport {
        ArrangementExport {
            vertices: self.vertices.iter().map(|p| [p.x.to_string(), p.y.to_string()]).collect(),
            edges: self.edges.clone(),
            faces: self
                .faces
                .iter()
                .enumerate()
                .map(|(id, f)| FaceExport { id, bounded: f.bounded, edges: f.edges.iter().copied().collect() })
                .collect(),
            components: self.components,
            contacts: self.contacts.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceExport {
    pub id: usize,
    pub bounded: bool,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrangementExport {
    pub vertices: Vec<[String; 2]>,
    pub edges: Vec<SubEdge>,
    pub faces: Vec<FaceExport>,
    pub components: usize,
    pub contacts: Vec<Contact>,
}

/// Face with the most incident edges, ties broken by smaller face id.
pub fn max_face_incidence(a: &Arrangement) -> (usize, usize) {
    let mut best = (0, 0);
    for (i, f) in a.faces.iter().enumerate() {
        if f.edges.len() > best.1 {
            best = (i, f.edges.len());
        }
    }
    best
}

/// Points sampled along `arc` away from every arc of `others`: midpoints of the
/// pieces between consecutive contacts.
pub fn samples_off(arc: &[Point], others: &[Vec<Point>]) -> Vec<Point> {
    let mut out = Vec::new();
    for k in 0..arc.len() - 1 {
        let (a, b) = (&arc[k], &arc[k + 1]);
        let mut ts: BTreeSet<Scalar> = [Scalar::zero(), Scalar::one()].into_iter().collect();
        for o in others {
            for w in o.windows(2) {
                match crate::geometry::seg_seg(a, b, &w[0], &w[1]) {
                    crate::geometry::SegmentIntersection::Point(p) => {
                        ts.insert(param_on(a, b, &p));
                    }
                    crate::geometry::SegmentIntersection::DegenerateOverlap => {}
                    crate::geometry::SegmentIntersection::Empty => {}
                }
            }
        }
        let ts: Vec<Scalar> = ts.into_iter().collect();
        for w in ts.windows(2) {
            let t = (&w[0] + &w[1]) / Scalar::from_integer(2.into());
            out.push(a.lerp(b, &t));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: (i64, i64), b: (i64, i64)) -> Vec<Point> {
        vec![Point::int(a.0, a.1), Point::int(b.0, b.1)]
    }

    #[test]
    fn single_segment() {
        let a = build_arrangement(&[seg((0, 0), (1, 0))]).unwrap();
        assert_eq!((a.v(), a.e(), a.f()), (2, 1, 1));
        assert_eq!(max_face_incidence(&a), (0, 1));
    }

    #[test]
    fn cross() {
        let a = build_arrangement(&[seg((0, 0), (2, 2)), seg((0, 2), (2, 0))]).unwrap();
        assert_eq!((a.v(), a.e(), a.f()), (5, 4, 1));
        assert_eq!(max_face_incidence(&a).1, 4);
    }

    #[test]
    fn triangle() {
        let arcs = [seg((0, 0), (10, 0)), seg((1, -1), (6, 9)), seg((9, -1), (4, 9))];
        let arcs: Vec<Vec<Point>> = vec![
            vec![Point::int(-1, 1), Point::int(11, 1)],
            arcs[1].clone(),
            arcs[2].clone(),
        ];
        let a = build_arrangement(&arcs).unwrap();
        assert_eq!((a.v(), a.e(), a.f()), (9, 9, 2));
        assert_eq!(a.faces[0].edges.len(), 9);
        assert_eq!(a.faces[1].edges.len(), 3);
    }

    #[test]
    fn nested_components() {
        let arcs = vec![
            vec![Point::int(-1, 1), Point::int(11, 1)],
            seg((1, -1), (6, 9)),
            seg((9, -1), (4, 9)),
            seg((4, 3), (6, 3)),
        ];
        let a = build_arrangement(&arcs).unwrap();
        assert_eq!(a.components, 2);
        assert_eq!((a.v(), a.e(), a.f()), (11, 10, 2));
        let inner = a.locate(&Point::int(5, 4)).unwrap();
        assert_ne!(inner, 0);
        assert_eq!(a.locate(&Point::int(0, 5)), Some(0));
        assert_eq!(a.faces[inner].edges.len(), 4);
        assert_eq!(a.locate(&Point::int(5, 3)), None);
    }
}
