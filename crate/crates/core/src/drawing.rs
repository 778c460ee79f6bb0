//! Drawings of graphs with polyline edges, validation of the nondegeneracy
//! conditions, and pairwise classification of edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    arc_intersections, check_polyline, locate_on_polyline, BBox, EventKind, GeometryError, IntersectionEvent,
    Point,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub arc: Vec<Point>,
}

impl Edge {
    pub fn shares_vertex(&self, o: &Edge) -> bool {
        self.tail == o.tail || self.tail == o.head || self.head == o.tail || self.head == o.head
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DrawingError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("arc of {0} does not start and end at its vertices")]
    EndpointMismatch(EdgeId),
    #[error("an edge cannot be compared with itself")]
    SameEdge,
}

/// Vertices at rational points and edges as polyline arcs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Drawing {
    vertices: BTreeMap<VertexId, Point>,
    edges: BTreeMap<EdgeId, Edge>,
    sides: BTreeMap<VertexId, Side>,
}

impl Drawing {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: VertexId, p: Point) -> Result<(), DrawingError> {
        if self.vertices.contains_key(&id) {
            return Err(DrawingError::DuplicateVertex(id));
        }
        self.vertices.insert(id, p);
        Ok(())
    }

    pub fn add_edge(&mut self, id: EdgeId, tail: VertexId, head: VertexId, arc: Vec<Point>) -> Result<(), DrawingError> {
        if self.edges.contains_key(&id) {
            return Err(DrawingError::DuplicateEdge(id));
        }
        let pt = self.vertices.get(&tail).ok_or(DrawingError::UnknownVertex(tail))?;
        let ph = self.vertices.get(&head).ok_or(DrawingError::UnknownVertex(head))?;
        if arc.first() != Some(pt) || arc.last() != Some(ph) {
            return Err(DrawingError::EndpointMismatch(id));
        }
        self.edges.insert(id, Edge { tail, head, arc });
        Ok(())
    }

    /// Adds a straight edge between two existing vertices.
    pub fn add_segment_edge(&mut self, id: EdgeId, tail: VertexId, head: VertexId) -> Result<(), DrawingError> {
        let a = self.vertices.get(&tail).ok_or(DrawingError::UnknownVertex(tail))?.clone();
        let b = self.vertices.get(&head).ok_or(DrawingError::UnknownVertex(head))?.clone();
        self.add_edge(id, tail, head, vec![a, b])
    }

    pub fn set_side(&mut self, v: VertexId, s: Side) -> Result<(), DrawingError> {
        if !self.vertices.contains_key(&v) {
            return Err(DrawingError::UnknownVertex(v));
        }
        self.sides.insert(v, s);
        Ok(())
    }

    pub fn clear_sides(&mut self) {
        self.sides.clear();
    }

    pub fn vertices(&self) -> &BTreeMap<VertexId, Point> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeMap<EdgeId, Edge> {
        &self.edges
    }

    pub fn sides(&self) -> &BTreeMap<VertexId, Side> {
        &self.sides
    }

    pub fn vertex(&self, v: VertexId) -> Option<&Point> {
        self.vertices.get(&v)
    }

    pub fn edge(&self, e: EdgeId) -> Option<&Edge> {
        self.edges.get(&e)
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.values().filter(|e| e.tail == v || e.head == v).count()
    }

    pub fn degrees(&self) -> BTreeMap<VertexId, usize> {
        let mut d: BTreeMap<VertexId, usize> = self.vertices.keys().map(|&v| (v, 0)).collect();
        for e in self.edges.values() {
            *d.entry(e.tail).or_default() += 1;
            *d.entry(e.head).or_default() += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().values().copied().max().unwrap_or(0)
    }

    /// Edges incident to `v`.
    pub fn incident(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges.iter().filter(|(_, e)| e.tail == v || e.head == v).map(|(&id, _)| id).collect()
    }

    /// Sub-drawing on a vertex subset with all edges having both ends inside.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Drawing {
        let mut d = Drawing::new();
        for v in keep {
            if let Some(p) = self.vertices.get(v) {
                d.vertices.insert(*v, p.clone());
                if let Some(s) = self.sides.get(v) {
                    d.sides.insert(*v, *s);
                }
            }
        }
        for (id, e) in &self.edges {
            if keep.contains(&e.tail) && keep.contains(&e.head) {
                d.edges.insert(*id, e.clone());
            }
        }
        d
    }

    pub fn next_vertex_id(&self) -> VertexId {
        VertexId(self.vertices.keys().next_back().map_or(0, |v| v.0 + 1))
    }

    pub(crate) fn replace_arc(&mut self, e: EdgeId, tail: VertexId, head: VertexId, arc: Vec<Point>) {
        self.edges.insert(e, Edge { tail, head, arc });
    }


    pub(crate) fn insert_vertex_raw(&mut self, v: VertexId, p: Point) {
        self.vertices.insert(v, p);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    BadArc { edge: EdgeId, reason: String },
    SelfLoop { edge: EdgeId },
    ParallelEdges { first: EdgeId, second: EdgeId },
    CoincidentVertices { first: VertexId, second: VertexId },
    VertexOnArc { vertex: VertexId, edge: EdgeId, location: String },
    DegenerateOverlap { first: EdgeId, second: EdgeId },
    TriplePoint { location: String, edges: Vec<EdgeId> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadArc { edge, reason } => write!(f, "{edge}: {reason}"),
            Violation::SelfLoop { edge } => write!(f, "{edge} is a loop"),
            Violation::ParallelEdges { first, second } => write!(f, "{first} and {second} join the same vertices"),
            Violation::CoincidentVertices { first, second } => write!(f, "{first} and {second} share a location"),
            Violation::VertexOnArc { vertex, edge, location } => write!(f, "{edge} passes through {vertex} at {location}"),
            Violation::DegenerateOverlap { first, second } => write!(f, "{first} and {second} overlap"),
            Violation::TriplePoint { location, edges } => {
                write!(f, "interior point {location} shared by {} edges", edges.len())
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn events_for(d: &Drawing, a: EdgeId, b: EdgeId) -> Result<Vec<IntersectionEvent>, GeometryError> {
    arc_intersections(&d.edges[&a].arc, &d.edges[&b].arc)
}

pub fn validate(d: &Drawing) -> ValidationReport {
    let mut v = Vec::new();
    let mut good: Vec<EdgeId> = Vec::new();
    for (&id, e) in &d.edges {
        if e.tail == e.head {
            v.push(Violation::SelfLoop { edge: id });
        }
        match check_polyline(&e.arc) {
            Ok(()) => good.push(id),
            Err(err) => v.push(Violation::BadArc { edge: id, reason: err.to_string() }),
        }
    }
    let ids: Vec<EdgeId> = d.edges.keys().copied().collect();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let (a, b) = (&d.edges[&ids[i]], &d.edges[&ids[j]]);
            let same = (a.tail == b.tail && a.head == b.head) || (a.tail == b.head && a.head == b.tail);
            if same && a.tail != a.head {
                v.push(Violation::ParallelEdges { first: ids[i], second: ids[j] });
            }
        }
    }
    let vs: Vec<(&VertexId, &Point)> = d.vertices.iter().collect();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if vs[i].1 == vs[j].1 {
                v.push(Violation::CoincidentVertices { first: *vs[i].0, second: *vs[j].0 });
            }
        }
    }
    for (&vid, p) in &d.vertices {
        for &eid in &good {
            let e = &d.edges[&eid];
            if e.tail == vid || e.head == vid {
                continue;
            }
            if !locate_on_polyline(&e.arc, p).is_empty() {
                v.push(Violation::VertexOnArc { vertex: vid, edge: eid, location: p.to_string() });
            }
        }
    }
    let boxes: BTreeMap<EdgeId, BBox> = good.iter().map(|&e| (e, BBox::of(&d.edges[&e].arc))).collect();
    let mut interior: BTreeMap<Point, BTreeSet<EdgeId>> = BTreeMap::new();
    for i in 0..good.len() {
        for j in i + 1..good.len() {
            let (a, b) = (good[i], good[j]);
            if !boxes[&a].overlaps(&boxes[&b]) {
                continue;
            }
            match events_for(d, a, b) {
                Ok(evs) => {
                    let (la, lb) = (d.edges[&a].arc.len(), d.edges[&b].arc.len());
                    for ev in evs {
                        if !ev.pos_a.is_endpoint(la) {
                            interior.entry(ev.location.clone()).or_default().insert(a);
                        }
                        if !ev.pos_b.is_endpoint(lb) {
                            interior.entry(ev.location.clone()).or_default().insert(b);
                        }
                    }
                }
                Err(_) => v.push(Violation::DegenerateOverlap { first: a, second: b }),
            }
        }
    }
    for (p, es) in interior {
        if es.len() >= 3 {
            v.push(Violation::TriplePoint { location: p.to_string(), edges: es.into_iter().collect() });
        }
    }
    ValidationReport { violations: v }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    CommonEndpoint,
    Crossing,
    Tangent,
    Disjoint,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClass {
    pub relation: Relation,
    pub crossings: usize,
    pub touches: usize,
    pub shared_endpoints: usize,
}

impl PairClass {
    pub fn total(&self) -> usize {
        self.crossings + self.touches + self.shared_endpoints
    }

    fn from_counts(crossings: usize, touches: usize, shared_endpoints: usize, shares_vertex: bool) -> PairClass {
        let cats = [shared_endpoints > 0 || shares_vertex, crossings > 0, touches > 0];
        let relation = match cats.iter().filter(|&&c| c).count() {
            0 => Relation::Disjoint,
            1 if cats[0] => Relation::CommonEndpoint,
            1 if cats[1] => Relation::Crossing,
            1 => Relation::Tangent,
            _ => Relation::Mixed,
        };
        PairClass { relation, crossings, touches, shared_endpoints }
    }
}

fn classify_unchecked(d: &Drawing, a: EdgeId, b: EdgeId) -> PairClass {
    let (ea, eb) = (&d.edges[&a], &d.edges[&b]);
    let evs = events_for(d, a, b).expect("validated drawing");
    let mut c = (0, 0, 0);
    for ev in &evs {
        match ev.kind {
            EventKind::ProperCrossing => c.0 += 1,
            EventKind::Touch => c.1 += 1,
            EventKind::SharedEndpoint => c.2 += 1,
        }
    }
    PairClass::from_counts(c.0, c.1, c.2, ea.shares_vertex(eb))
}

pub fn classify_pair(d: &Drawing, e1: EdgeId, e2: EdgeId) -> Result<PairClass, DrawingError> {
    if !d.edges.contains_key(&e1) {
        return Err(DrawingError::UnknownEdge(e1));
    }
    if !d.edges.contains_key(&e2) {
        return Err(DrawingError::UnknownEdge(e2));
    }
    if e1 == e2 {
        return Err(DrawingError::SameEdge);
    }
    Ok(classify_unchecked(d, e1, e2))
}

/// Classification of every unordered pair, keyed by (smaller id, larger id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTable {
    pub edges: Vec<EdgeId>,
    pub classes: BTreeMap<(EdgeId, EdgeId), PairClass>,
}

impl PairTable {
    pub fn get(&self, a: EdgeId, b: EdgeId) -> Option<&PairClass> {
        let k = if a < b { (a, b) } else { (b, a) };
        self.classes.get(&k)
    }

    pub fn tangent_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        self.classes.iter().filter(|(_, c)| c.relation == Relation::Tangent).map(|(&k, _)| k).collect()
    }
}

pub fn pair_table(d: &Drawing) -> PairTable {
    let edges: Vec<EdgeId> = d.edges.keys().copied().collect();
    let boxes: Vec<BBox> = edges.iter().map(|e| BBox::of(&d.edges[e].arc)).collect();
    let mut classes = BTreeMap::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = (edges[i], edges[j]);
            let c = if boxes[i].overlaps(&boxes[j]) {
                classify_unchecked(d, a, b)
            } else {
                PairClass::from_counts(0, 0, 0, d.edges[&a].shares_vertex(&d.edges[&b]))
            };
            classes.insert((a, b), c);
        }
    }
    PairTable { edges, classes }
}

pub fn is_simple(d: &Drawing) -> bool {
    pair_table(d).classes.values().all(|c| c.total() <= 1)
}

/// Graph on the edges of a drawing: adjacent iff the arcs share a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    pub nodes: Vec<EdgeId>,
    adj: Vec<Vec<bool>>,
}

impl IntersectionGraph {
    pub fn from_table(t: &PairTable) -> Self {
        let n = t.edges.len();
        let meets = |i: usize, j: usize| {
            i != j && t.get(t.edges[i], t.edges[j]).is_some_and(|c| c.relation != Relation::Disjoint)
        };
        let adj = (0..n).map(|i| (0..n).map(|j| meets(i, j)).collect()).collect();
        IntersectionGraph { nodes: t.edges.clone(), adj }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn adjacent_idx(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn adjacent(&self, a: EdgeId, b: EdgeId) -> bool {
        match (self.index(a), self.index(b)) {
            (Some(i), Some(j)) => self.adj[i][j],
            _ => false,
        }
    }

    pub fn index(&self, e: EdgeId) -> Option<usize> {
        self.nodes.binary_search(&e).ok()
    }

    pub fn edge_count(&self) -> usize {
        let n = self.len();
        (0..n).map(|i| (i + 1..n).filter(|&j| self.adj[i][j]).count()).sum()
    }

    /// Pairs of edges that are Disjoint in the drawing.
    pub fn complement_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.adj[i][j] {
                    out.push((self.nodes[i], self.nodes[j]));
                }
            }
        }
        out
    }
}

pub fn intersection_graph(d: &Drawing) -> IntersectionGraph {
    IntersectionGraph::from_table(&pair_table(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DrawingFlags {
    pub is_thrackle: bool,
    pub is_tangled_thrackle: bool,
}

pub fn flags_from_table(t: &PairTable) -> DrawingFlags {
    let tangled = t.classes.values().all(|c| c.total() == 1);
    let thrackle = tangled && t.classes.values().all(|c| c.touches == 0);
    DrawingFlags { is_thrackle: thrackle, is_tangled_thrackle: tangled }
}

pub fn classify_drawing(d: &Drawing) -> DrawingFlags {
    flags_from_table(&pair_table(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Drawing {
        let mut d = Drawing::new();
        for (i, (x, y)) in [(0, 0), (2, 0), (2, 2), (0, 2)].iter().enumerate() {
            d.add_vertex(VertexId(i as u32), Point::int(*x, *y)).unwrap();
        }
        let mut id = 0;
        for a in 0..4u32 {
            for b in a + 1..4 {
                d.add_segment_edge(EdgeId(id), VertexId(a), VertexId(b)).unwrap();
                id += 1;
            }
        }
        d
    }

    #[test]
    fn k4_is_valid_and_simple() {
        let d = k4();
        assert!(validate(&d).is_valid());
        assert!(is_simple(&d));
        let g = intersection_graph(&d);
        assert_eq!(g.edge_count(), 13);
        assert_eq!(g.complement_pairs().len(), 2);
    }

    #[test]
    fn triple_point_reported() {
        let mut d = Drawing::new();
        let pts = [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (1, 1)];
        for (i, (x, y)) in pts.iter().enumerate() {
            d.add_vertex(VertexId(i as u32), Point::int(*x, *y)).unwrap();
        }
        for k in 0..3u32 {
            d.add_segment_edge(EdgeId(k), VertexId(2 * k), VertexId(2 * k + 1)).unwrap();
        }
        let r = validate(&d);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::TriplePoint { .. })));
    }

    #[test]
    fn overlap_reported() {
        let mut d = Drawing::new();
        for (i, x) in [0, 2, 1, 3].iter().enumerate() {
            d.add_vertex(VertexId(i as u32), Point::int(*x, 0)).unwrap();
        }
        d.add_segment_edge(EdgeId(0), VertexId(0), VertexId(1)).unwrap();
        d.add_segment_edge(EdgeId(1), VertexId(2), VertexId(3)).unwrap();
        let r = validate(&d);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::DegenerateOverlap { .. })));
    }
}
