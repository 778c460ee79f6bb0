//! Tangency graphs between two pseudo-segment families, and the halving
//! refinement that places each family in a single face of the other.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{build_arrangement, samples_off, Arrangement, ArrangementError};
use crate::geometry::{events_unchecked, param_on, ArcPosition, EventKind, Point, Scalar};
use crate::serde_scalar;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TangencyError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("arc {first} of the first family crosses arc {second} of the second")]
    CrossFamilyCrossing { first: usize, second: usize },
    #[error("family {family} does not lie in a single face of the other family")]
    NotSingleFace { family: u8 },
    #[error("arc {first} of the first family is not tangent to arc {second} of the second")]
    NotAllTangent { first: usize, second: usize },
    #[error("families need at least 4 arcs each")]
    TooFew,
    #[error("no choice of splitting arc yields single-face subfamilies")]
    NoRefinement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HVertex {
    /// 1 or 2.
    pub family: u8,
    /// Subdivision edge in that family's arrangement.
    pub sub_edge: usize,
    pub arc: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HEdge {
    pub u: usize,
    pub v: usize,
    /// The tangency the edge is drawn through.
    #[serde(with = "serde_scalar::point")]
    pub via: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangencyGraph {
    pub vertices: Vec<HVertex>,
    pub edges: Vec<HEdge>,
    /// Face of the first family's arrangement holding the second family.
    pub face1: usize,
    /// Face of the second family's arrangement holding the first family.
    pub face2: usize,
}

impl TangencyGraph {
    /// |E| <= 3|V| - 6 when |V| >= 3.
    pub fn satisfies_planarity_bound(&self) -> bool {
        let v = self.vertices.len();
        v < 3 || self.edges.len() + 6 <= 3 * v
    }
}

/// Face of `arr` containing every sample of `family` off the arrangement.
pub fn common_face(arr: &Arrangement, family: &[Vec<Point>]) -> Option<usize> {
    let mut face = None;
    for arc in family {
        for q in samples_off(arc, &arr.arcs) {
            let f = arr.locate(&q)?;
            match face {
                None => face = Some(f),
                Some(g) if g != f => return None,
                _ => {}
            }
        }
    }
    face
}

/// Touch points between the families; crossings are rejected.
fn cross_tangencies(l1: &[Vec<Point>], l2: &[Vec<Point>]) -> Result<Vec<(usize, usize, Point)>, TangencyError> {
    let mut out = Vec::new();
    for (i, a) in l1.iter().enumerate() {
        for (j, b) in l2.iter().enumerate() {
            let evs = events_unchecked(a, b).map_err(|_| ArrangementError::DegenerateOverlap { first: i, second: j })?;
            for ev in evs {
                match ev.kind {
                    EventKind::ProperCrossing => return Err(TangencyError::CrossFamilyCrossing { first: i, second: j }),
                    EventKind::Touch => out.push((i, j, ev.location)),
                    EventKind::SharedEndpoint => {}
                }
            }
        }
    }
    Ok(out)
}

pub fn tangency_graph(l1: &[Vec<Point>], l2: &[Vec<Point>]) -> Result<TangencyGraph, TangencyError> {
    let all: Vec<Vec<Point>> = l1.iter().chain(l2.iter()).cloned().collect();
    build_arrangement(&all)?;
    let touches = cross_tangencies(l1, l2)?;
    let a1 = build_arrangement(l1)?;
    let a2 = build_arrangement(l2)?;
    let face1 = common_face(&a1, l2).ok_or(TangencyError::NotSingleFace { family: 2 })?;
    let face2 = common_face(&a2, l1).ok_or(TangencyError::NotSingleFace { family: 1 })?;
    let mut vertices = Vec::new();
    let mut index1 = vec![usize::MAX; a1.e()];
    let mut index2 = vec![usize::MAX; a2.e()];
    for &e in &a1.faces[face1].edges {
        index1[e] = vertices.len();
        vertices.push(HVertex { family: 1, sub_edge: e, arc: a1.edges[e].arc });
    }
    for &e in &a2.faces[face2].edges {
        index2[e] = vertices.len();
        vertices.push(HVertex { family: 2, sub_edge: e, arc: a2.edges[e].arc });
    }
    let mut edges = Vec::new();
    for (_, _, p) in touches {
        let e1 = a1.edge_containing(&p).ok_or(TangencyError::NotSingleFace { family: 1 })?;
        let e2 = a2.edge_containing(&p).ok_or(TangencyError::NotSingleFace { family: 2 })?;
        let (u, v) = (index1[e1], index2[e2]);
        if u == usize::MAX || v == usize::MAX {
            return Err(TangencyError::NotSingleFace { family: if u == usize::MAX { 1 } else { 2 } });
        }
        edges.push(HEdge { u, v, via: p });
    }
    Ok(TangencyGraph { vertices, edges, face1, face2 })
}

/// Arcs of `others` meeting `arc`, with the position along `arc` of the contact.
fn contacts_along(arc: &[Point], others: &[(usize, &Vec<Point>)]) -> Vec<((usize, Scalar), usize)> {
    let mut out = Vec::new();
    for &(id, o) in others {
        if let Ok(evs) = events_unchecked(arc, o) {
            for ev in evs {
                out.push((position_key(arc, ev.pos_a, &ev.location), id));
            }
        }
    }
    out.sort();
    out
}

fn position_key(arc: &[Point], pos: ArcPosition, q: &Point) -> (usize, Scalar) {
    use num_traits::{One, Zero};
    match pos {
        ArcPosition::Vertex(k) if k + 1 == arc.len() => (k - 1, Scalar::one()),
        ArcPosition::Vertex(k) => (k, Scalar::zero()),
        ArcPosition::Segment(k) => (k, param_on(&arc[k], &arc[k + 1], q)),
    }
}

/// One halving step. `ls` holds the arcs to split along, `lt` the arcs tangent
/// to all of them. Returns candidate pairs (subset of ls, subset of lt), each
/// of size `half`, in a fixed order.
fn halving_candidates(
    ls: &[(usize, &Vec<Point>)],
    lt: &[(usize, &Vec<Point>)],
    half: usize,
) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for (li, &(lid, larc)) in ls.iter().enumerate() {
        let others: Vec<(usize, &Vec<Point>)> = ls.iter().enumerate().filter(|&(k, _)| k != li).map(|(_, &x)| x).collect();
        let hits = contacts_along(larc, &others);
        let s = hits.len();
        let h = s.div_ceil(2);
        let split_key = if h == 0 { None } else { Some(hits[h - 1].0.clone()) };
        let touches = contacts_along(larc, lt);
        for first_half in [true, false] {
            let in_half = |k: &(usize, Scalar)| match &split_key {
                None => !first_half,
                Some(sk) => (k <= sk) == first_half,
            };
            let tangent: Vec<usize> = touches.iter().filter(|(k, _)| in_half(k)).map(|&(_, id)| id).collect();
            let hit: BTreeSet<usize> = hits.iter().filter(|(k, _)| in_half(k)).map(|&(_, id)| id).collect();
            let free: Vec<usize> = ls.iter().map(|&(id, _)| id).filter(|id| *id != lid && !hit.contains(id)).collect();
            if tangent.len() >= half && free.len() >= half {
                out.push((free[..half].to_vec(), tangent[..half].to_vec()));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refinement {
    /// Indices into the first input family.
    pub first: Vec<usize>,
    /// Indices into the second input family.
    pub second: Vec<usize>,
}

/// Checks that every arc of each family lies in one face of the other.
pub fn mutually_single_face(l1: &[Vec<Point>], l2: &[Vec<Point>]) -> Result<bool, ArrangementError> {
    let a1 = build_arrangement(l1)?;
    let a2 = build_arrangement(l2)?;
    Ok(common_face(&a1, l2).is_some() && common_face(&a2, l1).is_some())
}

pub fn refine_to_single_face(l1: &[Vec<Point>], l2: &[Vec<Point>]) -> Result<Refinement, TangencyError> {
    for (i, a) in l1.iter().enumerate() {
        for (j, b) in l2.iter().enumerate() {
            let evs = events_unchecked(a, b).map_err(|_| TangencyError::NotAllTangent { first: i, second: j })?;
            if evs.len() != 1 || evs[0].kind != EventKind::Touch {
                return Err(TangencyError::NotAllTangent { first: i, second: j });
            }
        }
    }
    let size = l1.len().min(l2.len()) / 4 * 4;
    if size == 0 {
        return Err(TangencyError::TooFew);
    }
    if size != l1.len() || size != l2.len() {
        log::warn!("family sizes {} and {} rounded down to {}", l1.len(), l2.len(), size);
    }
    let q = size / 4;
    let f1: Vec<(usize, &Vec<Point>)> = l1.iter().take(size).enumerate().collect();
    let f2: Vec<(usize, &Vec<Point>)> = l2.iter().take(size).enumerate().collect();
    // split along the first family, keep arcs of the second tangent to the half
    for (l1p, l2p) in halving_candidates(&f1, &f2, 2 * q) {
        let g2: Vec<(usize, &Vec<Point>)> = l2p.iter().map(|&i| (i, &l2[i])).collect();
        let g1: Vec<(usize, &Vec<Point>)> = l1p.iter().map(|&i| (i, &l1[i])).collect();
        for (l2pp, l1pp) in halving_candidates(&g2, &g1, q) {
            let a: Vec<Vec<Point>> = l1pp.iter().map(|&i| l1[i].clone()).collect();
            let b: Vec<Vec<Point>> = l2pp.iter().map(|&i| l2[i].clone()).collect();
            if mutually_single_face(&a, &b)? {
                return Ok(Refinement { first: l1pp, second: l2pp });
            }
        }
    }
    Err(TangencyError::NoRefinement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::FamiliesDocument;

    fn fixture(k: usize) -> FamiliesDocument {
        let text = match k {
            1 => include_str!("../fixtures/tangency_k1.json"),
            2 => include_str!("../fixtures/tangency_k2.json"),
            3 => include_str!("../fixtures/tangency_k3.json"),
            _ => include_str!("../fixtures/tangency_k4.json"),
        };
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn fixtures_are_fully_tangent() {
        for k in 1..=4 {
            let f = fixture(k);
            let h = tangency_graph(&f.l1, &f.l2).unwrap();
            assert_eq!(h.edges.len(), k * k, "k = {k}");
            assert!(h.satisfies_planarity_bound());
        }
    }

    #[test]
    fn refine_four() {
        let f = fixture(4);
        let r = refine_to_single_face(&f.l1, &f.l2).unwrap();
        assert_eq!((r.first.len(), r.second.len()), (1, 1));
        let f3 = fixture(3);
        assert_eq!(refine_to_single_face(&f3.l1, &f3.l2), Err(TangencyError::TooFew));
    }
}
