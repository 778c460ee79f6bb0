//! Seeded instance generators. Every generator is a pure function of its
//! parameters and seed (ChaCha8 stream seeded with `seed_from_u64`).

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drawing::{Drawing, EdgeId, Side, VertexId};
use crate::geometry::{arc_intersections, check_polyline, locate_on_polyline, EventKind, Point};
use crate::io::FamiliesDocument;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("could not place the requested instance after many attempts")]
    Exhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// Odd cycle on a circle, edge i joining i and i + (n-1)/2.
    StarThrackle { n: usize },
    /// k vertical unit segments side by side.
    PlaneMatching { k: usize },
    /// Two far-apart groups of t pairwise crossing segments.
    TwoCluster { t: usize },
    /// Straight star K_{1,k}.
    Star { k: usize },
    /// Straight-line complete graph on n points in convex position.
    ConvexComplete { n: usize },
    /// Points in two horizontal bands, polyline edges between the bands.
    RandomBipartite { n: usize, m: usize },
    /// Straight-line graph with one vertex of the given degree.
    RandomHub { n: usize, m: usize, hub: usize },
    /// Shipped k + k tangency families drawn as one drawing.
    TangencyFixture { k: usize },
    /// Three edges, two of them tangent to the third.
    Tangled,
    /// Two edges touching once.
    TouchPair,
}

impl Family {
    pub fn names() -> &'static [&'static str] {
        &[
            "star-thrackle",
            "plane-matching",
            "two-cluster",
            "star",
            "convex-complete",
            "random-bipartite",
            "random-hub",
            "tangency-fixture",
            "tangled",
            "touch-pair",
        ]
    }

    /// Builds a family from its name and the generic size parameters.
    pub fn from_name(name: &str, n: usize, m: usize, k: usize) -> Result<Family, GenError> {
        Ok(match name {
            "star-thrackle" => Family::StarThrackle { n },
            "plane-matching" => Family::PlaneMatching { k },
            "two-cluster" => Family::TwoCluster { t: k },
            "star" => Family::Star { k },
            "convex-complete" => Family::ConvexComplete { n },
            "random-bipartite" => Family::RandomBipartite { n, m },
            "random-hub" => Family::RandomHub { n, m, hub: k },
            "tangency-fixture" => Family::TangencyFixture { k },
            "tangled" => Family::Tangled,
            "touch-pair" => Family::TouchPair,
            _ => return Err(GenError::BadParams(format!("unknown family {name}"))),
        })
    }
}

fn pt(x: i64, y: i64) -> Point {
    Point::int(x, y)
}

fn circle(n: usize, r: f64) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            pt((r * a.cos()).round() as i64, (r * a.sin()).round() as i64)
        })
        .collect()
}

pub fn generate(family: Family, seed: u64) -> Result<Drawing, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::StarThrackle { n } => {
            if n < 3 || n % 2 == 0 {
                return Err(GenError::BadParams("star-thrackle needs odd n >= 3".into()));
            }
            let pts = circle(n, 1000.0);
            let mut d = Drawing::new();
            for (i, p) in pts.into_iter().enumerate() {
                d.add_vertex(VertexId(i as u32), p).expect("fresh");
            }
            for i in 0..n {
                let j = (i + (n - 1) / 2) % n;
                d.add_segment_edge(EdgeId(i as u32), VertexId(i as u32), VertexId(j as u32)).expect("known");
            }
            Ok(d)
        }
        Family::PlaneMatching { k } => {
            if k == 0 {
                return Err(GenError::BadParams("plane-matching needs k >= 1".into()));
            }
            let mut d = Drawing::new();
            for i in 0..k {
                let (a, b) = (VertexId(2 * i as u32), VertexId(2 * i as u32 + 1));
                d.add_vertex(a, pt(3 * i as i64, 1)).expect("fresh");
                d.add_vertex(b, pt(3 * i as i64, 0)).expect("fresh");
                d.set_side(a, Side::A).expect("known");
                d.set_side(b, Side::B).expect("known");
                d.add_segment_edge(EdgeId(i as u32), a, b).expect("known");
            }
            Ok(d)
        }
        Family::TwoCluster { t } => {
            if t == 0 {
                return Err(GenError::BadParams("two-cluster needs t >= 1".into()));
            }
            let mut d = Drawing::new();
            let mut e = 0;
            for c in 0..2i64 {
                let off = 1000 * c;
                for i in 0..t as i64 {
                    let a = VertexId(e * 2);
                    let b = VertexId(e * 2 + 1);
                    d.add_vertex(a, pt(off + 10 * i, 0)).expect("fresh");
                    d.add_vertex(b, pt(off - 10 * i + i * i, 10)).expect("fresh");
                    d.add_segment_edge(EdgeId(e), a, b).expect("known");
                    e += 1;
                }
            }
            Ok(d)
        }
        Family::Star { k } => {
            if k == 0 {
                return Err(GenError::BadParams("star needs k >= 1".into()));
            }
            let mut d = Drawing::new();
            d.add_vertex(VertexId(0), pt(0, 0)).expect("fresh");
            for (i, p) in circle(k, 100.0).into_iter().enumerate() {
                d.add_vertex(VertexId(i as u32 + 1), p).expect("fresh");
                d.add_segment_edge(EdgeId(i as u32), VertexId(0), VertexId(i as u32 + 1)).expect("known");
            }
            Ok(d)
        }
        Family::ConvexComplete { n } => {
            if n < 2 {
                return Err(GenError::BadParams("convex-complete needs n >= 2".into()));
            }
            let mut d = Drawing::new();
            for (i, p) in circle(n, 1000.0).into_iter().enumerate() {
                d.add_vertex(VertexId(i as u32), p).expect("fresh");
            }
            let mut e = 0;
            for i in 0..n as u32 {
                for j in i + 1..n as u32 {
                    d.add_segment_edge(EdgeId(e), VertexId(i), VertexId(j)).expect("known");
                    e += 1;
                }
            }
            Ok(d)
        }
        Family::RandomBipartite { n, m } => random_bipartite(n, m, &mut rng),
        Family::RandomHub { n, m, hub } => random_hub(n, m, hub, &mut rng),
        Family::TangencyFixture { k } => {
            let f = tangency_fixture(k)?;
            families_drawing(&f.l1, &f.l2)
        }
        Family::Tangled => Ok(tangled()),
        Family::TouchPair => Ok(touch_pair()),
    }
}

/// The shipped k + k fixture; every arc of one family touches every arc of
/// the other exactly once.
pub fn tangency_fixture(k: usize) -> Result<FamiliesDocument, GenError> {
    let text = match k {
        1 => include_str!("../fixtures/tangency_k1.json"),
        2 => include_str!("../fixtures/tangency_k2.json"),
        3 => include_str!("../fixtures/tangency_k3.json"),
        4 => include_str!("../fixtures/tangency_k4.json"),
        _ => return Err(GenError::BadParams("tangency-fixture needs 1 <= k <= 4".into())),
    };
    Ok(serde_json::from_str(text).expect("shipped fixture parses"))
}

fn families_drawing(l1: &[Vec<Point>], l2: &[Vec<Point>]) -> Result<Drawing, GenError> {
    let mut d = Drawing::new();
    let mut v = 0u32;
    for (e, arc) in l1.iter().chain(l2.iter()).enumerate() {
        let (a, b) = (VertexId(v), VertexId(v + 1));
        d.add_vertex(a, arc[0].clone()).map_err(|e| GenError::BadParams(e.to_string()))?;
        d.add_vertex(b, arc[arc.len() - 1].clone()).map_err(|e| GenError::BadParams(e.to_string()))?;
        d.add_edge(EdgeId(e as u32), a, b, arc.clone()).map_err(|e| GenError::BadParams(e.to_string()))?;
        v += 2;
    }
    Ok(d)
}

/// e0 = A-B; e1 touches e0 from above; e2 shares D with e1 and touches e0 from below.
pub fn tangled() -> Drawing {
    let mut d = Drawing::new();
    for (i, (x, y)) in [(0, 0), (4, 0), (1, 2), (3, 2), (2, -1)].into_iter().enumerate() {
        d.add_vertex(VertexId(i as u32), pt(x, y)).expect("fresh");
    }
    d.add_segment_edge(EdgeId(0), VertexId(0), VertexId(1)).expect("known");
    d.add_edge(EdgeId(1), VertexId(2), VertexId(3), vec![pt(1, 2), pt(2, 0), pt(3, 2)]).expect("known");
    d.add_edge(EdgeId(2), VertexId(3), VertexId(4), vec![pt(3, 2), pt(5, 1), pt(5, -1), pt(3, 0), pt(2, -1)])
        .expect("known");
    d
}

/// Two edges meeting at one point of tangency.
pub fn touch_pair() -> Drawing {
    let mut d = Drawing::new();
    for (i, (x, y)) in [(0, 0), (2, 0), (0, 2), (2, 2)].into_iter().enumerate() {
        d.add_vertex(VertexId(i as u32), pt(x, y)).expect("fresh");
    }
    d.add_edge(EdgeId(0), VertexId(0), VertexId(1), vec![pt(0, 0), pt(1, 1), pt(2, 0)]).expect("known");
    d.add_edge(EdgeId(1), VertexId(2), VertexId(3), vec![pt(0, 2), pt(1, 1), pt(2, 2)]).expect("known");
    d
}

/// Whether `arc` from `tail` to `head` can join `d` keeping it valid, simple
/// and free of tangencies. Records the new crossing points.
fn fits(d: &Drawing, tail: VertexId, head: VertexId, arc: &[Point], crossings: &mut BTreeSet<Point>) -> bool {
    if check_polyline(arc).is_err() {
        return false;
    }
    for (w, p) in d.vertices() {
        let hits = locate_on_polyline(arc, p);
        let allowed = (*w == tail || *w == head) && hits.iter().all(|h| h.is_endpoint(arc.len()));
        if !hits.is_empty() && !allowed {
            return false;
        }
    }
    let mut fresh = Vec::new();
    for ed in d.edges().values() {
        if (ed.tail == tail && ed.head == head) || (ed.tail == head && ed.head == tail) {
            return false;
        }
        let Ok(evs) = arc_intersections(arc, &ed.arc) else { return false };
        let shares = ed.tail == tail || ed.tail == head || ed.head == tail || ed.head == head;
        if shares {
            if evs.len() != 1 || evs[0].kind != EventKind::SharedEndpoint {
                return false;
            }
        } else {
            if evs.len() > 1 {
                return false;
            }
            if let Some(ev) = evs.first() {
                if ev.kind != EventKind::ProperCrossing || crossings.contains(&ev.location) || fresh.contains(&ev.location) {
                    return false;
                }
                fresh.push(ev.location.clone());
            }
        }
    }
    crossings.extend(fresh);
    true
}

fn distinct_points(rng: &mut ChaCha8Rng, count: usize, xs: (i64, i64), ys: (i64, i64), taken: &mut BTreeSet<Point>) -> Vec<Point> {
    let mut out = Vec::new();
    while out.len() < count {
        let p = pt(rng.gen_range(xs.0..=xs.1), rng.gen_range(ys.0..=ys.1));
        if taken.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

fn random_bipartite(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Drawing, GenError> {
    if n < 4 {
        return Err(GenError::BadParams("random-bipartite needs n >= 4".into()));
    }
    let na = n / 2;
    let nb = n - na;
    if m > na * nb {
        return Err(GenError::BadParams(format!("m = {m} exceeds {na} x {nb}")));
    }
    let mut taken = BTreeSet::new();
    let top = distinct_points(rng, na, (0, 40), (24, 32), &mut taken);
    let bottom = distinct_points(rng, nb, (0, 40), (0, 8), &mut taken);
    let mut d = Drawing::new();
    for (i, p) in top.iter().chain(bottom.iter()).enumerate() {
        let v = VertexId(i as u32);
        d.add_vertex(v, p.clone()).expect("fresh");
        d.set_side(v, if i < na { Side::A } else { Side::B }).expect("known");
    }
    let mut pairs: Vec<(usize, usize)> = (0..na).flat_map(|a| (na..n).map(move |b| (a, b))).collect();
    pairs.shuffle(rng);
    let mut crossings = BTreeSet::new();
    let mut e = 0u32;
    for (a, b) in pairs {
        if e as usize == m {
            break;
        }
        let (va, vb) = (VertexId(a as u32), VertexId(b as u32));
        for _ in 0..20 {
            let (pa, pb) = (top[a].clone(), bottom[b - na].clone());
            let bends: usize = rng.gen_range(0..=2);
            let mut arc = vec![pa.clone()];
            // bends wander a few units off the straight segment
            for j in 1..=bends {
                let (x0, y0) = pa.to_f64();
                let (x1, y1) = pb.to_f64();
                let f = j as f64 / (bends as f64 + 1.0);
                let x = (x0 + f * (x1 - x0)).round() as i64 + rng.gen_range(-4..=4);
                let y = (y0 + f * (y1 - y0)).round() as i64 + rng.gen_range(-4..=4);
                arc.push(pt(x, y));
            }
            arc.push(pb);
            if fits(&d, va, vb, &arc, &mut crossings) {
                d.add_edge(EdgeId(e), va, vb, arc).expect("known");
                e += 1;
                break;
            }
        }
    }
    if (e as usize) < m {
        return Err(GenError::Exhausted);
    }
    Ok(d)
}

fn random_hub(n: usize, m: usize, hub: usize, rng: &mut ChaCha8Rng) -> Result<Drawing, GenError> {
    if n < 2 || hub >= n || m < hub {
        return Err(GenError::BadParams("random-hub needs n >= 2, hub < n and m >= hub".into()));
    }
    let mut taken = BTreeSet::new();
    taken.insert(pt(30, 30));
    let mut pts = vec![pt(30, 30)];
    pts.extend(distinct_points(rng, n - 1, (0, 60), (0, 60), &mut taken));
    let mut d = Drawing::new();
    for (i, p) in pts.iter().enumerate() {
        d.add_vertex(VertexId(i as u32), p.clone()).expect("fresh");
    }
    let mut crossings = BTreeSet::new();
    let mut e = 0u32;
    let mut others: Vec<usize> = (1..n).collect();
    others.shuffle(rng);
    for &j in &others {
        if e as usize == hub {
            break;
        }
        let arc = vec![pts[0].clone(), pts[j].clone()];
        if fits(&d, VertexId(0), VertexId(j as u32), &arc, &mut crossings) {
            d.add_edge(EdgeId(e), VertexId(0), VertexId(j as u32), arc).expect("known");
            e += 1;
        }
    }
    if (e as usize) < hub {
        return Err(GenError::Exhausted);
    }
    let mut pairs: Vec<(usize, usize)> = (1..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(rng);
    for (a, b) in pairs {
        if e as usize == m {
            break;
        }
        let arc = vec![pts[a].clone(), pts[b].clone()];
        if fits(&d, VertexId(a as u32), VertexId(b as u32), &arc, &mut crossings) {
            d.add_edge(EdgeId(e), VertexId(a as u32), VertexId(b as u32), arc).expect("known");
            e += 1;
        }
    }
    if (e as usize) < m {
        return Err(GenError::Exhausted);
    }
    Ok(d)
}

/// Random straight segments in general position: pairwise at most one
/// crossing, no shared or touching endpoints, no triple points.
pub fn random_segments(m: usize, seed: u64) -> Vec<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Drawing::new();
    let mut crossings = BTreeSet::new();
    let mut taken = BTreeSet::new();
    let mut out = Vec::new();
    let mut v = 0u32;
    while out.len() < m {
        let ends = distinct_points(&mut rng, 2, (0, 24), (0, 24), &mut taken);
        let arc = vec![ends[0].clone(), ends[1].clone()];
        let (a, b) = (VertexId(v), VertexId(v + 1));
        let mut trial = d.clone();
        trial.add_vertex(a, ends[0].clone()).expect("fresh");
        trial.add_vertex(b, ends[1].clone()).expect("fresh");
        // existing arcs must also avoid the new endpoints
        let clear = d.edges().values().all(|ed| {
            locate_on_polyline(&ed.arc, &ends[0]).is_empty() && locate_on_polyline(&ed.arc, &ends[1]).is_empty()
        });
        if clear && fits(&trial, a, b, &arc, &mut crossings) {
            trial.add_edge(EdgeId(out.len() as u32), a, b, arc.clone()).expect("known");
            d = trial;
            out.push(arc);
            v += 2;
        } else {
            taken.remove(&ends[0]);
            taken.remove(&ends[1]);
        }
    }
    out
}

/// Random simple graph on `n` vertices given as an edge list.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::{classify_drawing, validate};

    #[test]
    fn fixtures_valid() {
        for f in [Family::StarThrackle { n: 5 }, Family::Tangled, Family::TouchPair, Family::TwoCluster { t: 2 }] {
            let d = generate(f, 0).unwrap();
            assert!(validate(&d).is_valid(), "{f:?}");
        }
        assert!(classify_drawing(&generate(Family::StarThrackle { n: 5 }, 0).unwrap()).is_thrackle);
        let t = classify_drawing(&tangled());
        assert!(t.is_tangled_thrackle && !t.is_thrackle);
    }
}
