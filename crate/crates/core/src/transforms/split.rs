use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::{require_simple, TransformError};
use crate::drawing::{intersection_graph, is_simple, validate, Drawing, EdgeId, IntersectionGraph, VertexId};
use crate::geometry::{angle_cmp, dist2_point_polyline, dist2_point_segment, int, pow2_below_sqrt, Point, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCertificate {
    /// Every input vertex with the vertices replacing it; untouched vertices map to themselves.
    pub vertex_map: BTreeMap<VertexId, Vec<VertexId>>,
    /// Edge bijection; edge ids are kept, so this is the identity.
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
}

const ATTEMPTS: usize = 8;

/// Splits every vertex of degree above `delta` into ceil(deg/delta) vertices
/// on a small circle, so that edges at different new vertices cross once.
pub fn split_vertices(d: &Drawing, delta: usize) -> Result<(Drawing, SplitCertificate), TransformError> {
    require_simple(d)?;
    let (n, m) = (d.n(), d.m());
    if delta == 0 || delta * n < 2 * m {
        return Err(TransformError::DeltaTooSmall { delta, m2: 2 * m, n });
    }
    let before = intersection_graph(d);
    let mut out = d.clone();
    let mut vertex_map: BTreeMap<VertexId, Vec<VertexId>> = d.vertices().keys().map(|&v| (v, vec![v])).collect();
    let heavy: Vec<VertexId> = d.vertices().keys().copied().filter(|&v| d.degree(v) > delta).collect();
    for v in heavy {
        let mut done = None;
        for attempt in 0..ATTEMPTS {
            let mut trial = out.clone();
            if let Some(ids) = split_one(&mut trial, v, delta, attempt) {
                if preserved(&before, &trial) {
                    done = Some((trial, ids));
                    break;
                }
            }
        }
        let (trial, ids) = done.ok_or(TransformError::SplitFailed(v))?;
        out = trial;
        vertex_map.insert(v, ids);
    }
    let edge_map = d.edges().keys().map(|&e| (e, e)).collect();
    Ok((out, SplitCertificate { vertex_map, edge_map }))
}

fn preserved(before: &IntersectionGraph, d: &Drawing) -> bool {
    if !validate(d).is_valid() || !is_simple(d) {
        return false;
    }
    let after = intersection_graph(d);
    after.nodes == before.nodes && (0..before.len()).all(|i| (0..before.len()).all(|j| before.adjacent_idx(i, j) == after.adjacent_idx(i, j)))
}

/// Rational point on the unit circle close to angle `theta`.
fn unit_point(theta: f64) -> Point {
    let mut th = theta.rem_euclid(2.0 * PI);
    let flip = th > PI / 2.0 && th < 3.0 * PI / 2.0;
    if flip {
        th -= PI;
    }
    let t = (th / 2.0).tan();
    let den = 1i64 << 30;
    let t = Scalar::new((t * den as f64).round().to_i64().unwrap_or(0).into(), den.into());
    let t2 = &t * &t;
    let q = Scalar::one() + &t2;
    let p = Point::new((Scalar::one() - &t2) / &q, (int(2) * &t) / &q);
    if flip {
        Point::new(-p.x, -p.y)
    } else {
        p
    }
}

fn angle(u: &Point) -> f64 {
    let (x, y) = u.to_f64();
    y.atan2(x).rem_euclid(2.0 * PI)
}

/// Directions listed in strictly increasing ccw order around the full turn.
fn cyclic_strict(dirs: &[Point]) -> bool {
    let k = dirs.len();
    let mut descents = 0;
    for i in 0..k {
        match angle_cmp(&dirs[i], &dirs[(i + 1) % k]) {
            Ordering::Less => {}
            Ordering::Greater => descents += 1,
            Ordering::Equal => return false,
        }
    }
    k < 2 || descents == 1
}

fn split_one(out: &mut Drawing, v: VertexId, delta: usize, attempt: usize) -> Option<Vec<VertexId>> {
    let p = out.vertex(v)?.clone();
    let inc = out.incident(v);
    // arcs oriented away from v
    let mut oriented: Vec<(EdgeId, Vec<Point>)> = inc
        .iter()
        .map(|&e| {
            let ed = out.edge(e).expect("incident edge");
            let mut a = ed.arc.clone();
            if ed.tail != v {
                a.reverse();
            }
            (e, a)
        })
        .collect();
    oriented.sort_by(|a, b| angle_cmp(&a.1[1].sub(&p), &b.1[1].sub(&p)));

    let mut d2: Option<Scalar> = None;
    let mut upd = |x: Scalar| {
        if d2.as_ref().is_none_or(|c| &x < c) {
            d2 = Some(x);
        }
    };
    for (&w, q) in out.vertices() {
        if w != v {
            upd(q.sub(&p).norm2());
        }
    }
    for (e, ed) in out.edges() {
        if !inc.contains(e) {
            upd(dist2_point_polyline(&p, &ed.arc));
        }
    }
    for (_, a) in &oriented {
        for i in 1..a.len() - 1 {
            upd(dist2_point_segment(&p, &a[i], &a[i + 1]));
        }
    }
    let rho = pow2_below_sqrt(&(d2? / int(8)));
    let half = &rho / int(2);

    let deg = oriented.len();
    let angles: Vec<f64> = oriented.iter().map(|(_, a)| angle(&a[1].sub(&p))).collect();
    // start right after the widest angular gap; the new vertices go in that gap
    let mut start = 0;
    let mut widest = -1.0;
    for j in 0..deg {
        let next = if j + 1 < deg { angles[j + 1] } else { angles[0] + 2.0 * PI };
        if next - angles[j] > widest {
            widest = next - angles[j];
            start = (j + 1) % deg;
        }
    }
    oriented.rotate_left(start);
    let mut angles_r = angles.clone();
    angles_r.rotate_left(start);
    let groups = deg.div_ceil(delta);
    let last = angles_r[deg - 1];
    let first = if angles_r[0] > last { angles_r[0] } else { angles_r[0] + 2.0 * PI };
    let gap = first - last;

    let cs: Vec<Point> = angles_r.iter().map(|&a| p.add(&unit_point(a).scale(&half))).collect();
    let jitter = 0.35 * (attempt as f64) / (ATTEMPTS as f64);
    let ps: Vec<Point> = (0..groups)
        .map(|i| {
            let wobble = ((i as f64 + 1.0) * 0.618034).fract() - 0.5;
            let f = (i as f64 + 1.0 + jitter * wobble) / (groups as f64 + 1.0);
            p.add(&unit_point(last + gap * f).scale(&half))
        })
        .collect();

    let dirs: Vec<Point> = cs.iter().chain(ps.iter()).map(|q| q.sub(&p)).collect();
    if !cyclic_strict(&dirs) {
        return None;
    }
    let mut bs = Vec::with_capacity(deg);
    for (j, (_, a)) in oriented.iter().enumerate() {
        let u = a[1].sub(&p);
        let s = &rho / u.x.abs().max(u.y.abs());
        let b = p.add(&u.scale(&s));
        // the connector from the circle to the box must leave the disk at once
        if !b.sub(&cs[j]).dot(&cs[j].sub(&p)).is_positive() {
            return None;
        }
        bs.push(b);
    }

    let mut ids = vec![v];
    let mut next = out.next_vertex_id();
    for _ in 1..groups {
        ids.push(next);
        next = VertexId(next.0 + 1);
    }
    let side = out.sides().get(&v).copied();
    for (i, id) in ids.iter().enumerate() {
        out.insert_vertex_raw(*id, ps[i].clone());
        if let Some(s) = side {
            out.set_side(*id, s).ok()?;
        }
    }
    for (j, (e, a)) in oriented.iter().enumerate() {
        let g = j / delta;
        let mut path = vec![ps[g].clone(), cs[j].clone(), bs[j].clone()];
        path.extend(a[1..].iter().cloned());
        let ed = out.edge(*e)?.clone();
        if ed.tail == v {
            out.replace_arc(*e, ids[g], ed.head, path);
        } else {
            path.reverse();
            out.replace_arc(*e, ed.tail, ids[g], path);
        }
    }
    Some(ids)
}
