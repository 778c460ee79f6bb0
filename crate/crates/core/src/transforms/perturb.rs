use num_traits::{One, Signed, Zero};

use super::{require_valid, TransformError};
use crate::drawing::{pair_table, validate, Drawing, EdgeId, PairTable, Relation};
use crate::geometry::{dist2_point_segment, events_unchecked, germs, on_segment, int, pow2_below_sqrt, ArcPosition, EventKind, Point, Scalar};

const RETRIES: usize = 30;

/// Pulls one arc off each point of tangency by cutting the corner at the
/// bend, so every tangent pair becomes disjoint.
pub fn perturb_tangencies(d: &Drawing) -> Result<Drawing, TransformError> {
    require_valid(d)?;
    let table = pair_table(d);
    if let Some((&(a, b), _)) = table.classes.iter().find(|(_, c)| c.total() > 1) {
        return Err(TransformError::TooManyContacts(a, b));
    }
    let mut out = d.clone();
    for (e, f) in table.tangent_pairs() {
        retract(&mut out, e, f)?;
        if !consistent(&table, &pair_table(&out), &out, e, f) {
            return Err(TransformError::PerturbationCollision(e, f));
        }
    }
    Ok(out)
}

/// Pairs other than (e, f) keep their class; (e, f) becomes disjoint.
fn consistent(orig: &PairTable, now: &PairTable, out: &Drawing, e: EdgeId, f: EdgeId) -> bool {
    if !validate(out).is_valid() {
        return false;
    }
    now.classes.iter().all(|(&(a, b), c)| {
        let o = orig.classes[&(a, b)];
        if (a, b) == (e, f) {
            c.relation == Relation::Disjoint
        } else if o.relation == Relation::Tangent {
            // not yet processed pairs are unchanged; processed ones are disjoint
            *c == o || c.relation == Relation::Disjoint
        } else {
            *c == o
        }
    })
}

fn convex_cone_contains(a: &Point, b: &Point, q: &Point) -> bool {
    // closed cone spanned by a and b, assuming a x b != 0
    let s = a.cross(b);
    if s.is_positive() {
        !a.cross(q).is_negative() && !q.cross(b).is_negative()
    } else {
        !b.cross(q).is_negative() && !q.cross(a).is_negative()
    }
}

fn retract(out: &mut Drawing, e: EdgeId, f: EdgeId) -> Result<(), TransformError> {
    let (ae, af) = (out.edge(e).expect("edge").arc.clone(), out.edge(f).expect("edge").arc.clone());
    let ev = events_unchecked(&ae, &af)
        .map_err(|err| TransformError::Verification(err.to_string()))?
        .into_iter()
        .find(|ev| ev.kind == EventKind::Touch)
        .ok_or_else(|| TransformError::Verification(format!("{e} and {f} have no touch point")))?;
    let p = ev.location.clone();
    // the arc to move: bent at p, with a convex corner avoiding the other arc
    let pick = |arc: &[Point], pos: ArcPosition, other: &[Point], opos: ArcPosition| -> Option<usize> {
        let ArcPosition::Vertex(k) = pos else { return None };
        if k == 0 || k + 1 >= arc.len() {
            return None;
        }
        let (u, w) = (arc[k - 1].sub(&p), arc[k + 1].sub(&p));
        if u.cross(&w).is_zero() {
            return None;
        }
        let og = germs(other, opos, &p);
        if og.iter().any(|g| convex_cone_contains(&u, &w, g)) {
            return None;
        }
        Some(k)
    };
    let (target, k) = if let Some(k) = pick(&ae, ev.pos_a, &af, ev.pos_b) {
        (e, k)
    } else if let Some(k) = pick(&af, ev.pos_b, &ae, ev.pos_a) {
        (f, k)
    } else {
        return Err(TransformError::Verification(format!("no convex corner at the touch of {e} and {f}")));
    };
    let arc = out.edge(target).expect("edge").arc.clone();
    // clearance from p to everything not passing through p
    let mut r2: Option<Scalar> = None;
    let mut upd = |x: Scalar| {
        if r2.as_ref().is_none_or(|c| &x < c) {
            r2 = Some(x);
        }
    };
    for q in out.vertices().values() {
        upd(q.sub(&p).norm2());
    }
    for ed in out.edges().values() {
        for w in ed.arc.windows(2) {
            if !on_segment(&w[0], &w[1], &p) {
                upd(dist2_point_segment(&p, &w[0], &w[1]));
            }
        }
    }
    let r2 = r2.expect("drawing has vertices") / int(4);
    let (u, w) = (arc[k - 1].sub(&p), arc[k + 1].sub(&p));
    let longest = if u.norm2() > w.norm2() { u.norm2() } else { w.norm2() };
    let mut s = pow2_below_sqrt(&(r2 / longest));
    if s >= Scalar::one() {
        s = Scalar::one() / int(2);
    }
    let ed = out.edge(target).expect("edge").clone();
    for _ in 0..RETRIES {
        let q_in = p.add(&u.scale(&s));
        let q_out = p.add(&w.scale(&s));
        let mut new_arc = arc[..k].to_vec();
        new_arc.push(q_in);
        new_arc.push(q_out);
        new_arc.extend(arc[k + 1..].iter().cloned());
        let mut trial = out.clone();
        trial.replace_arc(target, ed.tail, ed.head, new_arc);
        let other = if target == e { f } else { e };
        let fresh = events_unchecked(&trial.edge(target).expect("edge").arc, &trial.edge(other).expect("edge").arc);
        if matches!(fresh, Ok(ref v) if v.is_empty()) && validate(&trial).is_valid() {
            *out = trial;
            return Ok(());
        }
        s /= int(2);
    }
    Err(TransformError::PerturbationCollision(e, f))
}
