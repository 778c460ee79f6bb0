//! Pairwise-disjoint edge sets, disjoint bicliques and the closed-form bounds.

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bisection::odd_crossing_pairs_from_table;
use crate::drawing::{pair_table, Drawing, EdgeId, IntersectionGraph};
use crate::geometry::{int, to_f64};
use crate::serde_scalar;

/// Largest edge count handled by the exhaustive searches.
pub const EXACT_CAP: usize = 24;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("{m} edges exceed the exact-mode cap of {cap}")]
    TooLarge { m: usize, cap: usize },
    #[error("degree list required for this formula")]
    MissingDegrees,
    #[error("bad argument: {0}")]
    BadArgument(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundConstants {
    #[serde(with = "serde_scalar")]
    pub c1: BigRational,
    #[serde(with = "serde_scalar")]
    pub c2: BigRational,
    #[serde(with = "serde_scalar")]
    pub c3: BigRational,
    #[serde(with = "serde_scalar")]
    pub c4: BigRational,
    #[serde(with = "serde_scalar")]
    pub c5: BigRational,
    #[serde(with = "serde_scalar")]
    pub c6: BigRational,
    #[serde(with = "serde_scalar")]
    pub n0: BigRational,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants { c1: int(1), c2: int(1), c3: int(1), c4: int(1), c5: int(1), c6: int(1), n0: int(1) }
    }
}

impl BoundConstants {
    pub fn with_n0(n0: i64) -> Self {
        BoundConstants { n0: int(n0), ..Default::default() }
    }

    pub fn check(&self) -> Result<(), ExtremalError> {
        let all = [&self.c1, &self.c2, &self.c3, &self.c4, &self.c5, &self.c6, &self.n0];
        if all.iter().all(|c| c.is_positive()) {
            Ok(())
        } else {
            Err(ExtremalError::BadArgument("constants must be positive"))
        }
    }
}

/// Bit masks of the complement of the intersection graph (Disjoint pairs).
fn disjoint_masks(g: &IntersectionGraph) -> Vec<u32> {
    let n = g.len();
    (0..n)
        .map(|i| (0..n).filter(|&j| j != i && !g.adjacent_idx(i, j)).fold(0u32, |m, j| m | (1 << j)))
        .collect()
}

fn max_clique(adj: &[u32]) -> u32 {
    fn expand(adj: &[u32], cur: u32, size: u32, mut cand: u32, best: &mut (u32, u32)) {
        if cand == 0 {
            if size > best.0 {
                *best = (size, cur);
            }
            return;
        }
        while cand != 0 {
            if size + cand.count_ones() <= best.0 {
                return;
            }
            let v = cand.trailing_zeros();
            cand &= !(1 << v);
            expand(adj, cur | (1 << v), size + 1, cand & adj[v as usize], best);
        }
        if size > best.0 {
            *best = (size, cur);
        }
    }
    let mut best = (0, 0);
    let all = if adj.is_empty() { 0 } else { u32::MAX >> (32 - adj.len()) };
    expand(adj, 0, 0, all, &mut best);
    best.1
}

/// Edges of a largest pairwise-Disjoint set.
pub fn max_disjoint_set(d: &Drawing) -> Result<Vec<EdgeId>, ExtremalError> {
    if d.m() > EXACT_CAP {
        return Err(ExtremalError::TooLarge { m: d.m(), cap: EXACT_CAP });
    }
    let g = IntersectionGraph::from_table(&pair_table(d));
    Ok(max_disjoint_in(&g))
}

fn max_disjoint_in(g: &IntersectionGraph) -> Vec<EdgeId> {
    let mask = max_clique(&disjoint_masks(g));
    (0..g.len()).filter(|i| mask & (1 << i) != 0).map(|i| g.nodes[i]).collect()
}

pub fn max_pairwise_disjoint(d: &Drawing) -> Result<usize, ExtremalError> {
    max_disjoint_set(d).map(|s| s.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Biclique {
    pub s: Vec<EdgeId>,
    pub t: Vec<EdgeId>,
}

/// Sets S, T of size t with every edge of S Disjoint from every edge of T.
pub fn has_disjoint_biclique(d: &Drawing, t: usize) -> Result<Option<Biclique>, ExtremalError> {
    if d.m() > EXACT_CAP {
        return Err(ExtremalError::TooLarge { m: d.m(), cap: EXACT_CAP });
    }
    if t == 0 {
        return Err(ExtremalError::BadArgument("t must be at least 1"));
    }
    let g = IntersectionGraph::from_table(&pair_table(d));
    Ok(biclique_in(&g, t))
}

fn biclique_in(g: &IntersectionGraph, t: usize) -> Option<Biclique> {
    let adj = disjoint_masks(g);
    let n = g.len();
    let all = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    fn search(adj: &[u32], t: usize, start: usize, chosen: &mut Vec<usize>, common: u32) -> Option<u32> {
        if chosen.len() == t {
            return Some(common);
        }
        for v in start..adj.len() {
            let c = common & adj[v];
            if (c.count_ones() as usize) < t {
                continue;
            }
            chosen.push(v);
            if let Some(r) = search(adj, t, v + 1, chosen, c) {
                return Some(r);
            }
            chosen.pop();
        }
        None
    }
    let mut chosen = Vec::new();
    let common = search(&adj, t, 0, &mut chosen, all)?;
    let mut tt = Vec::new();
    let mut c = common;
    while tt.len() < t {
        let v = c.trailing_zeros() as usize;
        c &= !(1 << v);
        tt.push(g.nodes[v]);
    }
    Some(Biclique { s: chosen.iter().map(|&i| g.nodes[i]).collect(), t: tt })
}

/// Largest t admitting a disjoint t x t biclique.
pub fn biclique_number(d: &Drawing) -> Result<usize, ExtremalError> {
    if d.m() > EXACT_CAP {
        return Err(ExtremalError::TooLarge { m: d.m(), cap: EXACT_CAP });
    }
    let g = IntersectionGraph::from_table(&pair_table(d));
    Ok(biclique_number_in(&g))
}

fn biclique_number_in(g: &IntersectionGraph) -> usize {
    let mut t = 0;
    while 2 * (t + 1) <= g.len() && biclique_in(g, t + 1).is_some() {
        t += 1;
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// c1 n^(2-1/t)
    Kst,
    /// c3 n log^(4t-8) n
    PtLog,
    /// c2 log n sqrt(oddcr + sum d^2)
    Bisect { odd_crossings: u64 },
    /// c4 n^(1-1/2t) log^(8t-3) n + c4 log n sqrt(sum d^2)
    LemEq1,
    /// c5 n^(1-1/4t)
    CorEq2,
}

impl Formula {
    pub fn name(&self) -> &'static str {
        match self {
            Formula::Kst => "kst",
            Formula::PtLog => "pt-log",
            Formula::Bisect { .. } => "bisect",
            Formula::LemEq1 => "lem-eq1",
            Formula::CorEq2 => "cor-eq2",
        }
    }
}

pub fn bound_value(
    formula: Formula,
    n: u64,
    t: u64,
    k: &BoundConstants,
    degrees: Option<&[u64]>,
) -> Result<f64, ExtremalError> {
    if n < 2 {
        return Err(ExtremalError::BadArgument("n must be at least 2"));
    }
    if t < 1 {
        return Err(ExtremalError::BadArgument("t must be at least 1"));
    }
    let nf = n as f64;
    let tf = t as f64;
    let lg = nf.log2();
    let sq = |ds: &[u64]| ds.iter().map(|&d| (d as f64) * (d as f64)).sum::<f64>();
    Ok(match formula {
        Formula::Kst => to_f64(&k.c1) * nf.powf(2.0 - 1.0 / tf),
        Formula::PtLog => to_f64(&k.c3) * nf * lg.powf(4.0 * tf - 8.0),
        Formula::Bisect { odd_crossings } => {
            let ds = degrees.ok_or(ExtremalError::MissingDegrees)?;
            to_f64(&k.c2) * lg * (odd_crossings as f64 + sq(ds)).sqrt()
        }
        Formula::LemEq1 => {
            let ds = degrees.ok_or(ExtremalError::MissingDegrees)?;
            let c4 = to_f64(&k.c4);
            c4 * nf.powf(1.0 - 1.0 / (2.0 * tf)) * lg.powf(8.0 * tf - 3.0) + c4 * lg * sq(ds).sqrt()
        }
        Formula::CorEq2 => to_f64(&k.c5) * nf.powf(1.0 - 1.0 / (4.0 * tf)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub formula: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub n: usize,
    pub m: usize,
    pub ratio: f64,
    /// None when m exceeds the exact cap.
    pub max_disjoint: Option<usize>,
    pub biclique_t: Option<usize>,
    pub has_biclique_at_t: Option<bool>,
    pub exact_skipped: bool,
    pub odd_crossing_pairs: usize,
    pub bounds: Vec<BoundEntry>,
}

pub fn density_report(d: &Drawing, t: u64, k: &BoundConstants) -> DensityReport {
    let table = pair_table(d);
    let g = IntersectionGraph::from_table(&table);
    let skipped = d.m() > EXACT_CAP;
    let (max_disjoint, biclique_t, has_t) = if skipped {
        (None, None, None)
    } else {
        let bt = biclique_number_in(&g);
        (Some(max_disjoint_in(&g).len()), Some(bt), Some(t >= 1 && bt as u64 >= t))
    };
    let odd = odd_crossing_pairs_from_table(d, &table);
    let degs: Vec<u64> = d.degrees().values().map(|&x| x as u64).collect();
    let mut bounds = Vec::new();
    if d.n() >= 2 && t >= 1 {
        let fs = [Formula::Kst, Formula::PtLog, Formula::Bisect { odd_crossings: odd as u64 }, Formula::LemEq1, Formula::CorEq2];
        for f in fs {
            if let Ok(v) = bound_value(f, d.n() as u64, t, k, Some(&degs)) {
                bounds.push(BoundEntry { formula: f.name().to_string(), value: v });
            }
        }
    }
    DensityReport {
        n: d.n(),
        m: d.m(),
        ratio: if d.n() == 0 { 0.0 } else { d.m() as f64 / d.n() as f64 },
        max_disjoint,
        biclique_t,
        has_biclique_at_t: has_t,
        exact_skipped: skipped,
        odd_crossing_pairs: odd,
        bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_anchors() {
        let k = BoundConstants::default();
        let v = bound_value(Formula::Kst, 100, 2, &k, None).unwrap();
        assert!((v - 1000.0).abs() < 1e-9);
        let v = bound_value(Formula::PtLog, 1024, 2, &k, None).unwrap();
        assert!((v - 1024.0).abs() < 1e-9);
        let v = bound_value(Formula::CorEq2, 1 << 20, 1, &k, None).unwrap();
        assert!((v - 32768.0).abs() < 1e-6);
        assert_eq!(bound_value(Formula::LemEq1, 10, 1, &k, None), Err(ExtremalError::MissingDegrees));
    }

    #[test]
    fn clique_on_small_masks() {
        // triangle plus isolated vertex
        let adj = vec![0b0110, 0b0101, 0b0011, 0];
        assert_eq!(max_clique(&adj).count_ones(), 3);
    }
}
