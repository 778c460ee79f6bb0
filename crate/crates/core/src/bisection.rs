//! Odd-crossing pair counts and balanced bisection width.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drawing::{pair_table, Drawing, PairTable, VertexId};

/// Largest vertex count for exhaustive bisection.
pub const EXACT_BISECTION_CAP: usize = 20;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BisectionError {
    #[error("{n} vertices exceed the exact-mode cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("a balanced partition needs at least 2 vertices")]
    TooSmall,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl AbstractGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, BisectionError> {
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(BisectionError::InvalidGraph(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(BisectionError::InvalidGraph(format!("loop at {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(BisectionError::InvalidGraph(format!("repeated edge ({a},{b})")));
            }
        }
        Ok(AbstractGraph { n, edges })
    }

    /// Underlying graph of a drawing, with the vertex order used for indices.
    pub fn from_drawing(d: &Drawing) -> (AbstractGraph, Vec<VertexId>) {
        let ids: Vec<VertexId> = d.vertices().keys().copied().collect();
        let idx = |v: VertexId| ids.binary_search(&v).expect("edge endpoint is a vertex");
        let edges = d.edges().values().map(|e| (idx(e.tail), idx(e.head))).collect();
        (AbstractGraph { n: ids.len(), edges }, ids)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn cut_size(&self, side: &[bool]) -> usize {
        self.edges.iter().filter(|&&(a, b)| side[a] != side[b]).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BisectionMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisectionResult {
    pub width: usize,
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
    pub mode: BisectionMode,
}

/// Allowed part sizes: ceil(n/3) ..= floor(2n/3).
pub fn balance_bounds(n: usize) -> (usize, usize) {
    (n.div_ceil(3), 2 * n / 3)
}

fn result_from_side(g: &AbstractGraph, side: &[bool], mode: BisectionMode) -> BisectionResult {
    let part1: Vec<usize> = (0..g.n).filter(|&v| !side[v]).collect();
    let part2: Vec<usize> = (0..g.n).filter(|&v| side[v]).collect();
    BisectionResult { width: g.cut_size(side), part1, part2, mode }
}

pub fn bisection_width_exact(g: &AbstractGraph) -> Result<BisectionResult, BisectionError> {
    let n = g.n;
    if n > EXACT_BISECTION_CAP {
        return Err(BisectionError::TooLarge { n, cap: EXACT_BISECTION_CAP });
    }
    if n < 2 {
        return Err(BisectionError::TooSmall);
    }
    let (lo, hi) = balance_bounds(n);
    let mut adj = vec![0u32; n];
    for &(a, b) in &g.edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best: Option<(usize, u32)> = None;
    // part1 always holds vertex 0; masks visited in increasing order
    for rest in 0..(1u32 << (n - 1)) {
        let mask = (rest << 1) | 1;
        let k = mask.count_ones() as usize;
        if k < lo || k > hi || n - k < lo || n - k > hi {
            continue;
        }
        let mut cut = 0usize;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            cut += (adj[v] & !mask & full).count_ones() as usize;
        }
        if best.is_none_or(|(b, _)| cut < b) {
            best = Some((cut, mask));
        }
    }
    let (_, mask) = best.expect("n >= 2 admits a balanced partition");
    let side: Vec<bool> = (0..n).map(|v| mask & (1 << v) == 0).collect();
    Ok(result_from_side(g, &side, BisectionMode::Exact))
}

/// Puts vertex 0 on side `false` so equal partitions compare equal.
fn canonical(side: &[bool]) -> Vec<bool> {
    if side.first() == Some(&true) {
        side.iter().map(|s| !s).collect()
    } else {
        side.to_vec()
    }
}

fn descend(g: &AbstractGraph, adj: &[Vec<usize>], side: &mut [bool], lo: usize, hi: usize) {
    let n = g.n;
    // gain[v]: cut reduction when v switches sides
    let gain = |side: &[bool], v: usize| -> i64 {
        let mut ext = 0i64;
        let mut int = 0i64;
        for &u in &adj[v] {
            if side[u] != side[v] {
                ext += 1;
            } else {
                int += 1;
            }
        }
        ext - int
    };
    loop {
        let ones = side.iter().filter(|&&s| s).count();
        let mut best: Option<(i64, usize, Option<usize>)> = None;
        for v in 0..n {
            let (new1, new0) = if side[v] { (ones - 1, n - ones + 1) } else { (ones + 1, n - ones - 1) };
            if new1 >= lo && new1 <= hi && new0 >= lo && new0 <= hi {
                let gv = gain(side, v);
                if gv > 0 && best.is_none_or(|b| gv > b.0) {
                    best = Some((gv, v, None));
                }
            }
        }
        for u in 0..n {
            if side[u] {
                continue;
            }
            let gu = gain(side, u);
            for w in 0..n {
                if !side[w] {
                    continue;
                }
                let linked = adj[u].contains(&w) as i64;
                let gw = gain(side, w);
                let total = gu + gw - 2 * linked;
                if total > 0 && best.is_none_or(|b| total > b.0) {
                    best = Some((total, u, Some(w)));
                }
            }
        }
        match best {
            None => return,
            Some((_, v, w)) => {
                side[v] = !side[v];
                if let Some(w) = w {
                    side[w] = !side[w];
                }
            }
        }
    }
}

/// Multistart local search. Deterministic per seed; the result is the
/// lexicographically least best partition found.
pub fn bisection_width_heuristic(g: &AbstractGraph, seed: u64) -> Result<BisectionResult, BisectionError> {
    let n = g.n;
    if n < 2 {
        return Err(BisectionError::TooSmall);
    }
    let (lo, hi) = balance_bounds(n);
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &g.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let restarts = 4 + n.min(28);
    let mut best: Option<(usize, Vec<bool>)> = None;
    for r in 0..restarts {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let k = if r % 2 == 0 { n / 2 } else { rng.gen_range(lo..=hi) };
        let mut side = vec![false; n];
        if r % 4 == 3 {
            grow_bfs(&adj, &order, k, &mut side);
        } else {
            for &v in order.iter().take(k) {
                side[v] = true;
            }
        }
        descend(g, &adj, &mut side, lo, hi);
        let cut = g.cut_size(&side);
        let c = canonical(&side);
        let better = match &best {
            None => true,
            Some((bc, bs)) => cut < *bc || (cut == *bc && c < *bs),
        };
        if better {
            best = Some((cut, c));
        }
    }
    let (_, side) = best.expect("at least one restart");
    Ok(result_from_side(g, &side, BisectionMode::Heuristic))
}

/// Breadth-first region of `k` vertices seeded from the order's first vertex.
fn grow_bfs(adj: &[Vec<usize>], order: &[usize], k: usize, side: &mut [bool]) {
    let mut taken = 0;
    let mut queue = std::collections::VecDeque::new();
    for &s in order {
        if taken == k {
            break;
        }
        if side[s] {
            continue;
        }
        queue.push_back(s);
        side[s] = true;
        taken += 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if taken < k && !side[u] {
                    side[u] = true;
                    taken += 1;
                    queue.push_back(u);
                }
            }
        }
    }
}

/// Independent pairs crossing an odd number of times.
pub fn odd_crossing_pairs(d: &Drawing) -> usize {
    odd_crossing_pairs_from_table(d, &pair_table(d))
}

pub(crate) fn odd_crossing_pairs_from_table(d: &Drawing, t: &PairTable) -> usize {
    t.classes
        .iter()
        .filter(|((a, b), c)| {
            let (ea, eb) = (&d.edges()[a], &d.edges()[b]);
            !ea.shares_vertex(eb) && c.crossings % 2 == 1
        })
        .count()
}

/// Chooses the exact search when small enough.
pub fn bisect(g: &AbstractGraph, seed: u64) -> Result<BisectionResult, BisectionError> {
    if g.n <= EXACT_BISECTION_CAP {
        bisection_width_exact(g)
    } else {
        bisection_width_heuristic(g, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let p4 = AbstractGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = bisection_width_exact(&p4).unwrap();
        assert_eq!(r.width, 1);
        assert_eq!(r.part1, vec![0, 1]);
        let c4 = AbstractGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(bisection_width_exact(&c4).unwrap().width, 2);
        let k4 = AbstractGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(bisection_width_exact(&k4).unwrap().width, 4);
        assert_eq!(bisection_width_heuristic(&k4, 7).unwrap().width, 4);
        let e6 = AbstractGraph::new(6, vec![]).unwrap();
        assert_eq!(bisection_width_heuristic(&e6, 0).unwrap().width, 0);
    }

    #[test]
    fn balance() {
        assert_eq!(balance_bounds(2), (1, 1));
        assert_eq!(balance_bounds(7), (3, 4));
        assert_eq!(balance_bounds(9), (3, 6));
        let g = AbstractGraph::new(1, vec![]).unwrap();
        assert_eq!(bisection_width_exact(&g), Err(BisectionError::TooSmall));
    }
}
