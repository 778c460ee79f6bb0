use std::collections::BTreeSet;

use serde::Serialize;

use super::{require_simple, split_vertices, TransformError};
use crate::bisection::{balance_bounds, bisect, AbstractGraph, BisectionMode};
use crate::drawing::{Drawing, VertexId};
use crate::extremal::{bound_value, BoundConstants, Formula};
use crate::geometry::int;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionNode {
    /// Vertex set of the node before splitting.
    pub vertices: Vec<VertexId>,
    pub n: usize,
    pub m: usize,
    pub leaf: bool,
    pub delta: Option<usize>,
    /// Vertices added by splitting.
    pub split_count: usize,
    pub n_split: usize,
    pub cut: Option<usize>,
    pub mode: Option<BisectionMode>,
    /// c5 n^(1-1/4t) at the post-split vertex count.
    pub cut_bound: Option<f64>,
    pub children: Vec<DecompositionNode>,
}

impl DecompositionNode {
    fn walk<'a>(&'a self, out: &mut Vec<&'a DecompositionNode>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionTree {
    pub t: u64,
    pub seed: u64,
    pub root: DecompositionNode,
}

impl DecompositionTree {
    pub fn nodes(&self) -> Vec<&DecompositionNode> {
        let mut v = Vec::new();
        self.root.walk(&mut v);
        v
    }

    pub fn leaf_edges(&self) -> usize {
        self.nodes().iter().filter(|n| n.leaf).map(|n| n.m).sum()
    }

    pub fn cut_total(&self) -> usize {
        self.nodes().iter().filter_map(|n| n.cut).sum()
    }

    /// Leaf edges plus cut edges give back the root edge count.
    pub fn conserves_edges(&self) -> bool {
        self.leaf_edges() + self.cut_total() == self.root.m
    }

    /// Child sizes lie within a third and two thirds of the split node.
    pub fn balanced(&self) -> bool {
        self.nodes().iter().filter(|n| !n.leaf).all(|n| {
            let (lo, hi) = balance_bounds(n.n_split);
            n.children.iter().all(|c| c.n >= lo && c.n <= hi)
        })
    }

    pub fn depth(&self) -> usize {
        fn d(n: &DecompositionNode) -> usize {
            n.children.iter().map(d).max().map_or(0, |x| x + 1)
        }
        d(&self.root)
    }
}

/// Smallest integer whose fifth power reaches n.
fn fifth_root_ceil(n: usize) -> usize {
    let mut r = 1usize;
    while r.pow(5) < n {
        r += 1;
    }
    r
}

/// Degree cap at a node: the fifth-root cap, raised when needed so that the
/// split drawing has fewer than 3n/2 vertices and both halves shrink.
pub fn node_delta(n: usize, m: usize) -> usize {
    fifth_root_ceil(n).max(4 * m / n.max(1) + 1)
}

pub fn recursive_decomposition(d: &Drawing, t: u64, k: &BoundConstants) -> Result<DecompositionTree, TransformError> {
    recursive_decomposition_seeded(d, t, k, 0)
}

pub fn recursive_decomposition_seeded(
    d: &Drawing,
    t: u64,
    k: &BoundConstants,
    seed: u64,
) -> Result<DecompositionTree, TransformError> {
    require_simple(d)?;
    k.check().map_err(|e| TransformError::Verification(e.to_string()))?;
    let root = node(d, t, k, seed)?;
    let tree = DecompositionTree { t, seed, root };
    if !tree.conserves_edges() {
        return Err(TransformError::Verification("edge conservation failed".into()));
    }
    Ok(tree)
}

fn node(d: &Drawing, t: u64, k: &BoundConstants, seed: u64) -> Result<DecompositionNode, TransformError> {
    let n = d.n();
    let m = d.m();
    let vertices: Vec<VertexId> = d.vertices().keys().copied().collect();
    if n < 2 || int(n as i64) <= k.n0 {
        return Ok(DecompositionNode {
            vertices,
            n,
            m,
            leaf: true,
            delta: None,
            split_count: 0,
            n_split: n,
            cut: None,
            mode: None,
            cut_bound: None,
            children: Vec::new(),
        });
    }
    let delta = node_delta(n, m);
    let (split, _) = split_vertices(d, delta)?;
    let (g, ids) = AbstractGraph::from_drawing(&split);
    let r = bisect(&g, seed)?;
    let n_split = split.n();
    let mut children = Vec::new();
    for (i, part) in [&r.part1, &r.part2].into_iter().enumerate() {
        let keep: BTreeSet<VertexId> = part.iter().map(|&j| ids[j]).collect();
        let child_seed = seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64 + 1);
        children.push(node(&split.induced(&keep), t, k, child_seed)?);
    }
    Ok(DecompositionNode {
        vertices,
        n,
        m,
        leaf: false,
        delta: Some(delta),
        split_count: n_split - n,
        n_split,
        cut: Some(r.width),
        mode: Some(r.mode),
        cut_bound: bound_value(Formula::CorEq2, n_split as u64, t, k, None).ok(),
        children,
    })
}
