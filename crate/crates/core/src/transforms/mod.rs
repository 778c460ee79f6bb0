//! Constructive transforms on drawings: vertex splitting, the bipartite strip
//! redrawing, tangency removal and the recursive split/bisect decomposition.

mod decompose;
mod perturb;
mod split;
mod strip;

pub use decompose::{node_delta, recursive_decomposition, recursive_decomposition_seeded, DecompositionNode, DecompositionTree};
pub use perturb::perturb_tangencies;
pub use split::{split_vertices, SplitCertificate};
pub use strip::{strip_redraw, PairCrossings, RedrawnArc, RedrawnDrawing, RedrawnVertex};

use thiserror::Error;

use crate::bisection::BisectionError;
use crate::drawing::{is_simple, validate, Drawing, EdgeId, VertexId};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("input drawing is invalid: {0}")]
    Invalid(String),
    #[error("input drawing is not simple")]
    NotSimple,
    #[error("delta {delta} is below 2m/n = {m2}/{n}")]
    DeltaTooSmall { delta: usize, m2: usize, n: usize },
    #[error("vertex {0} has no bipartition label")]
    MissingBipartition(VertexId),
    #[error("edge {0} joins two vertices of the same class")]
    NotBipartite(EdgeId),
    #[error("no tried linear map puts the two classes on opposite sides of a horizontal line")]
    NotSeparable,
    #[error("edges {0} and {1} touch; the strip redrawing needs a drawing without tangencies")]
    HasTangency(EdgeId, EdgeId),
    #[error("strip reconnection stays degenerate after repeated perturbation")]
    DegenerateAfterPerturbation,
    #[error("edges {0} and {1} have more than one common point")]
    TooManyContacts(EdgeId, EdgeId),
    #[error("retracting the tangency of {0} and {1} keeps creating new contacts")]
    PerturbationCollision(EdgeId, EdgeId),
    #[error("could not split vertex {0} without changing the intersection graph")]
    SplitFailed(VertexId),
    #[error("internal check failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Bisection(#[from] BisectionError),
}

pub(crate) fn require_valid(d: &Drawing) -> Result<(), TransformError> {
    let r = validate(d);
    if let Some(v) = r.violations.first() {
        return Err(TransformError::Invalid(format!("{v:?}")));
    }
    Ok(())
}

pub(crate) fn require_simple(d: &Drawing) -> Result<(), TransformError> {
    require_valid(d)?;
    if !is_simple(d) {
        return Err(TransformError::NotSimple);
    }
    Ok(())
}

fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Crossings inside the strip between two edges meeting it k1 and k2 times,
/// when all k1 + k2 strip segments cross pairwise.
pub fn strip_crossing_formula(k1: u64, k2: u64) -> u64 {
    let v = choose2(k1 + k2) - choose2(k1) - choose2(k2);
    assert_eq!(v, k1 * k2);
    v
}

/// (1/3)^(1-1/7t) + (2/3)^(1-1/7t).
pub fn alpha(t: u64) -> f64 {
    assert!(t >= 1, "t must be positive");
    let e = 1.0 - 1.0 / (7.0 * t as f64);
    let a = (1.0f64 / 3.0).powf(e) + (2.0f64 / 3.0).powf(e);
    assert!(a > 1.0);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(strip_crossing_formula(1, 1), 1);
        assert_eq!(strip_crossing_formula(3, 1), 3);
        assert_eq!(strip_crossing_formula(0, 5), 0);
    }

    #[test]
    fn alpha_values() {
        assert!((alpha(1) - 1.0964).abs() < 1e-4);
        assert!((alpha(2) - 1.0468).abs() < 1e-4);
    }
}
