//! Exact-arithmetic tools for simple topological graphs drawn with polyline
//! edges: pair classification, strip redrawing and crossing parity, vertex
//! splitting, bisection, pseudo-segment arrangements and Davenport-Schinzel
//! sequences.

pub mod bisection;
pub mod drawing;
pub mod extremal;
pub mod geometry;
pub mod serde_scalar;
pub mod arrangement;
pub mod ds;
pub mod tangency;
pub mod io;
pub mod transforms;
pub mod gen;
pub mod experiment;
