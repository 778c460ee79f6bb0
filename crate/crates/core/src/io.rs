//! JSON documents: drawings, arc families, abstract graphs.
//!
//! Coordinates are strings holding reduced rationals: `"3"`, `"-7/2"`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bisection::{AbstractGraph, BisectionError};
use crate::drawing::{Drawing, DrawingError, EdgeId, Side, VertexId};
use crate::geometry::{Point, Scalar};
use crate::serde_scalar;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error(transparent)]
    Drawing(#[from] DrawingError),
    #[error(transparent)]
    Graph(#[from] BisectionError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: u32,
    #[serde(with = "serde_scalar")]
    pub x: Scalar,
    #[serde(with = "serde_scalar")]
    pub y: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: u32,
    pub tail: u32,
    pub head: u32,
    #[serde(with = "serde_scalar::points")]
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawingDocument {
    pub version: u32,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

impl DrawingDocument {
    pub fn from_drawing(d: &Drawing) -> Self {
        let vertices = d
            .vertices()
            .iter()
            .map(|(v, p)| VertexDoc { id: v.0, x: p.x.clone(), y: p.y.clone(), side: d.sides().get(v).copied() })
            .collect();
        let edges = d
            .edges()
            .iter()
            .map(|(e, ed)| EdgeDoc { id: e.0, tail: ed.tail.0, head: ed.head.0, points: ed.arc.clone() })
            .collect();
        DrawingDocument { version: FORMAT_VERSION, vertices, edges }
    }

    pub fn to_drawing(&self) -> Result<Drawing, IoError> {
        if self.version != FORMAT_VERSION {
            return Err(IoError::Version(self.version));
        }
        let mut d = Drawing::new();
        for v in &self.vertices {
            d.add_vertex(VertexId(v.id), Point::new(v.x.clone(), v.y.clone()))?;
            if let Some(s) = v.side {
                d.set_side(VertexId(v.id), s)?;
            }
        }
        for e in &self.edges {
            d.add_edge(EdgeId(e.id), VertexId(e.tail), VertexId(e.head), e.points.clone())?;
        }
        Ok(d)
    }
}

/// Canonical text of a drawing: sorted ids, reduced rationals, two-space indent.
pub fn drawing_to_json(d: &Drawing) -> String {
    let mut s = serde_json::to_string_pretty(&DrawingDocument::from_drawing(d)).expect("serializable");
    s.push('\n');
    s
}

pub fn drawing_from_json(s: &str) -> Result<Drawing, IoError> {
    let doc: DrawingDocument = serde_json::from_str(s)?;
    doc.to_drawing()
}

/// Two arc families, used for tangency fixtures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamiliesDocument {
    pub version: u32,
    #[serde(with = "arc_list")]
    pub l1: Vec<Vec<Point>>,
    #[serde(with = "arc_list")]
    pub l2: Vec<Vec<Point>>,
}

/// A single family of arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcsDocument {
    pub version: u32,
    #[serde(with = "arc_list")]
    pub arcs: Vec<Vec<Point>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDocument {
    pub fn to_graph(&self) -> Result<AbstractGraph, IoError> {
        Ok(AbstractGraph::new(self.n, self.edges.clone())?)
    }
}

mod arc_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Arc(#[serde(with = "serde_scalar::points")] Vec<Point>);

    pub fn serialize<S: Serializer>(v: &[Vec<Point>], s: S) -> Result<S::Ok, S::Error> {
        let arcs: Vec<Arc> = v.iter().map(|a| Arc(a.clone())).collect();
        arcs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Point>>, D::Error> {
        let arcs = Vec::<Arc>::deserialize(d)?;
        Ok(arcs.into_iter().map(|a| a.0).collect())
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Write { path: path.display().to_string(), source })
}

pub fn read_drawing(path: &Path) -> Result<Drawing, IoError> {
    drawing_from_json(&read_text(path)?)
}

pub fn read_families(path: &Path) -> Result<FamiliesDocument, IoError> {
    let doc: FamiliesDocument = serde_json::from_str(&read_text(path)?)?;
    if doc.version != FORMAT_VERSION {
        return Err(IoError::Version(doc.version));
    }
    Ok(doc)
}

pub fn read_arcs(path: &Path) -> Result<ArcsDocument, IoError> {
    let doc: ArcsDocument = serde_json::from_str(&read_text(path)?)?;
    if doc.version != FORMAT_VERSION {
        return Err(IoError::Version(doc.version));
    }
    Ok(doc)
}

pub fn read_graph(path: &Path) -> Result<AbstractGraph, IoError> {
    let doc: GraphDocument = serde_json::from_str(&read_text(path)?)?;
    doc.to_graph()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    #[test]
    fn round_trip() {
        let mut d = Drawing::new();
        d.add_vertex(VertexId(0), Point::new(ratio(1, 2), ratio(-3, 4))).unwrap();
        d.add_vertex(VertexId(1), Point::int(2, 2)).unwrap();
        d.set_side(VertexId(1), Side::B).unwrap();
        d.add_edge(EdgeId(0), VertexId(0), VertexId(1), vec![d.vertex(VertexId(0)).unwrap().clone(), Point::int(1, 5), Point::int(2, 2)]).unwrap();
        let s = drawing_to_json(&d);
        let back = drawing_from_json(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(drawing_to_json(&back), s);
        assert!(s.contains("\"-3/4\""));
    }
}
