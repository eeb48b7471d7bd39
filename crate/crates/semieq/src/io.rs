//! Map files: the JSON exchange format plus OFF and DOT exports.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::map::{MapError, PolygonalMap, Vertex};
use crate::reps::RepParams;
use crate::types::MapType;

pub const MAP_FORMAT: &str = "semieq-map/1";

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected format `{MAP_FORMAT}`, found `{0}`")]
    Format(String),
    #[error(transparent)]
    UnknownType(#[from] crate::types::UnknownType),
    #[error("invalid map: {0}")]
    Map(#[from] MapError),
    #[error("file declares type {declared} but its vertices have type {found}")]
    TypeMismatch { declared: MapType, found: String },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rep: Option<RepParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MapDoc {
    format: String,
    #[serde(rename = "type")]
    ty: String,
    n: usize,
    faces: Vec<Vec<Vertex>>,
    #[serde(default)]
    meta: Meta,
}

/// A map read from disk together with what the file says about it.
#[derive(Debug, Clone)]
pub struct MapFile {
    pub map: PolygonalMap,
    pub map_type: MapType,
    pub rep: Option<RepParams>,
}

/// Canonical JSON: faces rotated to their smallest vertex, list sorted.
pub fn to_json(m: &PolygonalMap, ty: MapType, rep: Option<RepParams>) -> String {
    let doc = MapDoc {
        format: MAP_FORMAT.to_string(),
        ty: ty.name().to_string(),
        n: m.n_vertices(),
        faces: m.normalized_faces(),
        meta: Meta { rep },
    };
    let mut s = serde_json::to_string(&doc).expect("map documents always serialize");
    s.push('\n');
    s
}

/// Parses and validates a map file. The declared type must match the vertex
/// links.
pub fn from_json(text: &str) -> Result<MapFile, IoError> {
    let doc: MapDoc = serde_json::from_str(text)?;
    if doc.format != MAP_FORMAT {
        return Err(IoError::Format(doc.format));
    }
    let declared: MapType = doc.ty.parse()?;
    let map = PolygonalMap::from_faces(doc.n, doc.faces)?;
    if !map.is_semi_equivelar(declared) {
        let found = map.detect_type().map_or_else(|| "mixed".to_string(), |t| t.name().to_string());
        return Err(IoError::TypeMismatch { declared, found });
    }
    Ok(MapFile { map: map.with_hint(declared), map_type: declared, rep: doc.meta.rep })
}

/// OFF with vertices spread along a helix. The coordinates carry no meaning.
pub fn to_off(m: &PolygonalMap) -> String {
    let n = m.n_vertices();
    let mut s = format!("OFF\n{} {} {}\n", n, m.n_faces(), m.n_edges());
    for v in 0..n {
        let a = TAU * v as f64 / n as f64;
        let _ = writeln!(s, "{:.6} {:.6} {:.6}", a.cos(), a.sin(), v as f64 / n as f64);
    }
    for f in m.normalized_faces() {
        let _ = write!(s, "{}", f.len());
        for v in f {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    s
}

/// The edge graph in Graphviz syntax.
pub fn to_dot(m: &PolygonalMap) -> String {
    let mut s = String::from("graph semieq {\n");
    let mut edges = m.edge_list();
    edges.sort();
    for (a, b) in edges {
        let _ = writeln!(s, "  {a} -- {b};");
    }
    s.push_str("}\n");
    s
}
