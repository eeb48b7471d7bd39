//! Semi-equivelar maps on the Klein bottle.
//!
//! Maps are stored as face lists ([`PolygonalMap`]) and checked on
//! construction. On top of that sit the twisted-cylinder and Möbius-pair
//! constructions, path walkers, flag-based canonical forms and the census.

#![allow(clippy::manual_is_multiple_of)]

pub mod census;
pub mod flags;
pub mod io;
pub mod iso;
pub mod map;
pub mod reps;
pub mod search;
pub mod types;
pub mod walkers;

pub use iso::{are_isomorphic, canonical_form, dual, isomorphism, CanonicalForm};
pub use map::{MapError, PolygonalMap, Vertex, VertexLink};
pub use types::MapType;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
