//! Mauldin-Williams graph systems: invariant lists, the structural
//! conditions behind the simplicity of their Cuntz-Pimsner algebras,
//! Hilbert-module formulas on the cograph, and graph-algebra K-theory.

pub mod attractor;
pub mod conditions;
pub mod correspondence;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod ktheory;
pub mod system;

pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, Path, VertexId};
pub use system::{MwGraphSpec, OpenCell};
