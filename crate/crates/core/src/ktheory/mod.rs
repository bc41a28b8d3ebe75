//! Exact integer linear algebra and K-theory of graph algebras.

mod exact;
mod group;
mod matrix;
mod normal_form;

pub use exact::{check_exact, cokernel_sequence, Exactness, GroupHom, Presentation};
pub use group::{cokernel, graph_algebra_ktheory, kernel, FgAbelianGroup, GraphKTheory, Kernel};
pub use matrix::IntMatrix;
pub use normal_form::{hermite_normal_form, smith_normal_form, HermiteDecomposition, SmithDecomposition};
