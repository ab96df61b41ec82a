//! Cohomology of moment-angle complexes, simplicial multiwedges and higher
//! Massey products in the Koszul model `R(K)`.

pub mod complex;
pub mod error;
pub mod families;
pub mod graph_assoc;
pub mod hochster;
pub mod homology;
pub mod koszul;
pub mod linalg;
pub mod massey;
pub mod multiwedge;
pub mod real_dga;
pub mod vertex_set;

pub use complex::{ComplexSpec, SimplicialComplex, StructureReport};
pub use error::{Error, Result};
pub use vertex_set::VertexSet;
