//! Finite abstract simplicial complexes and the machinery built on them:
//! maps, subdivision, mapping cylinders, integral homology and edge-path
//! presentations of the fundamental group.

mod complex;
mod cylinder;
mod homology;
mod matrix;
mod pi1;
mod smith;
mod subdivision;

pub use complex::{facets, ComplexError, MapError, Simplex, SimplicialComplex, SimplicialMap, VertexId};
pub use cylinder::{mapping_cylinder, mapping_cylinder_ordered, prism, MappingCylinder};
pub use homology::{ChainComplex, ChainError, HomologyGroup, HomologyResult};
pub use matrix::{IntMatrix, Overflow, SparseMatrix};
pub use pi1::{enumerate_homs, pi1_presentation, Letter, Pi1Error, Pi1Presentation};
pub(crate) use smith::smith_left;
pub use smith::{invariant_factors, smith_normal_form, SmithForm};
pub use subdivision::{barycentric_subdivision, Subdivision};

pub fn build_complex<S, L>(maximal: impl IntoIterator<Item = S>) -> Result<SimplicialComplex, ComplexError>
where
    S: IntoIterator<Item = L>,
    L: Into<crate::label::Label>,
{
    SimplicialComplex::build(maximal)
}

pub fn euler_characteristic(x: &SimplicialComplex) -> i64 {
    x.euler_characteristic()
}

pub fn homology(x: &SimplicialComplex, max_degree: usize) -> Result<HomologyResult, Overflow> {
    x.homology(max_degree)
}
