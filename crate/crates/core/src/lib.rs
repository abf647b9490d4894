//! Matching complexes and bounded-degree graph complexes: enumeration,
//! chain complexes, Young-group quotients, exact homology and checks of
//! known torsion results.

pub mod certificates;
pub mod chain;
pub mod error;
pub mod graph;
pub mod homology;
pub mod young;

pub use chain::{ChainVector, FreeChainComplex, OrientedSimplex};
pub use error::{CoreError, Result};
pub use graph::{Blocks, ComplexSpec, DegreeVector, Edge, FaceTable, Simplex};
