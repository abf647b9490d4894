//! Exact sparse integer linear algebra: Smith normal form, modular rank,
//! Hermite bases and homology of subquotients.

pub mod abelian;
pub mod eliminate;
pub mod hermite;
pub mod ring;
pub mod smith;
pub mod sparse;
pub mod subquotient;

pub use abelian::AbelianGroupDescriptor;
pub use eliminate::{ElementaryOp, Limits};
pub use hermite::{HermiteBasis, SparseVec};
pub use ring::{is_prime, BigIntRing, PrimeField, Ring, SmallInt};
pub use smith::{
    determinant, normalize_torsion, rank_mod_p, reduce, smith_normal_form, smith_normal_form_with, Pivot,
    ReduceOptions, Reduction, SmithForm, Transforms,
};
pub use sparse::SparseIntMatrix;
pub use subquotient::{check_exact, Exactness, Subquotient};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
