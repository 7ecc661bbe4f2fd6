//! Exact integer linear algebra.

pub mod abgroup;
pub mod gmodule;
pub mod hnf;
pub mod int;
pub mod snf;

pub use gmodule::GModule;
pub use abgroup::{homology_at, AbMap, CochainComplex, FinPresAb, Invariants, SubQuotient};
pub use hnf::{Echelon, Lattice, SparseVec};
pub use int::Int;
pub use snf::{snf, Matrix, Smith};
