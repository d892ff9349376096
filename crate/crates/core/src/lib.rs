//! Exact computation of generalized trace maps, trace submodules and centers of
//! endomorphism rings.

pub mod artin;
pub mod error;
pub mod field;
pub mod hom;
pub mod linalg;
pub mod numsgp;
pub mod suite;

pub use error::{Error, Result};
pub use field::{Elem, FieldEmbedding, FieldSpec};
pub use linalg::{Mat, QuotientSpace, Subspace};
