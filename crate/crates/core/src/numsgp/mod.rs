//! Numerical semigroup rings `k[[t^S]]` and their monomial fractional ideals,
//! encoded by value sets.

mod graded;
mod ideal;
mod probe;
mod semigroup;

pub use graded::{default_cutoff, tensor_torsion_length, Binomial, GradedPresentation, TorsionLength};
pub use ideal::{stable_value_sets, FracIdeal};
pub use probe::*;
pub use semigroup::{NumericalSemigroup, Semigroup};
