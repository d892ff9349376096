//! Commutative Artinian local algebras over finite fields and their finitely
//! generated modules.

mod algebra;
mod ext;
mod module;

pub use algebra::{Algebra, AlgebraFamily, AlgebraPresentation};
pub use ext::{ext_dims, ExtReport, DEFAULT_SYZYGY_CAP};
pub use module::{FreeCover, Module, ModulePresentation};
