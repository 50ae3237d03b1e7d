//! Exact scalars and dense linear algebra over GF(p) and the rationals.

mod matrix;
mod normal_form;
mod scalar;
mod subspace;

pub use matrix::{Matrix, NoSolution};
pub use normal_form::NormalForm;
pub use scalar::{Field, FieldError, Scalar};
pub use subspace::{contains, same_span, span, Subquotient};
