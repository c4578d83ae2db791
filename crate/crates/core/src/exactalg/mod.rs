//! Exact linear algebra over `Z`, `Q` and `Z/p`.

mod complex;
mod linalg;
mod matrix;
mod module;
mod ring;
mod smith;

pub(crate) use complex::subquotient;
pub use complex::CochainComplex;
pub use linalg::{kernel, pivot_columns, QuotientBasis};
pub use matrix::Matrix;
pub use module::{fp_module, modules_isomorphic, FpModule};
pub use ring::{is_prime, RingSpec, Scalar};
pub use smith::{invariant_factors, rank, smith_normal_form, SmithForm};
