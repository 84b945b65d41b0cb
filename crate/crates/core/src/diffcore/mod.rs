//! Differentiation kernel and small dense linear algebra.

mod differentiate;
mod jet;
mod linalg;
mod point;

pub use differentiate::{differentiate, finite_difference_check, DerivativeTensor, ScalarField};
pub use jet::{Jet2, Jet3, Real};
pub use linalg::{
    invert4, invert_sym4, mat_mul, max_abs, nullspace, right_singular_system, transpose, Mat4, Matrix, Sym4,
};
pub use point::Point4;
