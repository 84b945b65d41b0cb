//! Numerical laboratory for the Hawking Taub-NUT metric on R⁴, its Killing
//! fields, and the Einstein Randers metrics obtained from them by Zermelo
//! navigation.
//!
//! Every curvature quantity is computed from exact forward-mode derivatives
//! (see [`diffcore`]); finite differences appear only as cross-checks.

// Index loops mirror the tensor notation; `!(x > t)` comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod diffcore;
pub mod error;
pub mod finsler;
pub mod killing;
pub mod riemann;
pub mod sampling;
pub mod zermelo;

pub use error::{GeomError, Result};
