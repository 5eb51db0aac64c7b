// Negated comparisons such as `!(x > 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod numerics;
pub mod poly;
pub mod transform;
pub mod verify;

pub use error::{Error, ErrorClass, Result};
