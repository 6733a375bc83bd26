//! Mean curvature flow of purely twisting, rotationally symmetric line
//! congruences in the space of oriented lines with its neutral Kähler metric.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bishop;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod ibvp;
pub mod oracle;
pub mod output;
pub mod parallel;
pub mod profiles;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
