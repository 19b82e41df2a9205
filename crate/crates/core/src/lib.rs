//! Exact dynamics of the convolution operator T_ν(μ) = μ * ν on probability
//! measures over a finite group.
//!
//! Measures are generic over [`Scalar`], implemented for exact rationals
//! ([`Rational`]) and `f64`.

pub mod dynamics;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod measure;
pub mod montecarlo;
pub mod scalar;
pub mod transition;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupRef, Subgroup};
pub use matrix::Matrix;
pub use measure::{ProbMeasure, TestFunction};
pub use scalar::{Rational, Scalar};
