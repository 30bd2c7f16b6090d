//! Exact computations with modified diagonal cycles in a finite
//! cohomological model of a pointed variety.
//!
//! Everything is over the rationals. A [`Model`] is a graded
//! super-commutative Frobenius algebra standing in for `H^*(X)` together
//! with a base point; [`TensorClass`] is a class on a power `X^n`.

pub mod correspondence;
pub mod diagonals;
pub mod double_cover;
pub mod error;
pub mod formal;
pub mod linalg;
pub mod model;
pub mod projectors;
pub mod rational;
pub mod reports;
pub mod subset;
pub mod tensor;

pub use correspondence::{Correspondence, Coord, ModelMorphism, PowerMorphism, Twist};
pub use error::{Error, Result};
pub use model::{Builtin, Model, ModelParts};
pub use rational::Rational;
pub use subset::Subset;
pub use tensor::TensorClass;
