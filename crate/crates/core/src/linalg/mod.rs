//! Exact linear algebra over the rationals, plus integer-lattice helpers.

pub mod lattice;
pub mod matrix;
pub mod rational;
pub mod subspace;

pub use lattice::{integer_kernel, IntLattice};
pub use matrix::{MatrixError, RatMatrix, Rref};
pub use rational::Rational;
pub use subspace::Subspace;
