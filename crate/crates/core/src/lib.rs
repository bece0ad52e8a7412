//! Exact arithmetic toolkit for higher-order (n-bracket) Lie algebras and their
//! expansions by finite Abelian semigroups.
//!
//! The crate covers semigroup tables and selectors, sparse antisymmetric
//! structure tensors with a generalized Jacobi check, matrix realizations via
//! antisymmetrized products, S-expansion with 0_S-reduction, resonant
//! subalgebras and their reductions, JSON file formats and a CLI front end.

pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod expansion;
pub mod fixtures;
pub mod formats;
pub mod matrix;
pub mod multialgebra;
pub mod rational;
pub mod realization;
pub mod resonance;
pub mod semigroup;
pub mod tensor;

pub use error::{Error, Result};
pub use expansion::{s_expand, zero_reduce, ExpandedAlgebra, PairBasis};
pub use matrix::Matrix;
pub use multialgebra::{GjiReport, MultiAlgebra, SubspaceSplit};
pub use rational::Rational;
pub use realization::{extract_constants, multibracket, verify_identity, MatrixRep};
pub use semigroup::{gen_se, Semigroup};
pub use tensor::StructureTensor;
