//! Exact rational and integer linear algebra.
//!
//! Everything downstream (cohomology, spectral sequences, weight
//! filtrations) reduces to the handful of operations here. Arithmetic is
//! arbitrary precision throughout; nothing is ever rounded.

mod elim;
mod matrix;
mod rational;
mod snf;
mod subspace;

pub use elim::{
    column_basis, determinant, independent_columns, is_zero_vec, kernel_basis, kernel_matrix, rank,
    solve_rational, Echelon,
};
pub use matrix::{IntegerMatrix, RationalMatrix, SparseMatrix};
pub use rational::{
    format_rational, parse_rational, rational, rational_map, rational_rows, rational_string,
    ParseRationalError, Rational,
};
pub use snf::{smith_normal_form, SmithForm};
pub use subspace::{QuotientBasis, Subspace};
