//! Exact integer and rational matrix algebra.
//!
//! Everything here is arbitrary precision. Smith and Hermite normal forms are
//! the engine behind every kernel, cokernel and torsion computation in the
//! crate.

mod hnf;
mod lattice;
mod matrix;
mod smith;

pub use hnf::{column_hnf, row_hnf};
pub use lattice::{
    cokernel_invariants, image_basis, kernel_basis, map_cokernel, map_kernel, preimage_lattice,
    rank, rank_mod_p, solve, subquotient,
    AbelianInvariants, IntSolver,
};
pub use matrix::{rational_det, IntMatrix, RationalMatrix};
pub use smith::{smith, SmithDecomposition};
