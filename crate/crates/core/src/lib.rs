//! Exact combinatorics of the Δ-Springer fibers `Y_{n,(1^{n-1}),s}`.
//!
//! The crate computes, and checks against independent oracles, the
//! invariants of the fiber and of its irreducible components `K^i`:
//!
//! - [`shapes`]: tableaux indexing components, fillings indexing
//!   permutation flags, and the partial permutations between them;
//! - [`nilpotent`]: the nilpotent operator, index-set membership of
//!   permutation flags, and brute-force point counts over `F_p`;
//! - [`components`]: intersections `K^{i,j}`, their poset, bundle types,
//!   dimensions and Poincaré polynomials, including the Dyck-path formula
//!   for unions and its inclusion–exclusion oracle;
//! - [`cohomology`]: the presentation of `H^*(K^i)` as a quotient of
//!   `Z[x_1..x_n]`, its Hilbert series and the ordered-set-partition rank;
//! - [`qseries`]: exact polynomials in `q` and the q-analogs.
//!
//! Polynomials are stored in `q`, one degree per complex dimension.
//! The numeric kernels are generic over exact coefficient types; the
//! aliases below fix the arbitrary-precision instantiations used by the
//! domain code.

pub mod cohomology;
pub mod components;
pub mod error;
pub mod linalg;
pub mod multipoly;
pub mod nilpotent;
pub mod qseries;
pub mod scalar;
pub mod shapes;

pub use error::{Error, Result};

/// Arbitrary-precision integer polynomial in `q`.
pub type QPoly = qseries::QPolynomial<num_bigint::BigInt>;

/// Integer polynomial in `x_1..x_n`.
pub type MultiPoly = multipoly::MultivariatePolynomial<num_bigint::BigInt>;

pub type Rational = num_rational::BigRational;
