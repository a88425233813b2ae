//! Exact moments of the zero-sum subset count over F_p^d.
//!
//! For a subset S of F_p^d let a(S) be the number of r-element subsets of S
//! summing to zero. This crate computes the moments
//! F(m, n) = sum over n-subsets S of a(S)^m as closed-form polynomials in
//! q = p^d, through two independent symmetric-function pipelines, and checks
//! them against a brute-force enumeration oracle.
//!
//! Module map:
//!
//! * [`partitions`] — integer partitions and multiplicity maps;
//! * [`characters`] — symmetric-group characters, Specht dimensions, Schur
//!   functor dimension polynomials;
//! * [`qpoly`] — exact polynomials and rational functions of q;
//! * [`sympoly`] — monomial-basis symmetric polynomials and symmetrization;
//! * [`xclasses`] — X-matrix orbits, ranks over F_p, generating polynomials;
//! * [`moments`] — the two moment pipelines and convention arbitration;
//! * [`oracle`] — exhaustive enumeration ground truth;
//! * [`selftest`] — the built-in verification suite.

pub mod characters;
pub mod error;
pub mod moments;
pub mod oracle;
pub mod partitions;
pub mod qpoly;
pub mod selftest;
pub mod sympoly;
pub mod xclasses;

pub use error::{Error, Result};
pub use moments::{
    arbitrate_conventions, moment_poly, moment_via_isotypic, ComputePath, Conventions,
    MomentResult, QWeight,
};
pub use partitions::{MultiplicityMap, Partition};
pub use qpoly::{QPoly, QRat};
pub use sympoly::{PhiNormalization, SymPoly};
