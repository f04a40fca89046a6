//! Invariants of the adjoint action of the unitriangular group `N` on the
//! nilradical of a parabolic subalgebra of `gl(n)`, over the rationals.
//!
//! * [`rootcomb`]: nilradical roots, the base `S`, admissible pairs and diagrams.
//! * [`exactpoly`]: exact rationals, sparse polynomials, determinants, rank.
//! * [`invgen`]: base minors `M_xi`, pair polynomials `L_q`, restriction to
//!   the slice and recovery of slice coordinates from invariant values.
//! * [`checker`]: symbolic invariance, algebraic independence, weight corank
//!   and the `(2,4,2)` case study.
//! * [`orbitlab`]: the adjoint action on points, orbit dimensions and the
//!   reduction of generic points to the slice.
//! * [`cli`]: command-line front end.

pub mod checker;
pub mod cli;
mod error;
pub mod exactpoly;
pub mod invgen;
pub mod orbitlab;
pub mod rootcomb;
pub mod sampling;

pub use error::{Error, Result};
pub use exactpoly::{MatrixPoint, Polynomial, Rational};
pub use rootcomb::{AdmissiblePair, Base, ParabolicType, Root};
