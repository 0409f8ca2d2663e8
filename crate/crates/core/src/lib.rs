//! Exact-arithmetic laboratory for extension complexity of 0/1 polytopes.
//!
//! Everything here is `no_std` with `alloc`: big rationals, an exact simplex
//! solver, facet enumeration for 0/1 vertex sets, slack-matrix factorizations,
//! the discretization map and its inverse, the approximate compact extension,
//! the counting calculators and the matroid machinery. File formats, the CLI
//! and parallel sweeps live in the `xclab` crate.
#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod approximator;
pub mod certificate;
pub mod counting;
pub mod discretizer;
pub mod error;
pub mod factorization;
mod hull;
pub mod linalg;
pub mod lp;
pub mod matroid;
mod nmf;
pub mod polytope;
pub mod rational;

pub use certificate::{Check, Report};
pub use error::{Error, Result};
pub use linalg::RatMatrix;
pub use rational::Rational;
