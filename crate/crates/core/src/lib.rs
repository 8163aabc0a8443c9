//! Exact computation of the prime-sum deficit `C_n = n·p_n − Σ_{k≤n} p_k`,
//! the coefficient algebra behind its asymptotic expansions, and explicit
//! lower/upper bound certificates checked against exact values.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches a
//! filesystem, a thread pool or a command line lives in the `deficit` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod bounds;
pub mod coeffs;
pub mod engine;
mod error;
pub(crate) mod fmath;
pub mod sieve;
pub mod verify;

pub use analytic::EvaluatedBound;
pub use bounds::{BoundCertificate, BoundHypothesis, Side};
pub use coeffs::{AisTable, AsymptoticExpansion, Polynomial, Rational};
pub use engine::{Checkpoint, PrimeEngine, PrimeRecord};
pub use error::{Error, Result};
pub use sieve::{Sieve, SieveConfig, SieveSegment};
pub use verify::VerificationReport;
