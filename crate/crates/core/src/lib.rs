//! Perfect zero-knowledge interactive oracle proofs built on succinct
//! constraint detection.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: prime and binary fields, subspaces, polynomials.
//! * [`detect`]: constraint detectors for linear codes and the conditional
//!   codeword sampler built from them.
//! * [`bsrs`]: Ben-Sasson–Sudan Reed–Solomon proximity proofs, their
//!   recursive cover and a detector for them.
//! * [`protocol`]: transcripts, views, verifier/prover coins and the
//!   distribution auditor.
//! * [`sumcheck`]: classic and perfect zero-knowledge sumcheck.
//! * [`sharp3sat`]: counting satisfying assignments of 3-CNF formulas.
//! * [`masking`]: zero-knowledge proximity testing by random self-masking.
//! * [`lacsp`]: linear algebraic constraint satisfaction problems.

pub mod algebra;
pub mod bsrs;
pub mod detect;
pub mod lacsp;
pub mod masking;
pub mod protocol;
pub mod sharp3sat;
pub mod stats;
pub mod sumcheck;

pub use algebra::{Fe, Field};
