//! Exact spectra of generalized Paley graphs `Gamma(k, q)`.
//!
//! `Gamma(k, q)` is the Cayley graph on GF(q) whose connection set is the group of
//! nonzero `k`-th powers. Its eigenvalues are the Gaussian periods of GF(q), which
//! this crate computes exactly in `Z[zeta_p]`, alongside the known closed forms,
//! strongly regular and Ramanujan classifications, and independent numerical
//! oracles.

pub mod arith;
pub mod classify;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod graph;
pub mod oracle;
pub mod report;
pub mod spectra;
pub mod sweep;
pub mod tables;

pub use error::{Error, Result};
