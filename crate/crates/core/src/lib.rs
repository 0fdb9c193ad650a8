//! Query-cost laboratory for quantum triangle detection.
//!
//! The hidden graph is reachable only through [`oracle::QueryOracle`];
//! quantum subroutines in [`grover`] are modeled by their exact outcome
//! distributions and bill their oracle applications to the same ledger.

pub mod adversary;
mod bits;
pub mod graph;
pub mod grover;
pub mod lab;
pub mod oracle;
pub mod rng;
pub mod solver;
