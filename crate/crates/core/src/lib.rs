//! Exact Euler characteristics of bundles on weighted projective stacks and
//! permutation quotients of products of projective spaces, computed by the
//! localized Hirzebruch-Riemann-Roch formula and cross-checked against
//! brute-force section counts.

pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod lambda_ops;
pub mod oracle;
pub mod rr_engine;
pub mod series;
pub mod stacks;

pub use error::{Error, Result};
pub use exact_arith::{Cyclotomic, Rational};
