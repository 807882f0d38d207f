//! Finite uniform and quasi-uniform structures, their sheaf-theoretic
//! counterparts on finite spaces, inverse-limit towers of coverings, and
//! irregularity invariants of rational differential operators.

// Index loops mirror the formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod corpus;
pub mod dmod;
pub mod error;
pub mod gtop;
pub mod linalg;
pub mod quniform;
pub mod relation;
pub mod spacefile;
pub mod topology;
pub mod tower;

pub use error::{Error, Result};
