//! Non-local perimeters and interaction energies of convex bodies.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cache;
pub mod consts;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod optimizer;
pub mod oracle;
pub mod quad;
pub mod report;
pub mod suite;
pub mod symmetry;
pub mod vector;

pub use error::{Error, Result};
