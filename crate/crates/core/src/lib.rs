//! Cryogenic ternary content-addressable memory built from ferroelectric
//! SQUIDs and heater cryotrons: device physics, array-level search, energy
//! accounting, and a hyperdimensional-computing workload on top.


#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod cli;
pub mod config;
pub mod error;
pub mod fesquid;
pub mod hdc;
pub mod htron;
pub mod physics;
pub mod preisach;
pub mod rcsj;
pub mod tcam;

pub use error::{Error, Result};
