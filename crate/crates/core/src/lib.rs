#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod currents;
pub mod error;
pub mod json;
pub mod mesh;
pub mod profiles;
pub mod quadrature;
mod util;
pub mod verify;
pub mod warped;

pub use error::{Error, Result};
