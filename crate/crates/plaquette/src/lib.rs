//! File formats, parallel sweeps and the `plaquette` command line on top of
//! [`plaquette_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod csv;
mod error;
pub mod figdata;
pub mod parallel;

pub use error::{Error, Result};
