//! Monte Carlo oracle, file formats and command line on top of
//! [`minclaim_core`].

pub mod builtin;
pub mod cli;
pub mod error;
pub mod io;
pub mod sampler;

pub use error::{Error, Result};
