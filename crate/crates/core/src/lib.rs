//! Empirical models of multi-qubit pure states under dichotomic local
//! observables, and their place in the strong / logical / weak contextuality
//! hierarchy.

pub mod error;
pub mod boolfn;
pub mod cli;
pub mod contextuality;
pub mod empirical;
pub mod qcore;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
