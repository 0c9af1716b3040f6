//! Length series identities for SL(2,C) characters of the one-holed torus.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! computation on values: slopes and the Farey tree, characters and their
//! trace maps, the Bowditch Q-condition search, and the series themselves.
//! File formats, caching and the command line live in the `lengthseries`
//! companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bqcheck;
pub mod charvariety;
pub mod complexarith;
mod error;
pub mod farey;
pub mod identities;
pub mod orbits;
pub mod summation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
