//! IO, caching and parallel evaluation around `lengthseries-core`.

pub mod cache;
pub mod eval;
pub mod input;
pub mod output;
