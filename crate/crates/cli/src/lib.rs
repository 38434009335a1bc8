//! Library surface of the CLI crate, so integration tests can build and
//! inspect analysis documents directly.

pub mod document;
pub mod dot;
