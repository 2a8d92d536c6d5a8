//! Compiles the guide's code listings as doctests.
//!
//! Each chapter under `book/src` becomes the docs of an empty module here, so
//! `cargo test --doc -p studentnet-guide` runs every snippet against the
//! current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/ingestion.md")]
pub mod ingestion {}
#[doc = include_str!("../../../book/src/statistics.md")]
pub mod statistics {}
#[doc = include_str!("../../../book/src/correlation.md")]
pub mod correlation {}
#[doc = include_str!("../../../book/src/network.md")]
pub mod network {}
#[doc = include_str!("../../../book/src/training.md")]
pub mod training {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
