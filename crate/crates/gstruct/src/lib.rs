//! Manifest parsing, the classification run and report rendering behind the
//! `gstruct` command.

pub mod builtin;
pub mod cli;
pub mod engine;
pub mod manifest;
pub mod report;

pub use engine::{run, Backend, RunError};
pub use manifest::{parse_manifest, Manifest, ParseError};
pub use report::Report;
