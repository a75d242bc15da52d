//! Exchange formats and the `fewbags` command line.
//!
//! Vertices are numbered from 1 in every file format and from 0 inside
//! [`fewbags_core`]; the readers and writers here do the conversion.

pub mod cli;
pub mod formats;

pub use fewbags_core as core;
