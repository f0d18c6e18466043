//! File formats, multi-threaded enumeration and the command-line driver on top of `hkzeta-core`.

pub mod cli;
pub mod format;
pub mod job;
pub mod parallel;

pub use hkzeta_core as core;
