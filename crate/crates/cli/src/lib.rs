//! Command-line front end for `emsched`: scenario files, reports, instance
//! generation and benchmarks.

pub mod app;
pub mod bench;
pub mod report;
pub mod scenario;
