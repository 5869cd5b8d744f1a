//! File formats, the `eka` command line and the acceptance self-test on top
//! of `eka-core`.

pub mod cli;
pub mod formats;
pub mod selftest;
