//! File formats, reports and the command-line front end for
//! [`regret_median_core`].

pub mod check;
pub mod cli;
pub mod generate;
pub mod instance;
pub mod report;

pub use regret_median_core as core;
