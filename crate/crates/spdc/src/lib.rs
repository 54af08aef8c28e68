//! File formats, run configuration and the command-line front end for
//! [`spdc_core`].

pub mod cli;
pub mod config;
pub mod format;
