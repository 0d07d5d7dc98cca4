//! Command-line front end for `kodaira`: model and coaction file formats,
//! JSON reports, subcommands and the regression catalog.

pub mod catalog;
pub mod commands;
pub mod format;
pub mod report;
