//! Command-line front end: configuration, CSV and SVG output, netlist text.

pub mod app;
pub mod config;
pub mod csv;
pub mod error;
pub mod netlist_text;
pub mod svg;

pub use error::{CliError, Result};
