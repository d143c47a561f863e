//! Command-line front end for the switchlab verification suite.
//!
//! The binary is a thin layer over [`commands::execute`]; everything it can do
//! is reachable from this library for testing.

pub mod builtin;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use builtin::{ScenarioSource, BUILTINS};
pub use commands::{execute, Axis, AxisName, Command, Report, RunConfig};
pub use error::{CliError, Result};
pub use table::{Cell, Format, Table};
