//! Command-line front end: matrix files, subcommands and the selftest suites.

pub mod commands;
pub mod io;
pub mod selftest;

pub use commands::{run, Cli, EXIT_FAIL, EXIT_IO, EXIT_PASS, EXIT_PRECONDITION};
