//! Command-line and HTTP front end for the chameleon type-error debugger.

pub mod cli;
pub mod server;
