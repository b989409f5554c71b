//! Command-line tool and HTTP service around the route ranking core.

pub mod cli;
pub mod config;
pub mod engine;
pub mod http;
