//! Command-line front end for structural correlation pattern mining.

pub mod app;
pub mod args;
pub mod config;
pub mod dot;
pub mod error;
pub mod manifest;
pub mod output;

pub use app::run;
pub use dot::export_pattern_dot;
