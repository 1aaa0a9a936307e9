//! Command-line front end: argument parsing, output formats, run manifests,
//! the shipped baseline, and the `reproduce-all` pipeline.

pub mod app;
pub mod baseline;
pub mod exit;
pub mod manifest;
pub mod output;
pub mod reproduce;
pub mod rows;

pub use app::run;
