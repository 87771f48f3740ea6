//! Command-line front end: config file format, SVG output and dispatch.

pub mod app;
pub mod config;
pub mod svg;
