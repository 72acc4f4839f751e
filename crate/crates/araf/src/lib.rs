//! File formats, parallel counting and the command-line front end for
//! `araf-core`.

pub mod commands;
pub mod csv_io;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod parallel;
