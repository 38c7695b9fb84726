//! Library surface of the command-line driver: matrix file parsing and
//! result rendering. The binary in `main.rs` is a thin wrapper over these
//! plus the core crate.

pub mod io;
pub mod output;
