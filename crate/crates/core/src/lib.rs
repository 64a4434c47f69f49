pub mod classify;
pub mod cli;
pub mod error;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod ranking;
pub mod synth;

pub use error::{Error, Result};
