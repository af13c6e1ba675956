//! Library surface of the eraser CLI: configuration parsing and run
//! orchestration, kept separate from the binary so integration tests can
//! drive them directly.

pub mod config;
pub mod run;
