//! Library surface of the experiment orchestrator, shared by the binary
//! and the acceptance suite.

pub mod config;
pub mod manifest;
pub mod modes;
