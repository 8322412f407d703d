//! Scenario files, experiment commands, and report emission around the
//! kinetikos library. The binary target wires these to a command line;
//! integration tests drive the same entry points in-process.

pub mod runner;
pub mod scenario;
pub mod svg;
