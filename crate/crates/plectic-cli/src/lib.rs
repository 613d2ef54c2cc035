//! Scenario ingestion, the expression surface language, and the command
//! layer behind the `plectic` binary.

pub mod commands;
pub mod expr;
pub mod report;
pub mod scenario;
