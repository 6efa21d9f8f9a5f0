//! Expression language, JSON reports and command dispatch for `tightmaps`.

pub mod commands;
pub mod elaborate;
pub mod report;
pub mod syntax;
