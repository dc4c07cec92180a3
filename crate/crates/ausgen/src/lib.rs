//! Algebra files, module expressions, reports and the command line front end
//! for `ausgen-core`.

pub mod cli;
pub mod expr;
pub mod fixtures;
pub mod flows;
pub mod format;
pub mod report;
