//! File formats, report writers and the parallel range verifier behind the
//! `deficit` command.

pub mod files;
pub mod num;
pub mod parallel;
pub mod report;
