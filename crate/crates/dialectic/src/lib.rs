//! Defeasible argumentation engine with dialectical-tree warrant, a
//! multi-criteria decision layer, and a classical-choice oracle.

pub mod cli;
pub mod decision;
pub mod engine;
pub mod lang;
pub mod oracle;
pub mod scenario;
