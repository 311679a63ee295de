//! Exact cohomology rings, graded traces and point counts of group
//! varieties over finite fields.

pub mod cohomology;
pub mod dsl;
pub mod dynamics;
pub mod hopf;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod verify;
