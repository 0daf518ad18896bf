//! Deciding whether an election with complete strict rankings is two-dimensional
//! Euclidean, with independently checkable certificates for both answers.

pub mod budget;
pub mod detectors;
pub mod election;
pub mod ilp;
pub mod instances;
pub mod portfolio;
pub mod qcp;
pub mod reducer;
pub mod synthetic;

pub use budget::Stop;
pub use election::{parse_soc, Candidate, Election, ElectionError, Vote};
