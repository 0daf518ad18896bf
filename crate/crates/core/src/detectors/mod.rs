//! Combinatorial obstructions that certify an election is not two-dimensional
//! Euclidean: the three-voter eight-candidate pattern and controversity graphs.

mod controversity;
mod hull;
mod pattern38;

use thiserror::Error;

pub use controversity::{check_controversity, violation_holds, ControversityGraph, Violation};
pub use hull::{hull_refute, verify_hull, HullCertificate, HullMode};
pub use pattern38::{find_38, find_38_until, verify_38, Pattern38};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectorError {
    #[error("need at least {needed} distinct votes, have {got}")]
    TooFewVoters { needed: usize, got: usize },
}
