//! Integer-programming refutation over the arrangement of perpendicular bisectors.
//!
//! Every ranking `v` of the candidates gets a 0/1 variable `x_v` telling whether the
//! region of points ranking the candidates as `v` is nonempty. Constraints that hold for
//! every planar candidate embedding are added lazily; an infeasible system proves that
//! no embedding exists.

mod audit;
mod closure;
mod lazy;
mod model;
pub mod solver;
mod sweep;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use audit::generate_violated;
pub use closure::{closure_refute, closure_refute_until, verify_closure, ClosureCertificate, ClosureStep};
pub use lazy::{lazy_refute, run_lazy, verify_ilp, IlpCertificate, IlpOutcome, LazyReport, UnknownReason};
pub use model::{build_base_model, RegionModel, RowSpec, Tag, VarKey};
pub use sweep::subset_sweep;

use crate::election::{ElectionError, Vote};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IlpError {
    #[error("votes are equal")]
    EqualVotes,
    #[error("need at least {0} candidates")]
    TooFewCandidates(usize),
    #[error("invalid constraint: {0}")]
    InvalidRow(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error(transparent)]
    Election(#[from] ElectionError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IlpConfig {
    pub max_iterations: usize,
    pub subset_min: usize,
    pub enable_six_cycles: bool,
    /// `builtin` or `external:<command>`.
    pub solver: String,
    /// Seconds spent trying to embed a candidate subset before running the ILP on it.
    pub quick_screen_secs: f64,
}

impl Default for IlpConfig {
    fn default() -> Self {
        IlpConfig {
            max_iterations: 20,
            subset_min: 5,
            enable_six_cycles: false,
            solver: "builtin".into(),
            quick_screen_secs: 3.0,
        }
    }
}

/// Upper bound on the number of distinct rankings realised by `m` points in the plane.
pub fn ub(m: usize) -> u64 {
    let m = m as i128;
    let v = m * (3 * m - 10) * (m + 1) * (m - 1) / 24 + m * (m - 1) + 1;
    v as u64
}

/// Neighbours of `u` (one adjacent swap away) that are one swap closer to `v`.
pub fn implied_neighbor_step(u: &Vote, v: &Vote) -> Result<Vec<Vote>, IlpError> {
    if u.len() != v.len() {
        return Err(ElectionError::MismatchedUniverse {
            left: u.len(),
            right: v.len(),
        }
        .into());
    }
    if u == v {
        return Err(IlpError::EqualVotes);
    }
    Ok((0..u.len() - 1)
        .filter(|&i| v.prefers(u.at(i + 1), u.at(i)))
        .map(|i| u.swap_at(i))
        .collect())
}

pub(crate) fn binom2(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}
