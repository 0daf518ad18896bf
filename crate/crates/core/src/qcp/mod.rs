//! Searching for explicit planar embeddings.
//!
//! The embedding problem is written as a quadratically constrained system: for every
//! voter `v` preferring `a` to `b`, `|v - a|^2 + eps <= |v - b|^2`. Only verified
//! embeddings ever leave this module; failing to find one proves nothing.

mod embedding;
mod escalate;
mod external;
mod penalty;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use embedding::{min_gap, round_sig, verify_embedding, violations, Embedding};
pub use escalate::{escalate_embed, solve_feasibility};
pub use external::{parse_qcp_system, write_qcp_system};
pub use penalty::solve_penalty;

use crate::election::{Candidate, Election};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcpError {
    #[error("embedding lacks a point for {0}")]
    MissingPoint(String),
    #[error("malformed system or solution: {0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QcpConfig {
    pub eps_star: f64,
    pub box_init: f64,
    pub slice_init_secs: f64,
    pub box_factor: f64,
    pub slice_factor: f64,
    pub restarts: usize,
    pub full_pairs: bool,
    /// `builtin` or `external:<command>`.
    pub solver: String,
    pub seed: u64,
    /// Descent iterations per restart.
    pub local_iters: usize,
}

impl Default for QcpConfig {
    fn default() -> Self {
        QcpConfig {
            eps_star: 1.0,
            box_init: 100.0,
            slice_init_secs: 10.0,
            box_factor: 10.0,
            slice_factor: 2.0,
            restarts: 200,
            full_pairs: false,
            solver: "builtin".into(),
            seed: 0,
            local_iters: 400,
        }
    }
}

/// One row: `voter` strictly prefers `a` to `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QcpRow {
    pub voter: usize,
    pub a: Candidate,
    pub b: Candidate,
}

/// Points are candidates `0..m` followed by voters `0..n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QcpSystem {
    pub m: usize,
    pub n: usize,
    pub rows: Vec<QcpRow>,
    pub eps_star: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl QcpSystem {
    /// Bounds `-x_max <= x_t <= x_max` and `-y_max <= y_t <= y_max` for every point.
    pub fn num_box_rows(&self) -> usize {
        2 * (self.m + self.n)
    }
}

/// Rows for consecutive ranking positions, or for every ordered pair with `full_pairs`.
pub fn build_qcp(e: &Election, eps_star: f64, x_max: f64, y_max: f64, full_pairs: bool) -> QcpSystem {
    let mut rows = Vec::new();
    for (i, v) in e.votes().iter().enumerate() {
        let r = v.ranking();
        for p in 0..r.len() {
            let upto = if full_pairs { r.len() } else { (p + 2).min(r.len()) };
            for q in p + 1..upto {
                rows.push(QcpRow {
                    voter: i,
                    a: r[p],
                    b: r[q],
                });
            }
        }
    }
    QcpSystem {
        m: e.num_candidates(),
        n: e.num_votes(),
        rows,
        eps_star,
        x_max,
        y_max,
    }
}
