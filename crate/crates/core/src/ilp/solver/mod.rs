//! 0/1 linear feasibility with a minimisation objective.

mod builtin;
mod external;
mod lp;

use serde::{Deserialize, Serialize};

pub use builtin::solve_builtin;
pub use external::solve_external;
pub use lp::{parse_lp, write_lp};

use super::IlpError;
use crate::budget::Stop;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinRow {
    pub terms: Vec<(i64, usize)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl LinRow {
    pub fn lhs(&self, values: &[bool]) -> i64 {
        self.terms
            .iter()
            .map(|&(c, v)| if values[v] { c } else { 0 })
            .sum()
    }

    pub fn holds(&self, values: &[bool]) -> bool {
        let l = self.lhs(values);
        match self.sense {
            Sense::Le => l <= self.rhs,
            Sense::Ge => l >= self.rhs,
            Sense::Eq => l == self.rhs,
        }
    }
}

/// Binary program: minimise `objective` subject to `rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub names: Vec<String>,
    pub rows: Vec<LinRow>,
    pub objective: Vec<(i64, usize)>,
}

impl Problem {
    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn objective_value(&self, values: &[bool]) -> i64 {
        self.objective
            .iter()
            .map(|&(c, v)| if values[v] { c } else { 0 })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Infeasible,
    /// A feasible assignment; `optimal` when the search proved nothing cheaper exists.
    Feasible { values: Vec<bool>, optimal: bool },
    /// The budget ran out before feasibility was decided.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverChoice {
    Builtin,
    /// Shell command that receives the LP file path as its last argument.
    External(String),
}

impl SolverChoice {
    pub fn parse(s: &str) -> Result<SolverChoice, IlpError> {
        match s.trim() {
            "builtin" | "" => Ok(SolverChoice::Builtin),
            other => match other.strip_prefix("external:") {
                Some(cmd) if !cmd.trim().is_empty() => Ok(SolverChoice::External(cmd.trim().to_string())),
                _ => Err(IlpError::Solver(format!("unknown solver `{other}`"))),
            },
        }
    }

    pub fn name(&self) -> String {
        match self {
            SolverChoice::Builtin => "builtin".into(),
            SolverChoice::External(cmd) => format!("external:{cmd}"),
        }
    }
}

pub fn solve_01(problem: &Problem, choice: &SolverChoice, stop: &Stop) -> Result<SolveStatus, IlpError> {
    match choice {
        SolverChoice::Builtin => Ok(solve_builtin(problem, stop)),
        SolverChoice::External(cmd) => solve_external(problem, cmd, stop),
    }
}
