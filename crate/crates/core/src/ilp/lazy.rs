use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::model::{build_base_model, RegionModel, RowSpec};
use super::solver::{solve_01, solve_builtin, SolveStatus, SolverChoice};
use super::{generate_violated, IlpConfig, IlpError};
use crate::budget::Stop;
use crate::election::{Candidate, Election};

/// Refutation of the subelection on `candidates`: replaying `log` over that
/// subelection yields an infeasible system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IlpCertificate {
    pub candidates: Vec<Candidate>,
    pub labels: Vec<String>,
    pub log: Vec<RowSpec>,
    pub six_cycles: bool,
    /// Which solver reported infeasibility.
    pub solver: String,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnknownReason {
    IterationCap,
    Budget,
    /// The solver's assignment satisfies the whole system as far as it is materialised.
    Compliant,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IlpOutcome {
    Refuted(IlpCertificate),
    Unknown(UnknownReason),
}

pub struct LazyReport {
    pub outcome: IlpOutcome,
    pub model: RegionModel,
    pub iterations: usize,
}

pub fn lazy_refute(e: &Election, cfg: &IlpConfig, stop: &Stop) -> Result<IlpOutcome, IlpError> {
    Ok(run_lazy(e, cfg, stop)?.outcome)
}

/// Solve, audit, extend, repeat. Each solve gets an equal share of what is left of the
/// budget over the remaining iterations.
pub fn run_lazy(e: &Election, cfg: &IlpConfig, stop: &Stop) -> Result<LazyReport, IlpError> {
    let m = e.num_candidates();
    if m < 4 {
        return Err(IlpError::TooFewCandidates(4));
    }
    let choice = SolverChoice::parse(&cfg.solver)?;
    let mut model = build_base_model(e);
    model.six_cycles = cfg.enable_six_cycles;
    let max_iter = cfg.max_iterations;
    for it in 0..max_iter {
        if stop.should_stop() {
            return Ok(report(IlpOutcome::Unknown(UnknownReason::Budget), model, it));
        }
        let slice = stop
            .remaining()
            .map(|r| r / (max_iter - it) as u32)
            .unwrap_or(Duration::from_secs(3600));
        let status = solve_01(&model.to_problem(), &choice, &stop.within(slice))?;
        let values = match status {
            SolveStatus::Infeasible => {
                let cert = IlpCertificate {
                    candidates: e.candidates().collect(),
                    labels: e.labels().to_vec(),
                    log: model.log().to_vec(),
                    six_cycles: model.six_cycles,
                    solver: choice.name(),
                    iterations: it + 1,
                };
                return Ok(report(IlpOutcome::Refuted(cert), model, it + 1));
            }
            SolveStatus::Unknown => {
                return Ok(report(IlpOutcome::Unknown(UnknownReason::Budget), model, it + 1));
            }
            SolveStatus::Feasible { values, .. } => values,
        };
        let violated = generate_violated(&model, &values);
        log::debug!("ilp iteration {it}: {} vars, {} violated", model.keys().len(), violated.len());
        if violated.is_empty() {
            return Ok(report(IlpOutcome::Unknown(UnknownReason::Compliant), model, it + 1));
        }
        for spec in violated {
            model.add(spec)?;
        }
    }
    Ok(report(IlpOutcome::Unknown(UnknownReason::IterationCap), model, max_iter))
}

fn report(outcome: IlpOutcome, model: RegionModel, iterations: usize) -> LazyReport {
    LazyReport {
        outcome,
        model,
        iterations,
    }
}

/// Rebuilds the logged system over the recorded candidate subset of `e` and re-solves
/// it with the built-in solver. `budget` bounds the re-solve.
pub fn verify_ilp(e: &Election, cert: &IlpCertificate, budget: Duration) -> Result<(), String> {
    let sub = e.restrict(&cert.candidates).map_err(|e| e.to_string())?;
    let labels: Vec<String> = sub.labels().to_vec();
    if labels != cert.labels {
        return Err("candidate labels do not match the recorded subset".into());
    }
    let mut model = RegionModel::new(&sub);
    model.six_cycles = cert.six_cycles;
    for spec in &cert.log {
        model.add(spec.clone()).map_err(|e| e.to_string())?;
    }
    let start = Instant::now();
    match solve_builtin(&model.to_problem(), &Stop::after(budget)) {
        SolveStatus::Infeasible => Ok(()),
        SolveStatus::Feasible { .. } => Err("rebuilt system is feasible".into()),
        SolveStatus::Unknown => Err(format!(
            "re-solve did not finish within {:.1}s",
            start.elapsed().as_secs_f64()
        )),
    }
}
