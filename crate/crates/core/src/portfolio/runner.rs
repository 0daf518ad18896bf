use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::{Duration, Instant};

use super::{triviality_screen, Certificate, Config, EmbeddingCertificate, Lane, LaneTiming, Status, Verdict};
use crate::budget::{secs, Stop};
use crate::detectors::{find_38_until, hull_refute, HullMode};
use crate::election::Election;
use crate::ilp::{closure_refute_until, lazy_refute, subset_sweep, IlpOutcome};
use crate::qcp::{escalate_embed, min_gap, verify_embedding};
use crate::reducer::{reduce_fixpoint, ReductionTrace};

#[derive(Clone, Debug, PartialEq)]
pub enum LaneOutcome {
    Definitive(Certificate),
    Unknown(String),
}

impl LaneOutcome {
    fn describe(&self) -> String {
        match self {
            LaneOutcome::Definitive(c) => c.kind().to_string(),
            LaneOutcome::Unknown(why) => format!("unknown ({why})"),
        }
    }
}

fn unknown(why: impl Into<String>) -> LaneOutcome {
    LaneOutcome::Unknown(why.into())
}

/// Runs a single lane on an (already reduced) election.
pub fn run_lane(lane: Lane, r: &Election, cfg: &Config, stop: &Stop) -> LaneOutcome {
    match lane {
        Lane::Pattern38 => match find_38_until(r, stop) {
            Some(p) => LaneOutcome::Definitive(Certificate::Pattern38(p)),
            None => unknown("no pattern"),
        },
        Lane::HullQuad | Lane::HullFull => {
            let mode = if lane == Lane::HullQuad {
                HullMode::Quad
            } else {
                HullMode::Full(cfg.portfolio.hull_cap)
            };
            if lane == Lane::HullFull && r.num_votes() <= 4 && cfg.portfolio.lanes.contains(&Lane::HullQuad) {
                return unknown("covered by the four-voter lane");
            }
            match hull_refute(r, mode, stop) {
                Ok(Some(c)) => LaneOutcome::Definitive(Certificate::Hull(c)),
                Ok(None) => unknown("no violation"),
                Err(e) => unknown(e.to_string()),
            }
        }
        Lane::Closure => match closure_refute_until(r, stop) {
            Some(c) => LaneOutcome::Definitive(Certificate::Closure(c)),
            None => unknown("closure within bound"),
        },
        Lane::Ilp => {
            if r.num_candidates() < 4 {
                return unknown("fewer than four candidates");
            }
            let out = if r.num_candidates() < cfg.ilp.subset_min.max(4) {
                lazy_refute(r, &cfg.ilp, stop)
            } else {
                subset_sweep(r, &cfg.ilp, &cfg.qcp, stop)
            };
            match out {
                Ok(IlpOutcome::Refuted(c)) => LaneOutcome::Definitive(Certificate::Ilp(c)),
                Ok(IlpOutcome::Unknown(why)) => unknown(format!("{why:?}")),
                Err(e) => unknown(e.to_string()),
            }
        }
        Lane::Embed => match escalate_embed(r, &cfg.qcp, stop) {
            Some(embedding) => {
                let rounded = embedding.rounded(12);
                let rounded_verified = verify_embedding(r, &rounded, 0.0).unwrap_or(false);
                let gap = min_gap(r, &embedding).unwrap_or(0.0);
                LaneOutcome::Definitive(Certificate::Embedding(EmbeddingCertificate {
                    embedding,
                    rounded,
                    rounded_verified,
                    min_gap: gap,
                }))
            }
            None => unknown("no embedding found"),
        },
    }
}

fn finish(
    start: Instant,
    certificate: Option<Certificate>,
    trace: ReductionTrace,
    r: &Election,
    lane: Option<Lane>,
    timings: Vec<LaneTiming>,
    diagnostics: Vec<String>,
) -> Verdict {
    Verdict {
        status: certificate.as_ref().map_or(Status::Unknown, Certificate::status),
        certificate,
        trace,
        reduced_digest: r.digest(),
        reduced_candidates: r.num_candidates(),
        reduced_votes: r.num_votes(),
        lane,
        timings,
        diagnostics,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// Screens, reduces, then races the configured lanes on the reduced election. The first
/// definitive lane wins; results that are already in when it arrives are ranked by lane
/// priority.
pub fn run_portfolio(e: &Election, cfg: &Config) -> Verdict {
    let start = Instant::now();
    if let Some(rule) = triviality_screen(e) {
        let c = Some(Certificate::Trivial(rule));
        return finish(start, c, ReductionTrace::default(), e, None, vec![], vec![]);
    }
    let (r, trace) = reduce_fixpoint(e);
    let mut diagnostics = Vec::new();
    if !trace.steps.is_empty() {
        diagnostics.push(format!(
            "reduced from {} to {} candidates in {} steps",
            e.num_candidates(),
            r.num_candidates(),
            trace.steps.len()
        ));
    }
    if let Some(rule) = triviality_screen(&r) {
        let c = Some(Certificate::Trivial(rule));
        return finish(start, c, trace, &r, None, vec![], diagnostics);
    }

    let flag = Arc::new(AtomicBool::new(false));
    let budget = secs(cfg.portfolio.budget_secs);
    let stop = Stop::after(budget).with_flag(flag.clone());
    let (tx, rx) = mpsc::channel::<(Lane, LaneOutcome, Duration)>();
    let mut timings = Vec::new();
    let mut winner: Option<(Lane, Certificate)> = None;

    thread::scope(|s| {
        for &lane in &cfg.portfolio.lanes {
            let tx = tx.clone();
            let stop = stop.clone();
            let r = &r;
            s.spawn(move || {
                let t0 = Instant::now();
                let out = run_lane(lane, r, cfg, &stop);
                let _ = tx.send((lane, out, t0.elapsed()));
            });
        }
        drop(tx);
        let mut record = |lane: Lane, out: LaneOutcome, took: Duration, winner: &mut Option<(Lane, Certificate)>| {
            timings.push(LaneTiming {
                lane,
                secs: took.as_secs_f64(),
                outcome: out.describe(),
            });
            if let LaneOutcome::Definitive(c) = out {
                if winner.as_ref().is_none_or(|(l, _)| lane < *l) {
                    *winner = Some((lane, c));
                }
            }
        };
        loop {
            let wait = stop.remaining().unwrap_or(Duration::MAX);
            match rx.recv_timeout(wait) {
                Ok((lane, out, took)) => {
                    record(lane, out, took, &mut winner);
                    if winner.is_some() {
                        while let Ok((lane, out, took)) = rx.try_recv() {
                            record(lane, out, took, &mut winner);
                        }
                        break;
                    }
                }
                Err(mpsc::RecvTimeoutError::Timeout) => break,
                Err(mpsc::RecvTimeoutError::Disconnected) => break,
            }
        }
        flag.store(true, Ordering::Relaxed);
    });
    for (lane, out, took) in rx.try_iter() {
        timings.push(LaneTiming {
            lane,
            secs: took.as_secs_f64(),
            outcome: format!("{} (after decision)", out.describe()),
        });
    }
    let (lane, cert) = match winner {
        Some((l, c)) => (Some(l), Some(c)),
        None => (None, None),
    };
    finish(start, cert, trace, &r, lane, timings, diagnostics)
}
