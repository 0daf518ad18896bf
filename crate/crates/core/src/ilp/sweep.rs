
use itertools::Itertools;

use super::lazy::{lazy_refute, IlpOutcome, UnknownReason};
use super::{IlpConfig, IlpError};
use crate::budget::{secs, Stop};
use crate::election::{Candidate, Election};
use crate::qcp::{escalate_embed, QcpConfig};
use crate::reducer::{reduce_fixpoint, ReductionStep};

/// Original indices of the candidates that survive a reduction trace.
pub(crate) fn surviving(initial: &[Candidate], steps: &[ReductionStep]) -> Vec<Candidate> {
    let mut kept = initial.to_vec();
    for s in steps {
        let mut removed = s.removed();
        removed.sort_unstable_by(|a, b| b.cmp(a));
        for r in removed {
            kept.remove(r.index());
        }
    }
    kept
}

/// Runs the lazy ILP on candidate subsets of growing size. A subset is skipped when its
/// reduction leaves fewer than four candidates or a short embedding attempt succeeds.
pub fn subset_sweep(
    e: &Election,
    cfg: &IlpConfig,
    qcp: &QcpConfig,
    stop: &Stop,
) -> Result<IlpOutcome, IlpError> {
    let m = e.num_candidates();
    let lo = cfg.subset_min.max(4);
    for size in lo..=m {
        for subset in (0..m).map(Candidate::from).combinations(size) {
            if stop.should_stop() {
                return Ok(IlpOutcome::Unknown(UnknownReason::Budget));
            }
            let sub = e.restrict(&subset)?;
            let (reduced, trace) = reduce_fixpoint(&sub);
            if reduced.num_candidates() < 4
                || reduced.num_votes() <= 2
                || (reduced.num_votes() == 3 && reduced.num_candidates() <= 7)
            {
                continue;
            }
            let screen = stop.within(secs(cfg.quick_screen_secs));
            if escalate_embed(&reduced, qcp, &screen).is_some() {
                continue;
            }
            if stop.should_stop() {
                return Ok(IlpOutcome::Unknown(UnknownReason::Budget));
            }
            if let IlpOutcome::Refuted(mut cert) = lazy_refute(&reduced, cfg, stop)? {
                cert.candidates = surviving(&subset, &trace.steps);
                return Ok(IlpOutcome::Refuted(cert));
            }
        }
    }
    Ok(IlpOutcome::Unknown(if stop.should_stop() {
        UnknownReason::Budget
    } else {
        UnknownReason::IterationCap
    }))
}
