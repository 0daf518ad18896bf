//! Candidate-removal rules that preserve two-dimensional Euclideanity in both
//! directions, and their replayable trace.

mod blocks;
mod copy;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use blocks::{is_block, maximal_block_decomposition, Block};
pub use copy::{find_copy, is_copy};

use crate::election::{Candidate, Election, ElectionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("copies are only searched for sets of at most three candidates, got {0}")]
    SubsetTooLarge(usize),
    #[error("candidate set is empty")]
    EmptySubset,
    #[error("candidate set lists a candidate twice")]
    DuplicateCandidate,
    #[error("candidate {0} does not exist")]
    UnknownCandidate(u32),
    #[error("step {step}: {msg}")]
    BadStep { step: usize, msg: String },
    #[error(transparent)]
    Election(#[from] ElectionError),
}

/// One candidate removal. Candidate indices refer to the election the step is applied
/// to; labels are kept for readability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum ReductionStep {
    /// A block of the maximal 3-block decomposition that has a copy elsewhere.
    #[serde(rename = "rr1pp")]
    BlockCopy {
        removed: Vec<Candidate>,
        labels: Vec<String>,
        copy: Vec<(Candidate, Candidate)>,
    },
    /// `removed` sits directly above `follower` in every vote and `anchor` beats
    /// `removed` in every vote.
    #[serde(rename = "rr2")]
    Adjacent {
        removed: Candidate,
        label: String,
        follower: Candidate,
        anchor: Candidate,
    },
}

impl ReductionStep {
    pub fn removed(&self) -> Vec<Candidate> {
        match self {
            ReductionStep::BlockCopy { removed, .. } => removed.clone(),
            ReductionStep::Adjacent { removed, .. } => vec![*removed],
        }
    }

    pub fn rule_id(&self) -> &'static str {
        match self {
            ReductionStep::BlockCopy { .. } => "rr1pp",
            ReductionStep::Adjacent { .. } => "rr2",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// Removes the right-most block (size at most three) of the maximal decomposition that
/// has a copy.
pub fn apply_rr1pp(e: &Election) -> Option<(Election, ReductionStep)> {
    let blocks = maximal_block_decomposition(e, 3);
    for b in blocks.iter().rev() {
        let s = b.candidates(e);
        if let Ok(Some(copy)) = find_copy(e, &s) {
            let reduced = e.without(&s).ok()?;
            let labels = s.iter().map(|&c| e.label(c).to_string()).collect();
            return Some((
                reduced,
                ReductionStep::BlockCopy {
                    removed: s,
                    labels,
                    copy,
                },
            ));
        }
    }
    None
}

fn rr2_holds(e: &Election, b: Candidate, c: Candidate, a: Candidate) -> bool {
    a != b
        && a != c
        && b != c
        && e.votes()
            .iter()
            .all(|v| v.index_of(c) == v.index_of(b) + 1 && v.prefers(a, b))
}

/// Removes the first candidate `b` (in candidate order) that is immediately followed by
/// the same candidate in every vote and beaten by a common candidate in every vote.
pub fn apply_rr2(e: &Election) -> Option<(Election, ReductionStep)> {
    if e.num_candidates() < 3 || e.num_votes() == 0 {
        return None;
    }
    let first = e.vote(0);
    for b in e.candidates() {
        let i = first.index_of(b);
        if i == 0 || i + 1 >= e.num_candidates() {
            continue;
        }
        let c = first.at(i + 1);
        if !e.votes().iter().all(|v| v.index_of(c) == v.index_of(b) + 1) {
            continue;
        }
        let anchor = e
            .candidates()
            .find(|&a| a != b && e.votes().iter().all(|v| v.prefers(a, b)));
        if let Some(a) = anchor {
            let reduced = e.without(&[b]).ok()?;
            return Some((
                reduced,
                ReductionStep::Adjacent {
                    removed: b,
                    label: e.label(b).to_string(),
                    follower: c,
                    anchor: a,
                },
            ));
        }
    }
    None
}

/// Applies the block-copy rule whenever possible and the adjacency rule otherwise,
/// until neither applies.
pub fn reduce_fixpoint(e: &Election) -> (Election, ReductionTrace) {
    let mut cur = e.clone();
    let mut trace = ReductionTrace::default();
    loop {
        if let Some((next, step)) = apply_rr1pp(&cur) {
            trace.steps.push(step);
            cur = next;
        } else if let Some((next, step)) = apply_rr2(&cur) {
            trace.steps.push(step);
            cur = next;
        } else {
            return (cur, trace);
        }
    }
}

/// Re-applies a trace, checking each rule's preconditions instead of searching.
pub fn replay(e: &Election, trace: &ReductionTrace) -> Result<Election, ReduceError> {
    let mut cur = e.clone();
    for (k, step) in trace.steps.iter().enumerate() {
        let bad = |msg: &str| ReduceError::BadStep {
            step: k,
            msg: msg.to_string(),
        };
        match step {
            ReductionStep::BlockCopy { removed, copy, .. } => {
                let mut s = removed.clone();
                s.sort_unstable();
                let in_decomposition = maximal_block_decomposition(&cur, 3)
                    .iter()
                    .any(|b| b.candidates(&cur) == s);
                if !in_decomposition {
                    return Err(bad("removed set is not a block of the maximal decomposition"));
                }
                let mut dom: Vec<Candidate> = copy.iter().map(|p| p.0).collect();
                dom.sort_unstable();
                if dom != s || !is_copy(&cur, copy) {
                    return Err(bad("copy map is invalid"));
                }
                cur = cur.without(&s)?;
            }
            ReductionStep::Adjacent {
                removed,
                follower,
                anchor,
                ..
            } => {
                let m = cur.num_candidates();
                let in_range = [removed, follower, anchor].iter().all(|c| c.index() < m);
                if m < 3 || cur.num_votes() == 0 || !in_range || !rr2_holds(&cur, *removed, *follower, *anchor) {
                    return Err(bad("adjacency rule preconditions fail"));
                }
                cur = cur.without(&[*removed])?;
            }
        }
    }
    Ok(cur)
}
