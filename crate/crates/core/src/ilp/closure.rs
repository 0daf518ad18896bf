use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{implied_neighbor_step, ub};
use crate::budget::Stop;
use crate::election::{Election, Vote};

/// A region forced nonempty because it is the only implied step from `from.0` towards
/// `from.1`, both of which were already known to be nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureStep {
    pub vote: Vote,
    pub from: (Vote, Vote),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureCertificate {
    pub bound: u64,
    pub derivation: Vec<ClosureStep>,
}

pub fn closure_refute(e: &Election) -> Option<ClosureCertificate> {
    closure_refute_until(e, &Stop::never())
}

/// Adds forced regions until nothing changes or more regions than the planar bound are
/// forced.
pub fn closure_refute_until(e: &Election, stop: &Stop) -> Option<ClosureCertificate> {
    let bound = ub(e.num_candidates());
    let mut set: Vec<Vote> = e.votes().to_vec();
    let mut seen: HashSet<Vote> = set.iter().cloned().collect();
    let mut derivation = Vec::new();
    if set.len() as u64 > bound {
        return Some(ClosureCertificate { bound, derivation });
    }
    let mut idx = 0;
    while idx < set.len() {
        if stop.should_stop() {
            return None;
        }
        for j in 0..idx {
            for (u, v) in [(idx, j), (j, idx)] {
                let step = implied_neighbor_step(&set[u], &set[v]).expect("distinct, same universe");
                if step.len() == 1 && !seen.contains(&step[0]) {
                    let w = step.into_iter().next().unwrap();
                    seen.insert(w.clone());
                    derivation.push(ClosureStep {
                        vote: w.clone(),
                        from: (set[u].clone(), set[v].clone()),
                    });
                    set.push(w);
                    if set.len() as u64 > bound {
                        return Some(ClosureCertificate { bound, derivation });
                    }
                }
            }
        }
        idx += 1;
    }
    None
}

/// Replays the derivation step by step.
pub fn verify_closure(e: &Election, cert: &ClosureCertificate) -> Result<(), String> {
    if cert.bound != ub(e.num_candidates()) {
        return Err("recorded bound does not match the candidate count".into());
    }
    let mut seen: HashSet<Vote> = e.votes().iter().cloned().collect();
    for (k, s) in cert.derivation.iter().enumerate() {
        let (u, v) = &s.from;
        if !seen.contains(u) || !seen.contains(v) {
            return Err(format!("step {k}: premise not yet derived"));
        }
        let step = implied_neighbor_step(u, v).map_err(|e| format!("step {k}: {e}"))?;
        if step.len() != 1 || step[0] != s.vote {
            return Err(format!("step {k}: implied step is not unique or differs"));
        }
        if !seen.insert(s.vote.clone()) {
            return Err(format!("step {k}: region derived twice"));
        }
    }
    if seen.len() as u64 <= cert.bound {
        return Err(format!("{} forced regions do not exceed {}", seen.len(), cert.bound));
    }
    Ok(())
}
