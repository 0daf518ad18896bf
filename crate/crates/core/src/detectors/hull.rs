use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::controversity::{check_controversity, violation_holds, ControversityGraph, Violation};
use super::DetectorError;
use crate::budget::Stop;
use crate::election::Election;

/// Which voter subsets to examine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HullMode {
    /// Every four-voter subset.
    Quad,
    /// Subsets of four up to the given number of voters, smallest first.
    Full(usize),
}

impl Default for HullMode {
    fn default() -> Self {
        HullMode::Full(6)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullCertificate {
    pub graph: ControversityGraph,
    pub violation: Violation,
}

/// Looks for a voter subset whose controversity graph breaks the degree/connectivity
/// property. Subsets are visited by size, lexicographically within a size.
pub fn hull_refute(
    e: &Election,
    mode: HullMode,
    stop: &Stop,
) -> Result<Option<HullCertificate>, DetectorError> {
    let n = e.num_votes();
    let cap = match mode {
        HullMode::Quad => 4,
        HullMode::Full(cap) => cap,
    };
    if cap < 4 || n < 4 {
        return Err(DetectorError::TooFewVoters { needed: 4, got: n.min(cap) });
    }
    for size in 4..=cap.min(n) {
        for (k, subset) in (0..n).combinations(size).enumerate() {
            if k % 32 == 0 && stop.should_stop() {
                return Ok(None);
            }
            let g = ControversityGraph::of_subset(e, &subset).expect("indices in range");
            if let Some(violation) = check_controversity(&g) {
                return Ok(Some(HullCertificate { graph: g, violation }));
            }
        }
    }
    Ok(None)
}

/// Recomputes the graph of the recorded subset and checks the recorded breach.
pub fn verify_hull(e: &Election, cert: &HullCertificate) -> Result<(), String> {
    let g = ControversityGraph::of_subset(e, &cert.graph.voters).map_err(|e| e.to_string())?;
    if g != cert.graph {
        return Err("recorded controversity graph does not match the election".into());
    }
    if !violation_holds(&g, &cert.violation) {
        return Err("recorded violation is not present in the graph".into());
    }
    Ok(())
}
