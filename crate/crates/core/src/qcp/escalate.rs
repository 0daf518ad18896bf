use std::time::Duration;

use super::external::solve_external_qcp;
use super::{build_qcp, solve_penalty, verify_embedding, Embedding, QcpConfig, QcpSystem};
use crate::budget::{secs, Stop};
use crate::election::Election;

fn to_embedding(sys: &QcpSystem, z: &[f64]) -> Embedding {
    let pt = |k: usize| [z[2 * k], z[2 * k + 1]];
    Embedding {
        candidates: (0..sys.m).map(pt).collect(),
        voters: (sys.m..sys.m + sys.n).map(pt).collect(),
    }
}

/// Separates coinciding points by a tiny deterministic offset.
fn separate(emb: &mut Embedding) {
    let mut seen: Vec<[f64; 2]> = Vec::new();
    for (k, p) in emb.candidates.iter_mut().chain(emb.voters.iter_mut()).enumerate() {
        while seen.contains(p) {
            p[0] += 1e-7 * (1 + k) as f64 * (1.0 + p[0].abs());
            p[1] -= 1e-7 * (1.0 + p[1].abs());
        }
        seen.push(*p);
    }
}

/// One solve at a fixed box. Returns only embeddings that pass verification.
pub fn solve_feasibility(e: &Election, sys: &QcpSystem, cfg: &QcpConfig, seed: u64, stop: &Stop) -> Option<Embedding> {
    let mut emb = match cfg.solver.strip_prefix("external:") {
        Some(cmd) => solve_external_qcp(sys, cmd.trim(), stop)?,
        None => to_embedding(sys, &solve_penalty(sys, seed, cfg.restarts, cfg.local_iters, stop)?),
    };
    if verify_embedding(e, &emb, 0.0).ok()? {
        return Some(emb);
    }
    separate(&mut emb);
    verify_embedding(e, &emb, 0.0).ok()?.then_some(emb)
}

/// Solves with a growing box and time slice until an embedding is found or the overall
/// budget in `stop` is spent.
pub fn escalate_embed(e: &Election, cfg: &QcpConfig, stop: &Stop) -> Option<Embedding> {
    if stop.remaining() == Some(Duration::ZERO) || !(cfg.box_init > 0.0 && (16.0 * cfg.box_init.powi(2)).is_finite()) {
        return None;
    }
    let mut bound = cfg.box_init;
    let mut slice = cfg.slice_init_secs;
    for round in 0u64.. {
        if stop.should_stop() {
            return None;
        }
        let sys = build_qcp(e, cfg.eps_star, bound, bound, cfg.full_pairs);
        let seed = cfg.seed ^ round.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let slice_stop = stop.within(secs(slice));
        if let Some(emb) = solve_feasibility(e, &sys, cfg, seed, &slice_stop) {
            return Some(emb);
        }
        // the box stops growing once squared distances inside it would overflow
        if (16.0 * (bound * cfg.box_factor).powi(2)).is_finite() {
            bound *= cfg.box_factor;
        }
        slice *= cfg.slice_factor;
    }
    None
}
