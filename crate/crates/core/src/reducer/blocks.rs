use serde::{Deserialize, Serialize};

use crate::election::{Candidate, Election};

/// Positions `start..=end` (one-based) that hold the same candidate set in every vote.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub end: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    /// Candidates of the block, sorted by index.
    pub fn candidates(&self, e: &Election) -> Vec<Candidate> {
        let mut cs: Vec<Candidate> = e.vote(0).ranking()[self.start - 1..self.end].to_vec();
        cs.sort_unstable();
        cs
    }
}

pub fn is_block(e: &Election, start: usize, end: usize) -> bool {
    if start == 0 || end < start || end > e.num_candidates() || e.num_votes() == 0 {
        return false;
    }
    let mut reference = e.vote(0).ranking()[start - 1..end].to_vec();
    reference.sort_unstable();
    e.votes().iter().skip(1).all(|v| {
        let mut s = v.ranking()[start - 1..end].to_vec();
        s.sort_unstable();
        s == reference
    })
}

/// `cut[p]` holds when the last `m - p` positions carry the same candidate set in all
/// votes.
fn suffix_cuts(e: &Election) -> Vec<bool> {
    let m = e.num_candidates();
    let mut cut = vec![true; m + 1];
    let r = e.vote(0);
    for v in e.votes().iter().skip(1) {
        let mut lowest = usize::MAX;
        for p in (0..m).rev() {
            lowest = lowest.min(r.index_of(v.at(p)));
            if lowest < p {
                cut[p] = false;
            }
        }
    }
    cut
}

/// Block decomposition of a suffix of the ranking with blocks of size at most `k` and
/// as many blocks as possible, built right to left. Blocks are returned left to right.
/// The decomposition may leave a prefix uncovered and is empty when no vote exists.
pub fn maximal_block_decomposition(e: &Election, k: usize) -> Vec<Block> {
    let m = e.num_candidates();
    if e.num_votes() == 0 || m == 0 || k == 0 {
        return Vec::new();
    }
    let cut = suffix_cuts(e);
    let mut blocks = Vec::new();
    let mut right = m;
    while right > 0 {
        match (1..=k.min(right)).find(|&len| cut[right - len]) {
            Some(len) => {
                blocks.push(Block {
                    start: right - len + 1,
                    end: right,
                });
                right -= len;
            }
            None => break,
        }
    }
    blocks.reverse();
    blocks
}
