//! Search for three voters and eight candidates realising every preference pattern
//! around a common center candidate.

use serde::{Deserialize, Serialize};

use crate::budget::Stop;
use crate::election::{Candidate, Election};

/// Three voters, a center, and one candidate per nonempty voter subset.
///
/// `witnesses[s - 1]` is ranked above `center` exactly by the voters whose bits are set
/// in `s` (bit `i` stands for `voters[i]`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern38 {
    pub voters: [usize; 3],
    pub center: Candidate,
    pub witnesses: [Candidate; 7],
}

pub fn find_38(e: &Election) -> Option<Pattern38> {
    find_38_until(e, &Stop::never())
}

/// Centers are tried in candidate order, voter triples lexicographically; the first
/// complete table wins. Each slot keeps the smallest candidate that fills it.
pub fn find_38_until(e: &Election, stop: &Stop) -> Option<Pattern38> {
    let m = e.num_candidates();
    let n = e.num_votes();
    if m < 8 || n < 3 {
        return None;
    }
    let votes = e.votes();
    let mut above = vec![vec![false; m]; n];
    for center in e.candidates() {
        if stop.should_stop() {
            return None;
        }
        for (row, v) in above.iter_mut().zip(votes) {
            for d in 0..m {
                row[d] = v.prefers(Candidate::from(d), center);
            }
        }
        let others: Vec<usize> = (0..m).filter(|&d| d != center.index()).collect();
        // A pair of voters can only belong to a hit if it sees all four sign patterns.
        let pair_ok = |i: usize, j: usize| {
            let mut seen = 0u8;
            for &d in &others {
                seen |= 1 << (above[i][d] as u8 | (above[j][d] as u8) << 1);
            }
            seen == 0b1111
        };
        for i in 0..n {
            for j in i + 1..n {
                if !pair_ok(i, j) {
                    continue;
                }
                if stop.should_stop() {
                    return None;
                }
                for k in j + 1..n {
                    let mut slots: [Option<usize>; 8] = [None; 8];
                    let mut filled = 0;
                    for &d in &others {
                        let s = above[i][d] as usize
                            | (above[j][d] as usize) << 1
                            | (above[k][d] as usize) << 2;
                        if s != 0 && slots[s].is_none() {
                            slots[s] = Some(d);
                            filled += 1;
                            if filled == 7 {
                                break;
                            }
                        }
                    }
                    if filled == 7 {
                        let mut witnesses = [Candidate(0); 7];
                        for s in 1..8 {
                            witnesses[s - 1] = Candidate::from(slots[s].unwrap());
                        }
                        return Some(Pattern38 {
                            voters: [i, j, k],
                            center,
                            witnesses,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Checks the defining property of a pattern against `e`.
pub fn verify_38(e: &Election, p: &Pattern38) -> Result<(), String> {
    let n = e.num_votes();
    let m = e.num_candidates();
    let [a, b, c] = p.voters;
    if a == b || a == c || b == c || p.voters.iter().any(|&i| i >= n) {
        return Err("voters must be three distinct existing rankings".into());
    }
    let mut used = vec![p.center];
    for &w in &p.witnesses {
        if used.contains(&w) {
            return Err(format!("candidate {w} used twice"));
        }
        used.push(w);
    }
    if used.iter().any(|c| c.index() >= m) {
        return Err("candidate out of range".into());
    }
    for (s, &w) in (1..8usize).zip(&p.witnesses) {
        for (bit, &vi) in p.voters.iter().enumerate() {
            let expect = s >> bit & 1 == 1;
            if e.vote(vi).prefers(w, p.center) != expect {
                return Err(format!("slot {s}: voter {vi} disagrees on {w}"));
            }
        }
    }
    Ok(())
}
