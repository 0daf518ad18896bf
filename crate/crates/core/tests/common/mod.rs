#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::f64::consts::PI;

use euclid2d::reducer::Block;
use euclid2d::{Candidate, Election, Vote};

/// Bisector of candidates a < b as `n . p = k`; points with `n . p < k` are closer to a.
struct Line {
    a: usize,
    b: usize,
    n: [f64; 2],
    k: f64,
}

fn lines(cands: &[[f64; 2]]) -> Vec<Line> {
    let mut out = Vec::new();
    for a in 0..cands.len() {
        for b in a + 1..cands.len() {
            let (pa, pb) = (cands[a], cands[b]);
            out.push(Line {
                a,
                b,
                n: [2.0 * (pb[0] - pa[0]), 2.0 * (pb[1] - pa[1])],
                k: pb[0] * pb[0] + pb[1] * pb[1] - pa[0] * pa[0] - pa[1] * pa[1],
            });
        }
    }
    out
}

/// Ranking seen from `p`, using the linear bisector test for precision far away.
pub fn ranking_at(cands: &[[f64; 2]], p: [f64; 2]) -> Vote {
    let ls = lines(cands);
    let side = |a: usize, b: usize| -> Ordering {
        let (lo, hi, flip) = if a < b { (a, b, false) } else { (b, a, true) };
        let l = ls.iter().find(|l| l.a == lo && l.b == hi).unwrap();
        let s = l.n[0] * p[0] + l.n[1] * p[1] - l.k;
        assert!(s.abs() > 1e-12 * (1.0 + l.k.abs()), "sample point on a bisector");
        let o = if s < 0.0 { Ordering::Less } else { Ordering::Greater };
        if flip {
            o.reverse()
        } else {
            o
        }
    };
    let mut idx: Vec<usize> = (0..cands.len()).collect();
    idx.sort_by(|&a, &b| if a == b { Ordering::Equal } else { side(a, b) });
    Vote::from_indices(&idx).unwrap()
}

fn mid_angles(mut angles: Vec<f64>) -> Vec<f64> {
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let n = angles.len();
    (0..n)
        .map(|i| {
            let (lo, hi) = (angles[i], if i + 1 < n { angles[i + 1] } else { angles[0] + 2.0 * PI });
            (lo + hi) / 2.0
        })
        .collect()
}

fn both_ways(l: &Line) -> [f64; 2] {
    let t = l.n[0].atan2(-l.n[1]).rem_euclid(PI);
    [t, t + PI]
}

/// Exact face structure of the bisector arrangement of `cands`: every realised
/// ranking and the subset whose regions are unbounded. Every face has a vertex once two
/// bisectors cross, so sampling around each vertex and in each sector at infinity sees
/// all of them.
pub struct Arrangement {
    pub regions: BTreeSet<Vote>,
    pub unbounded: BTreeSet<Vote>,
}

impl Arrangement {
    pub fn bounded(&self, v: &Vote) -> bool {
        self.regions.contains(v) && !self.unbounded.contains(v)
    }
}

pub fn arrangement(cands: &[[f64; 2]]) -> Arrangement {
    let ls = lines(cands);
    let mut regions = BTreeSet::new();
    let mut unbounded = BTreeSet::new();
    let mut vertices = Vec::new();
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            let (l1, l2) = (&ls[i], &ls[j]);
            let det = l1.n[0] * l2.n[1] - l1.n[1] * l2.n[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let x = (l1.k * l2.n[1] - l1.n[1] * l2.k) / det;
            let y = (l1.n[0] * l2.k - l1.k * l2.n[0]) / det;
            vertices.push([x, y]);
        }
    }
    let dist = |l: &Line, p: [f64; 2]| (l.n[0] * p[0] + l.n[1] * p[1] - l.k).abs() / l.n[0].hypot(l.n[1]);
    for &p in &vertices {
        let scale = 1e-9 * (1.0 + p[0].abs() + p[1].abs());
        let (through, away): (Vec<&Line>, Vec<&Line>) = ls.iter().partition(|l| dist(l, p) < scale);
        let delta = away.iter().map(|l| dist(l, p)).fold(1.0, f64::min) / 4.0;
        let angles = through.iter().flat_map(|l| both_ways(l)).collect();
        for t in mid_angles(angles) {
            regions.insert(ranking_at(cands, [p[0] + delta * t.cos(), p[1] + delta * t.sin()]));
        }
    }
    let angles: Vec<f64> = ls.iter().flat_map(both_ways).collect();
    for t in mid_angles(angles) {
        let d = [t.cos(), t.sin()];
        let reach = ls
            .iter()
            .map(|l| {
                let den = l.n[0] * d[0] + l.n[1] * d[1];
                if den.abs() < 1e-300 {
                    0.0
                } else {
                    (l.k / den).abs()
                }
            })
            .fold(1.0, f64::max);
        let v = ranking_at(cands, [2.0 * reach * d[0], 2.0 * reach * d[1]]);
        regions.insert(v.clone());
        unbounded.insert(v);
    }
    Arrangement { regions, unbounded }
}

/// Unsigned Stirling numbers of the first kind by the usual recurrence.
pub fn stirling1(n: usize) -> Vec<Vec<u64>> {
    let mut s = vec![vec![0u64; n + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = s[i - 1][k - 1] + (i as u64 - 1) * s[i - 1][k];
        }
    }
    s
}

pub fn set_at(v: &Vote, lo: usize, hi: usize) -> BTreeSet<Candidate> {
    v.ranking()[lo - 1..hi].iter().copied().collect()
}

/// Every consecutive run of blocks of size at most k ending at the last position;
/// returns all decompositions with the largest block count.
pub fn brute_decompositions(e: &Election, k: usize) -> Vec<Vec<Block>> {
    let m = e.num_candidates();
    let blk = |lo: usize, hi: usize| {
        let s = set_at(e.vote(0), lo, hi);
        e.votes().iter().all(|v| set_at(v, lo, hi) == s)
    };
    let mut best: Vec<Vec<Block>> = Vec::new();
    let mut best_len = 0;
    let mut stack: Vec<Vec<Block>> = vec![vec![]];
    while let Some(chain) = stack.pop() {
        let right = chain.first().map_or(m, |b| b.start - 1);
        if !chain.is_empty() {
            match chain.len().cmp(&best_len) {
                std::cmp::Ordering::Greater => {
                    best_len = chain.len();
                    best = vec![chain.clone()];
                }
                std::cmp::Ordering::Equal => best.push(chain.clone()),
                std::cmp::Ordering::Less => {}
            }
        }
        for len in 1..=k.min(right) {
            if blk(right - len + 1, right) {
                let mut next = vec![Block { start: right - len + 1, end: right }];
                next.extend(chain.iter().copied());
                stack.push(next);
            }
        }
    }
    best
}

