//! Random elections that are two-dimensional Euclidean by construction.

use rand::Rng;

use crate::election::{Election, Vote};
use crate::qcp::Embedding;

pub struct SyntheticInstance {
    pub election: Election,
    /// Generating coordinates; one voter point per distinct ranking.
    pub embedding: Embedding,
}

fn d2(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)
}

fn cross(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

fn sub(p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
    [p[0] - q[0], p[1] - q[1]]
}

const SEP: f64 = 1e-3;

/// No two bisectors parallel (which also rules out collinear triples and coinciding
/// candidates).
fn candidates_generic(c: &[[f64; 2]]) -> bool {
    let mut dirs = Vec::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            let d = sub(c[j], c[i]);
            if d2(c[i], c[j]) < SEP {
                return false;
            }
            dirs.push(d);
        }
    }
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let n = (d2(dirs[i], [0.0, 0.0]) * d2(dirs[j], [0.0, 0.0])).sqrt();
            if cross(dirs[i], dirs[j]).abs() < SEP * n {
                return false;
            }
        }
    }
    true
}

/// Voter point with all squared-distance gaps above a threshold and away from
/// candidates.
fn voter_generic(p: [f64; 2], c: &[[f64; 2]]) -> bool {
    let mut d: Vec<f64> = c.iter().map(|&q| d2(p, q)).collect();
    d.sort_by(f64::total_cmp);
    d.first().is_none_or(|&x| x > SEP) && d.windows(2).all(|w| w[1] - w[0] > SEP)
}

fn point<R: Rng>(rng: &mut R, r: f64) -> [f64; 2] {
    [rng.gen_range(-r..r), rng.gen_range(-r..r)]
}

/// `m` candidates and `n` voters uniform in a square, in general position; each vote
/// sorts the candidates by distance. Repeated rankings collapse, so the election can
/// have fewer than `n` distinct votes.
pub fn random_euclidean<R: Rng>(rng: &mut R, m: usize, n: usize) -> SyntheticInstance {
    let radius = 10.0;
    let candidates = loop {
        let c: Vec<[f64; 2]> = (0..m).map(|_| point(rng, radius)).collect();
        if candidates_generic(&c) {
            break c;
        }
    };
    let mut voters: Vec<[f64; 2]> = Vec::new();
    let mut votes: Vec<Vote> = Vec::new();
    for _ in 0..n {
        let p = loop {
            let p = point(rng, radius);
            if voter_generic(p, &candidates) {
                break p;
            }
        };
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&a, &b| d2(p, candidates[a]).total_cmp(&d2(p, candidates[b])));
        let v = Vote::from_indices(&idx).expect("permutation");
        if !votes.contains(&v) {
            votes.push(v);
            voters.push(p);
        }
    }
    let election = Election::from_votes(m, votes).expect("same universe");
    SyntheticInstance {
        election,
        embedding: Embedding { candidates, voters },
    }
}
