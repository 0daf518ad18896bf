use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{QcpError, QcpRow};
use crate::election::Election;

/// Planar coordinates for every candidate and every distinct ranking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub candidates: Vec<[f64; 2]>,
    pub voters: Vec<[f64; 2]>,
}

fn d2(p: [f64; 2], q: [f64; 2]) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    dx * dx + dy * dy
}

impl Embedding {
    pub fn scaled(&self, lambda: f64) -> Embedding {
        let s = |v: &Vec<[f64; 2]>| v.iter().map(|p| [p[0] * lambda, p[1] * lambda]).collect();
        Embedding {
            candidates: s(&self.candidates),
            voters: s(&self.voters),
        }
    }

    /// Every coordinate rounded to `digits` significant digits.
    pub fn rounded(&self, digits: i32) -> Embedding {
        let r = |v: &Vec<[f64; 2]>| {
            v.iter()
                .map(|p| [round_sig(p[0], digits), round_sig(p[1], digits)])
                .collect()
        };
        Embedding {
            candidates: r(&self.candidates),
            voters: r(&self.voters),
        }
    }

    /// One `<kind> <id> <x> <y>` line per point, ids starting at 0.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.candidates.iter().enumerate() {
            let _ = writeln!(out, "candidate {i} {} {}", p[0], p[1]);
        }
        for (i, p) in self.voters.iter().enumerate() {
            let _ = writeln!(out, "voter {i} {} {}", p[0], p[1]);
        }
        out
    }

    /// Reads lines written by [`Embedding::to_lines`]; other lines are ignored.
    pub fn from_lines(text: &str, m: usize, n: usize) -> Result<Embedding, QcpError> {
        let mut cand = vec![None; m];
        let mut vot = vec![None; n];
        for line in text.lines() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || !matches!(parts[0], "candidate" | "voter") {
                continue;
            }
            let bad = || QcpError::Malformed(line.to_string());
            let id: usize = parts[1].parse().map_err(|_| bad())?;
            let x: f64 = parts[2].parse().map_err(|_| bad())?;
            let y: f64 = parts[3].parse().map_err(|_| bad())?;
            let slot = if parts[0] == "candidate" { cand.get_mut(id) } else { vot.get_mut(id) };
            *slot.ok_or_else(bad)? = Some([x, y]);
        }
        let collect = |v: Vec<Option<[f64; 2]>>, kind: &str| {
            v.into_iter()
                .enumerate()
                .map(|(i, p)| p.ok_or_else(|| QcpError::MissingPoint(format!("{kind} {i}"))))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(Embedding {
            candidates: collect(cand, "candidate")?,
            voters: collect(vot, "voter")?,
        })
    }
}

pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - mag);
    if scale.is_finite() && scale != 0.0 {
        (x * scale).round() / scale
    } else {
        x
    }
}

fn check_sizes(e: &Election, emb: &Embedding) -> Result<(), QcpError> {
    if emb.candidates.len() < e.num_candidates() {
        return Err(QcpError::MissingPoint(format!("candidate {}", emb.candidates.len())));
    }
    if emb.voters.len() < e.num_votes() {
        return Err(QcpError::MissingPoint(format!("voter {}", emb.voters.len())));
    }
    Ok(())
}

/// Smallest `|v - b|^2 - |v - a|^2` over all voters and all pairs `a` above `b`.
pub fn min_gap(e: &Election, emb: &Embedding) -> Result<f64, QcpError> {
    check_sizes(e, emb)?;
    let mut gap = f64::INFINITY;
    for (i, v) in e.votes().iter().enumerate() {
        let p = emb.voters[i];
        let d: Vec<f64> = v.ranking().iter().map(|c| d2(p, emb.candidates[c.index()])).collect();
        // Checking consecutive positions is not enough for the minimum: scan all pairs.
        for x in 0..d.len() {
            for y in x + 1..d.len() {
                let g = d[y] - d[x];
                if g.is_nan() {
                    return Ok(f64::NAN);
                }
                gap = gap.min(g);
            }
        }
    }
    Ok(gap)
}

/// Accepts iff all points are pairwise distinct and every voter is strictly closer to
/// each candidate it prefers, by at least `tol` in squared distance.
pub fn verify_embedding(e: &Election, emb: &Embedding, tol: f64) -> Result<bool, QcpError> {
    check_sizes(e, emb)?;
    let pts: Vec<[f64; 2]> = emb.candidates[..e.num_candidates()]
        .iter()
        .chain(&emb.voters[..e.num_votes()])
        .copied()
        .collect();
    if pts.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Ok(false);
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return Ok(false);
            }
        }
    }
    Ok(violations(e, emb, tol)?.is_empty())
}

/// Finite `x` as `(mantissa, exponent)` with `x = mantissa * 2^exponent`.
fn dyadic(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1 << 52) - 1)) as i64;
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | 1 << 52, exp - 1075) };
    (if x < 0.0 { -mant } else { mant }, e)
}

/// Every `(voter, a, b)` with `a` ranked above `b` whose exact squared distances do not
/// satisfy `|v - a|^2 < |v - b|^2`, plus, when `tol > 0`, pairs whose float gap is below
/// `tol`. Coordinates are taken at their exact binary values.
pub fn violations(e: &Election, emb: &Embedding, tol: f64) -> Result<Vec<QcpRow>, QcpError> {
    check_sizes(e, emb)?;
    let m = e.num_candidates();
    let pts: Vec<[f64; 2]> = emb.candidates[..m]
        .iter()
        .chain(&emb.voters[..e.num_votes()])
        .copied()
        .collect();
    if let Some(p) = pts.iter().find(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(QcpError::Malformed(format!("non-finite point {p:?}")));
    }
    let lowest = pts.iter().flatten().map(|&x| dyadic(x).1).min().unwrap_or(0);
    let int = |x: f64| {
        let (mant, k) = dyadic(x);
        BigInt::from(mant) << (k - lowest) as usize
    };
    let exact: Vec<[BigInt; 2]> = pts.iter().map(|p| [int(p[0]), int(p[1])]).collect();
    let mut out = Vec::new();
    for (i, v) in e.votes().iter().enumerate() {
        let p = &exact[m + i];
        let dist = |c: usize| {
            let dx = &p[0] - &exact[c][0];
            let dy = &p[1] - &exact[c][1];
            &dx * &dx + &dy * &dy
        };
        let r = v.ranking();
        let d: Vec<BigInt> = r.iter().map(|c| dist(c.index())).collect();
        let f: Vec<f64> = r.iter().map(|c| d2(pts[m + i], pts[c.index()])).collect();
        for x in 0..r.len() {
            for y in x + 1..r.len() {
                if d[y] <= d[x] || (tol > 0.0 && !(f[y] - f[x] >= tol)) {
                    out.push(QcpRow { voter: i, a: r[x], b: r[y] });
                }
            }
        }
    }
    Ok(out)
}
