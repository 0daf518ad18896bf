//! Multi-start minimisation of a squared-hinge penalty with L-BFGS steps and
//! backtracking line search.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::QcpSystem;
use crate::budget::Stop;

/// Rows are optimised against this multiple of `eps_star` so that the true margin holds
/// with room to spare once the penalty is small.
const OVERSHOOT: f64 = 2.0;
const HISTORY: usize = 8;

struct Objective<'a> {
    sys: &'a QcpSystem,
    target: f64,
}

impl Objective<'_> {
    fn voter(&self, i: usize) -> usize {
        2 * (self.sys.m + i)
    }

    /// Penalty value; fills `grad` when given.
    fn eval(&self, z: &[f64], mut grad: Option<&mut [f64]>) -> f64 {
        if let Some(g) = grad.as_deref_mut() {
            g.iter_mut().for_each(|x| *x = 0.0);
        }
        let mut f = 0.0;
        for r in &self.sys.rows {
            let (v, a, b) = (self.voter(r.voter), 2 * r.a.index(), 2 * r.b.index());
            let (vx, vy) = (z[v], z[v + 1]);
            let (ax, ay) = (vx - z[a], vy - z[a + 1]);
            let (bx, by) = (vx - z[b], vy - z[b + 1]);
            let h = ax * ax + ay * ay - bx * bx - by * by + self.target;
            if h > 0.0 {
                f += h * h;
                if let Some(g) = grad.as_deref_mut() {
                    let k = 2.0 * h;
                    // d/dv: 2(v-a) - 2(v-b)
                    g[v] += k * 2.0 * (ax - bx);
                    g[v + 1] += k * 2.0 * (ay - by);
                    g[a] -= k * 2.0 * ax;
                    g[a + 1] -= k * 2.0 * ay;
                    g[b] += k * 2.0 * bx;
                    g[b + 1] += k * 2.0 * by;
                }
            }
        }
        for (i, zi) in z.iter().enumerate() {
            let lim = if i % 2 == 0 { self.sys.x_max } else { self.sys.y_max };
            let over = zi.abs() - lim;
            if over > 0.0 {
                f += over * over;
                if let Some(g) = grad.as_deref_mut() {
                    g[i] += 2.0 * over * zi.signum();
                }
            }
        }
        f
    }

    fn satisfied(&self, z: &[f64]) -> bool {
        self.sys.rows.iter().all(|r| {
            let (v, a, b) = (self.voter(r.voter), 2 * r.a.index(), 2 * r.b.index());
            let da = (z[v] - z[a]).powi(2) + (z[v + 1] - z[a + 1]).powi(2);
            let db = (z[v] - z[b]).powi(2) + (z[v + 1] - z[b + 1]).powi(2);
            da + self.sys.eps_star <= db
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Local descent from `z`; returns true once every row holds at `eps_star`.
fn descend(obj: &Objective, z: &mut [f64], iters: usize, stop: &Stop) -> bool {
    let n = z.len();
    let mut g = vec![0.0; n];
    let mut f = obj.eval(z, Some(&mut g));
    let mut hist: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut trial = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    for it in 0..iters {
        if obj.satisfied(z) {
            return true;
        }
        if it % 32 == 0 && stop.should_stop() {
            return false;
        }
        // Two-loop recursion for the search direction.
        let mut d: Vec<f64> = g.iter().map(|x| -x).collect();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * dot(s, &d);
            d.iter_mut().zip(y).for_each(|(di, yi)| *di -= a * yi);
            alphas.push(a);
        }
        if let Some((s, y, _)) = hist.back() {
            let gamma = dot(s, y) / dot(y, y);
            d.iter_mut().for_each(|x| *x *= gamma);
        }
        for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &d);
            d.iter_mut().zip(s).for_each(|(di, si)| *di += (a - b) * si);
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            hist.clear();
            d = g.iter().map(|x| -x).collect();
            slope = -dot(&g, &g);
        }
        if slope == 0.0 {
            return false;
        }
        let mut step = if hist.is_empty() {
            (1.0 / slope.abs().sqrt()).min(1.0)
        } else {
            1.0
        };
        let mut accepted = false;
        for _ in 0..40 {
            for i in 0..n {
                trial[i] = z[i] + step * d[i];
            }
            let ft = obj.eval(&trial, Some(&mut g_new));
            if ft <= f + 1e-4 * step * slope {
                let s: Vec<f64> = (0..n).map(|i| trial[i] - z[i]).collect();
                let y: Vec<f64> = (0..n).map(|i| g_new[i] - g[i]).collect();
                let sy = dot(&s, &y);
                if sy > 1e-12 {
                    if hist.len() == HISTORY {
                        hist.pop_front();
                    }
                    hist.push_back((s, y, 1.0 / sy));
                }
                z.copy_from_slice(&trial);
                g.copy_from_slice(&g_new);
                f = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            if hist.is_empty() {
                return obj.satisfied(z);
            }
            hist.clear();
        }
    }
    obj.satisfied(z)
}

/// Tries `restarts` uniformly random starting points in the box. The trajectory is a
/// function of `seed` alone.
pub fn solve_penalty(sys: &QcpSystem, seed: u64, restarts: usize, iters: usize, stop: &Stop) -> Option<Vec<f64>> {
    let obj = Objective {
        sys,
        target: OVERSHOOT * sys.eps_star,
    };
    let dim = 2 * (sys.m + sys.n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![0.0; dim];
    for _ in 0..restarts.max(1) {
        if stop.should_stop() {
            return None;
        }
        for (i, zi) in z.iter_mut().enumerate() {
            let lim = if i % 2 == 0 { sys.x_max } else { sys.y_max };
            *zi = rng.gen_range(-lim..=lim);
        }
        if descend(&obj, &mut z, iters, stop) {
            return Some(z);
        }
    }
    None
}
