//! Depth-first branch and bound over pseudo-boolean constraints with slack-based unit
//! propagation.

use std::collections::BTreeMap;

use super::{Problem, Sense, SolveStatus};
use crate::budget::Stop;

/// Nodes explored after the first solution while looking for a cheaper one.
const IMPROVE_NODES: u64 = 20_000;

/// `sum coef * lit >= bound` with positive coefficients.
struct Pb {
    lits: Vec<(i64, usize, bool)>,
    bound: i64,
    max_coef: i64,
}

struct State {
    cons: Vec<Pb>,
    occ: Vec<Vec<(usize, usize)>>,
    value: Vec<i8>,
    slack: Vec<i64>,
    trail: Vec<usize>,
    cost_coef: Vec<i64>,
    cost: i64,
}

fn normalise(terms: &[(i64, usize)], sense_ge: bool, rhs: i64) -> Option<Pb> {
    let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
    for &(c, v) in terms {
        *merged.entry(v).or_default() += c;
    }
    let (sign, mut bound) = if sense_ge { (1, rhs) } else { (-1, -rhs) };
    let mut lits = Vec::new();
    for (v, c) in merged {
        let c = c * sign;
        if c > 0 {
            lits.push((c, v, true));
        } else if c < 0 {
            // c*x = c - c*(1-x)
            bound -= c;
            lits.push((-c, v, false));
        }
    }
    let max_coef = lits.iter().map(|l| l.0).max().unwrap_or(0);
    Some(Pb { lits, bound, max_coef })
}

impl State {
    fn new(p: &Problem) -> Result<State, ()> {
        let n = p.num_vars();
        let mut cons = Vec::new();
        for r in &p.rows {
            let parts: &[bool] = match r.sense {
                Sense::Ge => &[true],
                Sense::Le => &[false],
                Sense::Eq => &[true, false],
            };
            for &ge in parts {
                let pb = normalise(&r.terms, ge, r.rhs).unwrap();
                if pb.bound <= 0 {
                    continue;
                }
                let total: i64 = pb.lits.iter().map(|l| l.0).sum();
                if total < pb.bound {
                    return Err(());
                }
                cons.push(pb);
            }
        }
        let mut occ = vec![Vec::new(); n];
        let mut slack = Vec::with_capacity(cons.len());
        for (ci, c) in cons.iter().enumerate() {
            for (li, &(_, v, _)) in c.lits.iter().enumerate() {
                occ[v].push((ci, li));
            }
            slack.push(c.lits.iter().map(|l| l.0).sum::<i64>() - c.bound);
        }
        let mut cost_coef = vec![0; n];
        for &(c, v) in &p.objective {
            cost_coef[v] += c;
        }
        Ok(State {
            cons,
            occ,
            value: vec![-1; n],
            slack,
            trail: Vec::new(),
            cost_coef,
            cost: 0,
        })
    }

    /// Assigns and updates slacks; returns false on conflict. Touched constraints that
    /// may now force literals are appended to `queue`.
    fn assign(&mut self, var: usize, val: bool, queue: &mut Vec<usize>) -> bool {
        self.value[var] = val as i8;
        self.trail.push(var);
        if val {
            self.cost += self.cost_coef[var];
        }
        let mut ok = true;
        for &(ci, li) in &self.occ[var] {
            let (a, _, pos) = self.cons[ci].lits[li];
            if pos != val {
                self.slack[ci] -= a;
                if self.slack[ci] < 0 {
                    ok = false;
                } else if self.slack[ci] < self.cons[ci].max_coef {
                    queue.push(ci);
                }
            }
        }
        ok
    }

    fn propagate(&mut self, queue: &mut Vec<usize>) -> bool {
        while let Some(ci) = queue.pop() {
            let slack = self.slack[ci];
            if slack < 0 {
                return false;
            }
            let forced: Vec<(usize, bool)> = self.cons[ci]
                .lits
                .iter()
                .filter(|&&(a, v, _)| a > slack && self.value[v] < 0)
                .map(|&(_, v, pos)| (v, pos))
                .collect();
            for (v, pos) in forced {
                if self.value[v] >= 0 {
                    if (self.value[v] == 1) != pos {
                        return false;
                    }
                    continue;
                }
                if !self.assign(v, pos, queue) {
                    return false;
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let var = self.trail.pop().unwrap();
            let val = self.value[var] == 1;
            if val {
                self.cost -= self.cost_coef[var];
            }
            for &(ci, li) in &self.occ[var] {
                let (a, _, pos) = self.cons[ci].lits[li];
                if pos != val {
                    self.slack[ci] += a;
                }
            }
            self.value[var] = -1;
        }
    }
}

struct Decision {
    var: usize,
    trail_len: usize,
    flipped: bool,
}

pub fn solve_builtin(p: &Problem, stop: &Stop) -> SolveStatus {
    let Ok(mut st) = State::new(p) else {
        return SolveStatus::Infeasible;
    };
    let n = p.num_vars();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(st.occ[v].len()));

    let mut queue: Vec<usize> = (0..st.cons.len())
        .filter(|&ci| st.slack[ci] < st.cons[ci].max_coef)
        .collect();
    if !st.propagate(&mut queue) {
        return SolveStatus::Infeasible;
    }

    let mut best: Option<(i64, Vec<bool>)> = None;
    let mut stack: Vec<Decision> = Vec::new();
    let mut nodes: u64 = 0;
    let mut nodes_since_first: u64 = 0;
    let mut conflict = false;

    loop {
        nodes += 1;
        if best.is_some() {
            nodes_since_first += 1;
            if nodes_since_first > IMPROVE_NODES {
                break;
            }
        }
        if nodes % 512 == 0 && stop.should_stop() {
            break;
        }
        let pruned = conflict || best.as_ref().is_some_and(|(c, _)| st.cost >= *c);
        if !pruned {
            match order.iter().copied().find(|&v| st.value[v] < 0) {
                None => {
                    let values: Vec<bool> = st.value.iter().map(|&x| x == 1).collect();
                    best = Some((st.cost, values));
                }
                Some(var) => {
                    stack.push(Decision {
                        var,
                        trail_len: st.trail.len(),
                        flipped: false,
                    });
                    let mut q = Vec::new();
                    conflict = !(st.assign(var, false, &mut q) && st.propagate(&mut q));
                    continue;
                }
            }
        }
        // Backtrack to the deepest decision with an untried value.
        loop {
            let Some(d) = stack.last_mut() else {
                return match best {
                    Some((_, values)) => SolveStatus::Feasible { values, optimal: true },
                    None => SolveStatus::Infeasible,
                };
            };
            st.undo_to(d.trail_len);
            if d.flipped {
                stack.pop();
                continue;
            }
            d.flipped = true;
            let var = d.var;
            let mut q = Vec::new();
            conflict = !(st.assign(var, true, &mut q) && st.propagate(&mut q));
            break;
        }
    }
    match best {
        Some((_, values)) => SolveStatus::Feasible { values, optimal: false },
        None => SolveStatus::Unknown,
    }
}
