//! Finds constraints of the full region system that the current assignment breaks.
//! Variables that do not exist yet read as 0.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::model::{four_cycle, six_family, RegionModel, RowSpec};
use super::{binom2, implied_neighbor_step, ub};
use crate::election::{Candidate, Vote};

struct View<'a> {
    model: &'a RegionModel,
    values: &'a [bool],
}

impl View<'_> {
    fn x(&self, v: &Vote) -> bool {
        self.model.x(v).is_some_and(|i| self.values[i])
    }

    fn iota(&self, v: &Vote) -> bool {
        self.model.iota(v).is_some_and(|i| self.values[i])
    }

    fn y(&self, v: &Vote) -> bool {
        self.model.y(v).is_some_and(|i| self.values[i])
    }

    fn outer_neighbors(&self, v: &Vote) -> i64 {
        v.adjacent_votes()
            .iter()
            .map(|w| self.x(w) as i64 - self.iota(w) as i64)
            .sum()
    }
}

fn sorted_pair(a: Candidate, b: Candidate) -> (Candidate, Candidate) {
    (a.min(b), a.max(b))
}

/// Constraints violated by `values` (indexed like the model's variables), in a fixed
/// order: counting rows, implied steps, first places, reversal rows, degree rows, then
/// bisector and cycle rows.
pub fn generate_violated(model: &RegionModel, values: &[bool]) -> Vec<RowSpec> {
    let m = model.num_candidates();
    let view = View { model, values };
    let created: Vec<Vote> = model.votes().to_vec();
    let support: Vec<Vote> = created.iter().filter(|v| view.x(v)).cloned().collect();
    let in_support: HashSet<&Vote> = support.iter().collect();
    let mut out = Vec::new();

    if support.len() as u64 > ub(m) {
        out.push(RowSpec::C2 { votes: created.clone() });
    }
    let outer: i64 = created
        .iter()
        .map(|v| view.x(v) as i64 - view.iota(v) as i64)
        .sum();
    if outer > 2 * binom2(m) {
        out.push(RowSpec::C6 { votes: created.clone() });
    }

    for u in &support {
        for v in &support {
            if u == v {
                continue;
            }
            let step = implied_neighbor_step(u, v).expect("distinct rankings");
            if !step.iter().any(|w| view.x(w)) {
                out.push(RowSpec::C3 {
                    u: u.clone(),
                    v: v.clone(),
                });
            }
        }
    }

    if m <= 9 {
        for c in (0..m).map(Candidate::from) {
            if model.first_place_complete(c) && !support.iter().any(|v| v.first() == Some(c)) {
                out.push(RowSpec::C4 { c });
            }
        }
    }

    for v in &created {
        let r = v.reverse();
        if view.iota(v) && view.iota(&r) && *v < r {
            out.push(RowSpec::C7 { v: v.clone() });
        }
        if view.x(v) && !view.iota(v) {
            if !view.x(&r) {
                out.push(RowSpec::C8 { v: v.clone() });
            }
            if view.iota(&r) {
                out.push(RowSpec::C9 { v: v.clone() });
            }
        }
    }

    for v in &created {
        if view.x(v) {
            let deg: i64 = v.adjacent_votes().iter().map(|w| view.x(w) as i64).sum();
            if deg < 2 + view.iota(v) as i64 {
                out.push(RowSpec::C10 { v: v.clone() });
            }
        }
        let s = view.outer_neighbors(v);
        if view.y(v) && s < 2 {
            out.push(RowSpec::D2 { v: v.clone() });
        }
        if m >= 3 && s > m as i64 - 1 - (m as i64 - 3) * view.y(v) as i64 {
            out.push(RowSpec::D3 { v: v.clone() });
        }
    }

    // Region pairs separated by one bisector.
    let mut separated: BTreeMap<(Candidate, Candidate), usize> = BTreeMap::new();
    for u in &support {
        for i in 0..m.saturating_sub(1) {
            let w = u.swap_at(i);
            if *u < w && in_support.contains(&w) {
                *separated.entry(sorted_pair(u.at(i), u.at(i + 1))).or_default() += 1;
            }
        }
    }
    let bound = (binom2(m.saturating_sub(2)) + m as i64 - 1) as usize;
    for (&(a, b), &count) in &separated {
        if count > bound {
            out.push(RowSpec::C12 {
                a,
                b,
                pairs: existing_pairs(model, a, b),
            });
        }
    }

    // Full four-cycles around a crossing of two bisectors.
    let mut crossings: BTreeMap<((Candidate, Candidate), (Candidate, Candidate)), BTreeSet<[Vote; 4]>> =
        BTreeMap::new();
    for v in &support {
        for i in 0..m.saturating_sub(1) {
            for j in i + 2..m.saturating_sub(1) {
                let ab = sorted_pair(v.at(i), v.at(i + 1));
                let cd = sorted_pair(v.at(j), v.at(j + 1));
                let key = (ab.min(cd), ab.max(cd));
                if let Some(c) = four_cycle(v, ab, cd) {
                    if c.iter().all(|w| in_support.contains(w)) {
                        crossings.entry(key).or_default().insert(c);
                    }
                }
            }
        }
    }
    for (&(ab, cd), cycles) in &crossings {
        if cycles.len() >= 2 {
            out.push(RowSpec::C13 {
                ab,
                cd,
                cycles: existing_cycles(model, ab, cd),
            });
        }
    }

    if model.six_cycles && m >= 3 {
        let mut meets: BTreeMap<[Candidate; 3], BTreeSet<Vec<Vote>>> = BTreeMap::new();
        for v in &support {
            for i in 0..m - 2 {
                let mut t = [v.at(i), v.at(i + 1), v.at(i + 2)];
                t.sort();
                let f = six_family(v, t).expect("consecutive triple");
                if f.iter().all(|w| in_support.contains(w)) {
                    meets.entry(t).or_default().insert(f);
                }
            }
        }
        for (&triple, fams) in &meets {
            if fams.len() >= 2 {
                out.push(RowSpec::S6 {
                    triple,
                    families: existing_families(model, triple),
                });
            }
        }
    }
    out
}

fn existing_pairs(model: &RegionModel, a: Candidate, b: Candidate) -> Vec<(Vote, Vote)> {
    let mut out = Vec::new();
    for u in model.votes() {
        let (i, j) = (u.index_of(a), u.index_of(b));
        if i.abs_diff(j) == 1 {
            let w = u.swap_at(i.min(j));
            if *u < w && model.has_vote(&w) {
                out.push((u.clone(), w));
            }
        }
    }
    out
}

fn existing_cycles(model: &RegionModel, ab: (Candidate, Candidate), cd: (Candidate, Candidate)) -> Vec<Vote> {
    let mut seen = BTreeSet::new();
    for v in model.votes() {
        if let Some(c) = four_cycle(v, ab, cd) {
            if c.iter().all(|w| model.has_vote(w)) {
                seen.insert(c);
            }
        }
    }
    seen.into_iter().map(|c| c[0].clone()).collect()
}

fn existing_families(model: &RegionModel, triple: [Candidate; 3]) -> Vec<Vote> {
    let mut seen = BTreeSet::new();
    for v in model.votes() {
        if let Some(f) = six_family(v, triple) {
            if f.iter().all(|w| model.has_vote(w)) {
                seen.insert(f);
            }
        }
    }
    seen.into_iter().map(|f| f[0].clone()).collect()
}
