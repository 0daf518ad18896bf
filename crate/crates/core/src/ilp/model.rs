use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::solver::{LinRow, Problem, Sense};
use super::{binom2, implied_neighbor_step, ub, IlpError};
use crate::election::{Candidate, Election, Vote};

/// Identity of a 0/1 variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKey {
    /// Region of the ranking is nonempty.
    X(Vote),
    /// Region is nonempty and bounded.
    Iota(Vote),
    /// Region is nonempty and unbounded.
    Y(Vote),
    /// Conjunction of the `X` variables of the listed rankings (sorted).
    And(Vec<Vote>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    D2,
    D3,
    C12,
    C13,
    H1,
    H2,
    H3,
    S6,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// How to regenerate one logged constraint. Each variant is checked for validity when
/// added, so a replayed log can only contain constraints that hold for every planar
/// embedding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum RowSpec {
    /// `x_v = 1` for a ranking of the election.
    C1 { v: Vote },
    /// At most `ub(m)` regions among the listed rankings.
    C2 { votes: Vec<Vote> },
    /// If `u` and `v` are regions, one implied step from `u` towards `v` is a region.
    C3 { u: Vote, v: Vote },
    /// Some region ranks `c` first.
    C4 { c: Candidate },
    /// Bounded regions are regions.
    C5 { v: Vote },
    /// At most `m(m-1)` unbounded regions among the listed rankings.
    C6 { votes: Vec<Vote> },
    /// A ranking and its reverse are not both bounded regions.
    C7 { v: Vote },
    /// An unbounded region has its reverse as a region.
    C8 { v: Vote },
    /// An unbounded region has an unbounded reverse.
    C9 { v: Vote },
    /// Regions have two neighbours, bounded ones three.
    C10 { v: Vote },
    /// An unbounded region sets `y_v`.
    C11 { v: Vote },
    /// `y_v` forces at least two unbounded neighbours.
    D2 { v: Vote },
    /// Unbounded neighbours are bounded by `m - 1`, and by 2 when `y_v` holds.
    D3 { v: Vote },
    /// Few region pairs are separated by the bisector of `a` and `b`.
    C12 { a: Candidate, b: Candidate, pairs: Vec<(Vote, Vote)> },
    /// Two bisectors cross at most once: at most one full four-cycle per pairing.
    C13 { ab: (Candidate, Candidate), cd: (Candidate, Candidate), cycles: Vec<Vote> },
    /// Three bisectors of a triple meet at most once: at most one full six-cycle.
    S6 { triple: [Candidate; 3], families: Vec<Vote> },
}

#[derive(Clone, Debug)]
pub struct ModelRow {
    pub row: LinRow,
    pub tag: Tag,
}

#[derive(Clone, Debug)]
pub struct RegionModel {
    m: usize,
    base: Vec<Vote>,
    base_set: HashSet<Vote>,
    keys: Vec<VarKey>,
    index: HashMap<VarKey, usize>,
    votes: Vec<Vote>,
    slots: HashMap<Vote, [usize; 3]>,
    rows: Vec<ModelRow>,
    log: Vec<RowSpec>,
    pub six_cycles: bool,
}

/// Swaps `a` and `b` if they sit next to each other in `v`.
pub(crate) fn swap_pair(v: &Vote, a: Candidate, b: Candidate) -> Option<Vote> {
    let (i, j) = (v.index_of(a), v.index_of(b));
    let lo = i.min(j);
    if i.abs_diff(j) == 1 {
        Some(v.swap_at(lo))
    } else {
        None
    }
}

/// The unordered candidate pair exchanged between two rankings one adjacent swap apart.
pub(crate) fn swapped_pair(u: &Vote, v: &Vote) -> Option<(Candidate, Candidate)> {
    if u.len() != v.len() {
        return None;
    }
    let i = (0..u.len()).find(|&i| u.at(i) != v.at(i))?;
    if i + 1 >= u.len() || u.swap_at(i) != *v {
        return None;
    }
    let (a, b) = (u.at(i), u.at(i + 1));
    Some((a.min(b), a.max(b)))
}

pub(crate) fn four_cycle(v: &Vote, ab: (Candidate, Candidate), cd: (Candidate, Candidate)) -> Option<[Vote; 4]> {
    let distinct = [ab.0, ab.1, cd.0, cd.1];
    for i in 0..4 {
        for j in i + 1..4 {
            if distinct[i] == distinct[j] {
                return None;
            }
        }
    }
    let v1 = swap_pair(v, ab.0, ab.1)?;
    let v3 = swap_pair(v, cd.0, cd.1)?;
    let v2 = swap_pair(&v1, cd.0, cd.1)?;
    let mut c = [v.clone(), v1, v2, v3];
    c.sort();
    Some(c)
}

pub(crate) fn six_family(v: &Vote, triple: [Candidate; 3]) -> Option<Vec<Vote>> {
    let mut idx: Vec<usize> = triple.iter().map(|&c| v.index_of(c)).collect();
    idx.sort_unstable();
    if idx[1] != idx[0] + 1 || idx[2] != idx[1] + 1 || triple[0] == triple[1] || triple[1] == triple[2] || triple[0] == triple[2] {
        return None;
    }
    let s = idx[0];
    let mut fam = vec![
        v.clone(),
        v.swap_at(s),
        v.swap_at(s + 1),
        v.swap_at(s).swap_at(s + 1),
        v.swap_at(s + 1).swap_at(s),
        v.swap_at(s).swap_at(s + 1).swap_at(s),
    ];
    fam.sort();
    Some(fam)
}

/// Every ranking of `0..m` that starts with `c`, in lexicographic order.
pub(crate) fn rankings_starting_with(m: usize, c: Candidate) -> Vec<Vote> {
    let rest: Vec<usize> = (0..m).filter(|&i| i != c.index()).collect();
    let mut out = Vec::new();
    let mut cur = vec![c.index()];
    let mut used = vec![false; rest.len()];
    fn rec(rest: &[usize], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vote>) {
        if cur.len() == rest.len() + 1 {
            out.push(Vote::from_indices(cur).expect("permutation"));
            return;
        }
        for i in 0..rest.len() {
            if !used[i] {
                used[i] = true;
                cur.push(rest[i]);
                rec(rest, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(&rest, &mut used, &mut cur, &mut out);
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

impl RegionModel {
    /// An empty model for the candidates of `e`; its rankings are the ones `C1` may fix.
    pub fn new(e: &Election) -> RegionModel {
        RegionModel {
            m: e.num_candidates(),
            base: e.votes().to_vec(),
            base_set: e.votes().iter().cloned().collect(),
            keys: Vec::new(),
            index: HashMap::new(),
            votes: Vec::new(),
            slots: HashMap::new(),
            rows: Vec::new(),
            log: Vec::new(),
            six_cycles: false,
        }
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn base_votes(&self) -> &[Vote] {
        &self.base
    }

    /// Rankings that currently have variables, in creation order.
    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    pub fn keys(&self) -> &[VarKey] {
        &self.keys
    }

    pub fn rows(&self) -> &[ModelRow] {
        &self.rows
    }

    pub fn log(&self) -> &[RowSpec] {
        &self.log
    }

    pub fn var(&self, key: &VarKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn x(&self, v: &Vote) -> Option<usize> {
        self.slots.get(v).map(|s| s[0])
    }

    pub fn iota(&self, v: &Vote) -> Option<usize> {
        self.slots.get(v).map(|s| s[1])
    }

    pub fn y(&self, v: &Vote) -> Option<usize> {
        self.slots.get(v).map(|s| s[2])
    }

    pub fn has_vote(&self, v: &Vote) -> bool {
        self.slots.contains_key(v)
    }

    fn new_var(&mut self, key: VarKey) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.keys.len();
        self.keys.push(key.clone());
        self.index.insert(key, i);
        i
    }

    fn push(&mut self, tag: Tag, terms: Vec<(i64, usize)>, sense: Sense, rhs: i64) {
        self.rows.push(ModelRow {
            row: LinRow { terms, sense, rhs },
            tag,
        });
    }

    /// Creates `x_v`, `iota_v`, `y_v` together with the rows that only involve them.
    pub fn ensure_vote(&mut self, v: &Vote) -> [usize; 3] {
        if let Some(&s) = self.slots.get(v) {
            return s;
        }
        let x = self.new_var(VarKey::X(v.clone()));
        let i = self.new_var(VarKey::Iota(v.clone()));
        let y = self.new_var(VarKey::Y(v.clone()));
        let s = [x, i, y];
        self.slots.insert(v.clone(), s);
        self.votes.push(v.clone());
        self.push(Tag::C5, vec![(1, i), (-1, x)], Sense::Le, 0);
        self.push(Tag::C11, vec![(-1, x), (1, i), (1, y)], Sense::Ge, 0);
        s
    }

    /// Variable for the conjunction of the regions of `votes`, with its linearisation.
    fn product(&mut self, mut votes: Vec<Vote>) -> usize {
        votes.sort();
        let key = VarKey::And(votes.clone());
        if let Some(&p) = self.index.get(&key) {
            return p;
        }
        let xs: Vec<usize> = votes.iter().map(|v| self.ensure_vote(v)[0]).collect();
        let p = self.new_var(key);
        let k = xs.len() as i64;
        let (upper, lower) = if k == 2 { (Tag::H1, Tag::H1) } else { (Tag::H2, Tag::H3) };
        for &x in &xs {
            self.push(upper, vec![(1, p), (-1, x)], Sense::Le, 0);
        }
        let mut t: Vec<(i64, usize)> = xs.iter().map(|&x| (1, x)).collect();
        t.push((-1, p));
        self.push(lower, t, Sense::Le, k - 1);
        p
    }

    fn neighbor_terms(&mut self, v: &Vote, with_iota: bool) -> Vec<(i64, usize)> {
        let mut t = Vec::new();
        for w in v.adjacent_votes() {
            let s = self.ensure_vote(&w);
            t.push((1, s[0]));
            if with_iota {
                t.push((-1, s[1]));
            }
        }
        t
    }

    fn check_vote(&self, v: &Vote) -> Result<(), IlpError> {
        if v.len() != self.m {
            return Err(IlpError::InvalidRow(format!("{v:?} has the wrong length")));
        }
        Ok(())
    }

    /// Validates and adds one constraint, creating the variables it needs.
    pub fn add(&mut self, spec: RowSpec) -> Result<(), IlpError> {
        let m = self.m;
        let bad = |msg: &str| Err(IlpError::InvalidRow(msg.to_string()));
        match &spec {
            RowSpec::C1 { v } => {
                if !self.base_set.contains(v) {
                    return bad("C1 fixes a ranking that is not in the election");
                }
                let x = self.ensure_vote(v)[0];
                self.push(Tag::C1, vec![(1, x)], Sense::Eq, 1);
            }
            RowSpec::C2 { votes } | RowSpec::C6 { votes } => {
                let distinct: HashSet<&Vote> = votes.iter().collect();
                if distinct.len() != votes.len() {
                    return bad("repeated ranking in a counting row");
                }
                let outer = matches!(spec, RowSpec::C6 { .. });
                let mut t = Vec::new();
                for v in votes {
                    self.check_vote(v)?;
                    let s = self.ensure_vote(v);
                    t.push((1, s[0]));
                    if outer {
                        t.push((-1, s[1]));
                    }
                }
                if outer {
                    self.push(Tag::C6, t, Sense::Le, 2 * binom2(m));
                } else {
                    self.push(Tag::C2, t, Sense::Le, ub(m) as i64);
                }
            }
            RowSpec::C3 { u, v } => {
                self.check_vote(u)?;
                self.check_vote(v)?;
                let step = implied_neighbor_step(u, v)?;
                let xu = self.ensure_vote(u)[0];
                let xv = self.ensure_vote(v)[0];
                let mut t = vec![(-1, xu), (-1, xv)];
                for w in &step {
                    t.push((1, self.ensure_vote(w)[0]));
                }
                self.push(Tag::C3, t, Sense::Ge, -1);
            }
            RowSpec::C4 { c } => {
                if c.index() >= m || m > 9 {
                    return bad("C4 needs an existing candidate and at most nine candidates");
                }
                let t = rankings_starting_with(m, *c)
                    .iter()
                    .map(|v| (1, self.ensure_vote(v)[0]))
                    .collect();
                self.push(Tag::C4, t, Sense::Ge, 1);
            }
            RowSpec::C5 { v } => {
                self.check_vote(v)?;
                let s = self.ensure_vote(v);
                self.push(Tag::C5, vec![(1, s[1]), (-1, s[0])], Sense::Le, 0);
            }
            RowSpec::C7 { v } | RowSpec::C8 { v } | RowSpec::C9 { v } => {
                self.check_vote(v)?;
                let s = self.ensure_vote(v);
                let r = self.ensure_vote(&v.reverse());
                match spec {
                    RowSpec::C7 { .. } => self.push(Tag::C7, vec![(1, s[1]), (1, r[1])], Sense::Le, 1),
                    RowSpec::C8 { .. } => {
                        self.push(Tag::C8, vec![(-1, s[0]), (1, s[1]), (1, r[0])], Sense::Ge, 0)
                    }
                    _ => self.push(Tag::C9, vec![(-1, s[0]), (1, s[1]), (-1, r[1])], Sense::Ge, -1),
                }
            }
            RowSpec::C10 { v } => {
                self.check_vote(v)?;
                let s = self.ensure_vote(v);
                let mut t = self.neighbor_terms(v, false);
                t.push((-2, s[0]));
                t.push((-1, s[1]));
                self.push(Tag::C10, t, Sense::Ge, 0);
            }
            RowSpec::C11 { v } => {
                self.check_vote(v)?;
                let s = self.ensure_vote(v);
                self.push(Tag::C11, vec![(-1, s[0]), (1, s[1]), (1, s[2])], Sense::Ge, 0);
            }
            RowSpec::D2 { v } => {
                self.check_vote(v)?;
                let s = self.ensure_vote(v);
                let mut t = self.neighbor_terms(v, true);
                t.push((-2, s[2]));
                self.push(Tag::D2, t, Sense::Ge, 0);
            }
            RowSpec::D3 { v } => {
                self.check_vote(v)?;
                if m < 3 {
                    return bad("D3 needs three candidates");
                }
                let s = self.ensure_vote(v);
                let mut t = self.neighbor_terms(v, true);
                t.push(((m - 3) as i64, s[2]));
                self.push(Tag::D3, t, Sense::Le, m as i64 - 1);
            }
            RowSpec::C12 { a, b, pairs } => {
                let key = ((*a).min(*b), (*a).max(*b));
                let mut seen = HashSet::new();
                let mut t = Vec::new();
                for (u, v) in pairs {
                    self.check_vote(u)?;
                    if swapped_pair(u, v) != Some(key) {
                        return bad("C12 pair is not separated by the named bisector");
                    }
                    let canon = if u < v { (u, v) } else { (v, u) };
                    if !seen.insert(canon) {
                        return bad("C12 pair listed twice");
                    }
                    t.push((1, self.product(vec![u.clone(), v.clone()])));
                }
                let bound = binom2(m.saturating_sub(2)) + m as i64 - 1;
                self.push(Tag::C12, t, Sense::Le, bound);
            }
            RowSpec::C13 { ab, cd, cycles } => {
                let mut seen = HashSet::new();
                let mut t = Vec::new();
                for v in cycles {
                    self.check_vote(v)?;
                    let Some(c) = four_cycle(v, *ab, *cd) else {
                        return bad("C13 entry is not a four-cycle of the named bisectors");
                    };
                    if !seen.insert(c.clone()) {
                        return bad("C13 cycle listed twice");
                    }
                    t.push((1, self.product(c.to_vec())));
                }
                self.push(Tag::C13, t, Sense::Le, 1);
            }
            RowSpec::S6 { triple, families } => {
                let mut seen = HashSet::new();
                let mut t = Vec::new();
                for v in families {
                    self.check_vote(v)?;
                    let Some(f) = six_family(v, *triple) else {
                        return bad("S6 entry is not a six-cycle of the named triple");
                    };
                    if !seen.insert(f.clone()) {
                        return bad("S6 family listed twice");
                    }
                    t.push((1, self.product(f)));
                }
                self.push(Tag::S6, t, Sense::Le, 1);
            }
        }
        self.log.push(spec);
        Ok(())
    }

    /// Whether every ranking that puts `c` first already has a variable.
    pub fn first_place_complete(&self, c: Candidate) -> bool {
        let need = factorial(self.m - 1);
        let have = self.votes.iter().filter(|v| v.first() == Some(c)).count() as u64;
        have == need
    }

    /// Indices of rows violated by a full 0/1 assignment of the model's variables.
    pub fn violated_rows(&self, values: &[bool]) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.row.holds(values))
            .map(|(i, _)| i)
            .collect()
    }

    /// Variable names are `x_` followed by a hash of the variable identity.
    pub fn to_problem(&self) -> Problem {
        let mut names = Vec::with_capacity(self.keys.len());
        let mut used = HashSet::new();
        for key in &self.keys {
            let digest = hex::encode(Sha256::digest(format!("{key:?}").as_bytes()));
            let mut len = 12;
            let mut name = format!("x_{}", &digest[..len]);
            while !used.insert(name.clone()) {
                len += 4;
                name = format!("x_{}", &digest[..len.min(digest.len())]);
            }
            names.push(name);
        }
        let objective = self
            .keys
            .iter()
            .enumerate()
            .filter(|(_, k)| matches!(k, VarKey::X(_)))
            .map(|(i, _)| (1, i))
            .collect();
        Problem {
            names,
            rows: self.rows.iter().map(|r| r.row.clone()).collect(),
            objective,
        }
    }
}

/// Rows whose variables all exist for the election's own rankings, plus the counting
/// rows over them.
pub fn build_base_model(e: &Election) -> RegionModel {
    let mut model = RegionModel::new(e);
    let votes = e.votes().to_vec();
    let present: HashSet<&Vote> = votes.iter().collect();
    for v in &votes {
        model.add(RowSpec::C1 { v: v.clone() }).expect("own ranking");
    }
    model.add(RowSpec::C2 { votes: votes.clone() }).expect("distinct");
    model.add(RowSpec::C6 { votes: votes.clone() }).expect("distinct");
    for v in &votes {
        let r = v.reverse();
        if present.contains(&r) {
            if *v < r {
                model.add(RowSpec::C7 { v: v.clone() }).expect("valid");
            }
            model.add(RowSpec::C8 { v: v.clone() }).expect("valid");
            model.add(RowSpec::C9 { v: v.clone() }).expect("valid");
        }
        if v.adjacent_votes().iter().all(|w| present.contains(w)) {
            model.add(RowSpec::C10 { v: v.clone() }).expect("valid");
            model.add(RowSpec::D2 { v: v.clone() }).expect("valid");
            if e.num_candidates() >= 3 {
                model.add(RowSpec::D3 { v: v.clone() }).expect("valid");
            }
        }
    }
    model
}
