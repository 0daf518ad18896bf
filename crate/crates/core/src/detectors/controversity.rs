use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::election::{Candidate, Election, ElectionError};

/// Graph whose vertices are the individually controversial voters of a voter subset and
/// whose edges are controversial voter pairs. Voters are indices into the election.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControversityGraph {
    pub voters: Vec<usize>,
    #[serde(with = "pair_list")]
    pub vertices: BTreeMap<usize, (Candidate, Candidate)>,
    #[serde(with = "pair_list")]
    pub edges: BTreeMap<(usize, usize), (Candidate, Candidate)>,
}

/// Maps travel as lists of pairs: JSON object keys must be strings, and integer keys do
/// not survive a flattened certificate.
mod pair_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<K: Serialize, V: Serialize, S: Serializer>(map: &BTreeMap<K, V>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter())
    }

    pub fn deserialize<'de, K, V, D>(d: D) -> Result<BTreeMap<K, V>, D::Error>
    where
        K: Deserialize<'de> + Ord,
        V: Deserialize<'de>,
        D: Deserializer<'de>,
    {
        Ok(Vec::<(K, V)>::deserialize(d)?.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    MaxDegree { vertex: usize, neighbors: [usize; 3] },
    DisconnectedCycle { cycle: Vec<usize>, outside: usize },
}

impl ControversityGraph {
    pub fn build(e: &Election) -> ControversityGraph {
        let all: Vec<usize> = (0..e.num_votes()).collect();
        Self::of_subset(e, &all).expect("all voters are valid")
    }

    /// Graph of the subelection that keeps every candidate but only `voters`.
    pub fn of_subset(e: &Election, voters: &[usize]) -> Result<ControversityGraph, ElectionError> {
        let mut ws: Vec<usize> = voters.to_vec();
        ws.sort_unstable();
        ws.dedup();
        if let Some(&bad) = ws.iter().find(|&&i| i >= e.num_votes()) {
            return Err(ElectionError::UnknownVoter(bad));
        }
        let s = ws.len();
        let mut single: BTreeMap<usize, (Candidate, Candidate)> = BTreeMap::new();
        let mut pairs: BTreeMap<(usize, usize), (Candidate, Candidate)> = BTreeMap::new();
        for a in e.candidates() {
            for b in e.candidates() {
                if a == b {
                    continue;
                }
                let mut members = [0usize; 2];
                let mut cnt = 0;
                for &w in &ws {
                    if e.vote(w).prefers(a, b) {
                        if cnt == 2 {
                            cnt = 3;
                            break;
                        }
                        members[cnt] = w;
                        cnt += 1;
                    }
                }
                if cnt >= s {
                    continue;
                }
                match cnt {
                    1 => {
                        single.entry(members[0]).or_insert((a, b));
                    }
                    2 => {
                        pairs.entry((members[0], members[1])).or_insert((a, b));
                    }
                    _ => {}
                }
            }
        }
        let edges = pairs
            .into_iter()
            .filter(|((u, v), _)| single.contains_key(u) && single.contains_key(v))
            .collect();
        Ok(ControversityGraph {
            voters: ws,
            vertices: single,
            edges,
        })
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in self.edges.keys() {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&(u.min(v), u.max(v)))
    }

    fn component(&self, start: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// A 2-Euclidean election has a controversity graph of maximum degree two that is
/// connected whenever it contains a cycle. Returns the first breach found.
pub fn check_controversity(g: &ControversityGraph) -> Option<Violation> {
    for &v in g.vertices.keys() {
        let nb = g.neighbors(v);
        if nb.len() >= 3 {
            return Some(Violation::MaxDegree {
                vertex: v,
                neighbors: [nb[0], nb[1], nb[2]],
            });
        }
    }
    let mut done = BTreeSet::new();
    for &v in g.vertices.keys() {
        if done.contains(&v) {
            continue;
        }
        let comp = g.component(v);
        done.extend(comp.iter().copied());
        let is_cycle = comp.len() >= 3 && comp.iter().all(|&u| g.degree(u) == 2);
        if !is_cycle {
            continue;
        }
        if let Some(&outside) = g.vertices.keys().find(|u| !comp.contains(u)) {
            let mut cycle = vec![v];
            let mut prev = v;
            let mut cur = g.neighbors(v)[0];
            while cur != v {
                cycle.push(cur);
                let nb = g.neighbors(cur);
                let next = if nb[0] == prev { nb[1] } else { nb[0] };
                prev = cur;
                cur = next;
            }
            return Some(Violation::DisconnectedCycle { cycle, outside });
        }
    }
    None
}

/// Whether `viol` is witnessed by `g`. A listed cycle plus a vertex off that cycle
/// always breaches the property: either the vertex is disconnected from the cycle or
/// some cycle vertex has degree three.
pub fn violation_holds(g: &ControversityGraph, viol: &Violation) -> bool {
    match viol {
        Violation::MaxDegree { vertex, neighbors } => {
            g.vertices.contains_key(vertex)
                && neighbors[0] != neighbors[1]
                && neighbors[0] != neighbors[2]
                && neighbors[1] != neighbors[2]
                && neighbors.iter().all(|&w| w != *vertex && g.has_edge(*vertex, w))
        }
        Violation::DisconnectedCycle { cycle, outside } => {
            let distinct: BTreeSet<_> = cycle.iter().collect();
            cycle.len() >= 3
                && distinct.len() == cycle.len()
                && cycle.iter().all(|u| g.vertices.contains_key(u))
                && (0..cycle.len()).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]))
                && g.vertices.contains_key(outside)
                && !distinct.contains(outside)
        }
    }
}
