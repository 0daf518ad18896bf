//! Elections over complete strict rankings.
//!
//! Candidates are dense indices with display labels kept in a side table. Identical
//! rankings are stored once together with their multiplicity; every algorithm in the
//! crate looks at distinct rankings only.

mod soc;
mod vote;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use soc::{parse_soc, write_soc, SocError};
pub use vote::{Candidate, Vote};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElectionError {
    #[error("ranking {0:?} is not a permutation of its candidate range")]
    NotPermutation(Vec<u32>),
    #[error("votes range over {left} and {right} candidates")]
    MismatchedUniverse { left: usize, right: usize },
    #[error("restriction must keep at least one candidate")]
    EmptyKeep,
    #[error("candidate {0} does not exist")]
    UnknownCandidate(u32),
    #[error("voter subset is empty")]
    EmptySubset,
    #[error("voter index {0} out of range")]
    UnknownVoter(usize),
}

/// A set of distinct rankings with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Election {
    labels: Vec<String>,
    votes: Vec<Vote>,
    counts: Vec<u64>,
}

impl Election {
    /// Builds an election, merging repeated rankings in first-occurrence order.
    pub fn new<I>(labels: Vec<String>, votes: I) -> Result<Election, ElectionError>
    where
        I: IntoIterator<Item = (Vote, u64)>,
    {
        let m = labels.len();
        let mut e = Election {
            labels,
            votes: Vec::new(),
            counts: Vec::new(),
        };
        let mut seen: HashMap<Vote, usize> = HashMap::new();
        for (v, n) in votes {
            if v.len() != m {
                return Err(ElectionError::MismatchedUniverse {
                    left: m,
                    right: v.len(),
                });
            }
            match seen.get(&v) {
                Some(&i) => e.counts[i] += n,
                None => {
                    seen.insert(v.clone(), e.votes.len());
                    e.votes.push(v);
                    e.counts.push(n);
                }
            }
        }
        Ok(e)
    }

    /// Election with numeric labels `1..=m` and unit multiplicities.
    pub fn from_votes(m: usize, votes: Vec<Vote>) -> Result<Election, ElectionError> {
        let labels = (1..=m).map(|i| i.to_string()).collect();
        Election::new(labels, votes.into_iter().map(|v| (v, 1)))
    }

    /// Election over candidates `a, b, c, ...` given as letter strings.
    pub fn from_letters(votes: &[&str]) -> Result<Election, ElectionError> {
        let parsed = votes
            .iter()
            .map(|s| Vote::from_letters(s))
            .collect::<Result<Vec<_>, _>>()?;
        let m = parsed.first().map_or(0, Vote::len);
        let labels = (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        Election::new(labels, parsed.into_iter().map(|v| (v, 1)))
    }

    pub fn num_candidates(&self) -> usize {
        self.labels.len()
    }

    /// Number of distinct rankings.
    pub fn num_votes(&self) -> usize {
        self.votes.len()
    }

    /// Number of voters counted with multiplicity.
    pub fn num_voters(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn candidates(&self) -> impl Iterator<Item = Candidate> + '_ {
        (0..self.labels.len()).map(Candidate::from)
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    pub fn vote(&self, i: usize) -> &Vote {
        &self.votes[i]
    }

    pub fn multiplicity(&self, i: usize) -> u64 {
        self.counts[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, c: Candidate) -> &str {
        &self.labels[c.index()]
    }

    pub fn candidate_by_label(&self, label: &str) -> Option<Candidate> {
        self.labels.iter().position(|l| l == label).map(Candidate::from)
    }

    /// Renders a vote through the label table, space separated.
    pub fn format_vote(&self, v: &Vote) -> String {
        let names: Vec<&str> = v.ranking().iter().map(|&c| self.label(c)).collect();
        names.join(" ")
    }

    /// Keeps only the candidates in `keep` and reindexes them densely in their
    /// original order. Rankings that become identical are merged.
    pub fn restrict(&self, keep: &[Candidate]) -> Result<Election, ElectionError> {
        if keep.is_empty() {
            return Err(ElectionError::EmptyKeep);
        }
        let m = self.num_candidates();
        let mut mask = vec![false; m];
        for &c in keep {
            if c.index() >= m {
                return Err(ElectionError::UnknownCandidate(c.0));
            }
            mask[c.index()] = true;
        }
        let mut remap = vec![None; m];
        let mut labels = Vec::new();
        for i in 0..m {
            if mask[i] {
                remap[i] = Some(labels.len() as u32);
                labels.push(self.labels[i].clone());
            }
        }
        let votes = self
            .votes
            .iter()
            .zip(&self.counts)
            .map(|(v, &n)| (v.project(&remap), n));
        Election::new(labels, votes)
    }

    /// Removes the given candidates; see [`Election::restrict`].
    pub fn without(&self, removed: &[Candidate]) -> Result<Election, ElectionError> {
        let keep: Vec<Candidate> = self.candidates().filter(|c| !removed.contains(c)).collect();
        self.restrict(&keep)
    }

    /// The election on the same candidates with only the listed distinct rankings.
    pub fn select_votes(&self, voters: &[usize]) -> Result<Election, ElectionError> {
        let mut votes = Vec::with_capacity(voters.len());
        for &i in voters {
            if i >= self.votes.len() {
                return Err(ElectionError::UnknownVoter(i));
            }
            votes.push((self.votes[i].clone(), self.counts[i]));
        }
        Election::new(self.labels.clone(), votes)
    }

    /// First ordered pair `(a, b)` such that every voter in `subset` prefers `a` to `b`
    /// and every other voter prefers `b` to `a`. The whole voter set is never
    /// controversial.
    pub fn controversial_witness(
        &self,
        subset: &[usize],
    ) -> Result<Option<(Candidate, Candidate)>, ElectionError> {
        if subset.is_empty() {
            return Err(ElectionError::EmptySubset);
        }
        let mut inside = vec![false; self.votes.len()];
        for &i in subset {
            if i >= self.votes.len() {
                return Err(ElectionError::UnknownVoter(i));
            }
            inside[i] = true;
        }
        if inside.iter().all(|&b| b) {
            return Ok(None);
        }
        for a in self.candidates() {
            for b in self.candidates() {
                if a == b {
                    continue;
                }
                let ok = self
                    .votes
                    .iter()
                    .zip(&inside)
                    .all(|(v, &ins)| v.prefers(a, b) == ins);
                if ok {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    /// SHA-256 over a canonical text rendering of labels, rankings and multiplicities.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("m={}\n", self.labels.len()));
        for l in &self.labels {
            h.update(l.as_bytes());
            h.update(b"\n");
        }
        for (v, n) in self.votes.iter().zip(&self.counts) {
            h.update(format!("{}:{}\n", n, v.to_soc_line()));
        }
        hex::encode(h.finalize())
    }
}
