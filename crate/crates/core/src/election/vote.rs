use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::ElectionError;

/// Dense candidate index, `0..m` within one election.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Candidate(pub u32);

impl Candidate {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Candidate {
    fn from(i: usize) -> Self {
        Candidate(i as u32)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A strict ranking of all candidates, most preferred first.
///
/// Keeps the inverse permutation next to the ranking so that `prefers` is O(1).
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<Candidate>", into = "Vec<Candidate>")]
pub struct Vote {
    ranking: Vec<Candidate>,
    pos: Vec<u32>,
}

impl Vote {
    pub fn new(ranking: Vec<Candidate>) -> Result<Vote, ElectionError> {
        let m = ranking.len();
        let mut pos = vec![u32::MAX; m];
        for (i, c) in ranking.iter().enumerate() {
            let ci = c.index();
            if ci >= m || pos[ci] != u32::MAX {
                return Err(ElectionError::NotPermutation(
                    ranking.iter().map(|c| c.0).collect(),
                ));
            }
            pos[ci] = i as u32;
        }
        Ok(Vote { ranking, pos })
    }

    pub fn from_indices(ranking: &[usize]) -> Result<Vote, ElectionError> {
        Vote::new(ranking.iter().map(|&i| Candidate::from(i)).collect())
    }

    /// Parses a ranking written with one lowercase letter per candidate, `a` being index 0.
    pub fn from_letters(s: &str) -> Result<Vote, ElectionError> {
        let idx: Vec<usize> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| (c as u8).wrapping_sub(b'a') as usize)
            .collect();
        Vote::from_indices(&idx)
    }

    /// The identity ranking `0 1 .. m-1`.
    pub fn identity(m: usize) -> Vote {
        Vote {
            ranking: (0..m).map(Candidate::from).collect(),
            pos: (0..m as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn ranking(&self) -> &[Candidate] {
        &self.ranking
    }

    /// Zero-based rank of `c`.
    pub fn index_of(&self, c: Candidate) -> usize {
        self.pos[c.index()] as usize
    }

    /// One-based position of `c`: `position(c) = i` iff `ranking[i-1] = c`.
    pub fn position(&self, c: Candidate) -> usize {
        self.index_of(c) + 1
    }

    pub fn at(&self, i: usize) -> Candidate {
        self.ranking[i]
    }

    pub fn first(&self) -> Option<Candidate> {
        self.ranking.first().copied()
    }

    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        self.pos[a.index()] < self.pos[b.index()]
    }

    /// Number of candidate pairs ordered differently by the two votes.
    pub fn swap_distance(&self, other: &Vote) -> Result<usize, ElectionError> {
        if self.len() != other.len() {
            return Err(ElectionError::MismatchedUniverse {
                left: self.len(),
                right: other.len(),
            });
        }
        let mut d = 0;
        for i in 0..self.len() {
            let a = self.ranking[i];
            for &b in &self.ranking[i + 1..] {
                if other.prefers(b, a) {
                    d += 1;
                }
            }
        }
        Ok(d)
    }

    /// The vote obtained by exchanging the candidates at zero-based ranks `i` and `i + 1`.
    pub fn swap_at(&self, i: usize) -> Vote {
        let mut v = self.clone();
        v.ranking.swap(i, i + 1);
        v.pos[v.ranking[i].index()] = i as u32;
        v.pos[v.ranking[i + 1].index()] = (i + 1) as u32;
        v
    }

    /// All votes at swap distance one, ordered by the swapped rank.
    pub fn adjacent_votes(&self) -> Vec<Vote> {
        (0..self.len().saturating_sub(1))
            .map(|i| self.swap_at(i))
            .collect()
    }

    pub fn reverse(&self) -> Vote {
        let m = self.len() as u32;
        Vote {
            ranking: self.ranking.iter().rev().copied().collect(),
            pos: self.pos.iter().map(|&p| m - 1 - p).collect(),
        }
    }

    /// Projects onto the candidates with `remap[c] = Some(new index)`.
    pub(crate) fn project(&self, remap: &[Option<u32>]) -> Vote {
        let ranking: Vec<Candidate> = self
            .ranking
            .iter()
            .filter_map(|c| remap[c.index()].map(Candidate))
            .collect();
        let mut pos = vec![0u32; ranking.len()];
        for (i, c) in ranking.iter().enumerate() {
            pos[c.index()] = i as u32;
        }
        Vote { ranking, pos }
    }

    /// Candidate indices plus one, comma separated (the `.soc` convention).
    pub fn to_soc_line(&self) -> String {
        let ids: Vec<String> = self.ranking.iter().map(|c| (c.0 + 1).to_string()).collect();
        ids.join(",")
    }
}

impl PartialEq for Vote {
    fn eq(&self, other: &Self) -> bool {
        self.ranking == other.ranking
    }
}

impl Eq for Vote {}

impl Hash for Vote {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ranking.hash(state)
    }
}

impl PartialOrd for Vote {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Vote {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ranking.cmp(&other.ranking)
    }
}

impl fmt::Debug for Vote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vote[{}]", self.to_soc_line())
    }
}

impl fmt::Display for Vote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 26 {
            for c in &self.ranking {
                write!(f, "{}", (b'a' + c.0 as u8) as char)?;
            }
            Ok(())
        } else {
            f.write_str(&self.to_soc_line())
        }
    }
}

impl TryFrom<Vec<Candidate>> for Vote {
    type Error = ElectionError;

    fn try_from(v: Vec<Candidate>) -> Result<Self, Self::Error> {
        Vote::new(v)
    }
}

impl From<Vote> for Vec<Candidate> {
    fn from(v: Vote) -> Self {
        v.ranking
    }
}
