use super::ReduceError;
use crate::election::{Candidate, Election};

/// Injective map from `s` into the remaining candidates such that every vote orders
/// the images exactly as it orders `s`. Pairs are `(original, copy)` sorted by
/// original; the lexicographically first image tuple is returned.
pub fn find_copy(
    e: &Election,
    s: &[Candidate],
) -> Result<Option<Vec<(Candidate, Candidate)>>, ReduceError> {
    let mut src = s.to_vec();
    src.sort_unstable();
    src.dedup();
    if src.len() != s.len() {
        return Err(ReduceError::DuplicateCandidate);
    }
    if src.is_empty() {
        return Err(ReduceError::EmptySubset);
    }
    if src.len() > 3 {
        return Err(ReduceError::SubsetTooLarge(src.len()));
    }
    if let Some(c) = src.iter().find(|c| c.index() >= e.num_candidates()) {
        return Err(ReduceError::UnknownCandidate(c.0));
    }
    let pool: Vec<Candidate> = e.candidates().filter(|c| !src.contains(c)).collect();
    let mut image = Vec::with_capacity(src.len());
    if extend(e, &src, &pool, &mut image) {
        Ok(Some(src.into_iter().zip(image).collect()))
    } else {
        Ok(None)
    }
}

fn extend(e: &Election, src: &[Candidate], pool: &[Candidate], image: &mut Vec<Candidate>) -> bool {
    let i = image.len();
    if i == src.len() {
        return true;
    }
    for &t in pool {
        if image.contains(&t) {
            continue;
        }
        let consistent = (0..i).all(|j| {
            e.votes()
                .iter()
                .all(|v| v.prefers(src[j], src[i]) == v.prefers(image[j], t))
        });
        if consistent {
            image.push(t);
            if extend(e, src, pool, image) {
                return true;
            }
            image.pop();
        }
    }
    false
}

/// Checks that `map` is a copy of its domain in `e`.
pub fn is_copy(e: &Election, map: &[(Candidate, Candidate)]) -> bool {
    let m = e.num_candidates();
    let dom: Vec<Candidate> = map.iter().map(|p| p.0).collect();
    let img: Vec<Candidate> = map.iter().map(|p| p.1).collect();
    let all_in_range = dom.iter().chain(&img).all(|c| c.index() < m);
    let mut all: Vec<Candidate> = dom.iter().chain(&img).copied().collect();
    all.sort_unstable();
    all.dedup();
    if !all_in_range || all.len() != 2 * map.len() || map.is_empty() {
        return false;
    }
    (0..map.len()).all(|i| {
        (i + 1..map.len()).all(|j| {
            e.votes()
                .iter()
                .all(|v| v.prefers(dom[i], dom[j]) == v.prefers(img[i], img[j]))
        })
    })
}
