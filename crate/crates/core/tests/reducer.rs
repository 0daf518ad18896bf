use std::collections::BTreeSet;

use itertools::Itertools;

mod common;

use common::brute_decompositions;
use euclid2d::detectors::{check_controversity, find_38, hull_refute, ControversityGraph, HullMode};
use euclid2d::ilp::closure_refute;
use euclid2d::instances;
use euclid2d::reducer::{
    apply_rr1pp, apply_rr2, find_copy, is_block, maximal_block_decomposition, reduce_fixpoint, replay, Block,
    ReduceError, ReductionStep, ReductionTrace,
};
use euclid2d::synthetic::random_euclidean;
use euclid2d::{Candidate, Election, Stop, Vote};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(ch: char) -> Candidate {
    Candidate((ch as u8 - b'a') as u32)
}

/// All injective images of `s` that preserve every vote's order, in lexicographic order.
fn brute_copies(e: &Election, s: &[Candidate]) -> Vec<Vec<Candidate>> {
    let pool: Vec<Candidate> = e.candidates().filter(|x| !s.contains(x)).collect();
    let mut out = Vec::new();
    let mut rec = |img: Vec<Candidate>| {
        let ok = e.votes().iter().all(|v| {
            s.iter().enumerate().all(|(i, &a)| {
                s.iter()
                    .enumerate()
                    .all(|(j, &b)| i == j || v.prefers(a, b) == v.prefers(img[i], img[j]))
            })
        });
        if ok {
            out.push(img);
        }
    };
    for img in pool.iter().copied().permutations(s.len()) {
        rec(img);
    }
    out
}

/// Smallest b (candidate order) directly followed by one fixed candidate in every vote
/// and beaten by a common candidate in every vote.
fn brute_rr2(e: &Election) -> Option<Candidate> {
    if e.num_candidates() < 3 || e.num_votes() == 0 {
        return None;
    }
    e.candidates().find(|&b| {
        let followers: BTreeSet<Option<Candidate>> = e
            .votes()
            .iter()
            .map(|v| v.ranking().get(v.index_of(b) + 1).copied())
            .collect();
        let single_follower = followers.len() == 1 && followers.iter().next().unwrap().is_some();
        let anchored = e.candidates().any(|a| a != b && e.votes().iter().all(|v| v.prefers(a, b)));
        single_follower && anchored
    })
}

#[test]
fn no_copy_instance_decomposes_into_seven_pairs() {
    let e = instances::no_copy_14();
    let blocks = maximal_block_decomposition(&e, 3);
    assert_eq!(blocks.len(), 7);
    for (i, b) in blocks.iter().enumerate() {
        assert_eq!((b.start, b.end), (2 * i + 1, 2 * i + 2));
        let names: Vec<&str> = b.candidates(&e).iter().map(|&x| e.label(x)).collect();
        assert_eq!(names, [format!("c{}", 2 * i + 1), format!("c{}", 2 * i + 2)]);
    }
    assert_eq!(brute_decompositions(&e, 3), vec![blocks]);
}

#[test]
fn rules_do_not_fire_on_the_no_copy_instance() {
    let e = instances::no_copy_14();
    assert!(apply_rr1pp(&e).is_none());
    assert!(apply_rr2(&e).is_none());
    let (r, trace) = reduce_fixpoint(&e);
    assert_eq!(r, e);
    assert!(trace.steps.is_empty());
}

#[test]
fn single_vote_splits_into_singletons() {
    let e = Election::from_letters(&["abcde"]).unwrap();
    let blocks = maximal_block_decomposition(&e, 3);
    assert_eq!(blocks.len(), 5);
    assert!(blocks.iter().all(|b| b.len() == 1));
}

#[test]
fn reversed_pair_is_one_block() {
    let e = Election::from_letters(&["abc", "cba"]).unwrap();
    assert_eq!(maximal_block_decomposition(&e, 3), vec![Block { start: 1, end: 3 }]);
    assert!(maximal_block_decomposition(&e, 2).is_empty());
    assert!(is_block(&e, 2, 2));
    assert!(!is_block(&e, 1, 2));
}

#[test]
fn tail_block_instance_has_no_small_decomposition() {
    let e = instances::tail_block_seven();
    assert!(maximal_block_decomposition(&e, 3).is_empty());
    assert!(brute_decompositions(&e, 3).is_empty());
    assert!(is_block(&e, 8, 14));
    assert!(apply_rr1pp(&e).is_none());
    assert!(apply_rr2(&e).is_none());
    let primed = e.candidate_by_label("c0'").unwrap();
    let copy = find_copy(&e, &[primed]).unwrap().unwrap();
    assert_eq!(copy, vec![(primed, e.candidate_by_label("c0").unwrap())]);
}

#[test]
fn copy_absent_when_outside_pairs_flip() {
    let e = Election::from_letters(&["abcd", "abdc"]).unwrap();
    assert_eq!(find_copy(&e, &[c('a'), c('b')]).unwrap(), None);
    assert!(brute_copies(&e, &[c('a'), c('b')]).is_empty());
    assert_eq!(find_copy(&e, &[c('a')]).unwrap(), Some(vec![(c('a'), c('b'))]));
}

#[test]
fn copy_argument_errors() {
    let e = Election::from_letters(&["abcde"]).unwrap();
    let four = [c('a'), c('b'), c('c'), c('d')];
    assert_eq!(find_copy(&e, &four), Err(ReduceError::SubsetTooLarge(4)));
    assert_eq!(find_copy(&e, &[]), Err(ReduceError::EmptySubset));
    assert_eq!(find_copy(&e, &[c('a'), c('a')]), Err(ReduceError::DuplicateCandidate));
    assert_eq!(find_copy(&e, &[Candidate(9)]), Err(ReduceError::UnknownCandidate(9)));
}

#[test]
fn rr2_blocked_on_the_38_pattern() {
    let e = instances::pattern_38();
    let (b, cc) = (e.candidate_by_label("c123").unwrap(), e.candidate_by_label("c0").unwrap());
    // c123 sits right above c0 everywhere, but nothing beats c123 in every vote
    assert!(e.votes().iter().all(|v| v.index_of(cc) == v.index_of(b) + 1));
    assert!(apply_rr2(&e).is_none());
    assert_eq!(brute_rr2(&e), None);
}

#[test]
fn rr2_removes_the_anchored_candidate() {
    let e = Election::from_letters(&["eabdc", "deabc", "cdeab"]).unwrap();
    assert_eq!(brute_rr2(&e), Some(c('a')));
    let (r, step) = apply_rr2(&e).unwrap();
    assert_eq!(
        step,
        ReductionStep::Adjacent { removed: c('a'), label: "a".into(), follower: c('b'), anchor: c('e') }
    );
    assert_eq!(r, e.without(&[c('a')]).unwrap());
    assert!(apply_rr2(&Election::from_letters(&["ab", "ba"]).unwrap()).is_none());
}

#[test]
fn fixpoint_peels_two_copied_tail_blocks() {
    let base = Election::from_letters(&["abcd", "dcba", "bdca"]).unwrap();
    let e = Election::from_letters(&["abcdefgh", "dcbafehg", "bdcafehg"]).unwrap();
    let (r, trace) = reduce_fixpoint(&e);
    let removed: Vec<Vec<Candidate>> = trace.steps.iter().map(ReductionStep::removed).collect();
    assert_eq!(removed, vec![vec![c('g'), c('h')], vec![c('e'), c('f')]]);
    assert!(trace.steps.iter().all(|s| s.rule_id() == "rr1pp"));
    assert_eq!(r, base);
    assert_eq!(replay(&e, &trace).unwrap(), r);
}

#[test]
fn fixpoint_leaves_one_candidate_alone() {
    let e = Election::from_letters(&["a"]).unwrap();
    let (r, trace) = reduce_fixpoint(&e);
    assert_eq!(r, e);
    assert!(trace.steps.is_empty());
}

#[test]
fn replay_rejects_forged_steps() {
    let e = instances::no_copy_14();
    let forged = ReductionTrace {
        steps: vec![ReductionStep::BlockCopy {
            removed: vec![Candidate(12), Candidate(13)],
            labels: vec![],
            copy: vec![(Candidate(12), Candidate(10)), (Candidate(13), Candidate(11))],
        }],
    };
    assert!(matches!(replay(&e, &forged), Err(ReduceError::BadStep { step: 0, .. })));
    let forged = ReductionTrace {
        steps: vec![ReductionStep::Adjacent {
            removed: Candidate(0),
            label: String::new(),
            follower: Candidate(1),
            anchor: Candidate(2),
        }],
    };
    assert!(replay(&e, &forged).is_err());
}

#[test]
fn trace_serializes_with_rule_tags() {
    let e = Election::from_letters(&["abcdefgh", "dcbafehg", "bdcafehg"]).unwrap();
    let (_, trace) = reduce_fixpoint(&e);
    let json = serde_json::to_string(&trace).unwrap();
    assert!(json.contains("\"rule\":\"rr1pp\""));
    let back: ReductionTrace = serde_json::from_str(&json).unwrap();
    assert_eq!(back, trace);
}

#[test]
fn reduced_synthetic_instances_stay_unrefuted() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let m = rng.gen_range(4..=8);
        let n = rng.gen_range(2..=8);
        let inst = random_euclidean(&mut rng, m, n);
        let (r, trace) = reduce_fixpoint(&inst.election);
        assert!(trace.steps.len() < m);
        assert!(find_38(&r).is_none());
        assert!(check_controversity(&ControversityGraph::build(&r)).is_none());
        if r.num_votes() >= 4 {
            assert!(hull_refute(&r, HullMode::Full(6), &Stop::never()).unwrap().is_none());
        }
        assert!(closure_refute(&r).is_none());
    }
}

fn perm(m: usize) -> impl Strategy<Value = Vote> {
    Just((0..m).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|p| Vote::from_indices(&p).unwrap())
}

fn election(ms: std::ops::RangeInclusive<usize>, ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Election> {
    (ms, ns).prop_flat_map(|(m, n)| {
        prop::collection::vec(perm(m), n).prop_map(move |vs| Election::from_votes(m, vs).unwrap())
    })
}

/// Elections that keep many shared blocks: each vote shuffles fixed chunks internally.
fn blocky(m: usize) -> impl Strategy<Value = Election> {
    (prop::collection::vec(1usize..=4, m), prop::collection::vec(perm(m), 1..=4)).prop_map(move |(sizes, perms)| {
        let mut chunks = Vec::new();
        let mut at = 0;
        for s in sizes {
            if at >= m {
                break;
            }
            let end = (at + s).min(m);
            chunks.push(at..end);
            at = end;
        }
        let votes = perms
            .iter()
            .map(|p| {
                let mut order = Vec::new();
                for ch in &chunks {
                    let mut part: Vec<usize> = ch.clone().collect();
                    part.sort_by_key(|&x| p.index_of(Candidate::from(x)));
                    order.extend(part);
                }
                Vote::from_indices(&order).unwrap()
            })
            .collect();
        Election::from_votes(m, votes).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_matches_brute_force(e in (1usize..=7).prop_flat_map(blocky), k in 1usize..=3) {
        let got = maximal_block_decomposition(&e, k);
        let brute = brute_decompositions(&e, k);
        if got.is_empty() {
            prop_assert!(brute.is_empty());
        } else {
            prop_assert_eq!(brute, vec![got]);
        }
    }

    #[test]
    fn decomposition_matches_brute_force_on_random_votes(e in election(1..=7, 1..=4)) {
        let got = maximal_block_decomposition(&e, 3);
        let brute = brute_decompositions(&e, 3);
        prop_assert_eq!(brute.len(), usize::from(!got.is_empty()));
        if !got.is_empty() {
            prop_assert_eq!(&brute[0], &got);
        }
    }

    #[test]
    fn copies_match_brute_force(e in (4usize..=7).prop_flat_map(blocky), mask in 1u32..128) {
        let s: Vec<Candidate> = e.candidates().filter(|x| mask >> x.0 & 1 == 1).take(3).collect();
        prop_assume!(!s.is_empty());
        let got = find_copy(&e, &s).unwrap();
        let brute = brute_copies(&e, &s);
        match got {
            None => prop_assert!(brute.is_empty()),
            Some(map) => {
                let img: Vec<Candidate> = map.iter().map(|p| p.1).collect();
                prop_assert_eq!(&img, &brute[0]);
            }
        }
    }

    #[test]
    fn rr2_matches_brute_force(e in (3usize..=6).prop_flat_map(blocky)) {
        let got = apply_rr2(&e).map(|(_, s)| s.removed()[0]);
        prop_assert_eq!(got, brute_rr2(&e));
    }

    #[test]
    fn last_ranked_candidate_is_removed(e in election(2..=6, 1..=4)) {
        let m = e.num_candidates();
        let votes = e.votes().iter().map(|v| {
            let mut r: Vec<usize> = v.ranking().iter().map(|x| x.index()).collect();
            r.push(m);
            Vote::from_indices(&r).unwrap()
        }).collect();
        let ext = Election::from_votes(m + 1, votes).unwrap();
        let (r, step) = apply_rr1pp(&ext).unwrap();
        prop_assert_eq!(step.removed(), vec![Candidate::from(m)]);
        prop_assert_eq!(r.votes(), e.votes());
    }

    #[test]
    fn fixpoint_replays_and_is_deterministic(e in (2usize..=8).prop_flat_map(blocky)) {
        let (r, trace) = reduce_fixpoint(&e);
        prop_assert_eq!(replay(&e, &trace).unwrap(), r.clone());
        prop_assert_eq!(reduce_fixpoint(&e), (r.clone(), trace.clone()));
        let removed: usize = trace.steps.iter().map(|s| s.removed().len()).sum();
        prop_assert_eq!(r.num_candidates() + removed, e.num_candidates());
        prop_assert!(r.num_candidates() >= 1);
        prop_assert!(apply_rr1pp(&r).is_none() && apply_rr2(&r).is_none());
    }
}
