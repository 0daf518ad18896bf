//! Small named elections used throughout the tests and as CLI fixtures.

use crate::election::{Election, Vote};
use crate::qcp::Embedding;

fn named(labels: &[&str], votes: &[&[&str]]) -> Election {
    let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    let parsed: Vec<(Vote, u64)> = votes
        .iter()
        .map(|v| {
            let idx: Vec<usize> = v
                .iter()
                .map(|name| labels.iter().position(|l| l == name).expect("known label"))
                .collect();
            (Vote::from_indices(&idx).expect("permutation"), 1)
        })
        .collect();
    Election::new(labels, parsed).expect("consistent")
}

/// Three voters and eight candidates forming the complete pattern around `c0`;
/// `c123` sits directly above `c0` in every vote.
pub fn pattern_38() -> Election {
    named(
        &["c1", "c2", "c3", "c12", "c13", "c23", "c123", "c0"],
        &[
            &["c1", "c12", "c13", "c123", "c0", "c2", "c23", "c3"],
            &["c2", "c23", "c12", "c123", "c0", "c13", "c1", "c3"],
            &["c13", "c3", "c23", "c123", "c0", "c1", "c2", "c12"],
        ],
    )
}

/// [`pattern_38`] without `c123`.
pub fn pattern_38_minus_c123() -> Election {
    let e = pattern_38();
    let c = e.candidate_by_label("c123").unwrap();
    e.without(&[c]).unwrap()
}

/// Six rankings of four candidates whose forced-region closure covers all 24 rankings.
pub fn closure_example() -> Election {
    Election::from_letters(&["abcd", "dcba", "bdca", "cabd", "dabc", "cdab"]).unwrap()
}

/// Four voters over `a..g` whose controversity graph has a vertex of degree three.
pub fn example_one() -> Election {
    Election::from_letters(&["dgcfaeb", "gcbaedf", "cbadfge", "dbaegcf"]).unwrap()
}

/// [`example_one`] plus three voters; every four-voter subset has to be examined.
pub fn example_two() -> Election {
    Election::from_letters(&[
        "dgcfaeb", "gcbaedf", "cbadfge", "dbaegcf", "dcbgfea", "cdbaegf", "dgcabef",
    ])
    .unwrap()
}

/// Fourteen candidates and four voters: no block has a copy, no adjacency rule
/// applies, and the controversity graph is a complete graph on four vertices.
pub fn no_copy_14() -> Election {
    let labels: Vec<String> = (1..=14).map(|i| format!("c{i}")).collect();
    let l: Vec<&str> = labels.iter().map(String::as_str).collect();
    named(
        &l,
        &[
            &["c2", "c1", "c3", "c4", "c5", "c6", "c8", "c7", "c10", "c9", "c11", "c12", "c13", "c14"],
            &["c1", "c2", "c4", "c3", "c5", "c6", "c8", "c7", "c9", "c10", "c12", "c11", "c13", "c14"],
            &["c1", "c2", "c3", "c4", "c6", "c5", "c7", "c8", "c10", "c9", "c12", "c11", "c13", "c14"],
            &["c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "c10", "c11", "c12", "c14", "c13"],
        ],
    )
}

/// Three voters over two blocks of seven; the pattern appears around `c0'`.
pub fn tail_block_seven() -> Election {
    let mut labels: Vec<String> = (0..7).map(|i| format!("c{i}")).collect();
    labels.extend((0..7).map(|i| format!("c{i}'")));
    let l: Vec<&str> = labels.iter().map(String::as_str).collect();
    let row = |order: [usize; 7]| -> Vec<String> {
        let mut v: Vec<String> = order.iter().map(|i| format!("c{i}")).collect();
        v.extend(order.iter().map(|i| format!("c{i}'")));
        v
    };
    let rows = [
        row([6, 4, 1, 0, 2, 3, 5]),
        row([5, 4, 2, 0, 1, 3, 6]),
        row([6, 5, 3, 0, 1, 2, 4]),
    ];
    let refs: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
    let slices: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
    named(&l, &slices)
}

/// Four candidates and seven voters with a known planar embedding
/// ([`figure_two_embedding`]).
pub fn figure_two() -> Election {
    Election::from_letters(&["bdac", "bacd", "adcb", "acdb", "dacb", "cadb", "bcad"]).unwrap()
}

/// Coordinates for [`figure_two`], voters in the election's ranking order.
pub fn figure_two_embedding() -> Embedding {
    Embedding {
        candidates: vec![[3.18, -0.78], [-4.58, -2.66], [4.27, -3.23], [5.4, 5.84]],
        voters: vec![
            [-4.0, 6.02],
            [-2.18, -1.23],
            [1.44, 2.63],
            [4.04, 0.44],
            [6.0, 4.0],
            [10.2, -3.22],
            [-2.58, -6.0],
        ],
    }
}

/// Three voters over four numbered candidates.
pub fn restriction_example() -> Election {
    let v = |s: &[usize]| Vote::from_indices(&s.iter().map(|i| i - 1).collect::<Vec<_>>()).unwrap();
    Election::from_votes(4, vec![v(&[1, 3, 2, 4]), v(&[1, 2, 4, 3]), v(&[4, 1, 3, 2])]).unwrap()
}

/// Every named instance with a short identifier.
pub fn all() -> Vec<(&'static str, Election)> {
    vec![
        ("pattern-38", pattern_38()),
        ("pattern-38-minus-c123", pattern_38_minus_c123()),
        ("closure-example", closure_example()),
        ("example-one", example_one()),
        ("example-two", example_two()),
        ("no-copy-14", no_copy_14()),
        ("tail-block-seven", tail_block_seven()),
        ("figure-two", figure_two()),
        ("restriction-example", restriction_example()),
    ]
}
