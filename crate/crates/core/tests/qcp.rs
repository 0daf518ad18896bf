mod common;

use std::time::Duration;

use euclid2d::instances;
use euclid2d::qcp::{
    build_qcp, escalate_embed, min_gap, parse_qcp_system, solve_feasibility, verify_embedding, violations,
    write_qcp_system, Embedding, QcpConfig, QcpError, QcpRow,
};
use euclid2d::synthetic::random_euclidean;
use euclid2d::{Election, Stop, Vote};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quick() -> QcpConfig {
    QcpConfig { restarts: 40, slice_init_secs: 2.0, ..QcpConfig::default() }
}

#[test]
fn row_counts() {
    let e = Election::from_letters(&["abcd"]).unwrap();
    let sys = build_qcp(&e, 1.0, 100.0, 100.0, false);
    assert_eq!(sys.rows.len(), 3);
    assert_eq!(sys.num_box_rows(), 10);
    assert_eq!(build_qcp(&e, 1.0, 100.0, 100.0, true).rows.len(), 6);
    // consecutive pairs only
    let r: Vec<(u32, u32)> = sys.rows.iter().map(|r| (r.a.0, r.b.0)).collect();
    assert_eq!(r, [(0, 1), (1, 2), (2, 3)]);

    let f = instances::figure_two();
    assert_eq!(build_qcp(&f, 1.0, 100.0, 100.0, false).rows.len(), 7 * 3);
    assert_eq!(build_qcp(&f, 1.0, 100.0, 100.0, false).num_box_rows(), 2 * 11);
}

#[test]
fn empty_vote_set_has_only_box_rows() {
    let Ok(e) = Election::from_votes(3, vec![]) else { return };
    let sys = build_qcp(&e, 1.0, 100.0, 100.0, false);
    assert!(sys.rows.is_empty());
    assert_eq!(sys.num_box_rows(), 6);
}

#[test]
fn default_schedule_starts_at_unit_margin_and_box_100() {
    let c = QcpConfig::default();
    assert_eq!((c.eps_star, c.box_init, c.slice_init_secs), (1.0, 100.0, 10.0));
    assert_eq!((c.box_factor, c.slice_factor, c.restarts), (10.0, 2.0, 200));
    assert!(!c.full_pairs);
    assert_eq!(c.solver, "builtin");
}

#[test]
fn figure_two_coordinates_verify_exactly() {
    let e = instances::figure_two();
    let emb = instances::figure_two_embedding();
    assert!(verify_embedding(&e, &emb, 0.0).unwrap());
    assert!(violations(&e, &emb, 0.0).unwrap().is_empty());
    for (i, p) in emb.voters.iter().enumerate() {
        assert_eq!(&common::ranking_at(&emb.candidates, *p), e.vote(i));
    }
}

#[test]
fn coincident_points_are_rejected() {
    let e = instances::figure_two();
    let mut emb = instances::figure_two_embedding();
    emb.voters[1] = emb.voters[0];
    assert!(!verify_embedding(&e, &emb, 0.0).unwrap());
    let mut emb = instances::figure_two_embedding();
    emb.candidates[2] = emb.candidates[3];
    assert!(!verify_embedding(&e, &emb, 0.0).unwrap());
}

#[test]
fn missing_and_non_finite_points() {
    let e = instances::figure_two();
    let mut emb = instances::figure_two_embedding();
    emb.voters.pop();
    assert!(matches!(verify_embedding(&e, &emb, 0.0), Err(QcpError::MissingPoint(_))));
    let mut emb = instances::figure_two_embedding();
    emb.voters[0][1] = f64::NAN;
    assert!(!verify_embedding(&e, &emb, 0.0).unwrap());
}

#[test]
fn huge_coordinates_are_judged_exactly() {
    // squared distances overflow in floating point here
    let e = instances::figure_two();
    let emb = instances::figure_two_embedding().scaled(1e160);
    assert!(verify_embedding(&e, &emb, 0.0).unwrap());
    let mut bad = emb.clone();
    bad.voters.swap(0, 1);
    assert!(!verify_embedding(&e, &bad, 0.0).unwrap());
}

/// Mirror image of `p` across the bisector of `a` and `b`.
fn reflect(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let n = [b[0] - a[0], b[1] - a[1]];
    let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let t = 2.0 * ((p[0] - mid[0]) * n[0] + (p[1] - mid[1]) * n[1]) / (n[0] * n[0] + n[1] * n[1]);
    [p[0] - t * n[0], p[1] - t * n[1]]
}

#[test]
fn reflected_voter_is_rejected_with_the_flipped_pair() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let inst = random_euclidean(&mut rng, 5, 4);
        let e = &inst.election;
        let mut emb = inst.embedding.clone();
        let v = e.vote(0);
        let (a, b) = (v.at(0), v.at(1));
        emb.voters[0] = reflect(emb.voters[0], emb.candidates[a.index()], emb.candidates[b.index()]);
        let bad = violations(e, &emb, 0.0).unwrap();
        assert!(bad.contains(&QcpRow { voter: 0, a, b }), "{bad:?}");
        assert!(bad.iter().all(|r| r.voter == 0));
        // the flipped pairs are exactly those the reflected point orders the other way
        let now = common::ranking_at(&emb.candidates, emb.voters[0]);
        let expected: Vec<QcpRow> = (0..5)
            .flat_map(|x| (x + 1..5).map(move |y| (x, y)))
            .map(|(x, y)| QcpRow { voter: 0, a: v.at(x), b: v.at(y) })
            .filter(|r| now.prefers(r.b, r.a))
            .collect();
        assert_eq!(bad, expected);
        assert!(!verify_embedding(e, &emb, 0.0).unwrap());
    }
}

#[test]
fn synthetic_points_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let m = rng.gen_range(1..=8);
        let n = rng.gen_range(1..=8);
        let inst = random_euclidean(&mut rng, m, n);
        assert!(verify_embedding(&inst.election, &inst.embedding, 0.0).unwrap());
    }
}

#[test]
fn rescaling_reaches_unit_margin() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let inst = random_euclidean(&mut rng, 6, 6);
        let e = &inst.election;
        let g = min_gap(e, &inst.embedding).unwrap();
        assert!(g > 0.0);
        let lambda = (1.0 / g).sqrt().max(1.0) * 1.01;
        let big = inst.embedding.scaled(lambda);
        assert!(min_gap(e, &big).unwrap() >= 1.0);
        assert!(verify_embedding(e, &big, 1.0).unwrap());
        // unsquared distances are then separated by a positive margin too
        let eps = e
            .votes()
            .iter()
            .enumerate()
            .flat_map(|(i, v)| {
                let p = big.voters[i];
                let d: Vec<f64> = v
                    .ranking()
                    .iter()
                    .map(|c| {
                        let q = big.candidates[c.index()];
                        (p[0] - q[0]).hypot(p[1] - q[1])
                    })
                    .collect();
                d.windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(eps > 0.0);
    }
}

#[test]
fn single_candidate_embeds_on_the_first_restart() {
    let e = Election::from_letters(&["a"]).unwrap();
    let sys = build_qcp(&e, 1.0, 100.0, 100.0, false);
    let cfg = QcpConfig { restarts: 1, ..QcpConfig::default() };
    let emb = solve_feasibility(&e, &sys, &cfg, 0, &Stop::never()).unwrap();
    assert!(verify_embedding(&e, &emb, 0.0).unwrap());
}

#[test]
fn figure_two_is_embedded_and_verified() {
    let e = instances::figure_two();
    let emb = escalate_embed(&e, &quick(), &Stop::after(Duration::from_secs(60))).unwrap();
    assert!(verify_embedding(&e, &emb, 0.0).unwrap());
    let sys = build_qcp(&e, 1.0, 100.0, 100.0, false);
    let emb = solve_feasibility(&e, &sys, &quick(), 9, &Stop::after(Duration::from_secs(60))).unwrap();
    assert!(verify_embedding(&e, &emb, 0.0).unwrap());
}

#[test]
fn pattern_38_minus_one_witness_embeds() {
    let e = instances::pattern_38_minus_c123();
    let emb = escalate_embed(&e, &quick(), &Stop::after(Duration::from_secs(60))).unwrap();
    assert!(verify_embedding(&e, &emb, 0.0).unwrap());
}

#[test]
fn every_three_candidate_election_embeds() {
    let perms: Vec<Vote> = ["abc", "acb", "bac", "bca", "cab", "cba"]
        .iter()
        .map(|s| Vote::from_letters(s).unwrap())
        .collect();
    for mask in 1u32..64 {
        let votes: Vec<Vote> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| perms[i].clone()).collect();
        let e = Election::from_votes(3, votes).unwrap();
        let emb = escalate_embed(&e, &quick(), &Stop::after(Duration::from_secs(30)));
        assert!(emb.is_some_and(|emb| verify_embedding(&e, &emb, 0.0).unwrap()), "mask {mask}");
    }
}

#[test]
fn same_seed_same_embedding() {
    let e = instances::figure_two();
    let run = || escalate_embed(&e, &quick(), &Stop::after(Duration::from_secs(60))).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn zero_budget_finds_nothing() {
    let e = instances::figure_two();
    assert_eq!(escalate_embed(&e, &quick(), &Stop::after(Duration::ZERO)), None);
}

#[test]
fn pattern_38_is_never_embedded() {
    let e = instances::pattern_38();
    assert_eq!(escalate_embed(&e, &quick(), &Stop::after(Duration::from_millis(1500))), None);
    let e = instances::closure_example();
    assert_eq!(escalate_embed(&e, &quick(), &Stop::after(Duration::from_millis(1500))), None);
}

#[test]
fn embedding_lines_round_trip() {
    let emb = instances::figure_two_embedding().scaled(1.0 / 3.0);
    let text = emb.to_lines();
    assert!(text.starts_with("candidate 0 "));
    assert_eq!(Embedding::from_lines(&text, 4, 7).unwrap(), emb);
    assert!(matches!(Embedding::from_lines(&text, 4, 8), Err(QcpError::MissingPoint(_))));
    assert!(matches!(Embedding::from_lines("voter 0 x 1", 0, 1), Err(QcpError::Malformed(_))));
}

#[test]
fn system_file_round_trip() {
    let sys = build_qcp(&instances::figure_two(), 1.0, 1000.0, 500.0, true);
    assert_eq!(parse_qcp_system(&write_qcp_system(&sys)).unwrap(), sys);
    assert!(parse_qcp_system("row 0 0 1\n").is_err());
    assert!(parse_qcp_system("qcp 2 1 1 10 10\nrow 1 0 1\n").is_err());
    assert!(parse_qcp_system("").is_err());
}

fn external(reply: &str) -> QcpConfig {
    let dir = tempfile::tempdir().unwrap().keep();
    let file = dir.join("reply.txt");
    std::fs::write(&file, reply).unwrap();
    QcpConfig {
        solver: format!("external: cat '{}'; true", file.display()),
        ..QcpConfig::default()
    }
}

#[test]
fn external_solver_answers_are_verified() {
    let e = instances::figure_two();
    let sys = build_qcp(&e, 1.0, 100.0, 100.0, false);
    let stop = Stop::after(Duration::from_secs(20));
    let good = instances::figure_two_embedding();
    let cfg = external(&format!("FEASIBLE\n{}", good.to_lines()));
    assert_eq!(solve_feasibility(&e, &sys, &cfg, 0, &stop), Some(good.clone()));

    let mut wrong = good.clone();
    wrong.voters.swap(0, 1);
    let cfg = external(&format!("FEASIBLE\n{}", wrong.to_lines()));
    assert_eq!(solve_feasibility(&e, &sys, &cfg, 0, &stop), None);
    assert_eq!(solve_feasibility(&e, &sys, &external("INFEASIBLE\n"), 0, &stop), None);
    assert_eq!(solve_feasibility(&e, &sys, &external("garbage"), 0, &stop), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_up_preserves_acceptance(seed in any::<u64>(), lambda in 1.0f64..1e6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_euclidean(&mut rng, 6, 5);
        let g = min_gap(&inst.election, &inst.embedding).unwrap();
        let tol = g / 2.0;
        prop_assert!(verify_embedding(&inst.election, &inst.embedding, tol).unwrap());
        prop_assert!(verify_embedding(&inst.election, &inst.embedding.scaled(lambda), tol).unwrap());
    }

    #[test]
    fn found_embeddings_satisfy_every_pair(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_euclidean(&mut rng, 4, 4);
        let e = &inst.election;
        let cfg = QcpConfig { seed, ..quick() };
        let emb = escalate_embed(e, &cfg, &Stop::after(Duration::from_secs(30)));
        prop_assert!(emb.is_some());
        let emb = emb.unwrap();
        // recheck every ordered pair against the independent oracle
        for (i, p) in emb.voters.iter().enumerate() {
            prop_assert_eq!(&common::ranking_at(&emb.candidates, *p), e.vote(i));
        }
    }

    #[test]
    fn single_swapped_pair_is_reported(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_euclidean(&mut rng, 5, 3);
        let e = &inst.election;
        // claim the voter ranks its first two candidates the other way round
        let mut votes = e.votes().to_vec();
        votes[0] = votes[0].swap_at(0);
        let lie = Election::from_votes(5, votes).unwrap();
        prop_assume!(lie.num_votes() == e.num_votes());
        let bad = violations(&lie, &inst.embedding, 0.0).unwrap();
        prop_assert_eq!(bad, vec![QcpRow { voter: 0, a: e.vote(0).at(1), b: e.vote(0).at(0) }]);
    }
}
