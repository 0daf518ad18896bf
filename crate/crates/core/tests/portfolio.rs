use std::path::Path;

use euclid2d::instances;
use euclid2d::portfolio::{
    dataset_of, parse_lanes, run_lane, run_portfolio, summarize, triviality_screen, verify_certificate, BatchRecord,
    Certificate, CertificateFile, Config, Lane, LaneOutcome, PortfolioError, Status, TrivialRule,
};
use euclid2d::reducer::reduce_fixpoint;
use euclid2d::synthetic::random_euclidean;
use euclid2d::{Election, Stop, Vote};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(budget: f64) -> Config {
    let mut c = Config::default();
    c.portfolio.budget_secs = budget;
    c.qcp.restarts = 40;
    c.qcp.slice_init_secs = 2.0;
    c
}

fn identical(m: usize, n: usize) -> Election {
    let mut rng = ChaCha8Rng::seed_from_u64((m * 100 + n) as u64);
    let votes: Vec<Vote> = (0..n)
        .map(|_| {
            let mut p: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            Vote::from_indices(&p).unwrap()
        })
        .collect();
    Election::from_votes(m, votes).unwrap()
}

#[test]
fn triviality_rules() {
    let two = Election::from_letters(&["ab", "ba"]).unwrap();
    assert_eq!(triviality_screen(&two), Some(TrivialRule::AtMostThreeCandidates));
    let e = identical(7, 3);
    assert_eq!(e.num_votes(), 3);
    assert_eq!(triviality_screen(&e), Some(TrivialRule::ThreeVotesSevenCandidates));
    let e = identical(8, 4);
    assert_eq!(e.num_votes(), 4);
    assert_eq!(triviality_screen(&e), None);
    assert_eq!(triviality_screen(&identical(9, 2)), Some(TrivialRule::AtMostTwoVotes));
    assert_eq!(triviality_screen(&identical(8, 3)), None);
}

#[test]
fn lanes_parse() {
    assert_eq!(parse_lanes("38,hull, qcp").unwrap(), vec![Lane::Pattern38, Lane::HullQuad, Lane::Embed]);
    assert_eq!(parse_lanes("").unwrap(), vec![]);
    assert!(matches!(parse_lanes("38,bogus"), Err(PortfolioError::UnknownLane(_))));
    for l in Lane::ALL {
        assert_eq!(l.name().parse::<Lane>().unwrap(), l);
    }
    // priority order used for simultaneous finishes
    assert!(Lane::Pattern38 < Lane::HullQuad && Lane::HullFull < Lane::Closure);
    assert!(Lane::Closure < Lane::Ilp && Lane::Ilp < Lane::Embed);
}

fn round_trip(e: &Election, cfg: &Config, status: Status) -> CertificateFile {
    let v = run_portfolio(e, cfg);
    assert_eq!(v.status, status, "{v:?}");
    let file = v.certificate_file().unwrap();
    let json = serde_json::to_string_pretty(&file).unwrap();
    let back: CertificateFile = serde_json::from_str(&json).unwrap();
    assert_eq!(back, file);
    verify_certificate(e, &back, cfg).unwrap();
    back
}

#[test]
fn pattern_38_is_refuted_by_its_lane() {
    let e = instances::pattern_38();
    let c = cfg(60.0);
    let v = run_portfolio(&e, &c);
    assert_eq!(v.status, Status::NotEuclidean);
    assert!(v.elapsed_secs < 5.0, "{}", v.elapsed_secs);
    let file = round_trip(&e, &c, Status::NotEuclidean);
    assert!(matches!(file.certificate, Certificate::Pattern38(_)));
}

#[test]
fn figure_two_is_euclidean() {
    let e = instances::figure_two();
    let c = cfg(60.0);
    let file = round_trip(&e, &c, Status::Euclidean);
    let Certificate::Embedding(ec) = &file.certificate else { panic!("{:?}", file.certificate) };
    assert!(ec.min_gap > 0.0);
    assert!(ec.rounded_verified);
}

#[test]
fn closure_example_is_refuted() {
    let e = instances::closure_example();
    let mut c = cfg(60.0);
    c.portfolio.lanes = vec![Lane::Closure, Lane::Embed];
    let file = round_trip(&e, &c, Status::NotEuclidean);
    assert!(matches!(file.certificate, Certificate::Closure(_)));
    let c = cfg(60.0);
    round_trip(&e, &c, Status::NotEuclidean);
}

#[test]
fn hull_examples_are_refuted() {
    let c = cfg(60.0);
    for e in [instances::example_one(), instances::example_two(), instances::no_copy_14()] {
        round_trip(&e, &c, Status::NotEuclidean);
    }
}

#[test]
fn trivial_verdicts_carry_the_rule() {
    let e = Election::from_letters(&["abc", "cba", "bca", "acb"]).unwrap();
    let c = cfg(5.0);
    let file = round_trip(&e, &c, Status::Euclidean);
    assert_eq!(file.certificate, Certificate::Trivial(TrivialRule::AtMostThreeCandidates));
}

#[test]
fn certificate_json_shape() {
    let e = instances::pattern_38();
    let file = run_portfolio(&e, &cfg(10.0)).certificate_file().unwrap();
    let json: serde_json::Value = serde_json::to_value(&file).unwrap();
    for key in ["status", "reduced_digest", "trace", "kind", "payload", "tool_version"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["kind"], "Pattern38");
}

#[test]
fn tampered_certificates_are_rejected() {
    let c = cfg(60.0);

    let e = instances::figure_two();
    let file = round_trip(&e, &c, Status::Euclidean);
    let mut bad = file.clone();
    if let Certificate::Embedding(ec) = &mut bad.certificate {
        // push the first voter far past every bisector
        ec.embedding.voters[0] = ec.embedding.candidates[3];
        ec.embedding.voters[0][0] += 1e-3;
    }
    assert!(matches!(verify_certificate(&e, &bad, &c), Err(PortfolioError::CorruptCertificate(_))));

    let mut bad = file.clone();
    bad.status = Status::NotEuclidean;
    assert!(verify_certificate(&e, &bad, &c).is_err());

    let mut bad = file.clone();
    bad.reduced_digest = "0".repeat(64);
    assert!(verify_certificate(&e, &bad, &c).is_err());

    // a certificate checked against a different election
    assert!(verify_certificate(&instances::example_two(), &file, &c).is_err());

    let e = instances::pattern_38();
    let file = round_trip(&e, &c, Status::NotEuclidean);
    let mut bad = file.clone();
    if let Certificate::Pattern38(p) = &mut bad.certificate {
        p.witnesses[6] = p.witnesses[0];
    }
    assert!(verify_certificate(&e, &bad, &c).is_err());

    let mut bad = file.clone();
    bad.certificate = Certificate::Trivial(TrivialRule::AtMostTwoVotes);
    bad.status = Status::Euclidean;
    assert!(verify_certificate(&e, &bad, &c).is_err());
}

#[test]
fn reduced_instances_keep_their_trace() {
    // the example plus two candidates ranked last everywhere
    let e = Election::from_letters(&["abcdef", "dcbaef", "bdcaef", "cabdef", "dabcef", "cdabef"]).unwrap();
    let c = cfg(60.0);
    let v = run_portfolio(&e, &c);
    assert_eq!(v.status, Status::NotEuclidean);
    assert_eq!(v.reduced_candidates, 4);
    assert!(!v.trace.steps.is_empty());
    let file = v.certificate_file().unwrap();
    verify_certificate(&e, &file, &c).unwrap();
    let mut bad = file.clone();
    bad.trace.steps.pop();
    assert!(verify_certificate(&e, &bad, &c).is_err());
}

#[test]
fn winner_matches_its_lane_run_alone() {
    let c = cfg(60.0);
    for e in [instances::pattern_38(), instances::example_two(), instances::closure_example()] {
        let v = run_portfolio(&e, &c);
        let lane = v.lane.unwrap();
        let (r, _) = reduce_fixpoint(&e);
        assert_eq!(run_lane(lane, &r, &c, &Stop::never()), LaneOutcome::Definitive(v.certificate.unwrap()));
    }
}

#[test]
fn empty_lane_list_is_unknown() {
    let mut c = cfg(1.0);
    c.portfolio.lanes = vec![];
    let v = run_portfolio(&instances::pattern_38(), &c);
    assert_eq!(v.status, Status::Unknown);
    assert!(v.certificate.is_none() && v.certificate_file().is_none());
}

#[test]
fn budget_expiry_is_unknown() {
    let mut c = cfg(0.3);
    c.portfolio.lanes = vec![Lane::Embed];
    let v = run_portfolio(&instances::pattern_38(), &c);
    assert_eq!(v.status, Status::Unknown);
    assert!(v.elapsed_secs < 5.0);
}

#[test]
fn synthetic_instances_are_never_refuted() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let c = cfg(5.0);
    for _ in 0..40 {
        let m = rng.gen_range(4..=7);
        let n = rng.gen_range(4..=7);
        let inst = random_euclidean(&mut rng, m, n);
        let v = run_portfolio(&inst.election, &c);
        assert_ne!(v.status, Status::NotEuclidean);
        if let Some(file) = v.certificate_file() {
            verify_certificate(&inst.election, &file, &c).unwrap();
        }
    }
}

#[test]
fn config_from_toml() {
    let c = Config::from_toml(
        "[portfolio]\nbudget_secs = 5.0\nlanes = [\"38\", \"qcp\"]\n[qcp]\nrestarts = 7\n[ilp]\nsubset_min = 6\n",
    )
    .unwrap();
    assert_eq!(c.portfolio.budget_secs, 5.0);
    assert_eq!(c.portfolio.lanes, vec![Lane::Pattern38, Lane::Embed]);
    assert_eq!(c.qcp.restarts, 7);
    assert_eq!(c.qcp.box_init, 100.0);
    assert_eq!(c.ilp.subset_min, 6);
    assert_eq!(Config::from_toml("").unwrap(), Config::default());
    assert!(matches!(Config::from_toml("[portfolio]\nlanes = [\"x\"]"), Err(PortfolioError::Config(_))));
}

#[test]
fn huge_budgets_do_not_panic() {
    let mut c = cfg(1e300);
    c.portfolio.verify_secs = f64::INFINITY;
    let e = instances::pattern_38();
    let file = round_trip(&e, &c, Status::NotEuclidean);
    verify_certificate(&e, &file, &c).unwrap();
}

#[test]
fn batch_tables() {
    assert_eq!(dataset_of(Path::new("/x/00004-00000012.soc")), "00004");
    assert_eq!(dataset_of(Path::new("plain.soc")), "plain");
    let rec = |d: &str, s: Option<Status>| BatchRecord {
        file: format!("{d}.soc"),
        dataset: d.into(),
        status: s,
        lane: None,
        secs: 0.1,
        error: None,
    };
    let (rows, md) = summarize(&[
        rec("a", Some(Status::Euclidean)),
        rec("a", Some(Status::Unknown)),
        rec("b", Some(Status::NotEuclidean)),
        rec("b", None),
    ]);
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0].euclidean, rows[0].unknown), (1, 1));
    assert_eq!((rows[1].not_euclidean, rows[1].errors), (1, 1));
    assert!(md.contains("| total | 1 | 1 | 1 | 1 |"), "{md}");
}

#[test]
fn ilp_certificates_survive_json() {
    let e = instances::closure_example();
    let mut c = cfg(60.0);
    c.portfolio.lanes = vec![Lane::Ilp];
    let file = round_trip(&e, &c, Status::NotEuclidean);
    assert!(matches!(file.certificate, Certificate::Ilp(_)));
}
