mod common;

use std::path::Path;

use common::*;
use ehc_core::harness::*;
use ehc_core::transitive::tr_exact;
use ehc_core::{CoreError, Rational, Tournament};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rec(n: usize, tr: usize) -> ExperimentRecord {
    ExperimentRecord {
        n,
        sample: 0,
        is_free: true,
        rejects: 0,
        tr,
        tournament: Tournament::transitive(n),
        witness: (0..tr).collect(),
        elapsed_ms: None,
    }
}

#[test]
fn one_vertex_sample() {
    let t = sample_tournament(1, &mut ChaCha8Rng::seed_from_u64(0));
    assert_eq!(t, Tournament::transitive(1));
}

#[test]
fn samples_are_deterministic() {
    let a = sample_tournament(8, &mut ChaCha8Rng::seed_from_u64(42));
    let b = sample_tournament(8, &mut ChaCha8Rng::seed_from_u64(42));
    assert_eq!(a.arcs(), b.arcs());
}

#[test]
fn arcs_are_fair_coins() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = 10_000;
    let hits = (0..trials)
        .filter(|_| sample_tournament(6, &mut rng).beats(1, 4))
        .count() as f64;
    // mean 5000, σ = 50
    assert!((hits - 5000.0).abs() <= 150.0, "{hits}");
}

#[test]
fn empty_family_takes_the_first_sample() {
    let s = sample_free(7, &[], &mut ChaCha8Rng::seed_from_u64(5), 10).unwrap();
    assert_eq!(s.rejects, 0);
    assert_eq!(s.tournament, sample_tournament(7, &mut ChaCha8Rng::seed_from_u64(5)));
}

#[test]
fn two_vertex_family_exhausts_the_budget() {
    let fam = [Tournament::transitive(2)];
    for n in 2..6 {
        let got = sample_free(n, &fam, &mut ChaCha8Rng::seed_from_u64(n as u64), 50);
        assert!(matches!(got, Err(CoreError::BudgetExceeded(_))));
    }
}

#[test]
fn triangle_free_samples_are_transitive() {
    let fam = [Tournament::cyclic_triangle()];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..5 {
        let s = sample_free(6, &fam, &mut rng, 1_000_000).unwrap();
        assert_eq!(tr_exact(&s.tournament).unwrap().0, 6);
    }
}

#[test]
fn epsilon_examples() {
    let all = [rec(4, 4), rec(9, 9), rec(2, 2)];
    let e = estimate_epsilon(&all).unwrap();
    assert_eq!(e.exact, Some(Rational::from_integer(1)));
    assert_eq!(e.value, 1.0);
    let e = estimate_epsilon(&[rec(4, 2)]).unwrap();
    assert_eq!(e.exact, Some(Rational::new(1, 2)));
    assert!(estimate_epsilon(&[]).is_err());
    assert!(estimate_epsilon(&[rec(1, 1)]).is_err());
}

#[test]
fn irrational_exponent_has_no_exact_value() {
    let e = estimate_epsilon(&[rec(8, 3)]).unwrap();
    assert_eq!(e.exact, None);
    assert!((e.value - 3f64.ln() / 8f64.ln()).abs() < 1e-12);
}

proptest! {
    #[test]
    fn epsilon_is_a_lower_envelope(pairs in prop::collection::vec((2usize..40, 1usize..40), 1..12), extra in (2usize..40, 1usize..40)) {
        let recs: Vec<ExperimentRecord> = pairs.iter().map(|&(n, t)| rec(n, t.min(n))).collect();
        let e = estimate_epsilon(&recs).unwrap();
        for r in &recs {
            prop_assert!(e.value <= (r.tr as f64).ln() / (r.n as f64).ln() + 1e-12);
        }
        let mut more = recs.clone();
        more.push(rec(extra.0, extra.1.min(extra.0)));
        prop_assert!(estimate_epsilon(&more).unwrap().value <= e.value);
    }
}

fn run_to_string(cfg: &ExperimentConfig, family: &[Tournament]) -> (String, ExperimentSummary) {
    let mut out = Vec::new();
    let s = run_experiment_with_family(cfg, family, &mut out).unwrap();
    (String::from_utf8(out).unwrap(), s)
}

#[test]
fn single_record_run() {
    let cfg = ExperimentConfig::parse("sizes = 4\nsamples = 1\nseed = 11\n", Path::new(".")).unwrap();
    let (text, summary) = run_to_string(&cfg, &[]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with(r#"{"type":"record","n":4,"sample":0,"is_free":true"#));
    assert!(lines[1].starts_with(r#"{"type":"summary""#));
    assert_eq!(summary.records, 1);
    assert_eq!(text, run_to_string(&cfg, &[]).0);
}

#[test]
fn records_carry_checkable_witnesses() {
    let cfg = ExperimentConfig::parse("sizes = 3, 6, 9\nsamples = 4\nseed = 2\n", Path::new(".")).unwrap();
    let (text, _) = run_to_string(&cfg, &[]);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if v["type"] != "record" {
            continue;
        }
        let t: Tournament = serde_json::from_value(v["tournament"].clone()).unwrap();
        let witness: Vec<usize> = serde_json::from_value(v["witness"].clone()).unwrap();
        assert_eq!(witness.len(), v["tr"].as_u64().unwrap() as usize);
        assert_eq!(witness.len(), tr_exact(&t).unwrap().0);
        // listed in transitive order
        for (i, &a) in witness.iter().enumerate() {
            for &b in &witness[i + 1..] {
                assert!(t.beats(a, b));
            }
        }
    }
}

#[test]
fn forbidden_pair_run_reports_positive_epsilon() {
    let h1 = figure5_n();
    let h2 = figure5_g();
    let cfg = ExperimentConfig::parse(
        "sizes = 4, 8, 16, 32\nsamples = 3\nseed = 1\nmax_rejects = 200\ndelta = 2\nlambda = 1/2000\n",
        Path::new("."),
    )
    .unwrap();
    let (text, summary) = run_to_string(&cfg, &[h1.clone(), h2.clone()]);
    let eps = summary.epsilon.clone().expect("small sizes yield free samples");
    assert!(eps.value > 0.0);
    assert_eq!(summary.sizes.len(), 4);
    assert!(summary.thresholds.contains_key("lambda_key"));
    assert_eq!(text, run_to_string(&cfg, &[h1, h2]).0);
}

#[test]
fn lambda_above_threshold_is_a_config_error() {
    let cfg = ExperimentConfig::parse("delta = 1\nlambda = 1/10\n", Path::new(".")).unwrap();
    let mut out = Vec::new();
    assert!(matches!(
        run_experiment_with_family(&cfg, &[], &mut out),
        Err(HarnessError::Config(_))
    ));
}

#[test]
fn config_files_and_family_paths() {
    let dir = std::env::temp_dir().join(format!("ehc-harness-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("tri.txt"), Tournament::cyclic_triangle().to_text()).unwrap();
    std::fs::write(
        dir.join("exp.cfg"),
        "sizes = 5\nsamples = 2\nfamily = tri.txt\nseed = 3\n",
    )
    .unwrap();
    let cfg = ExperimentConfig::load(&dir.join("exp.cfg")).unwrap();
    let mut out = Vec::new();
    let summary = run_experiment(&cfg, &mut out).unwrap();
    assert_eq!(summary.free, 2);
    assert_eq!(summary.epsilon.unwrap().exact, Some(Rational::from_integer(1)));
    std::fs::remove_dir_all(&dir).unwrap();
}
