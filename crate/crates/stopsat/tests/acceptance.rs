//! Acceptance checks for the expected-satisfaction framework. Each test
//! covers one release criterion and prints a `criterion N PASS` line (visible
//! with `cargo test --test acceptance -- --nocapture`):
//!
//! 1. Equivalence with average precision on exhaustive and random rankings.
//! 2. Equivalence with rank-biased precision, including the residual law.
//! 3. Stop-weight normalization on random hazard schedules.
//! 4. Uniform stop weights when every relevant document is retrieved.
//! 5. Closed form equals the backward recursion.
//! 6. Monte Carlo agreement with the closed form.
//! 7. Willingness/expectation laws: constant-hazard reduction, monotonicity.
//! 8. Byte-exact CLI golden outputs.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stopsat::metric::{expected_satisfaction, stop_weights, HazardSchedule, SatisfactionSchedule};
use stopsat::oracles::{average_precision, rbp_direct};
use stopsat::ranking::JudgedRanking;
use stopsat::satisfaction::{gain_satisfaction, precision_satisfaction, GainMap};
use stopsat::simulate::simulate;
use stopsat::stopping::{ap_hazards, rbp_hazards, we_hazards, WeParams};

const TOLERANCE: f64 = 1e-12;

/// Every binary relevance pattern up to `max_len` ranks.
fn exhaustive_binary(max_len: usize) -> Vec<Vec<u32>> {
    let mut patterns = Vec::new();
    for n in 0..=max_len {
        for mask in 0u32..(1 << n) {
            patterns.push((0..n).map(|i| (mask >> i) & 1).collect());
        }
    }
    patterns
}

/// Random binary patterns with varying relevance density.
fn random_binary(count: usize, max_len: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(0..=max_len);
            let density: f64 = rng.gen_range(0.0..=1.0);
            (0..n).map(|_| u32::from(rng.gen_bool(density))).collect()
        })
        .collect()
}

fn retrieved_relevant(grades: &[u32]) -> usize {
    grades.iter().filter(|&&g| g >= 1).count()
}

/// Random hazard schedule of the given length, with occasional exact 0s and
/// 1s so the boundary arithmetic is covered.
fn random_hazards(len: usize, rng: &mut ChaCha8Rng) -> HazardSchedule {
    let values = (0..len)
        .map(|_| match rng.gen_range(0..20) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen_range(0.0..=1.0),
        })
        .collect();
    HazardSchedule::new(values).expect("generated hazards are in range")
}

fn random_satisfactions(len: usize, rng: &mut ChaCha8Rng) -> SatisfactionSchedule {
    SatisfactionSchedule::new((0..len).map(|_| rng.gen_range(0.0..=1.0)).collect())
        .expect("generated satisfactions are in range")
}

#[test]
fn criterion_1_average_precision_equivalence() {
    let started = Instant::now();
    let mut cases = 0usize;
    for grades in exhaustive_binary(10) {
        let retrieved = retrieved_relevant(&grades);
        for extra in 0..=2usize {
            let total = retrieved + extra;
            if total == 0 {
                continue; // AP is undefined with no relevant documents.
            }
            let ranking = JudgedRanking::new("t", grades.clone(), total, 1).unwrap();
            assert_ap_matches(&ranking);
            cases += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5501);
    let mut random_cases = 0usize;
    while random_cases < 1000 {
        let grades = random_binary(1, 50, &mut rng).pop().unwrap();
        let retrieved = retrieved_relevant(&grades);
        let total = retrieved + rng.gen_range(0..=5);
        if total == 0 {
            continue;
        }
        let ranking = JudgedRanking::new("t", grades, total, 1).unwrap();
        assert_ap_matches(&ranking);
        random_cases += 1;
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    println!(
        "criterion 1 PASS: framework equals the AP oracle within 1e-12 on {cases} exhaustive \
         and {random_cases} random rankings ({elapsed:.2?})"
    );
}

fn assert_ap_matches(ranking: &JudgedRanking) {
    let hazards = ap_hazards(ranking).unwrap();
    let sats = precision_satisfaction(ranking);
    let framework = expected_satisfaction(&hazards, &sats).unwrap();
    let oracle = average_precision(ranking).unwrap();
    assert!(
        (framework.expected_satisfaction - oracle).abs() <= TOLERANCE,
        "framework {} vs oracle {} on {:?} (R={})",
        framework.expected_satisfaction,
        oracle,
        ranking.grades(),
        ranking.total_relevant()
    );
}

#[test]
fn criterion_2_rank_biased_precision_equivalence() {
    let started = Instant::now();
    let persistences = [0.1, 0.5, 0.8, 0.95];
    let gains = GainMap::binary(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5502);
    let mut patterns = exhaustive_binary(10);
    patterns.extend(random_binary(1000, 50, &mut rng));
    let mut cases = 0usize;
    for grades in &patterns {
        let retrieved = retrieved_relevant(grades);
        let ranking = JudgedRanking::new("t", grades.clone(), retrieved, 1).unwrap();
        for &persistence in &persistences {
            let hazards = rbp_hazards(ranking.len(), persistence).unwrap();
            let sats = gain_satisfaction(&ranking, &gains).unwrap();
            let framework = expected_satisfaction(&hazards, &sats).unwrap();
            let oracle = rbp_direct(&ranking, persistence, &gains).unwrap();
            let tail = persistence.powi(ranking.len() as i32);
            assert!(
                (framework.expected_satisfaction - oracle.value).abs() <= TOLERANCE,
                "score mismatch at persistence {persistence} on {grades:?}"
            );
            assert!(
                (framework.residual - tail).abs() <= TOLERANCE,
                "residual {} vs persistence^n {} on {grades:?}",
                framework.residual,
                tail
            );
            assert!((framework.residual - oracle.residual_uncertainty).abs() <= TOLERANCE);
            cases += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    println!(
        "criterion 2 PASS: framework equals the RBP oracle and residual equals persistence^n \
         within 1e-12 on {cases} cases ({elapsed:.2?})"
    );
}

#[test]
fn criterion_3_stop_weight_normalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5503);
    for _ in 0..10_000 {
        let len = rng.gen_range(1..=100);
        let hazards = random_hazards(len, &mut rng);
        let weights = stop_weights(&hazards);
        let mass: f64 = weights.weights().iter().sum::<f64>() + weights.residual();
        assert!(
            (mass - 1.0).abs() <= TOLERANCE,
            "mass {mass} on schedule of length {len}"
        );
    }
    println!(
        "criterion 3 PASS: stop weights plus residual sum to 1 within 1e-12 on 10000 random \
         schedules"
    );
}

#[test]
fn criterion_4_uniform_stop_weights_with_full_retrieval() {
    let mut checked = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5504);
    let mut patterns = exhaustive_binary(10);
    patterns.extend(random_binary(200, 80, &mut rng));
    for grades in patterns {
        let retrieved = retrieved_relevant(&grades);
        if retrieved == 0 {
            continue;
        }
        let ranking = JudgedRanking::new("t", grades, retrieved, 1).unwrap();
        let weights = stop_weights(&ap_hazards(&ranking).unwrap());
        let uniform = 1.0 / retrieved as f64;
        for (weight, relevant) in weights.weights().iter().zip(ranking.relevance_flags()) {
            if relevant {
                assert!(
                    (weight - uniform).abs() <= TOLERANCE,
                    "weight {weight} vs {uniform}"
                );
            } else {
                assert_eq!(*weight, 0.0);
            }
        }
        assert!(weights.residual().abs() <= TOLERANCE);
        checked += 1;
    }
    println!(
        "criterion 4 PASS: every relevant rank carries stop weight 1/R within 1e-12 on \
         {checked} fully retrieved rankings"
    );
}

#[test]
fn criterion_5_backward_recursion_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5505);
    for _ in 0..10_000 {
        let len = rng.gen_range(1..=100);
        let hazards = random_hazards(len, &mut rng);
        let sats = random_satisfactions(len, &mut rng);
        let closed = expected_satisfaction(&hazards, &sats).unwrap();
        // Backward induction: V_k = p_k s_k + (1 - p_k) V_{k+1}, V_{n+1} = 0.
        let mut value = 0.0;
        for (p, s) in hazards.values().iter().zip(sats.values()).rev() {
            value = p * s + (1.0 - p) * value;
        }
        assert!(
            (closed.expected_satisfaction - value).abs() <= TOLERANCE,
            "closed {} vs recursive {value}",
            closed.expected_satisfaction
        );
    }
    println!(
        "criterion 5 PASS: closed form equals backward recursion within 1e-12 on 10000 random \
         schedule pairs"
    );
}

#[test]
fn criterion_6_monte_carlo_agreement() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5506);
    let trials = 100_000u64;
    let mut agreeing = 0usize;
    for case in 0..50u64 {
        let len = rng.gen_range(1..=30);
        let hazards = random_hazards(len, &mut rng);
        let sats = random_satisfactions(len, &mut rng);
        let closed = expected_satisfaction(&hazards, &sats).unwrap();
        let sim = simulate(&hazards, &sats, trials, 0xACCE5560 + case).unwrap();
        let std_error = sim.std_error.expect("more than one trial");
        if (sim.mean_satisfaction - closed.expected_satisfaction).abs() <= 4.0 * std_error {
            agreeing += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        agreeing >= 49,
        "only {agreeing}/50 cases within 4 standard errors"
    );
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 6 PASS: {agreeing}/50 simulations within 4 standard errors of the closed \
         form at {trials} trials ({elapsed:.2?})"
    );
}

#[test]
fn criterion_7_willingness_expectation_laws() {
    // Zero exponents collapse to the constant hazard, bitwise.
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5507);
    for persistence in [0.1, 0.5, 0.9] {
        let params = WeParams {
            base_hazard: 1.0 - persistence,
            expectation_smoothing: 0.5,
            expectation_prior: 0.5,
            willingness_exponent: 0.0,
            expectation_exponent: 0.0,
        };
        for _ in 0..20 {
            let grades = random_binary(1, 40, &mut rng).pop().unwrap();
            let retrieved = retrieved_relevant(&grades).max(1);
            let ranking = JudgedRanking::new("t", grades, retrieved, 1).unwrap();
            let we = we_hazards(&ranking, &params).unwrap();
            let constant = rbp_hazards(ranking.len(), persistence).unwrap();
            assert_eq!(
                we.values(),
                constant.values(),
                "schedules must match bitwise"
            );
        }
    }

    // Monotonicity: on a 20x20 grid of (willingness, expectation) values the
    // pointwise hazard never drops when either factor decreases.
    let grid: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
    for (gamma, delta) in [(0.5, 0.5), (1.0, 1.0), (2.0, 0.5), (1.0, 3.0)] {
        let params = WeParams {
            base_hazard: 0.6,
            expectation_smoothing: 0.5,
            expectation_prior: 0.5,
            willingness_exponent: gamma,
            expectation_exponent: delta,
        };
        for i in 1..grid.len() {
            for &e in &grid {
                assert!(
                    params.hazard(grid[i - 1], e) >= params.hazard(grid[i], e),
                    "hazard rose with willingness at gamma={gamma}"
                );
            }
            for &w in &grid {
                assert!(
                    params.hazard(w, grid[i - 1]) >= params.hazard(w, grid[i]),
                    "hazard rose with expectation at delta={delta}"
                );
            }
        }
    }
    println!(
        "criterion 7 PASS: zero exponents reduce to the constant hazard bitwise; hazards are \
         monotone in willingness and expectation on a 20x20 grid"
    );
}

#[test]
fn criterion_8_cli_golden_outputs() {
    let fixtures = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let qrels = fixtures.join("sample.qrels");
    let run = fixtures.join("sample.run");
    let empty = fixtures.join("empty.run");
    let invoke = |extra: &[&str], run_path: &std::path::Path| {
        let mut args = vec![
            "evaluate".to_owned(),
            "--qrels".to_owned(),
            qrels.to_str().unwrap().to_owned(),
            "--run".to_owned(),
            run_path.to_str().unwrap().to_owned(),
        ];
        args.extend(extra.iter().map(|s| s.to_string()));
        let output = std::process::Command::new(env!("CARGO_BIN_EXE_stopsat"))
            .args(&args)
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "args {args:?}");
        String::from_utf8(output.stdout).expect("stdout is UTF-8")
    };

    assert_eq!(
        invoke(&[], &run),
        "1\tap-precision\t0.833333333333\t0\nall\tap-precision\t0.833333333333\t0\n"
    );
    assert_eq!(
        invoke(
            &[
                "--stopping",
                "rbp",
                "--persistence",
                "0.5",
                "--satisfaction",
                "gain"
            ],
            &run
        ),
        "1\trbp-gain\t0.625\t0.125\nall\trbp-gain\t0.625\t0.125\n"
    );
    assert_eq!(
        invoke(&[], &empty),
        "1\tap-precision\t0\t1\nall\tap-precision\t0\t1\n"
    );
    println!("criterion 8 PASS: the three evaluate golden outputs reproduce byte-exactly");
}
