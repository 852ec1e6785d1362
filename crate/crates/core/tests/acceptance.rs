//! Acceptance suite. One test per criterion; each prints a single
//! PASS/FAIL line (run with `--nocapture` to see the lines for passing
//! criteria as well).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgame::boolfn::TruthTable;
use qgame::catalog;
use qgame::circuit;
use qgame::game::GameSpec;
use qgame::optimize::{finite_diff_gradient, optimize_strategy, OptimizeConfig};
use qgame::quantum::{
    make_epr, make_ghz, make_w, u3, win_probability, QuantumStrategy, StateVector,
    UnitaryParams,
};
use qgame::search::{run_campaign, CampaignConfig, Resource};
use qgame::verify::{self, CheckResult};

fn default_config() -> CampaignConfig {
    CampaignConfig {
        optimize: OptimizeConfig::default(),
        witness_seeded: true,
    }
}

/// Prints the one-line verdict for a criterion and panics on failure.
fn report(label: &str, results: &[CheckResult]) {
    let failed: Vec<&CheckResult> = results.iter().filter(|r| !r.passed).collect();
    if failed.is_empty() {
        println!("PASS {label}");
    } else {
        let details: Vec<String> = failed
            .iter()
            .map(|r| format!("{}: {}", r.name, r.detail))
            .collect();
        println!("FAIL {label} [{}]", details.join("; "));
        panic!("{label}: {} of {} checks failed", failed.len(), results.len());
    }
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

#[test]
fn criterion_1_counts() {
    report("criterion 1: function and game counts", &verify::verify_counts());
}

#[test]
fn criterion_2_two_player_reproduction() {
    report(
        "criterion 2: two-player EPR campaign",
        &verify::verify_table1(&default_config()),
    );
}

#[test]
fn criterion_3_ghz_eighty_games() {
    report(
        "criterion 3: 80 maximal-gap GHZ games",
        &verify::verify_table3(&default_config()),
    );
}

#[test]
fn criterion_4_witness_evaluations() {
    let mut results = verify::verify_table2();
    results.extend(verify::verify_table5());
    report("criterion 4: published witness evaluations", &results);
}

#[test]
fn criterion_5_resource_comparison() {
    report(
        "criterion 5: W versus GHZ comparison rows",
        &verify::verify_table4(&default_config()),
    );
}

#[test]
fn criterion_6_operator_suite() {
    let mut results = verify::verify_bell();
    results.extend(verify::verify_t1());
    results.extend(verify::verify_t2());
    report("criterion 6: Bell and Mermin operator values", &results);
}

#[test]
fn criterion_7_correspondence() {
    report(
        "criterion 7: win-probability / expectation correspondence",
        &verify::verify_correspondence(),
    );
}

fn random_params(rng: &mut ChaCha8Rng) -> UnitaryParams {
    let pi = std::f64::consts::PI;
    UnitaryParams::new(
        rng.gen_range(-pi..pi),
        rng.gen_range(-pi..pi),
        rng.gen_range(-pi..pi),
    )
}

fn random_state(rng: &mut ChaCha8Rng, n: u8) -> StateVector {
    let dim = 1usize << n;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::new(n, amps).unwrap()
}

/// Brute-force win probability through the full 2^n x 2^n Kronecker
/// product of the per-player unitaries.
fn kronecker_win_probability(game: &GameSpec, strat: &QuantumStrategy) -> f64 {
    let n = game.n();
    let dim = 1usize << n;
    let mut total = 0.0;
    for q in 0..(1u16 << n) {
        let mats: Vec<_> = (0..n)
            .map(|player| {
                let bit = q & (1 << (n - 1 - player)) != 0;
                strat.unitary(player, bit).unwrap()
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (r, slot) in out.iter_mut().enumerate() {
            for c in 0..dim {
                let mut entry = Complex64::new(1.0, 0.0);
                for (player, m) in mats.iter().enumerate() {
                    let shift = n as usize - 1 - player;
                    entry *= m.0[(r >> shift) & 1][(c >> shift) & 1];
                }
                *slot += entry * strat.resource().amplitudes()[c];
            }
        }
        for (a, amp) in out.iter().enumerate() {
            if game.win_idx(q, a as u16) {
                total += amp.norm_sqr();
            }
        }
    }
    total / f64::from(1u16 << n)
}

#[test]
fn criterion_8_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut results = Vec::new();

    // u3 unitarity over 10^4 random parameter triples.
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let m = u3(&random_params(&mut rng)).unwrap();
        worst = worst.max(m.unitarity_defect());
    }
    results.push(check(
        "u3 unitarity",
        worst < 1e-12,
        format!("max defect {worst:.3e}"),
    ));

    // Norm preservation under long apply_local chains.
    let mut state = random_state(&mut rng, 3);
    for step in 0..200 {
        let m = u3(&random_params(&mut rng)).unwrap();
        state = state.apply_local((step % 3) as u8, &m).unwrap();
    }
    results.push(check(
        "norm preservation",
        (state.norm() - 1.0).abs() < 1e-10,
        format!("norm {:.15}", state.norm()),
    ));

    // Per-qubit evaluation matches the dense Kronecker oracle.
    let mut oracle_worst = 0.0f64;
    for _ in 0..100 {
        let n = if rng.gen_bool(0.5) { 2 } else { 3 };
        let f = TruthTable::new(n, rng.gen_range(0..1u16 << (1 << n))).unwrap();
        let g = TruthTable::new(n, rng.gen_range(0..1u16 << (1 << n))).unwrap();
        let game = GameSpec::new(f, g).unwrap();
        let params: Vec<[UnitaryParams; 2]> = (0..n)
            .map(|_| [random_params(&mut rng), random_params(&mut rng)])
            .collect();
        let strat = QuantumStrategy::new(random_state(&mut rng, n), params).unwrap();
        let fast = win_probability(&game, &strat).unwrap();
        let slow = kronecker_win_probability(&game, &strat);
        oracle_worst = oracle_worst.max((fast - slow).abs());
    }
    results.push(check(
        "Kronecker oracle equivalence",
        oracle_worst < 1e-12,
        format!("max deviation {oracle_worst:.3e}"),
    ));

    // Outcome probabilities sum to one.
    let mut sum_worst = 0.0f64;
    for _ in 0..100 {
        let s: f64 = random_state(&mut rng, 3).outcome_probs().iter().sum();
        sum_worst = sum_worst.max((s - 1.0).abs());
    }
    results.push(check(
        "outcome probabilities sum to 1",
        sum_worst < 1e-12,
        format!("max deviation {sum_worst:.3e}"),
    ));

    // Optimizer outputs are stationary points.
    let config = OptimizeConfig::default();
    let mut grad_worst = 0.0f64;
    for (game, resource) in [
        (catalog::chsh_game(), make_epr()),
        (catalog::ghz_first_type_witness().0, make_ghz(3).unwrap()),
        (catalog::w_witness().0, make_w()),
    ] {
        let result = optimize_strategy(&game, &resource, &config).unwrap();
        let grad = finite_diff_gradient(&game, &resource, &result.best_angles, 1e-5).unwrap();
        let norm = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        grad_worst = grad_worst.max(norm);
    }
    results.push(check(
        "stationarity of optimizer outputs",
        grad_worst < 1e-3,
        format!("max gradient norm {grad_worst:.3e}"),
    ));

    // Two identical campaigns write byte-identical sinks.
    let dir = tempfile::tempdir().unwrap();
    let config = CampaignConfig {
        optimize: OptimizeConfig {
            restarts: 6,
            max_evals: 400,
            ..OptimizeConfig::default()
        },
        witness_seeded: true,
    };
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    run_campaign(2, &[Resource::Epr], &config, Some(&a)).unwrap();
    run_campaign(2, &[Resource::Epr], &config, Some(&b)).unwrap();
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    results.push(check(
        "campaign determinism",
        bytes_a == bytes_b,
        format!("{} vs {} bytes", bytes_a.len(), bytes_b.len()),
    ));

    report("criterion 8: simulator and optimizer properties", &results);
}

#[test]
fn criterion_9_circuit_replay() {
    let mut results = Vec::new();

    let ghz = circuit::replay(3, &circuit::ghz_prep(3)).unwrap();
    let ghz_dist = ghz
        .amplitudes()
        .iter()
        .zip(make_ghz(3).unwrap().amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    results.push(check(
        "GHZ preparation replay",
        ghz_dist < 1e-12,
        format!("max amplitude deviation {ghz_dist:.3e}"),
    ));

    let w = circuit::replay(3, &circuit::w_prep()).unwrap();
    let w_dist = w
        .amplitudes()
        .iter()
        .zip(make_w().amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    results.push(check(
        "W preparation replay",
        w_dist < 1e-12,
        format!("max amplitude deviation {w_dist:.3e}"),
    ));

    // Exported circuits win with the same probability as the direct path.
    let mut replay_worst = 0.0f64;
    for (resource, (game, angles)) in [
        (Resource::Ghz, catalog::ghz_second_type_witness()),
        (Resource::W, catalog::w_witness()),
    ] {
        let via = circuit::win_probability_via_circuit(&game, resource, &angles).unwrap();
        let direct = circuit::win_probability_direct(&game, resource, &angles).unwrap();
        replay_worst = replay_worst.max((via - direct).abs());
    }
    results.push(check(
        "circuit versus direct win probabilities",
        replay_worst < 1e-12,
        format!("max deviation {replay_worst:.3e}"),
    ));

    report("criterion 9: circuit replay", &results);
}
