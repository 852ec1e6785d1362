//! Maximizing the quantum winning probability over the 6n strategy angles
//! for a fixed game and resource state.
//!
//! The kernel is a multistart Nelder-Mead descent on the objective
//! `F(angles) = 1 - P(angles)`, followed by a finite-difference gradient
//! polish at the best point. Every restart derives its own sub-seed from
//! the master seed, so results are deterministic and independent of the
//! worker count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::game::GameSpec;
use crate::quantum::{win_probability, QuantumError, QuantumStrategy, StateVector, UnitaryParams};

/// Angles ordered as `(θ_{1,0}, φ_{1,0}, λ_{1,0}, θ_{1,1}, …, λ_{n,1})`.
pub type AngleVector = Vec<f64>;

#[derive(Clone, Debug)]
pub struct OptimizeConfig {
    pub restarts: usize,
    pub max_evals: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            restarts: 40,
            max_evals: 2000,
            tolerance: 1e-10,
            seed: 0x9e37_79b9_7f4a_7c15,
        }
    }
}

impl OptimizeConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.restarts == 0 {
            return Err("restarts must be >= 1".into());
        }
        if self.max_evals == 0 {
            return Err("max-evals must be >= 1".into());
        }
        if !(self.tolerance > 0.0) {
            return Err("tolerance must be > 0".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub start_value: f64,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct OptimizeResult {
    /// Best winning probability found (a lower bound on the true quantum
    /// value for the fixed resource).
    pub best_value: f64,
    pub best_angles: AngleVector,
    pub trace: Vec<RestartOutcome>,
}

/// Build a strategy from a flat 6n-angle vector.
pub fn strategy_from_angles(
    resource: &StateVector,
    angles: &[f64],
) -> Result<QuantumStrategy, QuantumError> {
    let n = resource.n() as usize;
    if angles.len() != 6 * n {
        return Err(QuantumError::ParamCount {
            expected: 6 * n,
            got: angles.len() / 3,
        });
    }
    let params = (0..n)
        .map(|i| {
            let base = 6 * i;
            [
                UnitaryParams::new(angles[base], angles[base + 1], angles[base + 2]),
                UnitaryParams::new(angles[base + 3], angles[base + 4], angles[base + 5]),
            ]
        })
        .collect();
    QuantumStrategy::new(resource.clone(), params)
}

/// `1 - P(angles)`, the quantity minimized by the optimizer.
pub fn objective(
    game: &GameSpec,
    resource: &StateVector,
    angles: &[f64],
) -> Result<f64, QuantumError> {
    let strat = strategy_from_angles(resource, angles)?;
    Ok(1.0 - win_probability(game, &strat)?)
}

/// Central-difference gradient of the objective.
pub fn finite_diff_gradient(
    game: &GameSpec,
    resource: &StateVector,
    angles: &[f64],
    step: f64,
) -> Result<Vec<f64>, QuantumError> {
    assert!(step > 0.0);
    let mut grad = Vec::with_capacity(angles.len());
    let mut probe = angles.to_vec();
    for i in 0..angles.len() {
        probe[i] = angles[i] + step;
        let plus = objective(game, resource, &probe)?;
        probe[i] = angles[i] - step;
        let minus = objective(game, resource, &probe)?;
        probe[i] = angles[i];
        grad.push((plus - minus) / (2.0 * step));
    }
    Ok(grad)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Sub-seed for one restart, derived so that parallel sharding cannot
/// change results.
pub fn restart_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(1)))
}

/// Standard Nelder-Mead on `f`, started at `start` with the given initial
/// simplex edge. Returns (f_min, x_min, evals, converged).
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    scale: f64,
    max_evals: usize,
    tol: f64,
) -> (f64, Vec<f64>, usize, bool) {
    let dim = start.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut evals = 0usize;
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim + 1);
    simplex.push((eval(start, &mut evals), start.to_vec()));
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += scale;
        simplex.push((eval(&x, &mut evals), x));
    }

    let mut converged = false;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if simplex[dim].0 - simplex[0].0 < tol {
            converged = true;
            break;
        }

        // Centroid of all but the worst point.
        let mut centroid = vec![0.0; dim];
        for (_, x) in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / dim as f64;
            }
        }

        let worst = simplex[dim].clone();
        let reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst.1)
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        let f_r = eval(&reflected, &mut evals);

        if f_r < simplex[0].0 {
            let expanded: Vec<f64> = centroid
                .iter()
                .zip(&reflected)
                .map(|(c, r)| c + gamma * (r - c))
                .collect();
            let f_e = eval(&expanded, &mut evals);
            simplex[dim] = if f_e < f_r {
                (f_e, expanded)
            } else {
                (f_r, reflected)
            };
        } else if f_r < simplex[dim - 1].0 {
            simplex[dim] = (f_r, reflected);
        } else {
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(&worst.1)
                .map(|(c, w)| c + rho * (w - c))
                .collect();
            let f_c = eval(&contracted, &mut evals);
            if f_c < worst.0 {
                simplex[dim] = (f_c, contracted);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].1.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&entry.1)
                        .map(|(b, v)| b + sigma * (v - b))
                        .collect();
                    *entry = (eval(&x, &mut evals), x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (f_best, x_best) = simplex.swap_remove(0);
    (f_best, x_best, evals, converged)
}

/// Gradient-descent polish with backtracking line search; drives the
/// finite-difference gradient max-norm well below the stationarity check.
fn polish(
    game: &GameSpec,
    resource: &StateVector,
    mut x: Vec<f64>,
    mut fx: f64,
) -> (f64, Vec<f64>) {
    for _ in 0..200 {
        let grad = finite_diff_gradient(game, resource, &x, 1e-6).unwrap();
        let max_norm = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if max_norm < 1e-5 {
            break;
        }
        let norm_sq: f64 = grad.iter().map(|g| g * g).sum();
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let candidate: Vec<f64> = x.iter().zip(&grad).map(|(v, g)| v - step * g).collect();
            let fc = objective(game, resource, &candidate).unwrap();
            if fc < fx - 1e-4 * step * norm_sq {
                x = candidate;
                fx = fc;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (fx, x)
}

/// Start points of the shape every known maximal-gap witness takes:
/// all θ = π/2, φ = 0, and a λ offset of π/2 between the two questions.
fn structured_starts(n: usize) -> Vec<AngleVector> {
    let mut starts = Vec::new();
    for (l0, l1) in [(-PI / 4.0, -3.0 * PI / 4.0), (PI / 12.0, 7.0 * PI / 12.0)] {
        let mut v = Vec::with_capacity(6 * n);
        for _ in 0..n {
            v.extend_from_slice(&[PI / 2.0, 0.0, l0, PI / 2.0, 0.0, l1]);
        }
        starts.push(v);
    }
    starts
}

fn random_angles(rng: &mut ChaCha8Rng, dim: usize) -> AngleVector {
    (0..dim).map(|_| rng.gen_range(-PI..PI)).collect()
}

/// Best of 1000 pseudo-random probes, used as one more start so the final
/// value can never fall below plain random sampling with the same seed.
pub fn probe_start(
    game: &GameSpec,
    resource: &StateVector,
    seed: u64,
    dim: usize,
) -> (f64, AngleVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x70b3));
    let mut best = (f64::INFINITY, vec![0.0; dim]);
    for _ in 0..1000 {
        let x = random_angles(&mut rng, dim);
        let fx = objective(game, resource, &x).unwrap();
        if fx < best.0 {
            best = (fx, x);
        }
    }
    best
}

/// Multistart optimization with extra caller-supplied start points
/// (witness injection) prepended to the restart list.
pub fn optimize_with_starts(
    game: &GameSpec,
    resource: &StateVector,
    config: &OptimizeConfig,
    extra_starts: &[AngleVector],
) -> Result<OptimizeResult, QuantumError> {
    let n = resource.n() as usize;
    if resource.n() != game.n() {
        return Err(QuantumError::ArityMismatch {
            strategy: resource.n(),
            game: game.n(),
        });
    }
    let dim = 6 * n;

    let mut starts: Vec<AngleVector> = Vec::new();
    for s in extra_starts {
        assert_eq!(s.len(), dim, "witness start has wrong length");
        starts.push(s.clone());
    }
    starts.extend(structured_starts(n));
    starts.push(probe_start(game, resource, config.seed, dim).1);
    for i in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(config.seed, i as u64));
        starts.push(random_angles(&mut rng, dim));
    }

    let outcomes: Vec<(f64, Vec<f64>, RestartOutcome)> = starts
        .par_iter()
        .map(|start| {
            let f = |x: &[f64]| objective(game, resource, x).unwrap();
            let start_value = f(start);
            let (fx, x, evals, converged) =
                nelder_mead(&f, start, 0.5, config.max_evals, config.tolerance);
            (
                fx,
                x,
                RestartOutcome {
                    start_value,
                    value: 1.0 - fx,
                    evals,
                    converged,
                },
            )
        })
        .collect();

    // Reduce in index order: higher value wins, ties keep the lower index.
    let mut best_f = f64::INFINITY;
    let mut best_x = vec![0.0; dim];
    let mut trace = Vec::with_capacity(outcomes.len());
    for (fx, x, outcome) in outcomes {
        if fx < best_f {
            best_f = fx;
            best_x = x;
        }
        trace.push(outcome);
    }

    let (best_f, best_x) = polish(game, resource, best_x, best_f);
    Ok(OptimizeResult {
        best_value: 1.0 - best_f,
        best_angles: best_x,
        trace,
    })
}

pub fn optimize_strategy(
    game: &GameSpec,
    resource: &StateVector,
    config: &OptimizeConfig,
) -> Result<OptimizeResult, QuantumError> {
    optimize_with_starts(game, resource, config, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{make_epr, make_ghz};
    use approx::assert_abs_diff_eq;

    const COS2_PI_8: f64 = 0.8535533905932737; // (2 + sqrt 2) / 4

    fn chsh() -> GameSpec {
        GameSpec::parse("x*y = a^b", 2).unwrap()
    }

    /// Angles reproducing the textbook EPR strategy for CHSH:
    /// player 1 measures Z then X, player 2 measures (Z±X)/√2.
    pub fn chsh_witness() -> AngleVector {
        vec![
            0.0,
            0.0,
            0.0, // U_{1,0} = I (Z basis)
            PI / 2.0,
            0.0,
            PI, // U_{1,1} = H (X basis)
            -PI / 4.0,
            0.0,
            0.0, // U_{2,0}: (Z+X)/√2 basis
            PI / 4.0,
            0.0,
            0.0, // U_{2,1}: (Z-X)/√2 basis
        ]
    }

    #[test]
    fn objective_at_chsh_witness() {
        let value = objective(&chsh(), &make_epr(), &chsh_witness()).unwrap();
        assert_abs_diff_eq!(value, 1.0 - COS2_PI_8, epsilon = 1e-12);
    }

    #[test]
    fn objective_is_2pi_periodic() {
        let game = chsh();
        let resource = make_epr();
        let mut angles = chsh_witness();
        let base = objective(&game, &resource, &angles).unwrap();
        angles[0] += 2.0 * PI;
        angles[8] += 2.0 * PI;
        let shifted = objective(&game, &resource, &angles).unwrap();
        assert_abs_diff_eq!(base, shifted, epsilon = 1e-12);
    }

    #[test]
    fn objective_identity_on_ghz_first_type() {
        let game = GameSpec::parse("x*y*z + !x*!y*!z = a^b^c", 3).unwrap();
        let value = objective(&game, &make_ghz(3).unwrap(), &vec![0.0; 18]).unwrap();
        assert_abs_diff_eq!(value, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn optimize_chsh_reaches_quantum_value() {
        let config = OptimizeConfig {
            restarts: 20,
            ..Default::default()
        };
        let result = optimize_strategy(&chsh(), &make_epr(), &config).unwrap();
        assert_abs_diff_eq!(result.best_value, COS2_PI_8, epsilon = 1e-4);
        // Monotone local descent: every restart ends at or below its start.
        for outcome in &result.trace {
            assert!(1.0 - outcome.value <= outcome.start_value + 1e-12);
        }
    }

    #[test]
    fn optimize_is_deterministic() {
        let config = OptimizeConfig {
            restarts: 4,
            max_evals: 400,
            ..Default::default()
        };
        let a = optimize_strategy(&chsh(), &make_epr(), &config).unwrap();
        let b = optimize_strategy(&chsh(), &make_epr(), &config).unwrap();
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
        for (x, y) in a.best_angles.iter().zip(&b.best_angles) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn witness_injection_is_a_floor() {
        let config = OptimizeConfig {
            restarts: 1,
            max_evals: 50,
            ..Default::default()
        };
        let witness = chsh_witness();
        let witness_value = 1.0 - objective(&chsh(), &make_epr(), &witness).unwrap();
        let result =
            optimize_with_starts(&chsh(), &make_epr(), &config, &[witness]).unwrap();
        assert!(result.best_value >= witness_value - 1e-12);
    }

    #[test]
    fn best_value_beats_random_sampling() {
        let config = OptimizeConfig {
            restarts: 2,
            max_evals: 200,
            seed: 1234,
            ..Default::default()
        };
        let game = chsh();
        let resource = make_epr();
        let result = optimize_strategy(&game, &resource, &config).unwrap();
        let (probe_f, _) = probe_start(&game, &resource, config.seed, 12);
        assert!(result.best_value >= 1.0 - probe_f - 1e-12);
        assert!(result.best_value <= 1.0 + 1e-12);
    }

    #[test]
    fn gradient_vanishes_at_optimum() {
        let config = OptimizeConfig {
            restarts: 10,
            ..Default::default()
        };
        let result = optimize_strategy(&chsh(), &make_epr(), &config).unwrap();
        let grad =
            finite_diff_gradient(&chsh(), &make_epr(), &result.best_angles, 1e-5).unwrap();
        let max_norm = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        assert!(max_norm < 1e-3, "gradient max-norm {max_norm}");
    }

    #[test]
    fn gradient_of_unused_phase_is_zero() {
        // With θ = 0 the φ angle multiplies a zero amplitude on the
        // |1> column, so the objective cannot depend on it at first order.
        let game = chsh();
        let resource = make_epr();
        let angles = vec![0.0; 12];
        let grad = finite_diff_gradient(&game, &resource, &angles, 1e-4).unwrap();
        // φ entries sit at offsets 1, 4, 7, 10.
        for i in [1usize, 4, 7, 10] {
            assert!(grad[i].abs() < 1e-8, "grad[{i}] = {}", grad[i]);
        }
    }
}
