//! Strategy circuits: resource-state preparation gate lists, OpenQASM 2.0
//! export, and a replay path through the simulator used to validate both.

use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;

use thiserror::Error;

use crate::game::GameSpec;
use crate::quantum::{
    per_question_win_probability, u3, Mat2, QuantumError, QuantumStrategy, StateVector,
    UnitaryParams,
};
use crate::search::Resource;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("no preparation circuit for resource `{0}`")]
    UnsupportedResource(&'static str),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// A gate in a strategy circuit. Qubit 0 is the top wire (player 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(u8),
    X(u8),
    Ry(f64, u8),
    Cx(u8, u8),
    U3(UnitaryParams, u8),
}

fn ry(angle: f64) -> Mat2 {
    u3(&UnitaryParams::new(angle, 0.0, 0.0)).unwrap()
}

/// Apply a gate list to `|0…0⟩`.
pub fn replay(n: u8, gates: &[Gate]) -> Result<StateVector, CircuitError> {
    let mut state = StateVector::basis(n, 0)?;
    for gate in gates {
        state = match *gate {
            Gate::H(q) => state.apply_local(q, &Mat2::hadamard())?,
            Gate::X(q) => state.apply_local(q, &Mat2::pauli_x())?,
            Gate::Ry(angle, q) => state.apply_local(q, &ry(angle))?,
            Gate::Cx(c, t) => state.apply_cx(c, t)?,
            Gate::U3(p, q) => state.apply_local(q, &u3(&p)?)?,
        };
    }
    Ok(state)
}

/// GHZ preparation: H on qubit 0 followed by a CNOT cascade.
pub fn ghz_prep(n: u8) -> Vec<Gate> {
    let mut gates = vec![Gate::H(0)];
    for q in 0..n - 1 {
        gates.push(Gate::Cx(q, q + 1));
    }
    gates
}

/// W preparation on three qubits: Ry(2·arccos(1/√3)) on qubit 0, a
/// controlled-H from qubit 0 to 1, CNOT(1→2), CNOT(0→1), X on qubit 0.
/// The controlled-H is decomposed as Ry(π/4)·CX·Ry(−π/4) on the target,
/// which QASM 2.0 can express directly.
pub fn w_prep() -> Vec<Gate> {
    let phi = 2.0 * (1.0 / 3f64.sqrt()).acos();
    vec![
        Gate::Ry(phi, 0),
        Gate::Ry(FRAC_PI_4, 1),
        Gate::Cx(0, 1),
        Gate::Ry(-FRAC_PI_4, 1),
        Gate::Cx(1, 2),
        Gate::Cx(0, 1),
        Gate::X(0),
    ]
}

/// Preparation gate list for a resource state.
pub fn resource_prep(resource: Resource, n: u8) -> Result<Vec<Gate>, CircuitError> {
    match resource {
        Resource::Ghz => Ok(ghz_prep(n)),
        Resource::W => Ok(w_prep()),
        other => Err(CircuitError::UnsupportedResource(other.name())),
    }
}

/// Full strategy circuit for one question: resource preparation followed
/// by the question-selected unitary on each qubit.
pub fn strategy_circuit(
    resource: Resource,
    n: u8,
    angles: &[f64],
    questions: u16,
) -> Result<Vec<Gate>, CircuitError> {
    assert_eq!(angles.len(), 6 * n as usize);
    let mut gates = resource_prep(resource, n)?;
    for player in 0..n {
        let q = (questions & (1 << (n - 1 - player)) != 0) as usize;
        let base = 6 * player as usize + 3 * q;
        gates.push(Gate::U3(
            UnitaryParams::new(angles[base], angles[base + 1], angles[base + 2]),
            player,
        ));
    }
    Ok(gates)
}

fn fmt_angle(a: f64) -> String {
    // Render exact multiples of π/4 symbolically; QASM readers expect pi.
    if a == 0.0 {
        return "0".to_string();
    }
    let quarter = a / FRAC_PI_4;
    if (quarter - quarter.round()).abs() < 1e-12 && quarter.round() != 0.0 {
        let q = quarter.round() as i64;
        let (num, den) = if q % 4 == 0 {
            (q / 4, 1)
        } else if q % 2 == 0 {
            (q / 2, 2)
        } else {
            (q, 4)
        };
        let numerator = match num {
            1 => "pi".to_string(),
            -1 => "-pi".to_string(),
            _ => format!("{num}*pi"),
        };
        return if den == 1 {
            numerator
        } else {
            format!("{numerator}/{den}")
        };
    }
    format!("{a:.17}")
}

/// Render a gate list as an OpenQASM 2.0 program with final measurement
/// of every qubit.
pub fn to_qasm(n: u8, gates: &[Gate]) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{n}];");
    let _ = writeln!(out, "creg c[{n}];");
    for gate in gates {
        match *gate {
            Gate::H(q) => {
                let _ = writeln!(out, "h q[{q}];");
            }
            Gate::X(q) => {
                let _ = writeln!(out, "x q[{q}];");
            }
            Gate::Ry(angle, q) => {
                let _ = writeln!(out, "ry({}) q[{q}];", fmt_angle(angle));
            }
            Gate::Cx(c, t) => {
                let _ = writeln!(out, "cx q[{c}],q[{t}];");
            }
            Gate::U3(p, q) => {
                let _ = writeln!(
                    out,
                    "u3({},{},{}) q[{q}];",
                    fmt_angle(p.theta),
                    fmt_angle(p.phi),
                    fmt_angle(p.lambda)
                );
            }
        }
    }
    for q in 0..n {
        let _ = writeln!(out, "measure q[{q}] -> c[{q}];");
    }
    out
}

/// Win probability computed by replaying the exported circuit for each
/// question; must agree with the direct evaluation path.
pub fn win_probability_via_circuit(
    game: &GameSpec,
    resource: Resource,
    angles: &[f64],
) -> Result<f64, CircuitError> {
    let n = game.n();
    let mut total = 0.0;
    for q in 0..1u16 << n {
        let gates = strategy_circuit(resource, n, angles, q)?;
        let state = replay(n, &gates)?;
        let p: f64 = state
            .outcome_probs()
            .iter()
            .enumerate()
            .filter(|(a, _)| game.win_idx(q, *a as u16))
            .map(|(_, p)| p)
            .sum();
        total += p;
    }
    Ok(total / (1 << n) as f64)
}

/// Direct win probability for the same resource/angles pair, for
/// comparison against the circuit replay.
pub fn win_probability_direct(
    game: &GameSpec,
    resource: Resource,
    angles: &[f64],
) -> Result<f64, CircuitError> {
    let state = resource
        .state(game.n())
        .map_err(|_| CircuitError::UnsupportedResource(resource.name()))?;
    let strat = crate::optimize::strategy_from_angles(&state, angles)?;
    Ok(crate::quantum::win_probability(game, &strat)?)
}

/// Per-question win rates plus the average, as exact probabilities.
pub fn question_histogram(
    game: &GameSpec,
    strat: &QuantumStrategy,
) -> Result<Vec<(u16, f64)>, QuantumError> {
    let n = game.n();
    let mut rows = Vec::with_capacity(1 << n);
    for q in 0..1u16 << n {
        rows.push((q, per_question_win_probability(game, strat, q)?));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::quantum::{make_ghz, make_w};
    use approx::assert_abs_diff_eq;

    #[test]
    fn ghz_prep_reproduces_ghz() {
        let state = replay(3, &ghz_prep(3)).unwrap();
        let reference = make_ghz(3).unwrap();
        for (a, b) in state.amplitudes().iter().zip(reference.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn w_prep_reproduces_w() {
        let state = replay(3, &w_prep()).unwrap();
        let reference = make_w();
        for (k, (a, b)) in state
            .amplitudes()
            .iter()
            .zip(reference.amplitudes())
            .enumerate()
        {
            assert!((a - b).norm() < 1e-12, "amplitude {k}: {a} vs {b}");
        }
    }

    #[test]
    fn qasm_text_shape() {
        let (_, angles) = catalog::ghz_second_type_witness();
        let gates = strategy_circuit(Resource::Ghz, 3, &angles, 0b111).unwrap();
        let qasm = to_qasm(3, &gates);
        assert!(qasm.starts_with("OPENQASM 2.0;"));
        assert!(qasm.contains("qreg q[3];"));
        assert!(qasm.contains("h q[0];"));
        assert!(qasm.contains("cx q[0],q[1];"));
        // Question 111 selects each player's second unitary: λ = -3π/4.
        assert_eq!(qasm.matches("u3(pi/2,").count(), 3);
        assert!(qasm.contains("-3*pi/4"));
        assert_eq!(qasm.matches("measure").count(), 3);
    }

    #[test]
    fn unsupported_resource_is_rejected() {
        assert!(matches!(
            resource_prep(Resource::Epr, 2),
            Err(CircuitError::UnsupportedResource("epr"))
        ));
    }

    #[test]
    fn circuit_replay_matches_direct_evaluation() {
        let (game, angles) = catalog::ghz_second_type_witness();
        let via_circuit = win_probability_via_circuit(&game, Resource::Ghz, &angles).unwrap();
        let direct = win_probability_direct(&game, Resource::Ghz, &angles).unwrap();
        assert_abs_diff_eq!(via_circuit, direct, epsilon = 1e-12);

        let (game, angles) = catalog::w_witness();
        let via_circuit = win_probability_via_circuit(&game, Resource::W, &angles).unwrap();
        let direct = win_probability_direct(&game, Resource::W, &angles).unwrap();
        assert_abs_diff_eq!(via_circuit, direct, epsilon = 1e-12);
    }

    #[test]
    fn histogram_rows_sum_to_average() {
        let (game, angles) = catalog::ghz_second_type_witness();
        let strat =
            crate::optimize::strategy_from_angles(&make_ghz(3).unwrap(), &angles).unwrap();
        let rows = question_histogram(&game, &strat).unwrap();
        assert_eq!(rows.len(), 8);
        let avg: f64 = rows.iter().map(|(_, p)| p).sum::<f64>() / 8.0;
        assert_abs_diff_eq!(avg, catalog::MAX_GAP_QUANTUM_VALUE, epsilon = 1e-6);
    }
}
