//! Bell and Mermin operators: construction, exact expectation values, and
//! the per-question correspondence `2p - 1 = ⟨tensor monomial⟩` for
//! parity-valued answer functions.

use std::fmt;

use thiserror::Error;

use crate::boolfn::TruthTable;
use crate::game::GameSpec;
use crate::quantum::{
    per_question_win_probability, u3, Mat2, QuantumError, QuantumStrategy, StateVector,
    UnitaryParams,
};

const HERMITIAN_TOL: f64 = 1e-12;
const INVOLUTION_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BellError {
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix does not square to the identity (max deviation {0:.3e})")]
    NotInvolutive(f64),
    #[error("operator acts on {op} qubits but state has {state}")]
    QubitMismatch { op: usize, state: u8 },
    #[error("expectation has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
    #[error("answer function is not the n-bit parity or its negation")]
    NotParityGame,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// A 2x2 Hermitian matrix with eigenvalues ±1.
#[derive(Clone, Copy, Debug)]
pub struct SingleQubitObservable(Mat2);

impl SingleQubitObservable {
    pub fn new(m: Mat2) -> Result<Self, BellError> {
        let herm = m.max_entry_distance(&m.adjoint());
        if herm > HERMITIAN_TOL {
            return Err(BellError::NotHermitian(herm));
        }
        let sq = m.mul(&m).max_entry_distance(&Mat2::identity());
        if sq > INVOLUTION_TOL {
            return Err(BellError::NotInvolutive(sq));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn x() -> Self {
        Self(Mat2::pauli_x())
    }

    pub fn y() -> Self {
        Self(Mat2::pauli_y())
    }

    pub fn z() -> Self {
        Self(Mat2::pauli_z())
    }

    /// Label for printing: one of X, Y, Z, I, or a generic O.
    fn label(&self) -> &'static str {
        let candidates = [
            (Mat2::pauli_x(), "X"),
            (Mat2::pauli_y(), "Y"),
            (Mat2::pauli_z(), "Z"),
            (Mat2::identity(), "I"),
        ];
        for (m, name) in candidates {
            if self.0.max_entry_distance(&m) < 1e-9 {
                return name;
            }
        }
        "O"
    }
}

/// The observable measured by applying `u3(p)` and reading out in the
/// computational basis: `O = U† Z U`.
pub fn observable_from_params(p: &UnitaryParams) -> Result<SingleQubitObservable, BellError> {
    let u = u3(p)?;
    SingleQubitObservable::new(u.adjoint().mul(&Mat2::pauli_z()).mul(&u))
}

/// A signed sum of n-fold tensor monomials of single-qubit observables.
#[derive(Clone, Debug)]
pub struct MerminOperator {
    terms: Vec<(f64, Vec<SingleQubitObservable>)>,
}

impl MerminOperator {
    pub fn new(terms: Vec<(f64, Vec<SingleQubitObservable>)>) -> Self {
        let n = terms.first().map(|(_, fs)| fs.len()).unwrap_or(0);
        assert!(terms.iter().all(|(_, fs)| fs.len() == n));
        Self { terms }
    }

    pub fn terms(&self) -> &[(f64, Vec<SingleQubitObservable>)] {
        &self.terms
    }

    pub fn qubits(&self) -> usize {
        self.terms.first().map(|(_, fs)| fs.len()).unwrap_or(0)
    }

    pub fn add(&self, rhs: &MerminOperator) -> MerminOperator {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.clone());
        MerminOperator::new(terms)
    }

    pub fn sub(&self, rhs: &MerminOperator) -> MerminOperator {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().map(|(c, fs)| (-c, fs.clone())));
        MerminOperator::new(terms)
    }
}

impl fmt::Display for MerminOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (coeff, factors)) in self.terms.iter().enumerate() {
            let sign = if *coeff >= 0.0 { "+" } else { "\u{2212}" };
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{sign} ")?;
            let mag = coeff.abs();
            if (mag - 1.0).abs() > 1e-12 {
                write!(f, "{mag}\u{b7}")?;
            }
            let labels: Vec<&str> = factors.iter().map(|o| o.label()).collect();
            write!(f, "{}", labels.join("\u{2297}"))?;
        }
        Ok(())
    }
}

/// `Σ coeff · ⟨ψ| ⊗factors |ψ⟩`; the imaginary residue must vanish.
pub fn expectation(op: &MerminOperator, state: &StateVector) -> Result<f64, BellError> {
    if op.qubits() != state.n() as usize {
        return Err(BellError::QubitMismatch {
            op: op.qubits(),
            state: state.n(),
        });
    }
    let mut total = 0.0;
    let mut residue: f64 = 0.0;
    for (coeff, factors) in &op.terms {
        let mut applied = state.clone();
        for (qubit, obs) in factors.iter().enumerate() {
            applied = applied.apply_local_unchecked(qubit as u8, obs.matrix());
        }
        let amp = state.inner(&applied);
        residue = residue.max(amp.im.abs());
        total += coeff * amp.re;
    }
    if residue > 1e-10 {
        return Err(BellError::ImaginaryResidue(residue));
    }
    Ok(total)
}

/// The four-term two-qubit Bell operator
/// `Z⊗(Z+X)/√2 + X⊗(Z+X)/√2 + Z⊗(Z−X)/√2 − X⊗(Z−X)/√2`.
pub fn build_bell() -> MerminOperator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zx_plus =
        SingleQubitObservable::new(Mat2::pauli_z().add(&Mat2::pauli_x()).scale(s)).unwrap();
    let zx_minus = SingleQubitObservable::new(
        Mat2::pauli_z().add(&Mat2::pauli_x().scale(-1.0)).scale(s),
    )
    .unwrap();
    let z = SingleQubitObservable::z();
    let x = SingleQubitObservable::x();
    MerminOperator::new(vec![
        (1.0, vec![z, zx_plus]),
        (1.0, vec![x, zx_plus]),
        (1.0, vec![z, zx_minus]),
        (-1.0, vec![x, zx_minus]),
    ])
}

type ObservablePair = [SingleQubitObservable; 2];

/// Three-qubit Mermin operator with sign pattern (+, +, +, −):
/// `O_{1,0}⊗O_{2,0}⊗O_{3,1} + O_{1,0}⊗O_{2,1}⊗O_{3,0}
///  + O_{1,1}⊗O_{2,0}⊗O_{3,0} − O_{1,1}⊗O_{2,1}⊗O_{3,1}`.
pub fn build_m3(obs: &[ObservablePair; 3]) -> MerminOperator {
    let o = |i: usize, q: usize| obs[i][q];
    MerminOperator::new(vec![
        (1.0, vec![o(0, 0), o(1, 0), o(2, 1)]),
        (1.0, vec![o(0, 0), o(1, 1), o(2, 0)]),
        (1.0, vec![o(0, 1), o(1, 0), o(2, 0)]),
        (-1.0, vec![o(0, 1), o(1, 1), o(2, 1)]),
    ])
}

/// The companion operator with the roles of the two question settings
/// exchanged.
pub fn build_m3_prime(obs: &[ObservablePair; 3]) -> MerminOperator {
    let swapped = [
        [obs[0][1], obs[0][0]],
        [obs[1][1], obs[1][0]],
        [obs[2][1], obs[2][0]],
    ];
    build_m3(&swapped)
}

fn observables_from_strategy(
    params: &[[UnitaryParams; 2]; 3],
) -> Result<[ObservablePair; 3], BellError> {
    let mut out = [[SingleQubitObservable::z(); 2]; 3];
    for (i, pair) in params.iter().enumerate() {
        for (q, p) in pair.iter().enumerate() {
            out[i][q] = observable_from_params(p)?;
        }
    }
    Ok(out)
}

/// `T1 = M3 − M3'` from the strategy angles of the three players.
pub fn build_t1(params: &[[UnitaryParams; 2]; 3]) -> Result<MerminOperator, BellError> {
    let obs = observables_from_strategy(params)?;
    Ok(build_m3(&obs).sub(&build_m3_prime(&obs)))
}

/// `T2 = M3 + M3'` from the strategy angles of the three players.
pub fn build_t2(params: &[[UnitaryParams; 2]; 3]) -> Result<MerminOperator, BellError> {
    let obs = observables_from_strategy(params)?;
    Ok(build_m3(&obs).add(&build_m3_prime(&obs)))
}

/// Exhaustive ±1-assignment bound on `M3 − M3'`: the best value any local
/// deterministic assignment of the six observable outcomes can reach.
pub fn t1_classical_bound() -> f64 {
    let mut best = f64::NEG_INFINITY;
    for mask in 0..64u32 {
        let v = |i: usize, q: usize| -> f64 {
            if mask & (1 << (2 * i + q)) != 0 {
                1.0
            } else {
                -1.0
            }
        };
        let m3_val = v(0, 0) * v(1, 0) * v(2, 1) + v(0, 0) * v(1, 1) * v(2, 0)
            + v(0, 1) * v(1, 0) * v(2, 0)
            - v(0, 1) * v(1, 1) * v(2, 1);
        let m3p_val = v(0, 1) * v(1, 1) * v(2, 0) + v(0, 1) * v(1, 0) * v(2, 1)
            + v(0, 0) * v(1, 1) * v(2, 1)
            - v(0, 0) * v(1, 0) * v(2, 0);
        best = best.max(m3_val - m3p_val);
    }
    best
}

/// One row of the per-question correspondence report.
#[derive(Clone, Debug)]
pub struct QuestionCheck {
    pub question: u16,
    pub win_probability: f64,
    pub monomial_expectation: f64,
    /// `2p − 1` when the winning parity is even, `1 − 2p` when odd.
    pub signed_gain: f64,
    pub residual: f64,
}

/// Verify, for each listed question, that the signed per-question gain
/// equals the expectation of the tensor monomial of the measured
/// observables. Requires the answer function to be the n-bit parity or
/// its negation.
pub fn game_monomial_consistency(
    game: &GameSpec,
    strat: &QuantumStrategy,
    questions: &[u16],
) -> Result<Vec<QuestionCheck>, BellError> {
    let n = game.n();
    let parity = TruthTable::parity(n).unwrap();
    let negated = if *game.g() == parity {
        false
    } else if *game.g() == parity.negate() {
        true
    } else {
        return Err(BellError::NotParityGame);
    };

    let mut checks = Vec::with_capacity(questions.len());
    for &q in questions {
        let p = per_question_win_probability(game, strat, q)?;

        let mut factors = Vec::with_capacity(n as usize);
        for player in 0..n {
            let bit = q & (1 << (n - 1 - player)) != 0;
            factors.push(observable_from_params(
                &strat.params()[player as usize][bit as usize],
            )?);
        }
        let monomial = MerminOperator::new(vec![(1.0, factors)]);
        let m = expectation(&monomial, strat.resource())?;

        // The monomial expectation is P(even parity) - P(odd parity); the
        // winning parity is f(q) xor (g negated).
        let odd_wins = game.f().evaluate_index(q) != negated;
        let signed_gain = if odd_wins { 1.0 - 2.0 * p } else { 2.0 * p - 1.0 };
        checks.push(QuestionCheck {
            question: q,
            win_probability: p,
            monomial_expectation: m,
            signed_gain,
            residual: (signed_gain - m).abs(),
        });
    }
    Ok(checks)
}
