//! Dense state-vector simulation for up to four qubits.
//!
//! Qubit 1 (player 1) is the most significant bit of the amplitude index,
//! so a measured basis index maps directly to an answer assignment.

use num_complex::Complex64;
use thiserror::Error;

use crate::game::GameSpec;

pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("qubit count {0} outside supported range 1..=4")]
    QubitCountOutOfRange(u8),
    #[error("amplitude vector has length {got}, expected {expected}")]
    AmplitudeLength { expected: usize, got: usize },
    #[error("state norm {0} deviates from 1 beyond tolerance")]
    NotNormalized(f64),
    #[error("qubit index {qubit} out of range for {n} qubits")]
    QubitOutOfRange { n: u8, qubit: u8 },
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("angle is not finite")]
    NonFiniteAngle,
    #[error("strategy is for {strategy} qubits but game has {game} players")]
    ArityMismatch { strategy: u8, game: u8 },
    #[error("strategy holds {got} unitary pairs, expected {expected}")]
    ParamCount { expected: usize, got: usize },
}

/// A 2x2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    pub fn pauli_x() -> Self {
        Mat2([
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
    }

    pub fn pauli_y() -> Self {
        Mat2([
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ])
    }

    pub fn pauli_z() -> Self {
        Mat2([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ])
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Mat2([[h, h], [h, -h]])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn adjoint(&self) -> Mat2 {
        let a = &self.0;
        Mat2([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        let mut out = self.0;
        for row in &mut out {
            for cell in row {
                *cell *= s;
            }
        }
        Mat2(out)
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = self.0;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell += rhs.0[i][j];
            }
        }
        Mat2(out)
    }

    /// Max entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let i = Mat2::identity();
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((p.0[r][c] - i.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn max_entry_distance(&self, rhs: &Mat2) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - rhs.0[r][c]).norm());
            }
        }
        worst
    }
}

/// The three angles of a general single-qubit unitary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryParams {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl UnitaryParams {
    pub fn new(theta: f64, phi: f64, lambda: f64) -> Self {
        Self { theta, phi, lambda }
    }
}

/// The single-qubit unitary
/// `[[cos(θ/2), −e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+λ)} cos(θ/2)]]`.
pub fn u3(p: &UnitaryParams) -> Result<Mat2, QuantumError> {
    if !(p.theta.is_finite() && p.phi.is_finite() && p.lambda.is_finite()) {
        return Err(QuantumError::NonFiniteAngle);
    }
    let c = (p.theta / 2.0).cos();
    let s = (p.theta / 2.0).sin();
    let e_lambda = Complex64::from_polar(1.0, p.lambda);
    let e_phi = Complex64::from_polar(1.0, p.phi);
    let e_both = Complex64::from_polar(1.0, p.phi + p.lambda);
    Ok(Mat2([
        [Complex64::new(c, 0.0), -e_lambda * s],
        [e_phi * s, e_both * c],
    ]))
}

/// A pure n-qubit state with `2^n` amplitudes.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: u8,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: u8, amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        if n == 0 || n > 4 {
            return Err(QuantumError::QubitCountOutOfRange(n));
        }
        let expected = 1usize << n;
        if amps.len() != expected {
            return Err(QuantumError::AmplitudeLength {
                expected,
                got: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(Self { n, amps })
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(n: u8, k: usize) -> Result<Self, QuantumError> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[k] = Complex64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply a single-qubit unitary on the given tensor factor
    /// (qubit 0 = most significant index bit).
    pub fn apply_local(&self, qubit: u8, u: &Mat2) -> Result<StateVector, QuantumError> {
        if qubit >= self.n {
            return Err(QuantumError::QubitOutOfRange {
                n: self.n,
                qubit,
            });
        }
        let defect = u.unitarity_defect();
        if defect > NORM_TOL {
            return Err(QuantumError::NotUnitary(defect));
        }
        Ok(self.apply_local_unchecked(qubit, u))
    }

    /// Same as `apply_local` but skips the unitarity check; for hot loops
    /// where the matrix comes straight from `u3`.
    pub fn apply_local_unchecked(&self, qubit: u8, u: &Mat2) -> StateVector {
        let bit = 1usize << (self.n - 1 - qubit);
        let mut amps = self.amps.clone();
        for k in 0..amps.len() {
            if k & bit == 0 {
                let a0 = self.amps[k];
                let a1 = self.amps[k | bit];
                amps[k] = u.0[0][0] * a0 + u.0[0][1] * a1;
                amps[k | bit] = u.0[1][0] * a0 + u.0[1][1] * a1;
            }
        }
        StateVector { n: self.n, amps }
    }

    /// CNOT with the given control and target qubits.
    pub fn apply_cx(&self, control: u8, target: u8) -> Result<StateVector, QuantumError> {
        for q in [control, target] {
            if q >= self.n {
                return Err(QuantumError::QubitOutOfRange { n: self.n, qubit: q });
            }
        }
        let cbit = 1usize << (self.n - 1 - control);
        let tbit = 1usize << (self.n - 1 - target);
        let mut amps = self.amps.clone();
        for k in 0..amps.len() {
            if k & cbit != 0 && k & tbit == 0 {
                amps.swap(k, k | tbit);
            }
        }
        Ok(StateVector { n: self.n, amps })
    }

    /// `|amplitude_k|^2` for each basis index.
    pub fn outcome_probs(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Plain-text amplitude dump, one `index real imag` line per entry.
    pub fn dump(&self) -> String {
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| format!("{k} {:+.16e} {:+.16e}", a.re, a.im))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn make_epr() -> StateVector {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    StateVector::new(2, vec![h, zero, zero, h]).unwrap()
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn make_ghz(n: u8) -> Result<StateVector, QuantumError> {
    if !(2..=4).contains(&n) {
        return Err(QuantumError::QubitCountOutOfRange(n));
    }
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = h;
    *amps.last_mut().unwrap() = h;
    StateVector::new(n, amps)
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn make_w() -> StateVector {
    let w = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    StateVector::new(3, vec![zero, w, w, zero, w, zero, zero, zero]).unwrap()
}

/// `(|000⟩ + i|111⟩)/√2`.
pub fn make_ghz_phase() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0] = Complex64::new(h, 0.0);
    amps[7] = Complex64::new(0.0, h);
    StateVector::new(3, amps).unwrap()
}

/// A shared resource state plus one unitary parameter triple per player
/// and question bit.
#[derive(Clone, Debug)]
pub struct QuantumStrategy {
    resource: StateVector,
    params: Vec<[UnitaryParams; 2]>,
}

impl QuantumStrategy {
    pub fn new(
        resource: StateVector,
        params: Vec<[UnitaryParams; 2]>,
    ) -> Result<Self, QuantumError> {
        let n = resource.n() as usize;
        if params.len() != n {
            return Err(QuantumError::ParamCount {
                expected: n,
                got: params.len(),
            });
        }
        Ok(Self { resource, params })
    }

    pub fn resource(&self) -> &StateVector {
        &self.resource
    }

    pub fn params(&self) -> &[[UnitaryParams; 2]] {
        &self.params
    }

    pub fn unitary(&self, player: u8, question: bool) -> Result<Mat2, QuantumError> {
        u3(&self.params[player as usize][question as usize])
    }

    /// State after each player applied the unitary selected by its
    /// question bit (questions in index form, player 1 = MSB).
    pub fn applied_state(&self, questions: u16) -> Result<StateVector, QuantumError> {
        let n = self.resource.n();
        let mut state = self.resource.clone();
        for player in 0..n {
            let q = questions & (1 << (n - 1 - player)) != 0;
            let u = self.unitary(player, q)?;
            state = state.apply_local_unchecked(player, &u);
        }
        Ok(state)
    }
}

/// Winning probability for one fixed question.
pub fn per_question_win_probability(
    game: &GameSpec,
    strat: &QuantumStrategy,
    questions: u16,
) -> Result<f64, QuantumError> {
    if strat.resource().n() != game.n() {
        return Err(QuantumError::ArityMismatch {
            strategy: strat.resource().n(),
            game: game.n(),
        });
    }
    let state = strat.applied_state(questions)?;
    Ok(state
        .outcome_probs()
        .iter()
        .enumerate()
        .filter(|(a, _)| game.win_idx(questions, *a as u16))
        .map(|(_, p)| p)
        .sum())
}

/// Mean winning probability over uniformly distributed questions.
pub fn win_probability(game: &GameSpec, strat: &QuantumStrategy) -> Result<f64, QuantumError> {
    let questions = 1u16 << game.n();
    let mut total = 0.0;
    for q in 0..questions {
        total += per_question_win_probability(game, strat, q)?;
    }
    Ok(total / questions as f64)
}
