//! Game specification: a pair of Boolean functions (f, g) over the same
//! arity, with the win predicate `f(questions) = g(answers)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolfn::{
    self, answer_vars, enumerate_essential, format_expr, parse_expr, question_vars, BoolFnError,
    TruthTable,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("question and answer functions have different arities ({f} vs {g})")]
    ArityMismatch { f: u8, g: u8 },
    #[error("player count {0} outside supported range 2..=4")]
    PlayerCountOutOfRange(u8),
    #[error("bit-vector length {got} does not match player count {n}")]
    VectorLength { n: u8, got: usize },
    #[error("game equation must contain exactly one `=`")]
    MalformedEquation,
    #[error(transparent)]
    BoolFn(#[from] BoolFnError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GameSpec {
    f: TruthTable,
    g: TruthTable,
}

impl GameSpec {
    pub fn new(f: TruthTable, g: TruthTable) -> Result<Self, GameError> {
        if f.arity() != g.arity() {
            return Err(GameError::ArityMismatch {
                f: f.arity(),
                g: g.arity(),
            });
        }
        Ok(Self { f, g })
    }

    pub fn n(&self) -> u8 {
        self.f.arity()
    }

    pub fn f(&self) -> &TruthTable {
        &self.f
    }

    pub fn g(&self) -> &TruthTable {
        &self.g
    }

    /// Parse an equation such as `x*y = a^b`. Question variables are
    /// x, y, z, w and answer variables a, b, c, d; the arity is the given
    /// player count.
    pub fn parse(equation: &str, n: u8) -> Result<Self, GameError> {
        if !(2..=4).contains(&n) {
            return Err(GameError::PlayerCountOutOfRange(n));
        }
        let mut sides = equation.splitn(2, '=');
        let (lhs, rhs) = match (sides.next(), sides.next()) {
            (Some(l), Some(r)) if !r.contains('=') => (l, r),
            _ => return Err(GameError::MalformedEquation),
        };
        let f = parse_expr(lhs, question_vars(n))?;
        let g = parse_expr(rhs, answer_vars(n))?;
        Self::new(f, g)
    }

    /// Render as `f = g` in the standard variable names.
    pub fn render(&self) -> String {
        format!(
            "{} = {}",
            format_expr(&self.f, question_vars(self.n())),
            format_expr(&self.g, answer_vars(self.n()))
        )
    }

    /// Win predicate on assignment indices (variable 1 = MSB).
    pub fn win_idx(&self, questions: u16, answers: u16) -> bool {
        self.f.evaluate_index(questions) == self.g.evaluate_index(answers)
    }

    pub fn win(&self, questions: &[bool], answers: &[bool]) -> Result<bool, GameError> {
        let n = self.n();
        if questions.len() != n as usize {
            return Err(GameError::VectorLength {
                n,
                got: questions.len(),
            });
        }
        if answers.len() != n as usize {
            return Err(GameError::VectorLength {
                n,
                got: answers.len(),
            });
        }
        Ok(self.f.evaluate(questions)? == self.g.evaluate(answers)?)
    }

    /// The set {(f,g), (f̄,g), (f,ḡ), (f̄,ḡ)}; always 4 distinct games
    /// since no Boolean function equals its own complement.
    pub fn negation_orbit(&self) -> BTreeSet<GameSpec> {
        let (f, g) = (self.f, self.g);
        [
            Self { f, g },
            Self { f: f.negate(), g },
            Self { f, g: g.negate() },
            Self {
                f: f.negate(),
                g: g.negate(),
            },
        ]
        .into_iter()
        .collect()
    }

    /// Compact integer form `(arity, f.bits, g.bits)`.
    pub fn to_triple(&self) -> (u8, u16, u16) {
        (self.n(), self.f.bits(), self.g.bits())
    }

    pub fn from_triple(n: u8, f_bits: u16, g_bits: u16) -> Result<Self, GameError> {
        Self::new(TruthTable::new(n, f_bits)?, TruthTable::new(n, g_bits)?)
    }
}

/// Serialized form: equation text plus the compact integer triple.
#[derive(Serialize, Deserialize)]
pub struct GameRepr {
    pub n: u8,
    pub f_bits: u16,
    pub g_bits: u16,
    pub f_expr: String,
    pub g_expr: String,
}

impl From<&GameSpec> for GameRepr {
    fn from(game: &GameSpec) -> Self {
        let n = game.n();
        GameRepr {
            n,
            f_bits: game.f().bits(),
            g_bits: game.g().bits(),
            f_expr: boolfn::format_expr(game.f(), question_vars(n)),
            g_expr: boolfn::format_expr(game.g(), answer_vars(n)),
        }
    }
}

/// All ordered pairs of essential functions of arity `n`, ascending in
/// (f.bits, g.bits).
pub fn enumerate_games(n: u8) -> Result<Vec<GameSpec>, GameError> {
    if !(2..=4).contains(&n) {
        return Err(GameError::PlayerCountOutOfRange(n));
    }
    let fns = enumerate_essential(n)?;
    let mut out = Vec::with_capacity(fns.len() * fns.len());
    for &f in &fns {
        for &g in &fns {
            out.push(GameSpec { f, g });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chsh() -> GameSpec {
        GameSpec::parse("x*y = a^b", 2).unwrap()
    }

    #[test]
    fn win_predicate() {
        let g = chsh();
        assert!(g.win(&[false, false], &[false, false]).unwrap());
        assert!(!g.win(&[true, true], &[false, false]).unwrap());
        let ghz = GameSpec::parse("x*y*z = a^b^c", 3).unwrap();
        assert!(ghz.win(&[true, true, true], &[true, true, true]).unwrap());
        assert!(matches!(
            g.win(&[true], &[false, false]),
            Err(GameError::VectorLength { .. })
        ));
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_games(2).unwrap().len(), 100);
        assert_eq!(enumerate_games(3).unwrap().len(), 47_524);
        assert!(enumerate_games(1).is_err());
        assert!(enumerate_games(5).is_err());
    }

    #[test]
    fn enumerate_is_ordered_and_duplicate_free() {
        let games = enumerate_games(2).unwrap();
        for pair in games.windows(2) {
            assert!(pair[0].to_triple() < pair[1].to_triple());
        }
        let first = games[0];
        let min_bits = enumerate_essential(2).unwrap()[0].bits();
        assert_eq!(first.to_triple(), (2, min_bits, min_bits));
    }

    #[test]
    fn orbit_contains_side_negation_and_is_closed() {
        let orbit = chsh().negation_orbit();
        assert_eq!(orbit.len(), 4);
        // x*y = !a^b is !(a^b) as answer function, i.e. g negated.
        let side = GameSpec::parse("x*y = !a^b", 2).unwrap();
        assert!(orbit.contains(&side));
        for member in &orbit {
            assert_eq!(member.negation_orbit(), orbit);
        }
    }

    #[test]
    fn win_invariance_under_double_negation() {
        let g = GameSpec::parse("x*y + !x*z = a*b^c", 3).unwrap();
        let both = GameSpec::new(g.f().negate(), g.g().negate()).unwrap();
        let flipped_g = GameSpec::new(*g.f(), g.g().negate()).unwrap();
        for q in 0..8 {
            for a in 0..8 {
                assert_eq!(g.win_idx(q, a), both.win_idx(q, a));
                assert_eq!(g.win_idx(q, a), !flipped_g.win_idx(q, a));
            }
        }
    }
}
