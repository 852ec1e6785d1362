//! Exhaustive search over deterministic classical strategies, with exact
//! rational winning probabilities.

use num_rational::Ratio;
use thiserror::Error;

use crate::game::GameSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("strategy is for {strategy} players but game has {game}")]
    PlayerMismatch { strategy: u8, game: u8 },
}

/// A pre-agreed answer map: for each player `i`, the pair `(h_i(0), h_i(1))`.
/// Encoded in `2n` bits; bit `2i + q` holds player i's answer to question `q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DeterministicStrategy {
    n: u8,
    code: u16,
}

impl DeterministicStrategy {
    pub fn from_code(n: u8, code: u16) -> Self {
        debug_assert!(code < 1 << (2 * n));
        Self { n, code }
    }

    pub fn code(&self) -> u16 {
        self.code
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// Player `i`'s answer to question bit `q`.
    pub fn answer(&self, player: u8, question: bool) -> bool {
        let bit = 2 * player + question as u8;
        (self.code >> bit) & 1 == 1
    }

    /// Answers to the question assignment `questions` (index form,
    /// player 1 = MSB), returned in the same index form.
    pub fn respond(&self, questions: u16) -> u16 {
        let n = self.n;
        let mut answers = 0u16;
        for player in 0..n {
            let q = questions & (1 << (n - 1 - player)) != 0;
            if self.answer(player, q) {
                answers |= 1 << (n - 1 - player);
            }
        }
        answers
    }

    pub fn all(n: u8) -> impl Iterator<Item = DeterministicStrategy> {
        (0..1u16 << (2 * n)).map(move |code| Self { n, code })
    }
}

/// Exact winning probability: wins over `2^n` equally likely questions.
pub fn evaluate_classical(
    game: &GameSpec,
    strategy: &DeterministicStrategy,
) -> Result<Ratio<u32>, ClassicalError> {
    if strategy.n() != game.n() {
        return Err(ClassicalError::PlayerMismatch {
            strategy: strategy.n(),
            game: game.n(),
        });
    }
    let questions = 1u16 << game.n();
    let wins = (0..questions)
        .filter(|&q| game.win_idx(q, strategy.respond(q)))
        .count() as u32;
    Ok(Ratio::new(wins, questions as u32))
}

/// Maximum over all `2^(2n)` deterministic strategies, with every strategy
/// attaining the maximum.
pub fn best_classical(game: &GameSpec) -> (Ratio<u32>, Vec<DeterministicStrategy>) {
    let mut best = Ratio::new(0, 1);
    let mut witnesses = Vec::new();
    for strategy in DeterministicStrategy::all(game.n()) {
        let value = evaluate_classical(game, &strategy).unwrap();
        if value > best {
            best = value;
            witnesses.clear();
        }
        if value == best {
            witnesses.push(strategy);
        }
    }
    (best, witnesses)
}

/// Minimum winning probability over all deterministic strategies.
pub fn worst_classical(game: &GameSpec) -> Ratio<u32> {
    DeterministicStrategy::all(game.n())
        .map(|s| evaluate_classical(game, &s).unwrap())
        .min()
        .unwrap()
}
