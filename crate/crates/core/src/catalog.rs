//! Reference games and published witness strategies.
//!
//! These are the known maximal-gap games and the angle sets certifying
//! their quantum values; the verification suites check optimizer output
//! and operator expectations against them.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::game::GameSpec;
use crate::optimize::AngleVector;
use crate::quantum::UnitaryParams;

/// The original two-player game `x·y = a⊕b`.
pub fn chsh_game() -> GameSpec {
    GameSpec::parse("x*y = a^b", 2).unwrap()
}

/// EPR strategy for the CHSH game: player 1 measures Z then X, player 2
/// measures (Z±X)/√2. Evaluates to cos²(π/8).
pub fn chsh_witness_angles() -> AngleVector {
    vec![
        0.0,
        0.0,
        0.0,
        PI / 2.0,
        0.0,
        PI,
        -PI / 4.0,
        0.0,
        0.0,
        PI / 4.0,
        0.0,
        0.0,
    ]
}

/// The 16 two-player games with classical value 3/4 and quantum value
/// cos²(π/8): negation orbits of the four monomial games `m = a⊕b`.
pub fn max_gap_two_player_games() -> BTreeSet<GameSpec> {
    let monomials = ["x*y", "x*!y", "!x*y", "!x*!y"];
    let mut out = BTreeSet::new();
    for m in monomials {
        let seed = GameSpec::parse(&format!("{m} = a^b"), 2).unwrap();
        out.extend(seed.negation_orbit());
    }
    out
}

/// The 16 first-type three-player games: a monomial plus its complement
/// monomial on the question side, parity on the answer side, closed under
/// negation of either side.
pub fn first_type_games() -> BTreeSet<GameSpec> {
    let pairs = [
        "x*y*z + !x*!y*!z",
        "x*y*!z + !x*!y*z",
        "x*!y*z + !x*y*!z",
        "!x*y*z + x*!y*!z",
    ];
    let mut out = BTreeSet::new();
    for lhs in pairs {
        let seed = GameSpec::parse(&format!("{lhs} = a^b^c"), 3).unwrap();
        out.extend(seed.negation_orbit());
    }
    out
}

/// The 16 seed equations generating the second-type family.
pub fn second_type_seeds() -> Vec<GameSpec> {
    [
        "x*y + (x^y)*z",
        "x*y + (x^y)*!z",
        "x*!y + (x^z)*y",
        "x*!y + (!x^z)*y",
        "!x*y + (y^z)*x",
        "!x*y + (!y^z)*x",
        "x*y + (x^z)*!y",
        "x*!y + (!x^y)*z",
        "!x*z + (y^z)*x",
        "!x*z + (!y^z)*x",
        "x*y + (y^z)*!x",
        "x*z + (y^z)*!x",
        "x*!z + (y^z)*!x",
        "x*!y + (y^z)*!x",
        "!x*y + (!x^y)*z",
        "!x*y + (x^z)*!y",
    ]
    .iter()
    .map(|lhs| GameSpec::parse(&format!("{lhs} = a^b^c"), 3).unwrap())
    .collect()
}

/// The 64 second-type games: negation-orbit closure of the 16 seeds.
pub fn second_type_games() -> BTreeSet<GameSpec> {
    let mut out = BTreeSet::new();
    for seed in second_type_seeds() {
        out.extend(seed.negation_orbit());
    }
    out
}

fn uniform_ghz_angles(lambda0: f64, lambda1: f64) -> AngleVector {
    let mut v = Vec::with_capacity(18);
    for _ in 0..3 {
        v.extend_from_slice(&[PI / 2.0, 0.0, lambda0, PI / 2.0, 0.0, lambda1]);
    }
    v
}

/// Witness for the first-type example `xyz + x̄ȳz̄ = a⊕b⊕c` on GHZ:
/// every player plays (π/2, 0, π/12) and (π/2, 0, 7π/12).
pub fn ghz_first_type_witness() -> (GameSpec, AngleVector) {
    (
        GameSpec::parse("x*y*z + !x*!y*!z = a^b^c", 3).unwrap(),
        uniform_ghz_angles(PI / 12.0, 7.0 * PI / 12.0),
    )
}

/// Witness for the second-type example `xy + (x⊕y)z = a⊕b⊕c` on GHZ:
/// every player plays (π/2, 0, −π/4) and (π/2, 0, −3π/4).
pub fn ghz_second_type_witness() -> (GameSpec, AngleVector) {
    (
        GameSpec::parse("x*y + (x^y)*z = a^b^c", 3).unwrap(),
        uniform_ghz_angles(-PI / 4.0, -3.0 * PI / 4.0),
    )
}

/// The strategy parameters of the second-type witness, as per-player
/// unitary pairs (used to derive the observables entering `T1`).
pub fn ghz_second_type_params() -> [[UnitaryParams; 2]; 3] {
    let q0 = UnitaryParams::new(PI / 2.0, 0.0, -PI / 4.0);
    let q1 = UnitaryParams::new(PI / 2.0, 0.0, -3.0 * PI / 4.0);
    [[q0, q1]; 3]
}

/// The W-optimal game `xyz + x̄ȳz̄ = āb̄c + ābc + ab̄c̄ + abc` and its
/// published witness angles, winning with probability ≈ 0.78726 on W.
pub fn w_witness() -> (GameSpec, AngleVector) {
    let game = GameSpec::parse(
        "x*y*z + !x*!y*!z = !a*!b*c + !a*b*c + a*!b*!c + a*b*c",
        3,
    )
    .unwrap();
    let l = (PI - 2.0) / 6.0;
    let l0 = (-5.0 * PI - 2.0) / 6.0;
    let angles = vec![
        2.3177324,
        0.0,
        l0,
        2.3177324,
        0.0,
        l,
        0.8238602,
        0.0,
        l,
        -0.8238602,
        0.0,
        l,
        0.79655904,
        0.0,
        l,
        -0.79655904,
        0.0,
        l,
    ];
    (game, angles)
}

/// The W witness as per-player unitary pairs (used to derive the
/// observables entering `T2`).
pub fn w_witness_params() -> [[UnitaryParams; 2]; 3] {
    let (_, angles) = w_witness();
    let mut out = [[UnitaryParams::new(0.0, 0.0, 0.0); 2]; 3];
    for (i, pair) in out.iter_mut().enumerate() {
        let base = 6 * i;
        pair[0] = UnitaryParams::new(angles[base], angles[base + 1], angles[base + 2]);
        pair[1] = UnitaryParams::new(angles[base + 3], angles[base + 4], angles[base + 5]);
    }
    out
}

/// One row of the W-versus-GHZ comparison: equation, expected W value,
/// expected GHZ value (classical value is 3/4 for every row).
pub struct ComparisonRow {
    pub equation: &'static str,
    pub w_value: f64,
    pub ghz_value: f64,
}

/// The published W-advantage games with their optimized gains for both
/// resource states, sorted by W value ascending.
pub fn comparison_rows() -> Vec<ComparisonRow> {
    vec![
        ComparisonRow {
            equation: "y*z + x*!z = !a*b*c + a*!b*c + a*b*!c",
            w_value: 0.75442,
            ghz_value: 0.69887,
        },
        ComparisonRow {
            equation: "(x^y)*z + x*y = !a^b^c",
            w_value: 0.77216,
            ghz_value: 0.85355,
        },
        ComparisonRow {
            equation: "x*(y^z) = (a^b)*c",
            w_value: 0.77523,
            ghz_value: 0.80177,
        },
        ComparisonRow {
            equation: "!x*y*z + x*!y*!z = !a*!b*!c + !a*b*c + a*!b*c + a*b*!c + a*b*c",
            w_value: 0.77674,
            ghz_value: 0.70266,
        },
        ComparisonRow {
            equation: "(x^y)*z + x*y = (a^b)*!c + a*c",
            w_value: 0.78726,
            ghz_value: 0.75,
        },
        ComparisonRow {
            equation: "!x*y*z + x*!y*!z = a*(b^c)",
            w_value: 0.79219,
            ghz_value: 0.80177,
        },
        ComparisonRow {
            equation: "!x*y*z + x*!y*!z = !a*b*c + a*!b*c + a*b*!c",
            w_value: 0.79665,
            ghz_value: 0.82766,
        },
        ComparisonRow {
            equation: "(x^y)*z + x*!z = a^b^c",
            w_value: 0.80046,
            ghz_value: 0.85355,
        },
    ]
}

/// `cos²(π/8) = (2 + √2)/4`, the shared quantum value of every maximal-gap
/// game.
pub const MAX_GAP_QUANTUM_VALUE: f64 = 0.8535533905932737;
