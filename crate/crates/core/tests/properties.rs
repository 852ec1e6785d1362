use proptest::prelude::*;

use qgame::boolfn::{format_expr, parse_expr, question_vars, TruthTable};
use qgame::classical::best_classical;
use qgame::game::GameSpec;
use qgame::optimize::objective;
use qgame::quantum::make_ghz;

fn table(n: u8) -> impl Strategy<Value = TruthTable> {
    (0u16..1 << (1 << n)).prop_map(move |bits| TruthTable::new(n, bits).unwrap())
}

proptest! {
    #[test]
    fn format_parse_round_trip(n in 2u8..=3, bits in 0u16..) {
        let bits = bits & ((1u32 << (1 << n)) as u16).wrapping_sub(1);
        let tt = TruthTable::new(n, bits).unwrap();
        let parsed = parse_expr(&format_expr(&tt, question_vars(n)), question_vars(n)).unwrap();
        prop_assert_eq!(parsed, tt);
    }

    /// Complementing both sides leaves the win predicate untouched.
    #[test]
    fn classical_value_invariant_under_double_negation(f in table(3), g in table(3)) {
        let plain = GameSpec::new(f, g).unwrap();
        let flipped = GameSpec::new(f.negate(), g.negate()).unwrap();
        prop_assert_eq!(best_classical(&plain).0, best_classical(&flipped).0);
    }

    #[test]
    fn objective_stays_in_unit_interval(
        f in table(3),
        g in table(3),
        angles in proptest::collection::vec(-10.0f64..10.0, 18),
    ) {
        let game = GameSpec::new(f, g).unwrap();
        let value = objective(&game, &make_ghz(3).unwrap(), &angles).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&value));
    }
}
