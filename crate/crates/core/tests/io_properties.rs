//! Property tests for the text rendering: formatted numbers must reparse
//! close to their source value and formatting must be deterministic.

use proptest::prelude::*;

use spring::numdiff::{tokenize, TokenKind};
use spring::output::{format_number, format_result};
use spring::ode::State12;

/// Magnitudes spanning the range the simulator can plausibly emit.
fn simulator_value() -> impl Strategy<Value = f64> {
    (
        any::<bool>(),
        0.1..10.0f64,
        -30i32..30,
    )
        .prop_map(|(negative, mantissa, exponent)| {
            let value = mantissa * 10f64.powi(exponent);
            if negative {
                -value
            } else {
                value
            }
        })
}

proptest! {
    /// Nine fractional digits give ten significant digits, so reparsing
    /// stays within 5e-10 relative of the original value.
    #[test]
    fn formatted_numbers_reparse_within_half_ulp_of_print(value in simulator_value()) {
        let text = format_number(value);
        let reparsed: f64 = text.parse().unwrap();
        prop_assert!(
            (reparsed - value).abs() <= 5e-10 * value.abs(),
            "{value} -> {text} -> {reparsed}"
        );
    }

    /// The canonical format is itself a single numeric token.
    #[test]
    fn formatted_numbers_are_numeric_tokens(value in simulator_value()) {
        let text = format_number(value);
        let tokens = tokenize(&text);
        prop_assert_eq!(tokens.len(), 1);
        prop_assert!(matches!(tokens[0].kind, TokenKind::Number(_)), "{}", text);
    }

    /// Equal states produce byte-identical output.
    #[test]
    fn result_formatting_is_deterministic(raw in proptest::array::uniform12(simulator_value())) {
        let state = State12(raw);
        let copy = State12(raw);
        prop_assert_eq!(format_result(&state), format_result(&copy));
    }
}

#[test]
fn zero_and_negative_zero_format_identically() {
    assert_eq!(format_number(0.0), format_number(-0.0));
    let reparsed: f64 = format_number(-0.0).parse().unwrap();
    assert_eq!(reparsed, 0.0);
}
