//! Tolerance-aware text comparison.
//!
//! Plain `diff` flags reference outputs as broken whenever floating-point
//! round-off shifts a last digit, and it cannot tell that `4.863e-19` is the
//! same "zero" as `0.000000000e+00`. This comparator tokenizes both texts on
//! whitespace, parses numeric tokens, and treats two numbers a, b as equal
//! when
//!
//!   |a - b| <= A   or   |a - b| <= R min(|a|, |b|),
//!
//! for an absolute/relative tolerance pair (A, R). Everything that is not a
//! number must match byte for byte.

use std::fmt;

use thiserror::Error;

use crate::real::Real;

/// The absolute/relative tolerance pair. Both bounds are inclusive; the
/// default is exact comparison (A = R = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<R = f64> {
    pub absolute: R,
    pub relative: R,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("tolerances must be finite and non-negative")]
pub struct InvalidTolerance;

impl<R: Real> Tolerance<R> {
    pub fn new(absolute: R, relative: R) -> Result<Self, InvalidTolerance> {
        if absolute.is_finite() && relative.is_finite() && absolute >= R::zero() && relative >= R::zero()
        {
            Ok(Tolerance { absolute, relative })
        } else {
            Err(InvalidTolerance)
        }
    }

    /// Exact comparison: only bitwise-equal numeric values pass.
    pub fn exact() -> Self {
        Tolerance {
            absolute: R::zero(),
            relative: R::zero(),
        }
    }
}

impl<R: Real> Default for Tolerance<R> {
    fn default() -> Self {
        Tolerance::exact()
    }
}

/// Numbers compare equal when within the absolute or the relative bound.
///
/// NaN never equals anything, including itself — a NaN in simulator output
/// is a bug the harness must surface. Infinities are equal only to an
/// infinity of the same sign.
pub fn numbers_equal<R: Real>(a: R, b: R, tolerance: &Tolerance<R>) -> bool {
    if a.is_nan() || b.is_nan() {
        return false;
    }
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    let diff = (a - b).abs();
    diff <= tolerance.absolute || diff <= tolerance.relative * a.abs().min(b.abs())
}

/// 1-based line/column of a token's first character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    /// The raw text parses entirely under the number grammar.
    Number(f64),
    /// Anything else.
    Word,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub raw: String,
    pub position: Position,
}

/// Accepts exactly: optional sign, then digits with an optional fractional
/// part or a leading decimal point with digits, then an optional exponent.
/// Partial matches do not count — `abc1.0` is a word.
fn parse_number(raw: &str) -> Option<f64> {
    let bytes = raw.as_bytes();
    let mut i = 0;

    if matches!(bytes.first(), Some(b'+') | Some(b'-')) {
        i += 1;
    }
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > start
    };

    if digits(&mut i) {
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            digits(&mut i);
        }
    } else if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        if !digits(&mut i) {
            return None;
        }
    } else {
        return None;
    }

    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        i += 1;
        if matches!(bytes.get(i), Some(b'+') | Some(b'-')) {
            i += 1;
        }
        if !digits(&mut i) {
            return None;
        }
    }

    if i == bytes.len() {
        raw.parse().ok()
    } else {
        None
    }
}

/// Splits text into maximal runs of non-whitespace characters, classifying
/// each run as a number or an opaque word.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut current = String::new();
    let mut start = Position { line, column };

    let mut flush = |current: &mut String, start: Position| {
        if !current.is_empty() {
            let raw = std::mem::take(current);
            let kind = match parse_number(&raw) {
                Some(value) => TokenKind::Number(value),
                None => TokenKind::Word,
            };
            tokens.push(Token {
                kind,
                raw,
                position: start,
            });
        }
    };

    for c in text.chars() {
        if c.is_whitespace() {
            flush(&mut current, start);
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        } else {
            if current.is_empty() {
                start = Position { line, column };
            }
            current.push(c);
            column += 1;
        }
    }
    flush(&mut current, start);
    tokens
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchKind {
    /// Two numbers outside the tolerance.
    Value,
    /// Non-numeric tokens (or a number paired with a word) differing in raw text.
    Word,
    /// One input ran out of tokens before the other.
    TokenCount,
}

/// One difference: the offending token on each side, where present.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub kind: MismatchKind,
    pub reference: Option<Token>,
    pub candidate: Option<Token>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = self
            .reference
            .as_ref()
            .or(self.candidate.as_ref())
            .map_or(0, |t| t.position.line);
        let raw = |t: &Option<Token>| t.as_ref().map(|t| t.raw.clone()).unwrap_or_default();
        write!(
            f,
            "line {line}: expected '{}' got '{}'",
            raw(&self.reference),
            raw(&self.candidate)
        )
    }
}

/// Outcome of comparing a candidate text against a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub mismatches: Vec<Mismatch>,
}

impl ComparisonReport {
    pub fn is_equal(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// One line per mismatch followed by the difference count.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for mismatch in &self.mismatches {
            out.push_str(&mismatch.to_string());
            out.push('\n');
        }
        out.push_str(&format!("{} differences\n", self.mismatches.len()));
        out
    }
}

/// Tokenizes both texts and walks the sequences in lockstep.
///
/// Number pairs compare under the tolerance; any other pairing requires
/// byte-identical raw text. If one sequence is longer, a single token-count
/// mismatch is appended after the shared prefix.
pub fn compare(reference: &str, candidate: &str, tolerance: &Tolerance) -> ComparisonReport {
    let ref_tokens = tokenize(reference);
    let out_tokens = tokenize(candidate);
    let mut mismatches = Vec::new();

    for (r, c) in ref_tokens.iter().zip(out_tokens.iter()) {
        let equal = match (&r.kind, &c.kind) {
            (TokenKind::Number(a), TokenKind::Number(b)) => numbers_equal(*a, *b, tolerance),
            _ => r.raw == c.raw,
        };
        if !equal {
            let kind = match (&r.kind, &c.kind) {
                (TokenKind::Number(_), TokenKind::Number(_)) => MismatchKind::Value,
                _ => MismatchKind::Word,
            };
            mismatches.push(Mismatch {
                kind,
                reference: Some(r.clone()),
                candidate: Some(c.clone()),
            });
        }
    }

    if ref_tokens.len() != out_tokens.len() {
        let shared = ref_tokens.len().min(out_tokens.len());
        mismatches.push(Mismatch {
            kind: MismatchKind::TokenCount,
            reference: ref_tokens.get(shared).cloned(),
            candidate: out_tokens.get(shared).cloned(),
        });
    }

    ComparisonReport { mismatches }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recommended() -> Tolerance {
        Tolerance::new(1e-6, 1e-8).unwrap()
    }

    #[test]
    fn tokenizes_words_and_numbers() {
        let tokens = tokenize("final z: -1.5e3");
        let kinds: Vec<_> = tokens.iter().map(|t| t.kind.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                TokenKind::Word,
                TokenKind::Word,
                TokenKind::Number(-1500.0)
            ]
        );
        assert_eq!(tokens[0].raw, "final");
        assert_eq!(tokens[1].raw, "z:");
    }

    #[test]
    fn recognizes_scientific_notation() {
        let tokens = tokenize("4.863e-19");
        assert_eq!(tokens.len(), 1);
        assert_eq!(tokens[0].kind, TokenKind::Number(4.863e-19));
    }

    #[test]
    fn partial_numeric_suffix_is_a_word() {
        let tokens = tokenize("abc1.0");
        assert_eq!(tokens.len(), 1);
        assert_eq!(tokens[0].kind, TokenKind::Word);
    }

    #[test]
    fn number_grammar_edges() {
        for accepted in ["1", "-1", "+.5", ".5", "1.", "1.5e+07", "2E3", "0.001"] {
            assert!(parse_number(accepted).is_some(), "{accepted}");
        }
        for rejected in ["", ".", "+", "1e", "1e+", "e5", "nan", "inf", "1.0.0", "0x10", "--1"] {
            assert!(parse_number(rejected).is_none(), "{rejected}");
        }
    }

    #[test]
    fn positions_are_one_based_lines_and_columns() {
        let tokens = tokenize("a bb\n  ccc");
        assert_eq!(tokens[0].position, Position { line: 1, column: 1 });
        assert_eq!(tokens[1].position, Position { line: 1, column: 3 });
        assert_eq!(tokens[2].position, Position { line: 2, column: 3 });
    }

    #[test]
    fn near_zero_values_compare_equal_absolutely() {
        assert!(numbers_equal(1e-20, 0.0, &recommended()));
        assert!(numbers_equal(4.863e-19, 2.489e-19, &recommended()));
    }

    #[test]
    fn visible_differences_fail() {
        assert!(!numbers_equal(1.2345, 1.2346, &recommended()));
    }

    #[test]
    fn relative_bound_is_inclusive() {
        let tol = Tolerance::new(0.0, 1e-8).unwrap();
        assert!(numbers_equal(1e8 + 1.0, 1e8, &tol));
        assert!(!numbers_equal(1e8 + 2.0, 1e8, &tol));
    }

    #[test]
    fn nan_is_never_equal() {
        let tol = Tolerance::new(f64::MAX, f64::MAX).unwrap();
        assert!(!numbers_equal(f64::NAN, f64::NAN, &tol));
        assert!(!numbers_equal(f64::NAN, 0.0, &tol));
    }

    #[test]
    fn infinities_compare_by_sign() {
        let tol = recommended();
        assert!(numbers_equal(f64::INFINITY, f64::INFINITY, &tol));
        assert!(numbers_equal(f64::NEG_INFINITY, f64::NEG_INFINITY, &tol));
        assert!(!numbers_equal(f64::INFINITY, f64::NEG_INFINITY, &tol));
        assert!(!numbers_equal(f64::INFINITY, 1e300, &tol));
    }

    #[test]
    fn identical_texts_are_equal() {
        let text = "final position body 1: 1.0 2.0 3.0\n";
        assert!(compare(text, text, &Tolerance::exact()).is_equal());
    }

    #[test]
    fn rounded_zero_matches_computed_zero() {
        let report = compare(
            "0.000000000e+00",
            "4.863e-19",
            &Tolerance::new(1e-6, 0.0).unwrap(),
        );
        assert!(report.is_equal());
    }

    #[test]
    fn extra_tokens_are_a_single_count_mismatch() {
        let report = compare("ok 1.0", "ok 1.0 extra", &recommended());
        assert_eq!(report.mismatches.len(), 1);
        let mismatch = &report.mismatches[0];
        assert_eq!(mismatch.kind, MismatchKind::TokenCount);
        assert!(mismatch.reference.is_none());
        assert_eq!(mismatch.candidate.as_ref().unwrap().raw, "extra");
        assert_eq!(mismatch.to_string(), "line 1: expected '' got 'extra'");
    }

    #[test]
    fn word_changes_require_byte_identity() {
        let report = compare("velocity 1.0", "position 1.0", &recommended());
        assert_eq!(report.mismatches.len(), 1);
        assert_eq!(report.mismatches[0].kind, MismatchKind::Word);

        // A number paired with a word is a textual mismatch even if the word
        // contains the same digits.
        let report = compare("1.0", "1.0x", &recommended());
        assert_eq!(report.mismatches.len(), 1);
        assert_eq!(report.mismatches[0].kind, MismatchKind::Word);
    }

    #[test]
    fn mismatches_are_reported_in_input_order() {
        let report = compare("a 1.0 b 2.0", "a 9.0 b 5.0", &recommended());
        assert_eq!(report.mismatches.len(), 2);
        assert_eq!(report.mismatches[0].reference.as_ref().unwrap().raw, "1.0");
        assert_eq!(report.mismatches[1].reference.as_ref().unwrap().raw, "2.0");
        assert_eq!(
            report.describe(),
            "line 1: expected '1.0' got '9.0'\nline 1: expected '2.0' got '5.0'\n2 differences\n"
        );
    }

    #[test]
    fn invalid_tolerances_are_rejected() {
        assert!(Tolerance::new(-1.0, 0.0).is_err());
        assert!(Tolerance::new(0.0, f64::NAN).is_err());
        assert!(Tolerance::new(0.0, f64::INFINITY).is_err());
    }
}
