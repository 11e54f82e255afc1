//! Cell states and l-sequences encoded as base-p integers.
//!
//! A sequence `(s_0, s_1, ..., s_{L-1})` is stored as the integer whose base-p
//! digits are the elements, leftmost element most significant. Every other
//! module relies on this single convention.

use crate::error::{Error, Result};

/// A cell state. Alphabets are capped at 256 states.
pub type State = u8;

/// Largest supported alphabet size.
pub const MAX_ALPHABET: u32 = 256;

/// The state set `{0, 1, ..., p-1}`. State 0 is the boundary state.
///
/// The algorithms are purely combinatorial, so any `p >= 2` is accepted,
/// prime or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    p: u32,
}

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet { p: 2 };

    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::invalid(
                "p",
                format!("alphabet size must be at least 2, got {p}"),
            ));
        }
        if p > MAX_ALPHABET {
            return Err(Error::invalid(
                "p",
                format!("alphabet size must be at most {MAX_ALPHABET}, got {p}"),
            ));
        }
        Ok(Alphabet { p })
    }

    #[inline]
    pub fn size(self) -> u32 {
        self.p
    }

    pub fn check_state(self, state: u64) -> Result<State> {
        if state < u64::from(self.p) {
            Ok(state as State)
        } else {
            Err(Error::InvalidState { state, p: self.p })
        }
    }

    pub fn states(self) -> impl Iterator<Item = State> {
        (0..self.p).map(|s| s as State)
    }

    /// `p^len`, or `None` on u64 overflow.
    pub fn count(self, len: u32) -> Option<u64> {
        u64::from(self.p).checked_pow(len)
    }

    pub(crate) fn count_or_err(self, len: u32, what: &'static str) -> Result<u64> {
        self.count(len).ok_or_else(|| Error::Capacity {
            what,
            required: format!("{}^{}", self.p, len),
            cap: u64::MAX,
        })
    }
}

/// An l-sequence over an alphabet, stored as its base-p value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequenceIndex {
    pub length: u32,
    pub index: u64,
}

impl SequenceIndex {
    pub fn new(alphabet: Alphabet, length: u32, index: u64) -> Result<Self> {
        let count = alphabet.count_or_err(length, "sequence length")?;
        if index >= count {
            return Err(Error::invalid(
                "index",
                format!(
                    "{index} is out of range for sequences of length {length} over p={}",
                    alphabet.size()
                ),
            ));
        }
        Ok(SequenceIndex { length, index })
    }

    /// The leftmost `m` elements are all 0.
    pub fn is_left_zero(self, alphabet: Alphabet, m: u32) -> Result<bool> {
        self.check_m(m)?;
        // index < p^(L-m)
        Ok(alphabet
            .count(self.length - m)
            .is_none_or(|bound| self.index < bound))
    }

    /// The rightmost `m` elements are all 0.
    pub fn is_right_zero(self, alphabet: Alphabet, m: u32) -> Result<bool> {
        self.check_m(m)?;
        Ok(alphabet.count(m).map_or(self.index == 0, |modulus| {
            self.index.is_multiple_of(modulus)
        }))
    }

    fn check_m(self, m: u32) -> Result<()> {
        if m > self.length {
            return Err(Error::invalid(
                "m",
                format!("{m} exceeds the sequence length {}", self.length),
            ));
        }
        Ok(())
    }
}

pub fn encode_sequence(digits: &[State], alphabet: Alphabet) -> Result<SequenceIndex> {
    let p = u64::from(alphabet.size());
    let length =
        u32::try_from(digits.len()).map_err(|_| Error::invalid("digits", "sequence too long"))?;
    alphabet.count_or_err(length, "sequence length")?;
    let mut index = 0u64;
    for &d in digits {
        alphabet.check_state(u64::from(d))?;
        index = index * p + u64::from(d);
    }
    Ok(SequenceIndex { length, index })
}

pub fn decode_sequence(seq: SequenceIndex, alphabet: Alphabet) -> Vec<State> {
    let p = u64::from(alphabet.size());
    let mut out = vec![0; seq.length as usize];
    let mut rest = seq.index;
    for slot in out.iter_mut().rev() {
        *slot = (rest % p) as State;
        rest /= p;
    }
    out
}

/// Character for a digit in a base-p digit string (`0-9`, then `a-z`).
pub fn digit_char(d: State) -> char {
    char::from_digit(u32::from(d), 36).expect("digit strings are limited to base 36")
}

/// Parses a base-p digit string such as `10110`, leftmost character first.
pub fn parse_digits(text: &str, alphabet: Alphabet, name: &'static str) -> Result<Vec<State>> {
    if alphabet.size() > 36 {
        return Err(Error::invalid(
            name,
            "digit strings support alphabets of at most 36 states",
        ));
    }
    text.chars()
        .map(|c| {
            let d = c
                .to_digit(36)
                .ok_or_else(|| Error::invalid(name, format!("`{c}` is not a digit")))?;
            alphabet.check_state(u64::from(d)).map_err(|_| {
                Error::invalid(
                    name,
                    format!("digit `{c}` is not below p={}", alphabet.size()),
                )
            })
        })
        .collect()
}

pub fn format_digits(digits: &[State]) -> String {
    digits.iter().map(|&d| digit_char(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> Alphabet {
        Alphabet::BINARY
    }

    #[test]
    fn encode_examples() {
        assert_eq!(
            encode_sequence(&[1, 0, 1], bin()).unwrap(),
            SequenceIndex {
                length: 3,
                index: 5
            }
        );
        assert_eq!(
            encode_sequence(&[0, 0, 0], bin()).unwrap(),
            SequenceIndex {
                length: 3,
                index: 0
            }
        );
        let p3 = Alphabet::new(3).unwrap();
        assert_eq!(
            encode_sequence(&[2, 1], p3).unwrap(),
            SequenceIndex {
                length: 2,
                index: 7
            }
        );
    }

    #[test]
    fn empty_sequence_is_index_zero() {
        let s = encode_sequence(&[], bin()).unwrap();
        assert_eq!(
            s,
            SequenceIndex {
                length: 0,
                index: 0
            }
        );
        assert!(decode_sequence(s, bin()).is_empty());
    }

    #[test]
    fn encode_rejects_out_of_range_digit() {
        assert!(matches!(
            encode_sequence(&[0, 2], bin()),
            Err(Error::InvalidState { state: 2, p: 2 })
        ));
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(0).is_err());
        assert!(Alphabet::new(4).is_ok());
        assert!(Alphabet::new(257).is_err());
    }

    #[test]
    fn round_trip_exhaustive() {
        for p in [2, 3, 5] {
            let a = Alphabet::new(p).unwrap();
            for len in 0..=6 {
                for index in 0..a.count(len).unwrap() {
                    let seq = SequenceIndex { length: len, index };
                    let digits = decode_sequence(seq, a);
                    assert_eq!(encode_sequence(&digits, a).unwrap(), seq);
                }
            }
        }
    }

    #[test]
    fn zero_prefix_and_suffix() {
        // 0010 with two leading zeros, 1000 with two trailing zeros
        let s = encode_sequence(&[0, 0, 1, 0], bin()).unwrap();
        assert!(s.is_left_zero(bin(), 2).unwrap());
        assert!(!s.is_left_zero(bin(), 3).unwrap());
        let t = encode_sequence(&[1, 0, 0, 0], bin()).unwrap();
        assert!(t.is_right_zero(bin(), 2).unwrap());
        assert!(t.is_right_zero(bin(), 3).unwrap());
        assert!(!t.is_left_zero(bin(), 1).unwrap());
        for x in [s, t] {
            assert!(x.is_left_zero(bin(), 0).unwrap());
            assert!(x.is_right_zero(bin(), 0).unwrap());
        }
        assert!(s.is_left_zero(bin(), 5).is_err());
        assert!(s.is_right_zero(bin(), 5).is_err());
    }

    #[test]
    fn full_zero_checks_agree_with_index_zero() {
        for p in [2, 3] {
            let a = Alphabet::new(p).unwrap();
            for len in 0..=5 {
                for index in 0..a.count(len).unwrap() {
                    let s = SequenceIndex { length: len, index };
                    let left = s.is_left_zero(a, len).unwrap();
                    let right = s.is_right_zero(a, len).unwrap();
                    assert_eq!(left, index == 0);
                    assert_eq!(right, index == 0);
                }
            }
        }
    }

    #[test]
    fn zero_counts_match_brute_force() {
        for p in [2, 3] {
            let a = Alphabet::new(p).unwrap();
            for len in 0..=5u32 {
                for m in 0..=len {
                    let mut left = 0;
                    let mut right = 0;
                    for index in 0..a.count(len).unwrap() {
                        let digits = decode_sequence(SequenceIndex { length: len, index }, a);
                        if digits[..m as usize].iter().all(|&d| d == 0) {
                            left += 1;
                            assert!(SequenceIndex { length: len, index }
                                .is_left_zero(a, m)
                                .unwrap());
                        }
                        if digits[(len - m) as usize..].iter().all(|&d| d == 0) {
                            right += 1;
                            assert!(SequenceIndex { length: len, index }
                                .is_right_zero(a, m)
                                .unwrap());
                        }
                    }
                    let expected = a.count(len - m).unwrap();
                    assert_eq!(left, expected);
                    assert_eq!(right, expected);
                }
            }
        }
    }

    #[test]
    fn digit_strings() {
        assert_eq!(
            parse_digits("10110", bin(), "config").unwrap(),
            vec![1, 0, 1, 1, 0]
        );
        assert!(parse_digits("102", bin(), "config").is_err());
        assert!(parse_digits("1x", bin(), "config").is_err());
        assert_eq!(format_digits(&[1, 0, 0, 1, 0]), "10010");
    }
}
