//! Local rules, Wolfram rule numbers and configurations.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::sequence::{digit_char, parse_digits, Alphabet, State};

/// Default cap on the width of a node bitset, `p^(k-1)` bits.
pub const DEFAULT_MAX_NODE_WIDTH: u64 = 1 << 20;

/// The contiguous window `(-r_L, ..., 0, ..., r_R)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Neighborhood {
    pub left: u32,
    pub right: u32,
}

impl Neighborhood {
    pub const ELEMENTARY: Neighborhood = Neighborhood { left: 1, right: 1 };

    pub fn new(left: u32, right: u32) -> Self {
        Neighborhood { left, right }
    }

    #[inline]
    pub fn size(self) -> u32 {
        self.left + self.right + 1
    }

    pub fn mirrored(self) -> Self {
        Neighborhood {
            left: self.right,
            right: self.left,
        }
    }
}

/// Limits applied when a rule is constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Envelope {
    /// Largest allowed `p^(k-1)`.
    pub max_node_width: u64,
}

impl Default for Envelope {
    fn default() -> Self {
        Envelope {
            max_node_width: DEFAULT_MAX_NODE_WIDTH,
        }
    }
}

impl Envelope {
    /// Checks that `p^(k-1)` fits under the cap and returns it.
    pub fn check(&self, alphabet: Alphabet, neighborhood: Neighborhood) -> Result<usize> {
        let k = neighborhood.size();
        let capacity_err = || Error::Capacity {
            what: "node width p^(k-1)",
            required: format!("{}^{}", alphabet.size(), k - 1),
            cap: self.max_node_width,
        };
        let width = alphabet.count(k - 1).ok_or_else(capacity_err)?;
        if width > self.max_node_width {
            return Err(capacity_err());
        }
        // the lookup table holds p * width entries
        width
            .checked_mul(u64::from(alphabet.size()))
            .and_then(|n| usize::try_from(n).ok())
            .ok_or_else(capacity_err)?;
        Ok(width as usize)
    }
}

/// A local rule `f: S^k -> S` stored as its full lookup table.
///
/// `table[i]` is the image of the k-sequence with index `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalRule {
    alphabet: Alphabet,
    neighborhood: Neighborhood,
    table: Vec<State>,
    node_width: usize,
}

impl fmt::Debug for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalRule")
            .field("p", &self.alphabet.size())
            .field("left", &self.neighborhood.left)
            .field("right", &self.neighborhood.right)
            .field("number", &self.to_number().to_string())
            .finish()
    }
}

impl LocalRule {
    pub fn from_table(
        alphabet: Alphabet,
        neighborhood: Neighborhood,
        table: Vec<State>,
    ) -> Result<Self> {
        Self::from_table_with(alphabet, neighborhood, table, &Envelope::default())
    }

    pub fn from_table_with(
        alphabet: Alphabet,
        neighborhood: Neighborhood,
        table: Vec<State>,
        envelope: &Envelope,
    ) -> Result<Self> {
        let node_width = envelope.check(alphabet, neighborhood)?;
        let expected = node_width * alphabet.size() as usize;
        if table.len() != expected {
            return Err(Error::invalid(
                "table",
                format!("expected {expected} entries, got {}", table.len()),
            ));
        }
        for &s in &table {
            alphabet.check_state(u64::from(s))?;
        }
        Ok(LocalRule {
            alphabet,
            neighborhood,
            table,
            node_width,
        })
    }

    /// Builds the rule whose base-p digit `i` (least significant first) is
    /// the image of the k-sequence with index `i`.
    pub fn from_number(
        number: &BigUint,
        alphabet: Alphabet,
        neighborhood: Neighborhood,
    ) -> Result<Self> {
        Self::from_number_with(number, alphabet, neighborhood, &Envelope::default())
    }

    pub fn from_number_with(
        number: &BigUint,
        alphabet: Alphabet,
        neighborhood: Neighborhood,
        envelope: &Envelope,
    ) -> Result<Self> {
        let node_width = envelope.check(alphabet, neighborhood)?;
        let len = node_width * alphabet.size() as usize;
        let mut table = if number.is_zero() {
            Vec::new()
        } else {
            number.to_radix_le(alphabet.size())
        };
        if table.len() > len {
            return Err(Error::RuleNumberOverflow {
                number: number.to_string(),
                p: alphabet.size(),
                k: neighborhood.size(),
            });
        }
        table.resize(len, 0);
        Ok(LocalRule {
            alphabet,
            neighborhood,
            table,
            node_width,
        })
    }

    /// Parses a decimal rule number of any size.
    pub fn from_decimal(
        text: &str,
        alphabet: Alphabet,
        neighborhood: Neighborhood,
    ) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::invalid(
                "rule",
                format!("`{text}` is not a decimal rule number"),
            ));
        }
        let number = BigUint::parse_bytes(text.as_bytes(), 10).expect("checked decimal digits");
        Self::from_number(&number, alphabet, neighborhood)
    }

    /// Fast path for sweeps, where rule numbers fit in 128 bits.
    pub fn from_u128(number: u128, alphabet: Alphabet, neighborhood: Neighborhood) -> Result<Self> {
        let node_width = Envelope::default().check(alphabet, neighborhood)?;
        let len = node_width * alphabet.size() as usize;
        let p = u128::from(alphabet.size());
        let mut table = Vec::with_capacity(len);
        let mut rest = number;
        if p == 2 {
            for i in 0..len.min(128) {
                table.push(((number >> i) & 1) as State);
            }
            table.resize(len, 0);
            rest = if len >= 128 { 0 } else { number >> len };
        } else {
            for _ in 0..len {
                table.push((rest % p) as State);
                rest /= p;
                if rest == 0 {
                    break;
                }
            }
            table.resize(len, 0);
        }
        if rest != 0 {
            return Err(Error::RuleNumberOverflow {
                number: number.to_string(),
                p: alphabet.size(),
                k: neighborhood.size(),
            });
        }
        Ok(LocalRule {
            alphabet,
            neighborhood,
            table,
            node_width,
        })
    }

    /// Parses a base-p digit string of length `p^k` in Wolfram order, i.e.
    /// the digit for index `p^k - 1` first and index 0 last.
    pub fn from_digit_string(
        text: &str,
        alphabet: Alphabet,
        neighborhood: Neighborhood,
    ) -> Result<Self> {
        let mut digits = parse_digits(text, alphabet, "rule-digits")?;
        digits.reverse();
        let node_width = Envelope::default().check(alphabet, neighborhood)?;
        let len = node_width * alphabet.size() as usize;
        if digits.len() != len {
            return Err(Error::invalid(
                "rule-digits",
                format!(
                    "expected {len} digits for p={}, k={}, got {}",
                    alphabet.size(),
                    neighborhood.size(),
                    digits.len()
                ),
            ));
        }
        Self::from_table(alphabet, neighborhood, digits)
    }

    pub fn to_number(&self) -> BigUint {
        BigUint::from_radix_le(&self.table, self.alphabet.size()).expect("table digits are below p")
    }

    /// The rule number when it fits in 128 bits.
    pub fn to_u128(&self) -> Option<u128> {
        self.to_number().to_u128()
    }

    /// Digit string in Wolfram order (highest index first).
    pub fn to_digit_string(&self) -> String {
        self.table.iter().rev().map(|&d| digit_char(d)).collect()
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.alphabet.size() as usize
    }

    #[inline]
    pub fn neighborhood(&self) -> Neighborhood {
        self.neighborhood
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.neighborhood.size()
    }

    /// Number of (k-1)-sequences, `p^(k-1)`.
    #[inline]
    pub fn node_width(&self) -> usize {
        self.node_width
    }

    /// Number of k-sequences, `p^k`.
    #[inline]
    pub fn window_count(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn table(&self) -> &[State] {
        &self.table
    }

    /// `f` applied to the k-sequence with the given index.
    #[inline]
    pub fn apply(&self, window: usize) -> State {
        self.table[window]
    }

    /// The left-right reflection: radii swap and each k-sequence reads the
    /// original entry of its digit reversal.
    pub fn mirrored(&self) -> LocalRule {
        let p = self.p();
        let k = self.k();
        let table = (0..self.table.len())
            .map(|i| {
                let mut rest = i;
                let mut reversed = 0;
                for _ in 0..k {
                    reversed = reversed * p + rest % p;
                    rest /= p;
                }
                self.table[reversed]
            })
            .collect();
        LocalRule {
            alphabet: self.alphabet,
            neighborhood: self.neighborhood.mirrored(),
            table,
            node_width: self.node_width,
        }
    }
}

/// The states of `n >= 1` cells, leftmost cell first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    cells: Vec<State>,
}

impl Configuration {
    pub fn new(cells: Vec<State>, alphabet: Alphabet) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::invalid(
                "config",
                "a configuration needs at least one cell",
            ));
        }
        for &c in &cells {
            alphabet.check_state(u64::from(c))?;
        }
        Ok(Configuration { cells })
    }

    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        Self::new(parse_digits(text, alphabet, "config")?, alphabet)
    }

    pub fn cells(&self) -> &[State] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn from_cells_unchecked(cells: Vec<State>) -> Self {
        Configuration { cells }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.cells {
            write!(f, "{}", digit_char(c))?;
        }
        Ok(())
    }
}
