//! Reversibility of finite automata under null boundary conditions.
//!
//! Both deciders walk the suffix-node graph starting from the node of all
//! (k-1)-sequences whose leftmost `r_L` cells are zero, i.e. the window just
//! left of cell 0. A node reached by a path of length `n` holds the possible
//! trailing windows of preimages of that length-`n` configuration, and the
//! members ending in `r_R` zeros are the preimages compatible with the right
//! boundary. Size `n` is reversible iff every node at depth `n` has exactly
//! one such member.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::amoroso::successor_nodes;
use crate::error::{Error, Result};
use crate::node::{Bucket, Node};
use crate::rule::LocalRule;
use crate::sequence::Alphabet;

/// Default cap on the number of distinct buckets built by
/// [`reversibility_function`].
pub const DEFAULT_MAX_BUCKETS: usize = 100_000;

/// All (k-1)-sequences whose leftmost `r_L` elements are zero.
pub fn initial_node(rule: &LocalRule) -> Node {
    let free = rule
        .alphabet()
        .count(rule.neighborhood().right)
        .expect("p^r_R is bounded by the node width");
    Node::from_members(rule.node_width(), 0..free as usize)
}

/// Members whose rightmost `right` elements are all zero.
pub fn count_right_zero(node: &Node, alphabet: Alphabet, right: u32) -> usize {
    match alphabet.count(right) {
        Some(modulus) if modulus <= node.width() as u64 => node.count_multiples(modulus as usize),
        // only the all-zero sequence qualifies
        _ => usize::from(node.contains(0)),
    }
}

#[inline]
fn has_unique_valid_tail(rule: &LocalRule, node: &Node) -> bool {
    count_right_zero(node, rule.alphabet(), rule.neighborhood().right) == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defect {
    /// Some configuration has no preimage at all.
    Empty,
    /// Number of boundary-compatible tails; 0 means no valid preimage,
    /// 2 or more means several.
    ZeroSequenceCount(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Path length of the offending node; the automaton is not reversible
    /// for this many cells.
    pub depth: usize,
    pub node: Node,
    pub defect: Defect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictVerdict {
    pub strictly_reversible: bool,
    pub witness: Option<Witness>,
}

/// Decides whether the automaton is reversible for every cell count `n >= 1`.
///
/// The graph is closed breadth-first; every generated node, but not the
/// initial one, must hold exactly one right `r_R`-zero sequence. The first
/// node that fails is reported at its breadth-first depth, which is the
/// shortest path reaching it.
pub fn strictly_reversible(rule: &LocalRule) -> StrictVerdict {
    let start = initial_node(rule);
    let mut seen: HashSet<Node> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([(start, 0usize)]);

    while let Some((node, depth)) = queue.pop_front() {
        for next in successor_nodes(rule, &node) {
            if !has_unique_valid_tail(rule, &next) {
                let defect = if next.is_empty() {
                    Defect::Empty
                } else {
                    Defect::ZeroSequenceCount(count_right_zero(
                        &next,
                        rule.alphabet(),
                        rule.neighborhood().right,
                    ))
                };
                return StrictVerdict {
                    strictly_reversible: false,
                    witness: Some(Witness {
                        depth: depth + 1,
                        node: next,
                        defect,
                    }),
                };
            }
            if seen.insert(next.clone()) {
                queue.push_back((next, depth + 1));
            }
        }
    }

    StrictVerdict {
        strictly_reversible: true,
        witness: None,
    }
}

/// An eventually periodic boolean function `R(n)` of the cell count.
///
/// `transient[j]` is `R(j + 1)`; afterwards `R(T + 1 + m) = cycle[m % q]`
/// with `T = transient.len()` and `q = cycle.len()`. The lengths follow the
/// bucket chain that produced the function, so they need not be minimal;
/// [`ReversibilityFunction::canonical`] gives the minimal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReversibilityFunction {
    transient: Vec<bool>,
    cycle: Vec<bool>,
    distinct_buckets: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BucketStats {
    /// Distinct buckets built, starting bucket included.
    pub distinct_buckets: usize,
    pub transient_length: usize,
    pub period: usize,
}

impl ReversibilityFunction {
    pub fn new(transient: Vec<bool>, cycle: Vec<bool>, distinct_buckets: usize) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::invalid(
                "cycle",
                "the repeating part must not be empty",
            ));
        }
        Ok(ReversibilityFunction {
            transient,
            cycle,
            distinct_buckets,
        })
    }

    /// `R(n)` for `n >= 1`.
    pub fn value(&self, n: usize) -> bool {
        assert!(n >= 1, "R(n) is defined for n >= 1");
        let t = self.transient.len();
        if n <= t {
            self.transient[n - 1]
        } else {
            self.cycle[(n - t - 1) % self.cycle.len()]
        }
    }

    pub fn transient(&self) -> &[bool] {
        &self.transient
    }

    pub fn cycle(&self) -> &[bool] {
        &self.cycle
    }

    pub fn bucket_stats(&self) -> BucketStats {
        BucketStats {
            distinct_buckets: self.distinct_buckets,
            transient_length: self.transient.len(),
            period: self.cycle.len(),
        }
    }

    /// Reversible for every `n`.
    pub fn is_all_true(&self) -> bool {
        self.transient.iter().chain(&self.cycle).all(|&b| b)
    }

    pub fn is_all_false(&self) -> bool {
        self.transient.iter().chain(&self.cycle).all(|&b| !b)
    }

    /// True iff `R(n) = 1` for some `n >= from`.
    pub fn any_true_from(&self, from: usize) -> bool {
        self.cycle.iter().any(|&b| b)
            || self
                .transient
                .iter()
                .enumerate()
                .any(|(j, &b)| b && j + 1 >= from)
    }

    /// Shortest transient and shortest period describing the same function.
    pub fn canonical(&self) -> (Vec<bool>, Vec<bool>) {
        let q = self.cycle.len();
        let period = (1..=q)
            .find(|&d| q.is_multiple_of(d) && (0..q).all(|i| self.cycle[i] == self.cycle[i % d]))
            .unwrap_or(q);
        let mut cycle = self.cycle[..period].to_vec();
        let mut transient = self.transient.clone();
        while transient.last().is_some_and(|&b| Some(&b) == cycle.last()) {
            transient.pop();
            cycle.rotate_right(1);
        }
        (transient, cycle)
    }

    /// Same function of `n`, regardless of how the chain represented it.
    pub fn same_function(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Piecewise description such as `R(n) = 1 iff n ≡ 0,1 (mod 3)`.
    pub fn describe(&self) -> String {
        if self.is_all_true() {
            return "R(n) = 1 for all n".to_string();
        }
        if self.is_all_false() {
            return "R(n) = 0 for all n".to_string();
        }
        let (transient, cycle) = self.canonical();
        let t = transient.len();
        let q = cycle.len();
        let listed: Vec<String> = transient
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| (j + 1).to_string())
            .collect();
        let set = format!("n ∈ {{{}}}", listed.join(","));
        if cycle.iter().all(|&b| !b) {
            return format!("R(n) = 1 iff {set}");
        }
        let mut residues: Vec<usize> = cycle
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(m, _)| (t + 1 + m) % q)
            .collect();
        residues.sort_unstable();
        let residues: Vec<String> = residues.iter().map(usize::to_string).collect();
        let congruence = if q == 1 {
            format!("n > {t}")
        } else if t == 0 {
            format!("n ≡ {} (mod {q})", residues.join(","))
        } else {
            format!("n > {t} and n ≡ {} (mod {q})", residues.join(","))
        };
        if listed.is_empty() {
            format!("R(n) = 1 iff {congruence}")
        } else {
            format!("R(n) = 1 iff {set} or {congruence}")
        }
    }
}

fn bits(values: &[bool]) -> String {
    values.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for ReversibilityFunction {
    /// `transient=<bits>; cycle=<bits>; buckets=<int>`, bits indexed from n = 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "transient={}; cycle={}; buckets={}",
            bits(&self.transient),
            bits(&self.cycle),
            self.distinct_buckets
        )
    }
}

impl FromStr for ReversibilityFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        fn parse_bits(text: &str) -> Result<Vec<bool>> {
            text.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::invalid("revfun", format!("`{c}` is not a bit"))),
                })
                .collect()
        }
        let mut fields = s.split(';').map(str::trim);
        let mut field = |key: &str| -> Result<&str> {
            fields
                .next()
                .and_then(|f| f.strip_prefix(key))
                .and_then(|f| f.strip_prefix('='))
                .ok_or_else(|| Error::invalid("revfun", format!("expected `{key}=` field")))
        };
        let transient = parse_bits(field("transient")?)?;
        let cycle = parse_bits(field("cycle")?)?;
        let buckets = field("buckets")?
            .parse()
            .map_err(|e| Error::invalid("revfun", format!("bad bucket count: {e}")))?;
        if fields.next().is_some() {
            return Err(Error::invalid("revfun", "trailing fields"));
        }
        ReversibilityFunction::new(transient, cycle, buckets)
    }
}

/// Computes `R(n)` for all `n` from the bucket chain.
///
/// `T_0` holds only the initial node and `T_i` holds every successor of every
/// node of `T_{i-1}`. `R(i)` is read off `T_i`. The chain stops at the first
/// bucket equal to an earlier one (the cycle), or at the first bucket holding
/// the empty node, after which `R` is identically 0.
pub fn reversibility_function(
    rule: &LocalRule,
    max_buckets: usize,
) -> Result<ReversibilityFunction> {
    if max_buckets == 0 {
        return Err(Error::invalid("max_buckets", "must be at least 1"));
    }
    let mut current = Bucket::from_nodes(vec![initial_node(rule)]);
    let mut positions: HashMap<Bucket, usize> = HashMap::new();
    positions.insert(current.clone(), 0);
    // values[j] = R(j + 1)
    let mut values: Vec<bool> = Vec::new();

    for depth in 1.. {
        let next = Bucket::from_nodes(
            current
                .nodes()
                .iter()
                .flat_map(|node| successor_nodes(rule, node))
                .collect(),
        );

        if next.contains_empty_node() {
            if depth + 1 > max_buckets {
                return Err(Error::BucketBudget { max_buckets });
            }
            return ReversibilityFunction::new(values, vec![false], depth + 1);
        }

        values.push(
            next.nodes()
                .iter()
                .all(|node| has_unique_valid_tail(rule, node)),
        );

        if let Some(&earlier) = positions.get(&next) {
            let cycle = values.split_off(earlier);
            return ReversibilityFunction::new(values, cycle, depth);
        }
        if depth + 1 > max_buckets {
            return Err(Error::BucketBudget { max_buckets });
        }
        positions.insert(next.clone(), depth);
        current = next;
    }
    unreachable!("the chain loop only exits by returning")
}

/// Self-check tying the two deciders together: strict reversibility holds
/// exactly when the reversibility function is identically 1.
pub fn strict_equals_allones(rule: &LocalRule) -> Result<bool> {
    let strict = strictly_reversible(rule).strictly_reversible;
    let function = reversibility_function(rule, DEFAULT_MAX_BUCKETS)?;
    Ok(strict == function.is_all_true())
}
