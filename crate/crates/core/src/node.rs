//! Sets of sequences as fixed-width bitsets, and buckets of such sets.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use smallvec::SmallVec;

type Words = SmallVec<[u64; 1]>;

/// A set of sequence indices below `width`. Bit `i` is set iff the sequence
/// with index `i` is a member.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Node {
    width: u32,
    words: Words,
}

impl Node {
    pub fn empty(width: usize) -> Self {
        Node {
            width: width as u32,
            words: SmallVec::from_elem(0, width.div_ceil(64)),
        }
    }

    pub fn full(width: usize) -> Self {
        let mut node = Node::empty(width);
        for w in node.words.iter_mut() {
            *w = u64::MAX;
        }
        if !width.is_multiple_of(64) {
            if let Some(last) = node.words.last_mut() {
                *last = (1u64 << (width % 64)) - 1;
            }
        }
        node
    }

    pub fn from_members(width: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut node = Node::empty(width);
        for m in members {
            node.insert(m);
        }
        node
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width as usize
    }

    #[inline]
    pub fn insert(&mut self, index: usize) {
        debug_assert!(
            index < self.width as usize,
            "index {index} outside width {}",
            self.width
        );
        self.words[index / 64] |= 1u64 << (index % 64);
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        index < self.width as usize && self.words[index / 64] & (1u64 << (index % 64)) != 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Member indices in ascending order.
    pub fn members(&self) -> Members<'_> {
        Members {
            words: &self.words,
            word: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Number of members whose index is a multiple of `modulus`.
    pub fn count_multiples(&self, modulus: usize) -> usize {
        match modulus {
            0 => 0,
            1 => self.len(),
            _ if modulus.is_power_of_two() && modulus < 64 => {
                // every word starts at a multiple of 64, so one mask serves all words
                let mut mask = 0u64;
                let mut bit = 0;
                while bit < 64 {
                    mask |= 1 << bit;
                    bit += modulus;
                }
                self.words
                    .iter()
                    .map(|w| (w & mask).count_ones() as usize)
                    .sum()
            }
            _ => self.members().filter(|m| m % modulus == 0).count(),
        }
    }
}

impl Ord for Node {
    /// Numeric order of the bitset value.
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

impl fmt::Display for Node {
    /// `{i, j, ...}` with member indices ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

pub struct Members<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
            self.current = *self.words.get(self.word)?;
        }
    }
}

/// A duplicate-free set of nodes kept in ascending bitset order, so two
/// buckets are equal iff their node lists are equal.
#[derive(Clone)]
pub struct Bucket {
    nodes: Vec<Node>,
    hash: u64,
}

impl Bucket {
    pub fn from_nodes(mut nodes: Vec<Node>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        let mut hasher = DefaultHasher::new();
        nodes.hash(&mut hasher);
        Bucket {
            hash: hasher.finish(),
            nodes,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains_empty_node(&self) -> bool {
        // the empty set sorts first
        self.nodes.first().is_some_and(Node::is_empty)
    }
}

impl PartialEq for Bucket {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash && self.nodes == other.nodes
    }
}

impl Eq for Bucket {}

impl Hash for Bucket {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash);
    }
}

impl fmt::Debug for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.nodes).finish()
    }
}
