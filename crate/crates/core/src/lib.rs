//! Decision procedures for one-dimensional cellular automata over a finite
//! alphabet.
//!
//! * [`amoroso`] decides surjectivity of the infinite automaton.
//! * [`null_boundary`] decides reversibility of finite automata whose cells
//!   outside the lattice are fixed at state 0, both for every size at once
//!   and as an eventually periodic function of the size.
//! * [`oracle`] evolves configurations directly and checks bijectivity by
//!   enumeration; the tests use it as ground truth for the graph methods.
//! * [`sweep`] runs the deciders over whole rule spaces.

pub mod amoroso;
pub mod error;
pub mod node;
pub mod null_boundary;
pub mod oracle;
pub mod rule;
pub mod sequence;
pub mod sweep;

pub use error::{Error, Result};
pub use node::{Bucket, Node};
pub use rule::{Configuration, Envelope, LocalRule, Neighborhood};
pub use sequence::{decode_sequence, encode_sequence, Alphabet, SequenceIndex, State};
