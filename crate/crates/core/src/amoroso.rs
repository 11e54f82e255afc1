//! Surjectivity of the infinite automaton via the Amoroso subset graph.
//!
//! Two constructions are provided. The full one keeps sets of k-sequences in
//! every node; the optimized one keeps only the (k-1)-suffixes, which yields
//! an isomorphic graph with fewer distinct nodes. [`successor_node`] from the
//! optimized construction is also the transition used by the null-boundary
//! deciders.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::node::Node;
use crate::rule::LocalRule;
use crate::sequence::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Nodes are sets of k-sequences.
    Full,
    /// Nodes are sets of (k-1)-sequences.
    Optimized,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Optimized => "optimized",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurjectivityReason {
    /// Some state is not the image of any k-sequence.
    UnbalancedImage,
    EmptyNodeReached,
    GraphClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurjectivityVerdict {
    pub surjective: bool,
    pub reason: SurjectivityReason,
    /// Distinct nodes discovered; on early exit this includes the empty node.
    pub node_count: usize,
}

#[derive(Debug, Clone)]
pub struct AmorosoGraph {
    pub variant: Variant,
    pub initial_state: State,
    pub nodes: Vec<Node>,
    /// `(from, label, to)` with node ids indexing `nodes`.
    pub edges: Vec<(usize, State, usize)>,
}

impl AmorosoGraph {
    /// Line-oriented dump: a header, one `id : {members}` line per node, then
    /// one `from label to` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# amoroso-graph v1 variant={} b={} nodes={} edges={}",
            self.variant,
            self.initial_state,
            self.nodes.len(),
            self.edges.len()
        );
        for (id, node) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "{id} : {node}");
        }
        for (from, label, to) in &self.edges {
            let _ = writeln!(out, "{from} {label} {to}");
        }
        out
    }
}

/// True iff every state is the image of at least one k-sequence.
pub fn check_image_covering(rule: &LocalRule) -> bool {
    let mut hit = vec![false; rule.p()];
    for &s in rule.table() {
        hit[s as usize] = true;
    }
    hit.into_iter().all(|h| h)
}

/// Successors of a (k-1)-sequence node under every label at once; entry `a`
/// of the result is the successor under label `a`.
///
/// For each member `b` and each appended state `d`, the k-sequence `b·d` is
/// routed to label `f(b·d)` and contributes its suffix.
pub fn successor_nodes(rule: &LocalRule, node: &Node) -> Vec<Node> {
    let width = rule.node_width();
    let p = rule.p();
    let table = rule.table();
    let mut out = vec![Node::empty(width); p];
    for member in node.members() {
        let base = member * p;
        for window in base..base + p {
            out[table[window] as usize].insert(window % width);
        }
    }
    out
}

pub fn successor_node(rule: &LocalRule, node: &Node, label: State) -> Node {
    let width = rule.node_width();
    let p = rule.p();
    let table = rule.table();
    let mut out = Node::empty(width);
    for member in node.members() {
        let base = member * p;
        for (window, &image) in (base..).zip(&table[base..base + p]) {
            if image == label {
                out.insert(window % width);
            }
        }
    }
    out
}

/// Successors of a k-sequence node under every label: the k-sequences that
/// overlap some member by `k-1` cells, routed by their image.
pub fn successor_nodes_full(rule: &LocalRule, node: &Node) -> Vec<Node> {
    let width = rule.node_width();
    let windows = rule.window_count();
    let p = rule.p();
    let table = rule.table();
    let mut out = vec![Node::empty(windows); p];
    for member in node.members() {
        let base = (member % width) * p;
        for window in base..base + p {
            out[table[window] as usize].insert(window);
        }
    }
    out
}

pub fn successor_node_full(rule: &LocalRule, node: &Node, label: State) -> Node {
    successor_nodes_full(rule, node).swap_remove(label as usize)
}

/// The starting node for the given variant and seed state `b`.
pub fn initial_node(rule: &LocalRule, variant: Variant, b: State) -> Node {
    let width = rule.node_width();
    let windows = rule.window_count();
    let preimages = (0..windows).filter(|&w| rule.apply(w) == b);
    match variant {
        Variant::Full => Node::from_members(windows, preimages),
        Variant::Optimized => Node::from_members(width, preimages.map(|w| w % width)),
    }
}

/// Builds the Amoroso graph breadth-first from the node seeded by `b`,
/// exploring labels in ascending order, and decides surjectivity.
pub fn decide_surjective(
    rule: &LocalRule,
    variant: Variant,
    b: State,
) -> Result<(SurjectivityVerdict, AmorosoGraph)> {
    rule.alphabet().check_state(u64::from(b))?;
    let mut graph = AmorosoGraph {
        variant,
        initial_state: b,
        nodes: Vec::new(),
        edges: Vec::new(),
    };
    if !check_image_covering(rule) {
        let verdict = SurjectivityVerdict {
            surjective: false,
            reason: SurjectivityReason::UnbalancedImage,
            node_count: 0,
        };
        return Ok((verdict, graph));
    }
    if variant == Variant::Full && rule.window_count() as u64 > crate::rule::DEFAULT_MAX_NODE_WIDTH
    {
        return Err(Error::Capacity {
            what: "full-variant node width p^k",
            required: rule.window_count().to_string(),
            cap: crate::rule::DEFAULT_MAX_NODE_WIDTH,
        });
    }

    let start = initial_node(rule, variant, b);
    let mut ids: HashMap<Node, usize> = HashMap::new();
    ids.insert(start.clone(), 0);
    graph.nodes.push(start);
    let mut queue = VecDeque::from([0usize]);

    while let Some(id) = queue.pop_front() {
        let successors = match variant {
            Variant::Full => successor_nodes_full(rule, &graph.nodes[id]),
            Variant::Optimized => successor_nodes(rule, &graph.nodes[id]),
        };
        for (label, next) in successors.into_iter().enumerate() {
            if next.is_empty() {
                // the empty node counts as discovered
                let to = graph.nodes.len();
                graph.nodes.push(next);
                graph.edges.push((id, label as State, to));
                let verdict = SurjectivityVerdict {
                    surjective: false,
                    reason: SurjectivityReason::EmptyNodeReached,
                    node_count: graph.nodes.len(),
                };
                return Ok((verdict, graph));
            }
            let to = match ids.entry(next) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    let to = graph.nodes.len();
                    graph.nodes.push(e.key().clone());
                    e.insert(to);
                    queue.push_back(to);
                    to
                }
            };
            graph.edges.push((id, label as State, to));
        }
    }

    let verdict = SurjectivityVerdict {
        surjective: true,
        reason: SurjectivityReason::GraphClosed,
        node_count: graph.nodes.len(),
    };
    Ok((verdict, graph))
}
