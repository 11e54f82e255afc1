use std::collections::{HashMap, VecDeque};

use nullca::amoroso::{
    decide_surjective, initial_node, successor_node, successor_nodes, successor_nodes_full,
    SurjectivityReason, Variant,
};
use nullca::sweep::{rule_space, sample_rules};
use nullca::{Alphabet, LocalRule, Neighborhood, Node, State};
use proptest::prelude::*;

fn eca(n: u128) -> LocalRule {
    LocalRule::from_u128(n, Alphabet::BINARY, Neighborhood::ELEMENTARY).unwrap()
}

fn rules() -> Vec<LocalRule> {
    let mut out: Vec<LocalRule> = (0..256).map(eca).collect();
    for (p, left, right, seed) in [(2, 1, 2, 1), (2, 2, 1, 2), (2, 0, 2, 3), (3, 1, 1, 4)] {
        let alphabet = Alphabet::new(p).unwrap();
        let n = Neighborhood::new(left, right);
        for x in sample_rules(rule_space(alphabet, n).unwrap(), 150, seed) {
            out.push(LocalRule::from_u128(x, alphabet, n).unwrap());
        }
    }
    out
}

/// Does some word of length `word.len() + k - 1` map onto `word`?
fn has_preimage(rule: &LocalRule, word: &[State]) -> bool {
    let p = rule.p();
    let k = rule.k() as usize;
    let len = word.len() + k - 1;
    let total = p.pow(len as u32);
    let windows = rule.window_count();
    (0..total).any(|x| {
        // most significant digit first
        (0..word.len()).all(|i| {
            let window = (x / p.pow((len - k - i) as u32)) % windows;
            rule.apply(window) == word[i]
        })
    })
}

/// Shortest label word driving the optimized graph from the node seeded by
/// `b` to the empty node, prefixed with `b`.
fn orphan_word(rule: &LocalRule, b: State) -> Option<Vec<State>> {
    let start = initial_node(rule, Variant::Optimized, b);
    if start.is_empty() {
        return Some(vec![b]);
    }
    let mut parent: HashMap<Node, Option<(Node, State)>> = HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        for (label, next) in successor_nodes(rule, &node).into_iter().enumerate() {
            if next.is_empty() {
                let mut word = vec![label as State];
                let mut cur = node.clone();
                while let Some((prev, a)) = parent[&cur].clone() {
                    word.push(a);
                    cur = prev;
                }
                word.push(b);
                word.reverse();
                return Some(word);
            }
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((node.clone(), label as State)));
                queue.push_back(next);
            }
        }
    }
    None
}

#[test]
fn variants_agree_and_optimized_is_smaller() {
    for rule in rules() {
        for b in rule.alphabet().states() {
            let (full, _) = decide_surjective(&rule, Variant::Full, b).unwrap();
            let (opt, _) = decide_surjective(&rule, Variant::Optimized, b).unwrap();
            assert_eq!(full.surjective, opt.surjective, "{rule:?} b={b}");
            assert!(opt.node_count <= full.node_count, "{rule:?} b={b}");
            assert!(opt.node_count as f64 <= 2f64.powi(rule.node_width() as i32));
            assert!(full.node_count as f64 <= 2f64.powi(rule.window_count() as i32));
        }
    }
}

#[test]
fn verdict_does_not_depend_on_seed_state() {
    for rule in rules() {
        let verdicts: Vec<bool> = rule
            .alphabet()
            .states()
            .map(|b| {
                decide_surjective(&rule, Variant::Optimized, b)
                    .unwrap()
                    .0
                    .surjective
            })
            .collect();
        assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "{rule:?}");
    }
}

#[test]
fn non_surjective_rules_have_a_checkable_orphan() {
    for rule in rules().into_iter().filter(|r| r.p() == 2 && r.k() <= 4) {
        let (verdict, _) = decide_surjective(&rule, Variant::Optimized, 0).unwrap();
        match orphan_word(&rule, 0) {
            Some(word) => {
                assert!(!verdict.surjective);
                if word.len() <= 12 {
                    assert!(!has_preimage(&rule, &word), "{rule:?} {word:?}");
                }
            }
            None => assert!(verdict.surjective),
        }
    }
}

#[test]
fn surjective_rules_have_no_short_orphans() {
    for number in 0..256 {
        let rule = eca(number);
        if !decide_surjective(&rule, Variant::Optimized, 0)
            .unwrap()
            .0
            .surjective
        {
            continue;
        }
        for len in 1..=6u32 {
            for x in 0..1usize << len {
                let word: Vec<State> = (0..len).rev().map(|i| ((x >> i) & 1) as State).collect();
                assert!(has_preimage(&rule, &word), "rule {number} {word:?}");
            }
        }
    }
}

#[test]
fn rule_46_is_not_surjective() {
    for variant in [Variant::Full, Variant::Optimized] {
        let (verdict, _) = decide_surjective(&eca(46), variant, 0).unwrap();
        assert!(!verdict.surjective);
        assert_eq!(verdict.reason, SurjectivityReason::EmptyNodeReached);
    }
}

#[test]
fn graph_edges_are_complete_for_surjective_rules() {
    let (verdict, graph) = decide_surjective(&eca(150), Variant::Optimized, 1).unwrap();
    assert!(verdict.surjective);
    assert_eq!(graph.edges.len(), 2 * graph.nodes.len());
    for &(from, label, to) in &graph.edges {
        assert_eq!(
            successor_node(&eca(150), &graph.nodes[from], label),
            graph.nodes[to]
        );
    }
}

fn project(rule: &LocalRule, node: &Node) -> Node {
    Node::from_members(
        rule.node_width(),
        node.members().map(|m| m % rule.node_width()),
    )
}

proptest! {
    #[test]
    fn suffix_projection_commutes(number in 0u128..1 << 16, members in proptest::collection::vec(0usize..16, 0..10)) {
        let rule = LocalRule::from_u128(number, Alphabet::BINARY, Neighborhood::new(1, 2)).unwrap();
        let node = Node::from_members(rule.window_count(), members);
        let full = successor_nodes_full(&rule, &node);
        let opt = successor_nodes(&rule, &project(&rule, &node));
        for (f, o) in full.iter().zip(&opt) {
            prop_assert_eq!(&project(&rule, f), o);
        }
    }

    #[test]
    fn successor_members_have_the_label(number in 0u128..19683, members in proptest::collection::vec(0usize..9, 1..6), label in 0u8..3) {
        let alphabet = Alphabet::new(3).unwrap();
        let rule = LocalRule::from_u128(number, alphabet, Neighborhood::ELEMENTARY).unwrap();
        let node = Node::from_members(rule.node_width(), members);
        let next = successor_node(&rule, &node, label);
        for target in next.members() {
            let witnessed = node
                .members()
                .any(|m| (0..3).any(|d| (m * 3 + d) % 9 == target && rule.apply(m * 3 + d) == label));
            prop_assert!(witnessed);
        }
    }
}
