//! Exhaustive and sampled sweeps over rule numbers.
//!
//! Rules are grouped into contiguous blocks; blocks run on a worker pool and
//! are merged back by block index, so a report never depends on scheduling.
//! With a checkpoint path, every finished block is appended to a journal and
//! a rerun with the same spec picks up where the last one stopped.

mod checkpoint;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checkpoint::Journal;
pub use report::{
    table2_report, table2_to_csv, table2_to_human, table5_report, FunctionGroup, Table2Row, Table5,
    CSV_HEADER,
};

use crate::amoroso::{decide_surjective, Variant};
use crate::error::{Error, Result};
use crate::null_boundary::{
    reversibility_function, strictly_reversible, ReversibilityFunction, DEFAULT_MAX_BUCKETS,
};
use crate::rule::{Envelope, LocalRule, Neighborhood};
use crate::sequence::Alphabet;

pub const DEFAULT_BLOCK_SIZE: usize = 4096;

/// Ranges larger than this need `long_run`.
pub const LONG_RUN_THRESHOLD: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Strict,
    Revfun,
    Surjectivity,
    NodeCountCompare,
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::Strict => "strict",
            SweepMode::Revfun => "revfun",
            SweepMode::Surjectivity => "surjectivity",
            SweepMode::NodeCountCompare => "node-count-compare",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleSelection {
    /// Rule numbers `lo..hi`.
    Range { lo: u128, hi: u128 },
    /// `count` distinct rule numbers drawn uniformly with a ChaCha8 stream
    /// seeded by `seed`.
    Sample { count: usize, seed: u64 },
}

/// Which per-rule records a report keeps. Aggregates always cover every rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordFilter {
    #[default]
    All,
    /// Strictly reversible, reversible for some n, or surjective, per mode.
    Positive,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub alphabet: Alphabet,
    pub neighborhood: Neighborhood,
    pub mode: SweepMode,
    pub selection: RuleSelection,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub block_size: usize,
    pub checkpoint: Option<PathBuf>,
    pub keep: RecordFilter,
    pub long_run: bool,
    pub max_buckets: usize,
}

impl SweepSpec {
    pub fn new(
        alphabet: Alphabet,
        neighborhood: Neighborhood,
        mode: SweepMode,
        selection: RuleSelection,
    ) -> Self {
        SweepSpec {
            alphabet,
            neighborhood,
            mode,
            selection,
            jobs: 0,
            block_size: DEFAULT_BLOCK_SIZE,
            checkpoint: None,
            keep: RecordFilter::All,
            long_run: false,
            max_buckets: DEFAULT_MAX_BUCKETS,
        }
    }

    /// Full range `0..p^(p^k)`.
    pub fn exhaustive(
        alphabet: Alphabet,
        neighborhood: Neighborhood,
        mode: SweepMode,
    ) -> Result<Self> {
        let hi = rule_space(alphabet, neighborhood)?;
        Ok(Self::new(
            alphabet,
            neighborhood,
            mode,
            RuleSelection::Range { lo: 0, hi },
        ))
    }

    /// Canonical text of everything that affects the report; hashed into
    /// the checkpoint so a journal is never resumed under another spec.
    pub fn fingerprint(&self) -> String {
        let selection = serde_json::to_string(&self.selection).expect("selection serializes");
        format!(
            "p={} left={} right={} mode={} selection={} block={} keep={:?} max_buckets={}",
            self.alphabet.size(),
            self.neighborhood.left,
            self.neighborhood.right,
            self.mode,
            selection,
            self.block_size,
            self.keep,
            self.max_buckets
        )
    }
}

/// Number of rules `p^(p^k)`, when it fits in 128 bits.
pub fn rule_space(alphabet: Alphabet, neighborhood: Neighborhood) -> Result<u128> {
    let width = Envelope::default().check(alphabet, neighborhood)?;
    let digits = width as u128 * u128::from(alphabet.size());
    u32::try_from(digits)
        .ok()
        .and_then(|d| u128::from(alphabet.size()).checked_pow(d))
        .ok_or_else(|| Error::Capacity {
            what: "rule space p^(p^k) for sweeps",
            required: format!("{}^{}", alphabet.size(), digits),
            cap: u64::MAX,
        })
}

/// The reflected rule over radii `(r_R, r_L)`.
pub fn mirror_rule(rule: &LocalRule) -> LocalRule {
    rule.mirrored()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Outcome {
    Strict {
        reversible: bool,
        witness_depth: Option<usize>,
    },
    Revfun {
        #[serde(with = "revfun_text")]
        function: ReversibilityFunction,
    },
    Surjectivity {
        surjective: bool,
        node_count: usize,
    },
    NodeCounts {
        surjective_full: bool,
        surjective_optimized: bool,
        full: usize,
        optimized: usize,
    },
}

mod revfun_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::null_boundary::ReversibilityFunction;

    pub fn serialize<S: Serializer>(f: &ReversibilityFunction, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(f)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ReversibilityFunction, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl Outcome {
    pub fn verdict(&self) -> &'static str {
        match self {
            Outcome::Strict {
                reversible: true, ..
            } => "strict",
            Outcome::Strict {
                reversible: false, ..
            } => "not-strict",
            Outcome::Revfun { function } if function.is_all_true() => "strict",
            Outcome::Revfun { function } if function.is_all_false() => "never",
            Outcome::Revfun { .. } => "partial",
            Outcome::Surjectivity {
                surjective: true, ..
            } => "surjective",
            Outcome::Surjectivity {
                surjective: false, ..
            } => "non-surjective",
            Outcome::NodeCounts {
                surjective_full,
                surjective_optimized,
                ..
            } => match (surjective_full, surjective_optimized) {
                (true, true) => "surjective",
                (false, false) => "non-surjective",
                _ => "variant-mismatch",
            },
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            Outcome::Strict { reversible, .. } => *reversible,
            Outcome::Revfun { function } => !function.is_all_false(),
            Outcome::Surjectivity { surjective, .. } => *surjective,
            Outcome::NodeCounts {
                surjective_full, ..
            } => *surjective_full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleRecord {
    pub rule: u128,
    pub outcome: Outcome,
}

/// Applies the mode's decider to one rule. Surjectivity modes seed the graph
/// with state 0.
pub fn evaluate(rule: &LocalRule, mode: SweepMode, max_buckets: usize) -> Result<Outcome> {
    Ok(match mode {
        SweepMode::Strict => {
            let v = strictly_reversible(rule);
            Outcome::Strict {
                reversible: v.strictly_reversible,
                witness_depth: v.witness.map(|w| w.depth),
            }
        }
        SweepMode::Revfun => Outcome::Revfun {
            function: reversibility_function(rule, max_buckets)?,
        },
        SweepMode::Surjectivity => {
            let (v, _) = decide_surjective(rule, Variant::Optimized, 0)?;
            Outcome::Surjectivity {
                surjective: v.surjective,
                node_count: v.node_count,
            }
        }
        SweepMode::NodeCountCompare => {
            let (full, _) = decide_surjective(rule, Variant::Full, 0)?;
            let (opt, _) = decide_surjective(rule, Variant::Optimized, 0)?;
            Outcome::NodeCounts {
                surjective_full: full.surjective,
                surjective_optimized: opt.surjective,
                full: full.node_count,
                optimized: opt.node_count,
            }
        }
    })
}

/// Results of one block of rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockResult {
    pub index: usize,
    pub rules: u64,
    pub verdicts: BTreeMap<String, u64>,
    pub max_buckets: Option<usize>,
    pub records: Vec<RuleRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Aggregate {
    pub rules: u64,
    pub verdicts: BTreeMap<String, u64>,
    /// Largest distinct-bucket count seen, for revfun sweeps.
    pub max_buckets: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub mode: SweepMode,
    pub alphabet: Alphabet,
    pub neighborhood: Neighborhood,
    /// Sorted by rule number.
    pub records: Vec<RuleRecord>,
    pub aggregate: Aggregate,
    /// Not part of any serialized output.
    pub wall_time: Duration,
}

impl SweepReport {
    pub fn rules_with_verdict(&self, verdict: &str) -> Vec<u128> {
        self.records
            .iter()
            .filter(|r| r.outcome.verdict() == verdict)
            .map(|r| r.rule)
            .collect()
    }
}

/// Work plan: the ordered list of blocks for a spec.
enum Plan {
    Range { lo: u128, hi: u128, block: u128 },
    Sample { rules: Vec<u128>, block: usize },
}

impl Plan {
    fn block_count(&self) -> usize {
        match self {
            Plan::Range { lo, hi, block } => (hi - lo).div_ceil(*block) as usize,
            Plan::Sample { rules, block } => rules.len().div_ceil(*block),
        }
    }

    fn for_each_rule(&self, index: usize, mut visit: impl FnMut(u128) -> Result<()>) -> Result<()> {
        match self {
            Plan::Range { lo, hi, block } => {
                let start = lo + index as u128 * block;
                let end = (start + block).min(*hi);
                (start..end).try_for_each(visit)
            }
            Plan::Sample { rules, block } => {
                let start = index * block;
                let end = (start + block).min(rules.len());
                rules[start..end].iter().try_for_each(|&r| visit(r))
            }
        }
    }
}

fn plan(spec: &SweepSpec) -> Result<Plan> {
    if spec.block_size == 0 {
        return Err(Error::invalid("block-size", "must be at least 1"));
    }
    let space = rule_space(spec.alphabet, spec.neighborhood)?;
    match spec.selection {
        RuleSelection::Range { lo, hi } => {
            if lo >= hi {
                return Err(Error::invalid("range", format!("empty range {lo}..{hi}")));
            }
            if hi > space {
                return Err(Error::invalid(
                    "range",
                    format!("upper end {hi} exceeds the {space} rules of this envelope"),
                ));
            }
            if hi - lo > LONG_RUN_THRESHOLD && !spec.long_run {
                return Err(Error::invalid(
                    "long-run",
                    format!("sweeping {} rules requires the long-run flag", hi - lo),
                ));
            }
            Ok(Plan::Range {
                lo,
                hi,
                block: spec.block_size as u128,
            })
        }
        RuleSelection::Sample { count, seed } => {
            if count as u128 > space {
                return Err(Error::invalid(
                    "sample",
                    format!("{count} distinct rules requested from a space of {space}"),
                ));
            }
            if count as u128 > LONG_RUN_THRESHOLD && !spec.long_run {
                return Err(Error::invalid(
                    "long-run",
                    format!("sampling {count} rules requires the long-run flag"),
                ));
            }
            Ok(Plan::Sample {
                rules: sample_rules(space, count, seed),
                block: spec.block_size,
            })
        }
    }
}

/// `count` distinct rule numbers below `space`, ascending. Asking for at
/// least the whole space returns all of it.
pub fn sample_rules(space: u128, count: usize, seed: u64) -> Vec<u128> {
    if count as u128 >= space {
        return (0..space).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = BTreeSet::new();
    while chosen.len() < count {
        chosen.insert(rng.gen_range(0..space));
    }
    chosen.into_iter().collect()
}

fn run_block(spec: &SweepSpec, plan: &Plan, index: usize) -> Result<BlockResult> {
    let mut result = BlockResult {
        index,
        rules: 0,
        verdicts: BTreeMap::new(),
        max_buckets: None,
        records: Vec::new(),
    };
    plan.for_each_rule(index, |number| {
        let rule = LocalRule::from_u128(number, spec.alphabet, spec.neighborhood)?;
        let outcome = evaluate(&rule, spec.mode, spec.max_buckets)?;
        result.rules += 1;
        *result
            .verdicts
            .entry(outcome.verdict().to_string())
            .or_default() += 1;
        if let Outcome::Revfun { function } = &outcome {
            let b = function.bucket_stats().distinct_buckets;
            result.max_buckets = Some(result.max_buckets.map_or(b, |m| m.max(b)));
        }
        if spec.keep == RecordFilter::All || outcome.is_positive() {
            result.records.push(RuleRecord {
                rule: number,
                outcome,
            });
        }
        Ok(())
    })?;
    Ok(result)
}

/// Runs the sweep to completion.
pub fn sweep(spec: &SweepSpec) -> Result<SweepReport> {
    Ok(sweep_limited(spec, None)?.expect("an unlimited sweep always completes"))
}

/// Runs at most `max_new_blocks` blocks not already in the checkpoint.
/// Returns `None` when blocks remain; they are picked up by the next call
/// with the same spec and checkpoint.
pub fn sweep_limited(
    spec: &SweepSpec,
    max_new_blocks: Option<usize>,
) -> Result<Option<SweepReport>> {
    let started = Instant::now();
    let plan = plan(spec)?;
    let total = plan.block_count();

    let (journal, mut done) = match &spec.checkpoint {
        Some(path) => {
            let (journal, done) = Journal::open(path, &spec.fingerprint(), total)?;
            (Some(Mutex::new(journal)), done)
        }
        None => (None, BTreeMap::new()),
    };

    let pending: Vec<usize> = (0..total).filter(|i| !done.contains_key(i)).collect();
    let budget = max_new_blocks.unwrap_or(usize::MAX);
    let started_blocks = AtomicUsize::new(0);
    let finished = Mutex::new(Vec::new());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::invalid("jobs", e.to_string()))?;
    pool.install(|| {
        pending.par_iter().try_for_each(|&index| -> Result<()> {
            if started_blocks.fetch_add(1, Ordering::Relaxed) >= budget {
                return Ok(());
            }
            let result = run_block(spec, &plan, index)?;
            if let Some(journal) = &journal {
                journal.lock().expect("journal lock").append(&result)?;
            }
            finished.lock().expect("result lock").push(result);
            Ok(())
        })
    })?;

    for result in finished.into_inner().expect("result lock") {
        done.insert(result.index, result);
    }
    if done.len() < total {
        return Ok(None);
    }

    let mut aggregate = Aggregate::default();
    let mut records = Vec::new();
    for (_, block) in done {
        aggregate.rules += block.rules;
        for (verdict, count) in block.verdicts {
            *aggregate.verdicts.entry(verdict).or_default() += count;
        }
        aggregate.max_buckets = match (aggregate.max_buckets, block.max_buckets) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        records.extend(block.records);
    }
    Ok(Some(SweepReport {
        mode: spec.mode,
        alphabet: spec.alphabet,
        neighborhood: spec.neighborhood,
        records,
        aggregate,
        wall_time: started.elapsed(),
    }))
}
