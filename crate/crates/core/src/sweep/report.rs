//! Report renderers and the elementary-rule tables.

use std::fmt::Write as _;

use super::{sweep, Outcome, SweepMode, SweepReport, SweepSpec};
use crate::amoroso::{decide_surjective, SurjectivityVerdict, Variant};
use crate::error::Result;
use crate::null_boundary::ReversibilityFunction;
use crate::rule::{LocalRule, Neighborhood};
use crate::sequence::Alphabet;

pub const CSV_HEADER: &str =
    "rule_number,verdict,transient_bits,cycle_bits,bucket_count,node_count_full,node_count_opt";

fn bits(values: &[bool]) -> String {
    values.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn rule_digits(number: u128, alphabet: Alphabet, neighborhood: Neighborhood) -> String {
    LocalRule::from_u128(number, alphabet, neighborhood)
        .map(|r| r.to_digit_string())
        .unwrap_or_default()
}

impl SweepReport {
    /// One CSV row per kept record, header first. Columns a mode does not
    /// produce are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for record in &self.records {
            let verdict = record.outcome.verdict();
            let _ = match &record.outcome {
                Outcome::Strict { .. } => writeln!(out, "{},{verdict},,,,,", record.rule),
                Outcome::Revfun { function } => writeln!(
                    out,
                    "{},{verdict},{},{},{},,",
                    record.rule,
                    bits(function.transient()),
                    bits(function.cycle()),
                    function.bucket_stats().distinct_buckets
                ),
                Outcome::Surjectivity { node_count, .. } => {
                    writeln!(out, "{},{verdict},,,,,{node_count}", record.rule)
                }
                Outcome::NodeCounts {
                    full, optimized, ..
                } => {
                    writeln!(out, "{},{verdict},,,,{full},{optimized}", record.rule)
                }
            };
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "mode={} p={} left={} right={} rules={}",
            self.mode,
            self.alphabet.size(),
            self.neighborhood.left,
            self.neighborhood.right,
            self.aggregate.rules
        );
        for (verdict, count) in &self.aggregate.verdicts {
            let _ = write!(out, " {verdict}={count}");
        }
        if let Some(b) = self.aggregate.max_buckets {
            let _ = write!(out, " max_buckets={b}");
        }
        out
    }

    /// Human-readable table.
    pub fn to_human(&self) -> String {
        let mut out = self.summary();
        out.push('\n');
        match self.mode {
            SweepMode::Strict => {
                let _ = writeln!(out, "{:>4}  {:>12}  digits", "#", "decimal");
                let strict = self.rules_with_verdict("strict");
                for (i, rule) in strict.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{:>4}  {:>12}  {}",
                        i + 1,
                        rule,
                        rule_digits(*rule, self.alphabet, self.neighborhood)
                    );
                }
            }
            SweepMode::Revfun => {
                for record in &self.records {
                    if let Outcome::Revfun { function } = &record.outcome {
                        let _ = writeln!(out, "{:>12}  {}", record.rule, function.describe());
                    }
                }
            }
            SweepMode::Surjectivity | SweepMode::NodeCountCompare => {
                for record in &self.records {
                    let counts = match &record.outcome {
                        Outcome::Surjectivity { node_count, .. } => format!("nodes={node_count}"),
                        Outcome::NodeCounts {
                            full, optimized, ..
                        } => format!("full={full} optimized={optimized}"),
                        _ => String::new(),
                    };
                    let _ = writeln!(
                        out,
                        "{:>12}  {:<16}  {counts}",
                        record.rule,
                        record.outcome.verdict()
                    );
                }
            }
        }
        out
    }
}

/// Rules sharing one reversibility function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionGroup {
    pub description: String,
    /// Minimal transient and cycle.
    pub transient: Vec<bool>,
    pub cycle: Vec<bool>,
    pub rules: Vec<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table5 {
    /// Ordered by smallest member rule.
    pub groups: Vec<FunctionGroup>,
}

/// Elementary rules reversible for some `n >= 2`, grouped by their
/// reversibility function.
pub fn table5_report() -> Result<Table5> {
    let spec = SweepSpec::exhaustive(
        Alphabet::BINARY,
        Neighborhood::ELEMENTARY,
        SweepMode::Revfun,
    )?;
    let report = sweep(&spec)?;
    let mut groups: Vec<(ReversibilityFunction, FunctionGroup)> = Vec::new();
    for record in &report.records {
        let Outcome::Revfun { function } = &record.outcome else {
            continue;
        };
        if !function.any_true_from(2) {
            continue;
        }
        match groups.iter_mut().find(|(f, _)| f.same_function(function)) {
            Some((_, group)) => group.rules.push(record.rule),
            None => {
                let (transient, cycle) = function.canonical();
                groups.push((
                    function.clone(),
                    FunctionGroup {
                        description: function.describe(),
                        transient,
                        cycle,
                        rules: vec![record.rule],
                    },
                ));
            }
        }
    }
    Ok(Table5 {
        groups: groups.into_iter().map(|(_, g)| g).collect(),
    })
}

impl Table5 {
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>7}  {:>8}  reversibility function",
            "decimal", "binary"
        );
        for group in &self.groups {
            for (i, rule) in group.rules.iter().enumerate() {
                let label = if i == 0 {
                    group.description.as_str()
                } else {
                    ""
                };
                let _ = writeln!(out, "{rule:>7}  {rule:08b}  {label}");
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rule_number,transient_bits,cycle_bits,description\n");
        for group in &self.groups {
            for rule in &group.rules {
                let _ = writeln!(
                    out,
                    "{rule},{},{},\"{}\"",
                    bits(&group.transient),
                    bits(&group.cycle),
                    group.description
                );
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Row {
    pub rule: u128,
    pub b: u8,
    pub full: SurjectivityVerdict,
    pub optimized: SurjectivityVerdict,
}

/// Node counts of both graph constructions for each elementary rule and
/// each seed state.
pub fn table2_report(rules: &[u128]) -> Result<Vec<Table2Row>> {
    let mut rows = Vec::new();
    for &number in rules {
        let rule = LocalRule::from_u128(number, Alphabet::BINARY, Neighborhood::ELEMENTARY)?;
        for b in rule.alphabet().states() {
            let (full, _) = decide_surjective(&rule, Variant::Full, b)?;
            let (optimized, _) = decide_surjective(&rule, Variant::Optimized, b)?;
            rows.push(Table2Row {
                rule: number,
                b,
                full,
                optimized,
            });
        }
    }
    Ok(rows)
}

pub fn table2_to_csv(rows: &[Table2Row]) -> String {
    let mut out =
        String::from("rule_number,b,verdict_full,verdict_opt,node_count_full,node_count_opt\n");
    let verdict = |v: &SurjectivityVerdict| {
        if v.surjective {
            "surjective"
        } else {
            "non-surjective"
        }
    };
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.rule,
            row.b,
            verdict(&row.full),
            verdict(&row.optimized),
            row.full.node_count,
            row.optimized.node_count
        );
    }
    out
}

pub fn table2_to_human(rows: &[Table2Row]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>5}  {:>2}  {:>10}  {:>10}  verdict",
        "rule", "b", "full", "optimized"
    );
    for row in rows {
        let verdict = if row.full.surjective == row.optimized.surjective {
            if row.full.surjective {
                "surjective"
            } else {
                "non-surjective"
            }
        } else {
            "variant-mismatch"
        };
        let _ = writeln!(
            out,
            "{:>5}  {:>2}  {:>10}  {:>10}  {verdict}",
            row.rule, row.b, row.full.node_count, row.optimized.node_count
        );
    }
    out
}
