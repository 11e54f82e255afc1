//! `nullca`: command-line front end for the null-boundary CA deciders.
//!
//! Every flag can also be set through an environment variable with the
//! `NULLCA_` prefix, e.g. `NULLCA_P=3` or `NULLCA_FORMAT=csv`.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nullca::amoroso::{decide_surjective, SurjectivityReason, SurjectivityVerdict, Variant};
use nullca::null_boundary::{
    reversibility_function, strictly_reversible, Defect, DEFAULT_MAX_BUCKETS,
};
use nullca::oracle::{evolve_null, first_collision, OracleBudget, DEFAULT_ORACLE_BUDGET};
use nullca::sweep::{
    rule_space, sweep, table2_report, table2_to_csv, table2_to_human, table5_report, RecordFilter,
    RuleRecord, RuleSelection, SweepMode, SweepReport, SweepSpec, DEFAULT_BLOCK_SIZE,
};
use nullca::{Alphabet, Configuration, Error, LocalRule, Neighborhood};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "nullca",
    version,
    about = "Reversibility and surjectivity of one-dimensional cellular automata"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain, env = "NULLCA_FORMAT")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Space {
    /// Alphabet size.
    #[arg(long, default_value_t = 2, env = "NULLCA_P")]
    p: u32,
    /// Left radius.
    #[arg(long, default_value_t = 1, env = "NULLCA_LEFT")]
    left: u32,
    /// Right radius.
    #[arg(long, default_value_t = 1, env = "NULLCA_RIGHT")]
    right: u32,
}

impl Space {
    fn alphabet(&self) -> nullca::Result<Alphabet> {
        Alphabet::new(self.p)
    }

    fn neighborhood(&self) -> Neighborhood {
        Neighborhood::new(self.left, self.right)
    }
}

#[derive(Args, Clone)]
struct RuleArgs {
    #[command(flatten)]
    space: Space,
    /// Rule number in decimal.
    #[arg(
        long,
        env = "NULLCA_RULE",
        required_unless_present = "rule_digits",
        conflicts_with = "rule_digits"
    )]
    rule: Option<String>,
    /// Rule as its base-p digit string, image of the all-(p-1) window first.
    #[arg(long, env = "NULLCA_RULE_DIGITS")]
    rule_digits: Option<String>,
}

impl RuleArgs {
    fn rule(&self) -> nullca::Result<LocalRule> {
        let alphabet = self.space.alphabet()?;
        let neighborhood = self.space.neighborhood();
        match (&self.rule, &self.rule_digits) {
            (Some(number), _) => LocalRule::from_decimal(number, alphabet, neighborhood),
            (None, Some(digits)) => LocalRule::from_digit_string(digits, alphabet, neighborhood),
            (None, None) => unreachable!("clap requires one of --rule and --rule-digits"),
        }
    }

    fn label(&self) -> String {
        self.rule
            .clone()
            .or_else(|| self.rule_digits.clone())
            .unwrap_or_default()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Full,
    Optimized,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => Variant::Full,
            VariantArg::Optimized => Variant::Optimized,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Apply the global map with null boundaries.
    Evolve {
        #[command(flatten)]
        rule: RuleArgs,
        /// Initial configuration as base-p digits, leftmost cell first.
        #[arg(long, env = "NULLCA_CONFIG")]
        config: String,
        /// Number of steps; one line is printed per step.
        #[arg(long, default_value_t = 1, env = "NULLCA_STEPS")]
        steps: usize,
    },
    /// Decide surjectivity of the infinite automaton.
    Surjective {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, value_enum, default_value_t = VariantArg::Optimized, env = "NULLCA_VARIANT")]
        variant: VariantArg,
        /// State whose preimages seed the graph.
        #[arg(long, default_value_t = 0, env = "NULLCA_B")]
        b: u64,
        /// Run both graph constructions and report their node counts.
        #[arg(long, conflicts_with = "graph")]
        compare: bool,
        /// Write the constructed graph to this file.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Decide reversibility for every number of cells.
    Strict {
        #[command(flatten)]
        rule: RuleArgs,
    },
    /// Compute the reversibility function R(n).
    Revfun {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_BUCKETS, env = "NULLCA_MAX_BUCKETS")]
        max_buckets: usize,
    },
    /// Decide reversibility for one cell count by enumeration.
    Oracle {
        #[command(flatten)]
        rule: RuleArgs,
        /// Number of cells.
        #[arg(long, env = "NULLCA_N")]
        n: usize,
        /// Most configurations to enumerate.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET, env = "NULLCA_BUDGET")]
        budget: u64,
    },
    /// Evaluate a range or a random sample of rule numbers.
    Sweep(SweepArgs),
    /// Node counts of both surjectivity graphs for elementary rules.
    Table2 {
        #[arg(long, value_delimiter = ',', default_values_t = [22u128, 37, 41, 85, 86, 101, 104, 106, 149, 169])]
        rules: Vec<u128>,
    },
    /// Elementary rules reversible for some n >= 2, grouped by function.
    Table5,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    space: Space,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict, env = "NULLCA_MODE")]
    mode: ModeArg,
    /// First rule number (inclusive).
    #[arg(long, env = "NULLCA_LO")]
    lo: Option<u128>,
    /// Last rule number (exclusive); defaults to the size of the rule space.
    #[arg(long, env = "NULLCA_HI")]
    hi: Option<u128>,
    /// Evaluate this many distinct random rules instead of a range.
    #[arg(long, conflicts_with_all = ["lo", "hi"], env = "NULLCA_SAMPLE")]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0, env = "NULLCA_SEED")]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0, env = "NULLCA_JOBS")]
    jobs: usize,
    #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE, env = "NULLCA_BLOCK_SIZE")]
    block_size: usize,
    /// Journal file; an interrupted sweep resumes from it.
    #[arg(long, env = "NULLCA_CHECKPOINT")]
    checkpoint: Option<PathBuf>,
    /// Allow sweeps over more than 2^24 rules.
    #[arg(long, env = "NULLCA_LONG_RUN")]
    long_run: bool,
    /// Keep only positive records (aggregates still cover every rule).
    #[arg(long, env = "NULLCA_POSITIVE")]
    positive: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_BUCKETS, env = "NULLCA_MAX_BUCKETS")]
    max_buckets: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Revfun,
    Surjectivity,
    NodeCountCompare,
}

impl From<ModeArg> for SweepMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => SweepMode::Strict,
            ModeArg::Revfun => SweepMode::Revfun,
            ModeArg::Surjectivity => SweepMode::Surjectivity,
            ModeArg::NodeCountCompare => SweepMode::NodeCountCompare,
        }
    }
}

fn reason(r: SurjectivityReason) -> &'static str {
    match r {
        SurjectivityReason::UnbalancedImage => "unbalanced-image",
        SurjectivityReason::EmptyNodeReached => "empty-node-reached",
        SurjectivityReason::GraphClosed => "graph-closed",
    }
}

fn surjectivity_word(v: &SurjectivityVerdict) -> &'static str {
    if v.surjective {
        "surjective"
    } else {
        "non-surjective"
    }
}

fn run(cli: Cli) -> nullca::Result<String> {
    let format = cli.format;
    Ok(match cli.command {
        Command::Evolve {
            rule,
            config,
            steps,
        } => {
            let r = rule.rule()?;
            let mut current = Configuration::parse(&config, r.alphabet())?;
            let mut images = Vec::with_capacity(steps);
            for _ in 0..steps {
                current = evolve_null(&r, &current)?;
                images.push(current.to_string());
            }
            match format {
                Format::Plain => lines(&images),
                Format::Csv => {
                    let rows: Vec<String> = images
                        .iter()
                        .enumerate()
                        .map(|(t, c)| format!("{},{c}", t + 1))
                        .collect();
                    format!("step,configuration\n{}", lines(&rows))
                }
                Format::Json => {
                    pretty(json!({ "rule": rule.label(), "initial": config, "images": images }))
                }
            }
        }

        Command::Surjective {
            rule,
            variant,
            b,
            compare,
            graph,
        } => {
            let r = rule.rule()?;
            let b = r.alphabet().check_state(b)?;
            let variants: Vec<Variant> = if compare {
                vec![Variant::Full, Variant::Optimized]
            } else {
                vec![variant.into()]
            };
            let mut results = Vec::new();
            for v in variants {
                let (verdict, g) = decide_surjective(&r, v, b)?;
                if let Some(path) = &graph {
                    fs::write(path, g.to_text())?;
                }
                results.push((v, verdict));
            }
            match format {
                Format::Plain => {
                    let rows: Vec<String> = results
                        .iter()
                        .map(|(v, verdict)| {
                            let text = format!(
                                "{} ({}) nodes={}",
                                surjectivity_word(verdict),
                                reason(verdict.reason),
                                verdict.node_count
                            );
                            if compare {
                                format!("{v}: {text}")
                            } else {
                                text
                            }
                        })
                        .collect();
                    lines(&rows)
                }
                Format::Csv => {
                    let rows: Vec<String> = results
                        .iter()
                        .map(|(v, verdict)| {
                            format!(
                                "{},{b},{v},{},{},{}",
                                rule.label(),
                                surjectivity_word(verdict),
                                reason(verdict.reason),
                                verdict.node_count
                            )
                        })
                        .collect();
                    format!("rule,b,variant,verdict,reason,node_count\n{}", lines(&rows))
                }
                Format::Json => {
                    let rows: Vec<_> = results
                        .iter()
                        .map(|(v, verdict)| {
                            json!({
                                "variant": v.to_string(),
                                "surjective": verdict.surjective,
                                "reason": reason(verdict.reason),
                                "node_count": verdict.node_count,
                            })
                        })
                        .collect();
                    pretty(json!({ "rule": rule.label(), "b": b, "results": rows }))
                }
            }
        }

        Command::Strict { rule } => {
            let r = rule.rule()?;
            let verdict = strictly_reversible(&r);
            let witness = verdict.witness.as_ref();
            let defect = witness.map(|w| match w.defect {
                Defect::Empty => "some configuration has no preimage".to_string(),
                Defect::ZeroSequenceCount(0) => "no boundary-compatible preimage".to_string(),
                Defect::ZeroSequenceCount(c) => format!("{c} boundary-compatible preimages"),
            });
            match format {
                Format::Plain => match (witness, defect) {
                    (Some(w), Some(d)) => {
                        format!("not strictly reversible: fails at n={} ({d})\n", w.depth)
                    }
                    _ => "strictly reversible\n".to_string(),
                },
                Format::Csv => format!(
                    "rule,strictly_reversible,witness_depth,witness_node\n{},{},{},{}\n",
                    rule.label(),
                    verdict.strictly_reversible,
                    witness.map(|w| w.depth.to_string()).unwrap_or_default(),
                    witness
                        .map(|w| format!("\"{}\"", w.node))
                        .unwrap_or_default()
                ),
                Format::Json => pretty(json!({
                    "rule": rule.label(),
                    "strictly_reversible": verdict.strictly_reversible,
                    "witness": witness.map(|w| json!({
                        "depth": w.depth,
                        "node": w.node.to_string(),
                        "defect": defect,
                    })),
                })),
            }
        }

        Command::Revfun { rule, max_buckets } => {
            let r = rule.rule()?;
            let f = reversibility_function(&r, max_buckets)?;
            let bits =
                |v: &[bool]| -> String { v.iter().map(|&b| if b { '1' } else { '0' }).collect() };
            let stats = f.bucket_stats();
            match format {
                Format::Plain => format!("{f}\n{}\n", f.describe()),
                Format::Csv => format!(
                    "rule,transient_bits,cycle_bits,bucket_count,description\n{},{},{},{},\"{}\"\n",
                    rule.label(),
                    bits(f.transient()),
                    bits(f.cycle()),
                    stats.distinct_buckets,
                    f.describe()
                ),
                Format::Json => pretty(json!({
                    "rule": rule.label(),
                    "transient": bits(f.transient()),
                    "cycle": bits(f.cycle()),
                    "buckets": stats.distinct_buckets,
                    "description": f.describe(),
                })),
            }
        }

        Command::Oracle { rule, n, budget } => {
            let r = rule.rule()?;
            let collision = first_collision(
                &r,
                n,
                &OracleBudget {
                    max_configs: budget,
                },
            )?;
            match format {
                Format::Plain => match &collision {
                    None => format!("reversible for n={n}\n"),
                    Some((a, b)) => {
                        let image = evolve_null(&r, a)?;
                        format!("not reversible for n={n}: {a} and {b} both map to {image}\n")
                    }
                },
                Format::Csv => format!(
                    "rule,n,reversible,collision\n{},{n},{},{}\n",
                    rule.label(),
                    collision.is_none(),
                    collision
                        .as_ref()
                        .map(|(a, b)| format!("{a} {b}"))
                        .unwrap_or_default()
                ),
                Format::Json => pretty(json!({
                    "rule": rule.label(),
                    "n": n,
                    "reversible": collision.is_none(),
                    "collision": collision.as_ref().map(|(a, b)| [a.to_string(), b.to_string()]),
                })),
            }
        }

        Command::Sweep(args) => {
            let report = sweep(&sweep_spec(&args)?)?;
            match format {
                Format::Plain => report.to_human(),
                Format::Csv => report.to_csv(),
                Format::Json => sweep_json(&report),
            }
        }

        Command::Table2 { rules } => {
            let rows = table2_report(&rules)?;
            match format {
                Format::Plain => table2_to_human(&rows),
                Format::Csv => table2_to_csv(&rows),
                Format::Json => pretty(json!(rows
                    .iter()
                    .map(|row| json!({
                        "rule": row.rule,
                        "b": row.b,
                        "surjective_full": row.full.surjective,
                        "surjective_optimized": row.optimized.surjective,
                        "node_count_full": row.full.node_count,
                        "node_count_optimized": row.optimized.node_count,
                    }))
                    .collect::<Vec<_>>())),
            }
        }

        Command::Table5 => {
            let table = table5_report()?;
            match format {
                Format::Plain => table.to_human(),
                Format::Csv => table.to_csv(),
                Format::Json => pretty(json!(table
                    .groups
                    .iter()
                    .map(|g| json!({ "description": g.description, "rules": g.rules }))
                    .collect::<Vec<_>>())),
            }
        }
    })
}

fn sweep_spec(args: &SweepArgs) -> nullca::Result<SweepSpec> {
    let alphabet = args.space.alphabet()?;
    let neighborhood = args.space.neighborhood();
    let selection = match args.sample {
        Some(count) => RuleSelection::Sample {
            count,
            seed: args.seed,
        },
        None => RuleSelection::Range {
            lo: args.lo.unwrap_or(0),
            hi: match args.hi {
                Some(hi) => hi,
                None => rule_space(alphabet, neighborhood)?,
            },
        },
    };
    let mut spec = SweepSpec::new(alphabet, neighborhood, args.mode.into(), selection);
    spec.jobs = args.jobs;
    spec.block_size = args.block_size;
    spec.checkpoint = args.checkpoint.clone();
    spec.long_run = args.long_run;
    spec.max_buckets = args.max_buckets;
    if args.positive {
        spec.keep = RecordFilter::Positive;
    }
    Ok(spec)
}

/// Serialized directly rather than through `serde_json::Value`, which cannot
/// hold rule numbers above `u64::MAX`.
#[derive(Serialize)]
struct SweepJson<'a> {
    mode: SweepMode,
    p: u32,
    left: u32,
    right: u32,
    rules: u64,
    verdicts: &'a BTreeMap<String, u64>,
    max_buckets: Option<usize>,
    records: &'a [RuleRecord],
}

fn sweep_json(report: &SweepReport) -> String {
    let value = SweepJson {
        mode: report.mode,
        p: report.alphabet.size(),
        left: report.neighborhood.left,
        right: report.neighborhood.right,
        rules: report.aggregate.rules,
        verdicts: &report.aggregate.verdicts,
        max_buckets: report.aggregate.max_buckets,
        records: &report.records,
    };
    let mut out = serde_json::to_string_pretty(&value).expect("sweep reports serialize");
    out.push('\n');
    out
}

fn lines(rows: &[String]) -> String {
    let mut out = rows.join("\n");
    out.push('\n');
    out
}

fn pretty(value: serde_json::Value) -> String {
    let mut out = serde_json::to_string_pretty(&value).expect("json values serialize");
    out.push('\n');
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_budget() {
        2
    } else {
        1
    }
}
