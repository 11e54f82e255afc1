//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.
//!
//! The 2^32-rule strict sweep only runs with `NULLCA_LONG_RUN=1`; it journals
//! to `NULLCA_LONG_RUN_CHECKPOINT` (default `target/long-run.journal`) and
//! resumes from it.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use nullca::amoroso::{decide_surjective, Variant};
use nullca::null_boundary::{reversibility_function, strict_equals_allones, DEFAULT_MAX_BUCKETS};
use nullca::oracle::{brute_force_reversible, evolve_null, preimages, OracleBudget};
use nullca::sweep::{
    mirror_rule, rule_space, sample_rules, sweep, sweep_limited, table2_report, table5_report,
    RecordFilter, RuleSelection, SweepMode, SweepSpec,
};
use nullca::{Alphabet, Configuration, LocalRule, Neighborhood};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Option<Outcome>>);

const STRICT_ELEMENTARY: [u128; 6] = [51, 60, 102, 153, 195, 204];

const STRICT_1_2: [u128; 34] = [
    3855, 3885, 3915, 4080, 7710, 7770, 11535, 11565, 15420, 19215, 19275, 23070, 23130, 23160,
    26985, 30810, 30840, 34695, 34725, 38550, 42375, 42405, 42465, 46260, 46320, 50115, 53970,
    54000, 57765, 57825, 61455, 61620, 61650, 61680,
];

const CLASSES: [(&[u128], &str); 6] = [
    (&[5, 37, 122, 133, 218, 250], "R(n) = 1 iff n ∈ {2}"),
    (
        &[
            19, 25, 28, 57, 67, 70, 76, 99, 156, 179, 185, 188, 198, 227, 230, 236,
        ],
        "R(n) = 1 iff n ∈ {1,2}",
    ),
    (&[51, 60, 102, 153, 195, 204], "R(n) = 1 for all n"),
    (&[90, 165], "R(n) = 1 iff n ≡ 0 (mod 2)"),
    (&[105, 150], "R(n) = 1 iff n ≡ 0,1 (mod 3)"),
    (&[108, 147], "R(n) = 1 iff n ∈ {1,2,3}"),
];

/// (rules, full count, optimized count)
const NODE_COUNTS: [(&[u128], usize, usize); 6] = [
    (&[22, 37, 104], 23, 16),
    (&[41], 18, 13),
    (&[85], 11, 5),
    (&[86, 106], 21, 10),
    (&[101], 17, 8),
    (&[149, 169], 23, 11),
];

const WIDE_RULE: u128 = 4_161_270_000;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: nullca::Error) -> String {
    e.to_string()
}

fn rule(number: u128, p: u32, left: u32, right: u32) -> LocalRule {
    LocalRule::from_u128(
        number,
        Alphabet::new(p).unwrap(),
        Neighborhood::new(left, right),
    )
    .unwrap()
}

fn strict_set(left: u32, right: u32) -> Result<Vec<u128>, String> {
    let mut spec = SweepSpec::exhaustive(
        Alphabet::BINARY,
        Neighborhood::new(left, right),
        SweepMode::Strict,
    )
    .map_err(err)?;
    spec.keep = RecordFilter::Positive;
    Ok(sweep(&spec).map_err(err)?.rules_with_verdict("strict"))
}

fn strict_elementary() -> Outcome {
    let got = strict_set(1, 1)?;
    ensure(got == STRICT_ELEMENTARY, || format!("got {got:?}"))?;
    Ok(format!("{got:?}"))
}

fn strict_one_two() -> Outcome {
    let got = strict_set(1, 2)?;
    ensure(got == STRICT_1_2, || {
        format!("got {} rules: {got:?}", got.len())
    })?;
    Ok(format!("{} rules match", got.len()))
}

fn mirror_check() -> Outcome {
    let got: BTreeSet<u128> = strict_set(2, 1)?.into_iter().collect();
    let expected: BTreeSet<u128> = STRICT_1_2
        .iter()
        .map(|&x| mirror_rule(&rule(x, 2, 1, 2)).to_u128().unwrap())
        .collect();
    ensure(got == expected, || {
        format!("(2,1) sweep {got:?} vs mirrored {expected:?}")
    })?;
    Ok(format!("{} rules match", got.len()))
}

fn classes() -> Outcome {
    let table = table5_report().map_err(err)?;
    ensure(table.groups.len() == CLASSES.len(), || {
        format!("{} groups", table.groups.len())
    })?;
    for (group, (rules, description)) in table.groups.iter().zip(CLASSES) {
        ensure(group.rules == rules, || {
            format!("group {:?} expected {rules:?}", group.rules)
        })?;
        ensure(group.description == description, || {
            format!(
                "group {:?} described as {:?}",
                group.rules, group.description
            )
        })?;
    }
    Ok("6 classes with exact memberships".into())
}

fn oracle_equivalence() -> Outcome {
    let budget = OracleBudget::default();
    let mut checked = 0usize;
    let mut check = |r: &LocalRule, max_n: usize| -> Result<(), String> {
        let f = reversibility_function(r, DEFAULT_MAX_BUCKETS).map_err(err)?;
        for n in 1..=max_n {
            let truth = brute_force_reversible(r, n, &budget).map_err(err)?;
            ensure(f.value(n) == truth, || {
                format!("{r:?} n={n}: chain {} oracle {truth}", f.value(n))
            })?;
            checked += 1;
        }
        Ok(())
    };
    for x in 0..256 {
        check(&rule(x, 2, 1, 1), 12)?;
    }
    let shapes = [(1, 2), (2, 1), (2, 2)];
    for (i, (left, right)) in shapes.into_iter().enumerate() {
        let count = if i == 0 { 68 } else { 66 };
        let space = rule_space(Alphabet::BINARY, Neighborhood::new(left, right)).map_err(err)?;
        for x in sample_rules(space, count, 2024 + i as u64) {
            check(&rule(x, 2, left, right), 10)?;
        }
    }
    let space = rule_space(Alphabet::new(3).unwrap(), Neighborhood::ELEMENTARY).map_err(err)?;
    for x in sample_rules(space, 100, 2027) {
        check(&rule(x, 3, 1, 1), 7)?;
    }
    Ok(format!("{checked} (rule, n) pairs, 0 mismatches"))
}

fn strict_consistency() -> Outcome {
    let mut rules: Vec<LocalRule> = (0..256).map(|x| rule(x, 2, 1, 1)).collect();
    rules.extend((0..65536).map(|x| rule(x, 2, 1, 2)));
    rules.extend((0..65536).map(|x| rule(x, 2, 2, 1)));
    let mut violations = Vec::new();
    for r in &rules {
        if !strict_equals_allones(r).map_err(err)? {
            violations.push(r.to_u128().unwrap());
        }
    }
    ensure(violations.is_empty(), || {
        format!("violations: {violations:?}")
    })?;
    Ok(format!("{} rules, 0 violations", rules.len()))
}

fn node_counts() -> Outcome {
    let numbers: Vec<u128> = NODE_COUNTS
        .iter()
        .flat_map(|(rules, _, _)| rules.iter().copied())
        .collect();
    let rows = table2_report(&numbers).map_err(err)?;
    for row in &rows {
        ensure(row.full.surjective == row.optimized.surjective, || {
            format!("rule {} b={} variants disagree", row.rule, row.b)
        })?;
        ensure(row.optimized.node_count <= row.full.node_count, || {
            format!("rule {} b={} optimized > full", row.rule, row.b)
        })?;
    }
    let mut seeds = Vec::new();
    for (rules, full, optimized) in NODE_COUNTS {
        for &number in rules {
            let matching: Vec<u8> = rows
                .iter()
                .filter(|r| {
                    r.rule == number
                        && r.full.node_count == full
                        && r.optimized.node_count == optimized
                })
                .map(|r| r.b)
                .collect();
            ensure(!matching.is_empty(), || {
                let got: Vec<String> = rows
                    .iter()
                    .filter(|r| r.rule == number)
                    .map(|r| {
                        format!(
                            "b={}: {}/{}",
                            r.b, r.full.node_count, r.optimized.node_count
                        )
                    })
                    .collect();
                format!(
                    "rule {number} expected {full}/{optimized}, got {}",
                    got.join(", ")
                )
            })?;
            seeds.push(format!("{number}@b={}", matching[0]));
        }
    }
    Ok(format!("counts match ({})", seeds.join(" ")))
}

fn rule46() -> Outcome {
    let r = rule(46, 2, 1, 1);
    for variant in [Variant::Full, Variant::Optimized] {
        for b in [0, 1] {
            let (verdict, _) = decide_surjective(&r, variant, b).map_err(err)?;
            ensure(!verdict.surjective, || {
                format!("{variant} b={b} says surjective")
            })?;
        }
    }
    Ok("non-surjective under both variants".into())
}

fn wide_rule() -> Outcome {
    let r = rule(WIDE_RULE, 2, 2, 2);
    let start = Configuration::parse("10110", r.alphabet()).map_err(err)?;
    let image = evolve_null(&r, &start).map_err(err)?;
    ensure(image.to_string() == "10010", || format!("image {image}"))?;
    let pre = preimages(&r, &image, &OracleBudget::default()).map_err(err)?;
    ensure(pre.contains(&start), || {
        "10110 missing from the preimages".into()
    })?;
    Ok(format!("10110 -> 10010, {} preimages", pre.len()))
}

fn bucket_bound() -> Outcome {
    let mut spec = SweepSpec::new(
        Alphabet::BINARY,
        Neighborhood::new(2, 2),
        SweepMode::Revfun,
        RuleSelection::Sample {
            count: 100_000,
            seed: 34,
        },
    );
    spec.keep = RecordFilter::Positive;
    let report = sweep(&spec).map_err(err)?;
    let max = report.aggregate.max_buckets.unwrap_or(0);
    ensure(max <= 34, || format!("observed {max} distinct buckets"))?;
    Ok(format!(
        "observed maximum {max} over {} rules",
        report.aggregate.rules
    ))
}

fn long_run() -> Option<Outcome> {
    if std::env::var("NULLCA_LONG_RUN").as_deref() != Ok("1") {
        return None;
    }
    let run = || -> Outcome {
        let mut spec =
            SweepSpec::exhaustive(Alphabet::BINARY, Neighborhood::new(2, 2), SweepMode::Strict)
                .map_err(err)?;
        spec.keep = RecordFilter::Positive;
        spec.long_run = true;
        spec.block_size = 1 << 20;
        spec.checkpoint = Some(
            std::env::var_os("NULLCA_LONG_RUN_CHECKPOINT")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("target/long-run.journal")),
        );
        let report = sweep(&spec).map_err(err)?;
        let strict = report.rules_with_verdict("strict");
        ensure(strict.len() == 186, || {
            format!("{} strict rules", strict.len())
        })?;
        Ok(format!("186 strict rules in {:.0?}", report.wall_time))
    };
    Some(run())
}

fn resume() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut spec =
        SweepSpec::exhaustive(Alphabet::BINARY, Neighborhood::new(1, 2), SweepMode::Revfun)
            .map_err(err)?;
    spec.block_size = 512;
    let reference = sweep(&spec).map_err(err)?.to_csv();

    spec.checkpoint = Some(dir.path().join("journal"));
    let mut interruptions = 0;
    let resumed = loop {
        match sweep_limited(&spec, Some(37)).map_err(err)? {
            Some(report) => break report.to_csv(),
            None => interruptions += 1,
        }
    };
    ensure(resumed == reference, || "resumed CSV differs".into())?;
    Ok(format!(
        "byte-identical after {interruptions} interruptions"
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("strict elementary rules", Box::new(|| Some(strict_elementary()))),
        ("strict rules at radii (1,2)", Box::new(|| Some(strict_one_two()))),
        ("mirror of the (1,2) set", Box::new(|| Some(mirror_check()))),
        (
            "elementary reversibility classes",
            Box::new(|| Some(classes())),
        ),
        (
            "bucket chain vs brute force",
            Box::new(|| Some(oracle_equivalence())),
        ),
        (
            "strict iff function is all ones",
            Box::new(|| Some(strict_consistency())),
        ),
        ("surjectivity node counts", Box::new(|| Some(node_counts()))),
        ("rule 46 non-surjective", Box::new(|| Some(rule46()))),
        ("rule 4161270000 evolution", Box::new(|| Some(wide_rule()))),
        (
            "distinct buckets at most 34",
            Box::new(|| Some(bucket_bound())),
        ),
        ("186 strict rules at radii (2,2)", Box::new(long_run)),
        ("checkpoint resume", Box::new(|| Some(resume()))),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Some(Err("panicked".into())));
        let elapsed = started.elapsed();
        match outcome {
            None => println!("[SKIP] {:>2} {name}: set NULLCA_LONG_RUN=1 to run", i + 1),
            Some(Ok(detail)) => println!("[PASS] {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Some(Err(detail)) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
