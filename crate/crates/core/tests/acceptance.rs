//! Acceptance gate: one pass/fail line per criterion. Pass criterion numbers
//! as arguments to run a subset.

mod common;

use std::time::Instant;

use mubwit::optimize::OptimizerConfig;
use mubwit::reference::{Check, ReferenceData};
use mubwit::reproduce::{evaluate_entry, reproduce, ReproduceOptions, ReproduceReport, Target};

fn summarize(report: &ReproduceReport) -> common::Outcome {
    let failed: Vec<String> = report
        .rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} expected {} observed {}", r.id, r.expected, r.observed))
        .collect();
    let worst = report.rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    if failed.is_empty() {
        Ok(format!("{} checks, worst deviation {worst:.1e}", report.rows.len()))
    } else {
        Err(failed.join("; "))
    }
}

fn target(t: Target) -> common::Outcome {
    let report = reproduce(t, &ReproduceOptions::default()).map_err(|e| e.to_string())?;
    summarize(&report)
}

fn upper_bounds() -> common::Outcome {
    let data = ReferenceData::bundled().map_err(|e| e.to_string())?;
    let opts = ReproduceOptions::default();
    let mut cells = 0;
    for e in data
        .entries
        .iter()
        .filter(|e| matches!(e.check, Check::UpperBound { .. }))
    {
        let (row, _) = evaluate_entry(e, &opts).map_err(|e| e.to_string())?;
        if !row.pass {
            return Err(format!("{}: expected {} got {}", row.id, row.expected, row.observed));
        }
        cells += 1;
    }
    Ok(format!("{cells} cells equal as exact fractions"))
}

fn magic_states() -> common::Outcome {
    let report = reproduce(Target::Fig1, &ReproduceOptions::default()).map_err(|e| e.to_string())?;
    let magic = report.magic.as_ref().expect("magic experiment");
    summarize(&report).map(|s| format!("{s}; α* = {:.4}", magic.ppt_boundary))
}

type Suite = fn() -> common::Outcome;

fn properties() -> common::Outcome {
    let checks: [(&str, Suite); 9] = [
        ("unbiasedness", common::unbiasedness),
        ("complete-set swap identity", common::complete_set_swap_identity),
        ("linearity", common::linearity),
        ("product fast path", common::product_fast_path),
        ("Werner invariance", common::werner_invariance),
        ("gradients", common::gradients),
        ("equivalence invariance", || {
            common::equivalence_invariance(&OptimizerConfig::default())
        }),
        ("partial transpose", common::partial_transpose_properties),
        ("sampling floor", || {
            common::sampling_floor(OptimizerConfig::for_dimension, 1_000_000)
        }),
    ];
    let mut failures = Vec::new();
    for (name, f) in checks {
        if let Err(e) = f() {
            failures.push(format!("{name}: {e}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{} property suites hold", checks.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn main() {
    let criteria: [(u32, &str, Suite); 9] = [
        (1, "upper bound U_m = 1 + (m-1)/d, exact", upper_bounds),
        (2, "table1 lower bounds, d = 2, 3, 4", || target(Target::Table1)),
        (3, "table2 lower bounds and triple classes, d = 5", || {
            target(Target::Table2)
        }),
        (4, "table3 lower bounds and quadruplet classes, d = 7", || {
            target(Target::Table3)
        }),
        (5, "d = 6 Tao pair and Heisenberg-Weyl triple", || target(Target::D6)),
        (6, "d = 8 lower bounds, single class per m", || target(Target::D8)),
        (7, "d = 9 class values, representative subsets", || target(Target::D9)),
        (8, "d = 4 magic-state detection", magic_states),
        (9, "property suites", properties),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (n, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n} PASS  {name} ({detail}) [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} FAIL  {name} ({detail}) [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
