use std::path::Path;

use anyhow::{bail, Context};
use mubwit::classify::{
    classify_subsets, parse_subset, render_table, subset_label, ClassificationReport, DEFAULT_CLUSTER_TOL,
};
use mubwit::family::Family;
use mubwit::mub::{verify_mub_set, MubSet};
use mubwit::optimize::{
    lower_bound, maximize_over_local_unitaries, minimize_over_local_unitaries, BoundEstimate, OptimizerConfig,
};
use mubwit::reproduce::{reproduce, MagicGrid, ReproduceOptions, Target};
use mubwit::states::{is_ppt, magic_simplex_state, werner_state};
use mubwit::witness::upper_bound;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Command, Flags, Format, Invocation};
use crate::error::{classify_core, usage};
use crate::manifest::{read_input, sha256_hex, InputDigest, RunManifest};
use crate::output;

pub struct Output {
    pub bytes: Vec<u8>,
    pub success: bool,
    pub inputs: Vec<InputDigest>,
}

pub fn run(inv: &Invocation) -> anyhow::Result<Output> {
    let f = &inv.flags;
    match &inv.command {
        Command::Build => build(f),
        Command::Bounds => bounds(f),
        Command::Scan => scan(f),
        Command::Classify => classify(f),
        Command::Reproduce { target } => reproduce_target(f, target),
        Command::Replay { manifest } => replay(manifest),
    }
}

fn core<T>(r: mubwit::Result<T>) -> anyhow::Result<T> {
    r.map_err(classify_core)
}

pub fn seed(f: &Flags) -> u64 {
    f.seed.unwrap_or(OptimizerConfig::default().seed)
}

fn optimizer(f: &Flags, d: usize) -> OptimizerConfig {
    let mut config = OptimizerConfig::for_dimension(d).with_seed(seed(f));
    if let Some(r) = f.restarts {
        config = config.with_restarts(r);
    }
    config
}

fn expect_dim(f: &Flags, family: &str, d: usize) -> anyhow::Result<()> {
    match f.d {
        Some(given) if given != d => Err(usage(format!("family {family} lives in d = {d}, not {given}"))),
        _ => Ok(()),
    }
}

/// The set named by `--family` (default `hw`) and its parameters.
fn family_set(f: &Flags) -> anyhow::Result<MubSet<f64>> {
    let name = f.family.as_deref().unwrap_or("hw");
    let family = match name {
        "hw" => Family::Hw {
            dim: f.d.ok_or_else(|| usage("--d is required for the hw family"))?,
        },
        "fourier4" | "h4" => {
            expect_dim(f, name, 4)?;
            Family::D4 {
                x: f.x.unwrap_or(0.5),
                y: f.y.unwrap_or(0.0),
                z: f.z.unwrap_or(0.0),
            }
        }
        "tao6" => {
            expect_dim(f, name, 6)?;
            Family::Tao
        }
        "a7" => {
            expect_dim(f, name, 7)?;
            Family::Grassl
        }
        other => {
            return Err(usage(format!(
                "unknown MUB family {other:?} (expected hw, fourier4, h4, tao6 or a7)"
            )))
        }
    };
    let set = core(family.build::<f64>())?;
    if name == "fourier4" {
        return core(set.subset(&[0, 1]));
    }
    Ok(set)
}

fn load_set(path: &Path) -> anyhow::Result<(MubSet<f64>, InputDigest)> {
    let (bytes, digest) = read_input(path)?;
    let set: MubSet<f64> = serde_json::from_slice(&bytes).with_context(|| format!("set file {}", path.display()))?;
    let report = verify_mub_set(&set, 1e-8);
    if !report.ok {
        bail!(
            "{} is not a MUB set (deviation {:.2e})",
            path.display(),
            report.max_deviation
        );
    }
    Ok((set, digest))
}

/// Zero-based positions picked by `--subset` or `--m`, if any.
fn selection(f: &Flags, len: usize) -> anyhow::Result<Option<Vec<usize>>> {
    let picked = match (&f.subset, f.m) {
        (Some(s), m) => {
            let idx = parse_subset(s).map_err(|e| usage(e.to_string()))?;
            if m.is_some_and(|m| m != idx.len()) {
                return Err(usage("--m disagrees with the length of --subset"));
            }
            Some(idx)
        }
        (None, Some(m)) => Some((0..m).collect()),
        (None, None) => None,
    };
    if let Some(idx) = &picked {
        if idx.is_empty() || idx.iter().any(|&i| i >= len) {
            return Err(usage(format!("subset must pick bases among 1..={len}")));
        }
    }
    Ok(picked)
}

fn apply_selection(set: MubSet<f64>, f: &Flags) -> anyhow::Result<(MubSet<f64>, Vec<usize>)> {
    match selection(f, set.len())? {
        Some(idx) => Ok((core(set.subset(&idx))?, idx)),
        None => {
            let idx = (0..set.len()).collect();
            Ok((set, idx))
        }
    }
}

/// First `--set` file, else `--family`.
fn source_set(f: &Flags) -> anyhow::Result<(MubSet<f64>, Vec<InputDigest>)> {
    match f.set.as_slice() {
        [] => Ok((family_set(f)?, vec![])),
        [path] => {
            let (set, digest) = load_set(path)?;
            Ok((set, vec![digest]))
        }
        _ => Err(usage("this command takes a single --set file")),
    }
}

// ---------------------------------------------------------------------------
// build

#[derive(Serialize)]
struct EntryRow {
    basis: usize,
    label: String,
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

fn build(f: &Flags) -> anyhow::Result<Output> {
    let (set, inputs) = source_set(f)?;
    let (set, _) = apply_selection(set, f)?;
    let tol = f.tol.unwrap_or(1e-10);
    let report = verify_mub_set(&set, tol);
    if !report.ok {
        eprintln!(
            "verification failed: max deviation {:.3e} > {tol:e}",
            report.max_deviation
        );
        return Ok(Output {
            bytes: output::json(&report)?,
            success: false,
            inputs,
        });
    }
    let bytes = match f.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&set)?,
        Format::Csv => {
            let d = set.dim();
            let rows: Vec<EntryRow> = set
                .bases()
                .iter()
                .enumerate()
                .flat_map(|(k, b)| {
                    (0..d).flat_map(move |i| {
                        (0..d).map(move |j| EntryRow {
                            basis: k + 1,
                            label: b.label().to_string(),
                            row: i,
                            col: j,
                            re: b.matrix()[(i, j)].re,
                            im: b.matrix()[(i, j)].im,
                        })
                    })
                })
                .collect();
            output::csv(&rows)?
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = set
                .bases()
                .iter()
                .enumerate()
                .map(|(k, b)| vec![format!("B{}", k + 1), b.label().to_string()])
                .collect();
            format!(
                "{} (d = {}, {} bases, max deviation {:.1e})\n{}",
                set.provenance(),
                set.dim(),
                set.len(),
                report.max_deviation,
                output::table(&["basis", "label"], &rows)
            )
            .into_bytes()
        }
    };
    Ok(Output {
        bytes,
        success: true,
        inputs,
    })
}

// ---------------------------------------------------------------------------
// bounds

#[derive(Serialize)]
struct BoundsReport {
    set: String,
    subset: String,
    dim: usize,
    m: usize,
    lower_bound: f64,
    upper_bound: String,
    upper_bound_value: f64,
    estimate: BoundEstimate,
}

#[derive(Serialize)]
struct BoundsRow<'a> {
    set: &'a str,
    subset: &'a str,
    dim: usize,
    m: usize,
    lower_bound: f64,
    upper_bound: &'a str,
    upper_bound_value: f64,
    restarts: usize,
    hits: usize,
    converged_fraction: f64,
    seed: u64,
}

fn bounds(f: &Flags) -> anyhow::Result<Output> {
    let (set, inputs) = source_set(f)?;
    let provenance = set.provenance().to_string();
    let (sub, idx) = apply_selection(set, f)?;
    let d = sub.dim();
    let mut config = optimizer(f, d);
    if let Some(t) = f.tol {
        config.gradient_tolerance = t;
    }
    let est = lower_bound(&sub, &config);
    let u = core(upper_bound(d, sub.len()))?;
    let report = BoundsReport {
        set: provenance,
        subset: subset_label(&idx),
        dim: d,
        m: sub.len(),
        lower_bound: est.value,
        upper_bound: u.to_string(),
        upper_bound_value: *u.numer() as f64 / *u.denom() as f64,
        estimate: est,
    };
    let bytes = match f.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&report)?,
        Format::Csv => output::csv(&[BoundsRow {
            set: &report.set,
            subset: &report.subset,
            dim: d,
            m: report.m,
            lower_bound: report.lower_bound,
            upper_bound: &report.upper_bound,
            upper_bound_value: report.upper_bound_value,
            restarts: report.estimate.restarts,
            hits: report.estimate.hits,
            converged_fraction: report.estimate.converged_fraction,
            seed: report.estimate.seed,
        }])?,
        Format::Table => output::table(
            &["set", "subset", "d", "m", "L", "U", "hits"],
            &[vec![
                report.set.clone(),
                report.subset.clone(),
                d.to_string(),
                report.m.to_string(),
                format!("{:.6}", report.lower_bound),
                report.upper_bound.clone(),
                format!("{}/{}", report.estimate.hits, report.estimate.restarts),
            ]],
        )
        .into_bytes(),
    };
    Ok(Output {
        bytes,
        success: true,
        inputs,
    })
}

// ---------------------------------------------------------------------------
// scan

#[derive(Debug, Clone, Serialize)]
struct ScanRow {
    state: String,
    param: f64,
    set: String,
    m: usize,
    raw: Option<f64>,
    optimized_max: Option<f64>,
    optimized_min: Option<f64>,
    lower_bound: f64,
    upper_bound: f64,
    violated: String,
    ppt: Option<bool>,
    ppt_min_eigenvalue: Option<f64>,
    status: String,
}

struct ScanSet {
    label: String,
    set: MubSet<f64>,
    lower: f64,
    upper: f64,
}

fn scan(f: &Flags) -> anyhow::Result<Output> {
    let state = f.family.as_deref().unwrap_or("magic");
    let (d, from, to, steps) = match state {
        "magic" => (f.d.unwrap_or(4), 0.0, 0.25, 25),
        "werner" => (f.d.unwrap_or(3), -1.0, 1.0, 20),
        other => {
            return Err(usage(format!(
                "unknown state family {other:?} (expected magic or werner)"
            )))
        }
    };
    if d < 2 {
        return Err(usage("--d must be at least 2"));
    }
    let from = f.from.unwrap_or(from);
    let to = f.to.unwrap_or(to);
    let steps = f.steps.unwrap_or(steps).max(1);

    let mut inputs = Vec::new();
    let mut raw_sets: Vec<(String, MubSet<f64>)> = Vec::new();
    if f.set.is_empty() {
        let hw = core(Family::Hw { dim: d }.build::<f64>())?;
        let default_m = if state == "magic" { 3.min(hw.len()) } else { hw.len() };
        let idx = selection(f, hw.len())?.unwrap_or_else(|| (0..default_m).collect());
        raw_sets.push((format!("hw:{d} {}", subset_label(&idx)), core(hw.subset(&idx))?));
        if state == "magic" && d == 4 && f.subset.is_none() && f.m.is_none() {
            raw_sets.push((
                "d4:0.5,0,0 B1B2B3".into(),
                core(Family::D4 { x: 0.5, y: 0.0, z: 0.0 }.build::<f64>())?,
            ));
        }
    } else {
        for path in &f.set {
            let (set, digest) = load_set(path)?;
            if set.dim() != d {
                return Err(usage(format!(
                    "{} has d = {}, scanning d = {d}",
                    path.display(),
                    set.dim()
                )));
            }
            let (sub, idx) = apply_selection(set, f)?;
            raw_sets.push((format!("{} {}", path.display(), subset_label(&idx)), sub));
            inputs.push(digest);
        }
    }
    let sets: Vec<ScanSet> = raw_sets
        .into_iter()
        .map(|(label, set)| {
            let lower = lower_bound(&set, &optimizer(f, d)).value;
            let u = core(upper_bound(d, set.len()))?;
            Ok(ScanSet {
                label,
                upper: *u.numer() as f64 / *u.denom() as f64,
                lower,
                set,
            })
        })
        .collect::<anyhow::Result<_>>()?;

    let margin = f.tol.unwrap_or(1e-6);
    let lu = optimizer(f, d).with_restarts(f.lu_restarts.unwrap_or(16));
    let params: Vec<f64> = (0..=steps)
        .map(|i| from + (to - from) * i as f64 / steps as f64)
        .collect();
    let rows: Vec<ScanRow> = params
        .par_iter()
        .map(|&p| {
            let rho = match state {
                "magic" => magic_simplex_state::<f64>(d, p, p),
                _ => werner_state::<f64>(d, p),
            };
            let skipped = |msg: String| -> Vec<ScanRow> {
                sets.iter()
                    .map(|s| ScanRow {
                        state: state.into(),
                        param: p,
                        set: s.label.clone(),
                        m: s.set.len(),
                        raw: None,
                        optimized_max: None,
                        optimized_min: None,
                        lower_bound: s.lower,
                        upper_bound: s.upper,
                        violated: String::new(),
                        ppt: None,
                        ppt_min_eigenvalue: None,
                        status: format!("skipped: {msg}"),
                    })
                    .collect()
            };
            let rho = match rho {
                Ok(r) => r,
                Err(e) => return Ok(skipped(e.to_string())),
            };
            let ppt = is_ppt(&rho, 1e-12)?;
            sets.iter()
                .map(|s| {
                    let max = maximize_over_local_unitaries(&rho, &s.set, &lu)?;
                    let min = minimize_over_local_unitaries(&rho, &s.set, &lu)?;
                    let upper = max.value > s.upper + margin;
                    let lower = min.value < s.lower - margin;
                    Ok(ScanRow {
                        state: state.into(),
                        param: p,
                        set: s.label.clone(),
                        m: s.set.len(),
                        raw: Some(max.unrotated_value),
                        optimized_max: Some(max.value),
                        optimized_min: Some(min.value),
                        lower_bound: s.lower,
                        upper_bound: s.upper,
                        violated: match (upper, lower) {
                            (true, true) => "both",
                            (true, false) => "upper",
                            (false, true) => "lower",
                            (false, false) => "none",
                        }
                        .into(),
                        ppt: Some(ppt.ppt),
                        ppt_min_eigenvalue: Some(ppt.min_eigenvalue),
                        status: "ok".into(),
                    })
                })
                .collect::<mubwit::Result<Vec<_>>>()
        })
        .collect::<mubwit::Result<Vec<Vec<ScanRow>>>>()
        .map_err(classify_core)?
        .into_iter()
        .flatten()
        .collect();
    for r in rows.iter().filter(|r| r.status != "ok") {
        eprintln!("warning: {} = {} {}", r.state, r.param, r.status);
    }

    let bytes = match f.format.unwrap_or(Format::Csv) {
        Format::Json => output::json(&rows)?,
        Format::Csv => output::csv(&rows)?,
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format!("{:.4}", r.param),
                        r.set.clone(),
                        output::opt(r.raw),
                        output::opt(r.optimized_max),
                        output::opt(r.optimized_min),
                        format!("{:.4}", r.lower_bound),
                        format!("{:.4}", r.upper_bound),
                        r.violated.clone(),
                        r.ppt.map_or_else(String::new, |p| p.to_string()),
                        r.status.clone(),
                    ]
                })
                .collect();
            output::table(
                &[
                    "param", "set", "raw", "max", "min", "L", "U", "violated", "ppt", "status",
                ],
                &body,
            )
            .into_bytes()
        }
    };
    Ok(Output {
        bytes,
        success: true,
        inputs,
    })
}

// ---------------------------------------------------------------------------
// classify

#[derive(Serialize)]
struct ClassRow {
    m: usize,
    subset: String,
    lower_bound: f64,
    class: usize,
    class_value: f64,
    multiplicity: usize,
}

fn classify(f: &Flags) -> anyhow::Result<Output> {
    if f.subset.is_some() {
        return Err(usage("classify takes --m, not --subset"));
    }
    let (set, inputs) = source_set(f)?;
    let ms: Vec<usize> = match f.m {
        Some(m) if m >= 1 && m <= set.len() => vec![m],
        Some(m) => return Err(usage(format!("--m {m} outside 1..={}", set.len()))),
        None => (2..=set.len()).collect(),
    };
    let config = optimizer(f, set.dim());
    let tol = f.tol.unwrap_or(DEFAULT_CLUSTER_TOL);
    let reports: Vec<ClassificationReport> = ms
        .iter()
        .map(|&m| core(classify_subsets(&set, m, &config, tol)))
        .collect::<anyhow::Result<_>>()?;
    let bytes = match f.format.unwrap_or(Format::Table) {
        Format::Json => output::json(&reports)?,
        Format::Csv => {
            let rows: Vec<ClassRow> = reports
                .iter()
                .flat_map(|r| {
                    r.classes.iter().enumerate().flat_map(move |(k, c)| {
                        c.members.iter().map(move |s| ClassRow {
                            m: r.m,
                            subset: subset_label(s),
                            lower_bound: r
                                .fingerprints
                                .iter()
                                .find(|fp| &fp.subset == s)
                                .map_or(f64::NAN, |fp| fp.lower_bound),
                            class: k + 1,
                            class_value: c.value,
                            multiplicity: c.multiplicity,
                        })
                    })
                })
                .collect();
            output::csv(&rows)?
        }
        Format::Table => render_table(&reports).into_bytes(),
    };
    Ok(Output {
        bytes,
        success: true,
        inputs,
    })
}

// ---------------------------------------------------------------------------
// reproduce

fn reproduce_target(f: &Flags, target: &str) -> anyhow::Result<Output> {
    let target: Target = target.parse().map_err(|e: mubwit::Error| usage(e.to_string()))?;
    let defaults = MagicGrid::default();
    let opts = ReproduceOptions {
        restarts: f.restarts,
        seed: seed(f),
        cluster_tol: f.tol.unwrap_or(DEFAULT_CLUSTER_TOL),
        full_scan: f.full_scan,
        grid: MagicGrid {
            alpha_max: f.to.unwrap_or(defaults.alpha_max),
            steps: f.steps.unwrap_or(defaults.steps),
            restarts: f.lu_restarts.unwrap_or(defaults.restarts),
        },
    };
    let report = core(reproduce(target, &opts))?;
    let bytes = match f.format.unwrap_or(Format::Table) {
        Format::Json => output::json(&report)?,
        Format::Csv => match &report.magic {
            Some(magic) => output::csv(&magic.points)?,
            None => output::csv(&report.rows)?,
        },
        Format::Table => report.render().into_bytes(),
    };
    if !report.passed() {
        for r in report.rows.iter().filter(|r| !r.pass) {
            eprintln!("FAIL {}: expected {}, observed {}", r.id, r.expected, r.observed);
        }
    }
    Ok(Output {
        bytes,
        success: report.passed(),
        inputs: vec![],
    })
}

// ---------------------------------------------------------------------------
// replay

fn replay(path: &Path) -> anyhow::Result<Output> {
    let (bytes, digest) = read_input(path)?;
    let manifest: RunManifest =
        serde_json::from_slice(&bytes).map_err(|e| usage(format!("manifest {}: {e}", path.display())))?;
    if matches!(manifest.config.command, Command::Replay { .. }) {
        return Err(usage("a replay manifest cannot itself be replayed"));
    }
    let mut notes = Vec::new();
    for input in &manifest.inputs {
        let (_, now) = read_input(&input.path)?;
        if now.sha256 != input.sha256 {
            notes.push(format!("input {} changed", input.path.display()));
        }
    }
    let rerun = run(&manifest.config)?;
    let got = sha256_hex(&rerun.bytes);
    let same = got == manifest.output_digest;
    if !same {
        notes.push(format!(
            "output digest {got} differs from recorded {}",
            manifest.output_digest
        ));
    }
    let text = if notes.is_empty() {
        format!("replay ok: {} bytes, sha256 {got}\n", rerun.bytes.len())
    } else {
        format!("replay mismatch: {}\n", notes.join("; "))
    };
    Ok(Output {
        bytes: text.into_bytes(),
        success: notes.is_empty(),
        inputs: vec![digest],
    })
}
