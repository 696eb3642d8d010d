//! Property checks shared by the standalone property suite and the
//! acceptance gate. Each returns a one-line summary or the first violation.

#![allow(dead_code)]

use mubwit::family::Family;
use mubwit::mub::{verify_mub_set, Basis, MubSet};
use mubwit::optimize::{
    gradient_check, lower_bound, Goal, LocalUnitaryFamily, LocalUnitaryObjective, Objective, OptimizerConfig,
    ProductObjective,
};
use mubwit::reference::{zero_based, Check, ReferenceData};
use mubwit::sampling::{random_density_matrix, random_state, random_unitary};
use mubwit::states::{swap_operator, werner_state, DensityMatrix};
use mubwit::witness::{witness_value, witness_value_product};
use mubwit::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type Outcome = Result<String, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every construction in the library.
pub fn all_constructed_sets() -> Vec<MubSet<f64>> {
    let mut sets: Vec<MubSet<f64>> = [2, 3, 4, 5, 6, 7, 8, 9, 10, 12]
        .into_iter()
        .map(|d| Family::Hw { dim: d }.build().unwrap())
        .collect();
    for (x, y, z) in [
        (0.5, 0.0, 0.0),
        (0.5, 0.5, 0.5),
        (0.25, 0.3, 0.7),
        (0.0, 1.0, 0.5),
        (0.9, 0.1, 0.6),
    ] {
        sets.push(Family::D4 { x, y, z }.build().unwrap());
    }
    sets.push(Family::Tao.build().unwrap());
    sets.push(Family::Grassl.build().unwrap());
    sets
}

pub fn unbiasedness() -> Outcome {
    let sets = all_constructed_sets();
    let mut worst = 0.0f64;
    for set in &sets {
        let report = verify_mub_set(set, 1e-10);
        ensure(report.ok, || format!("{}: {:?}", set.provenance(), report))?;
        worst = worst.max(report.max_deviation);
    }
    Ok(format!("{} sets, worst deviation {worst:.1e}", sets.len()))
}

pub fn complete_set_swap_identity() -> Outcome {
    let mut r = rng(11);
    let mut worst = 0.0f64;
    for d in 2..=5 {
        let set = Family::Hw { dim: d }.build().unwrap();
        let swap = swap_operator::<f64>(d);
        for _ in 0..20 {
            let rho = random_density_matrix(d, &mut r);
            let m = witness_value(&rho, &set).unwrap().value;
            let expect = 1.0 + swap.matmul(rho.matrix()).unwrap().trace().re;
            worst = worst.max((m - expect).abs());
        }
    }
    ensure(worst < 1e-10, || format!("deviation {worst:.2e}"))?;
    Ok(format!("d=2..5, 80 random states, worst {worst:.1e}"))
}

pub fn linearity() -> Outcome {
    let mut r = rng(12);
    let mut worst = 0.0f64;
    for d in [2, 3, 4, 5, 7] {
        let set = Family::Hw { dim: d }.build().unwrap().subset(&[0, 1, 2]).unwrap();
        for _ in 0..10 {
            let a = random_density_matrix(d, &mut r);
            let b = random_density_matrix(d, &mut r);
            let p: f64 = r.random();
            let mix = DensityMatrix::mixture(&[(p, &a), (1.0 - p, &b)]).unwrap();
            let lhs = witness_value(&mix, &set).unwrap().value;
            let rhs = p * witness_value(&a, &set).unwrap().value + (1.0 - p) * witness_value(&b, &set).unwrap().value;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    ensure(worst < 1e-12, || format!("deviation {worst:.2e}"))?;
    Ok(format!("50 mixtures, worst {worst:.1e}"))
}

pub fn product_fast_path() -> Outcome {
    let mut r = rng(13);
    let mut worst = 0.0f64;
    for set in all_constructed_sets().iter().filter(|s| s.dim() <= 7) {
        let d = set.dim();
        for _ in 0..5 {
            let a = random_state(d, &mut r);
            let b = random_state(d, &mut r);
            let fast = witness_value_product(&a, &b, set).unwrap();
            let dense = witness_value(&DensityMatrix::product(&a, &b).unwrap(), set)
                .unwrap()
                .value;
            let obj = ProductObjective::new(set).value_for_states(a.amplitudes(), b.amplitudes());
            worst = worst.max((fast - dense).abs()).max((obj - dense).abs());
        }
    }
    ensure(worst < 1e-12, || format!("deviation {worst:.2e}"))?;
    Ok(format!("worst {worst:.1e}"))
}

pub fn werner_invariance() -> Outcome {
    let mut r = rng(14);
    let mut worst = 0.0f64;
    let cases: Vec<(MubSet<f64>, MubSet<f64>)> = vec![
        (
            Family::Hw { dim: 4 }.build().unwrap().subset(&[0, 1, 2]).unwrap(),
            Family::D4 { x: 0.5, y: 0.0, z: 0.0 }.build().unwrap(),
        ),
        (
            Family::Hw { dim: 5 }.build().unwrap().subset(&[0, 1, 2]).unwrap(),
            Family::Hw { dim: 5 }.build().unwrap().subset(&[0, 1, 3]).unwrap(),
        ),
        (
            Family::Hw { dim: 7 }.build().unwrap().subset(&[0, 1, 2]).unwrap(),
            Family::Grassl.build().unwrap(),
        ),
    ];
    for (s1, s2) in &cases {
        let d = s1.dim();
        let m = s1.len() as f64;
        for phi in [-1.0, -0.3, 0.0, 0.4, 1.0] {
            let rho = werner_state::<f64>(d, phi).unwrap();
            let u = random_unitary(d, &mut r);
            let rotated = rho.local_conjugate(&u, &u).unwrap();
            let closed = m * (1.0 - phi) / (d as f64 - phi);
            for v in [
                witness_value(&rho, s1).unwrap().value,
                witness_value(&rho, s2).unwrap().value,
                witness_value(&rotated, s1).unwrap().value,
            ] {
                worst = worst.max((v - closed).abs());
            }
            worst = worst.max(rotated.matrix().max_abs_diff(rho.matrix()));
        }
    }
    ensure(worst < 1e-10, || format!("deviation {worst:.2e}"))?;
    Ok(format!("3 set pairs × 5 parameters, worst {worst:.1e}"))
}

pub fn gradients() -> Outcome {
    let mut r = rng(15);
    let mut worst = 0.0f64;
    for d in [2, 3, 5, 8] {
        let set = Family::Hw { dim: d }.build().unwrap();
        let obj = ProductObjective::new(&set);
        for _ in 0..5 {
            let x: Vec<f64> = (0..obj.dim()).map(|_| r.random_range(0.1..3.0)).collect();
            worst = worst.max(gradient_check(&obj, &x));
        }
    }
    let set = Family::D4 { x: 0.5, y: 0.0, z: 0.0 }.build().unwrap();
    let rho = random_density_matrix(4, &mut r);
    for family in [LocalUnitaryFamily::Conjugate, LocalUnitaryFamily::Independent] {
        for goal in [Goal::Maximize, Goal::Minimize] {
            let obj = LocalUnitaryObjective::new(&rho, &set, family, goal).unwrap();
            let x: Vec<f64> = (0..obj.dim()).map(|_| r.random_range(-1.0..1.0)).collect();
            worst = worst.max(gradient_check(&obj, &x));
        }
    }
    ensure(worst < 1e-5, || format!("relative deviation {worst:.2e}"))?;
    Ok(format!("product and local-unitary objectives, worst {worst:.1e}"))
}

fn random_phases(d: usize, r: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..d)
        .map(|_| Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Global unitary, basis order, column order and column phases.
pub fn equivalence_invariance(config: &OptimizerConfig) -> Outcome {
    let mut r = rng(16);
    let cases = [
        Family::Hw { dim: 5 }.build().unwrap().subset(&[0, 1, 3]).unwrap(),
        Family::Hw { dim: 7 }.build().unwrap().subset(&[0, 1, 2, 4]).unwrap(),
        Family::Grassl.build().unwrap(),
        Family::D4 {
            x: 0.25,
            y: 0.3,
            z: 0.7,
        }
        .build()
        .unwrap(),
    ];
    let mut worst = 0.0f64;
    for set in &cases {
        let d = set.dim();
        let base = lower_bound(set, config).value;
        let u = random_unitary(d, &mut r);
        let mut perm: Vec<usize> = (0..set.len()).collect();
        perm.reverse();
        let transformed = set.transformed(&u).unwrap().subset(&perm).unwrap();
        let shuffled = transformed.map_bases(|b: &Basis<f64>| {
            let mut cols: Vec<usize> = (0..d).collect();
            cols.rotate_left(1);
            b.permuted(&cols).rephased(&random_phases(d, &mut r))
        });
        let v = lower_bound(&shuffled, config).value;
        worst = worst.max((v - base).abs());
    }
    ensure(worst < 2e-3, || format!("deviation {worst:.2e}"))?;
    Ok(format!("{} sets, worst {worst:.1e}", cases.len()))
}

pub fn partial_transpose_properties() -> Outcome {
    let mut r = rng(17);
    let mut worst = 0.0f64;
    for d in [2, 3, 4, 5] {
        for _ in 0..10 {
            let rho = random_density_matrix(d, &mut r);
            let pt = rho.partial_transpose();
            let back = pt.partial_transpose(d).unwrap();
            worst = worst
                .max(back.max_abs_diff(rho.matrix()))
                .max((pt.trace() - rho.matrix().trace()).norm())
                .max(pt.hermitian_defect());
        }
    }
    ensure(worst < 1e-12, || format!("deviation {worst:.2e}"))?;
    Ok(format!("40 states, worst {worst:.1e}"))
}

/// Every reference subset as `(label, set)`.
pub fn reference_subsets() -> Vec<(String, MubSet<f64>)> {
    let data = ReferenceData::bundled().unwrap();
    let mut out = Vec::new();
    for e in &data.entries {
        match &e.check {
            Check::LowerBound { family, subset, .. } | Check::LowerBoundRange { family, subset, .. } => {
                out.push((
                    e.id.clone(),
                    family.build().unwrap().subset(&zero_based(subset)).unwrap(),
                ));
            }
            Check::ClassValues {
                family,
                representatives,
                ..
            } => {
                let set = family.build().unwrap();
                for (i, s) in representatives.iter().enumerate() {
                    out.push((format!("{}#{i}", e.id), set.subset(&zero_based(s)).unwrap()));
                }
            }
            _ => {}
        }
    }
    out
}

/// Smallest sampled product-state value over `samples` Haar-random pairs.
pub fn sampled_floor(set: &MubSet<f64>, samples: usize, seed: u64) -> f64 {
    let obj = ProductObjective::new(set);
    let d = set.dim();
    let chunks = 16;
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng(seed);
            r.set_stream(c as u64);
            let n = samples / chunks + usize::from(c < samples % chunks);
            (0..n)
                .map(|_| {
                    let a = random_state(d, &mut r);
                    let b = random_state(d, &mut r);
                    obj.value_for_states(a.amplitudes(), b.amplitudes())
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// The optimizer's `L` is never undercut by random product states.
pub fn sampling_floor(config_for: impl Fn(usize) -> OptimizerConfig + Sync, samples: usize) -> Outcome {
    let subsets = reference_subsets();
    let mut tightest = f64::INFINITY;
    for (i, (label, set)) in subsets.iter().enumerate() {
        let l = lower_bound(set, &config_for(set.dim())).value;
        let floor = sampled_floor(set, samples, 1000 + i as u64);
        ensure(floor >= l - 1e-9, || format!("{label}: sampled {floor} below L = {l}"))?;
        tightest = tightest.min(floor - l);
    }
    Ok(format!(
        "{} subsets × {samples} samples, smallest margin {tightest:.1e}",
        subsets.len()
    ))
}
