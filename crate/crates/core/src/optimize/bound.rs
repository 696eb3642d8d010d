use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    encode_pure_state, minimize_lbfgs, Objective, OptimizerConfig, ProductObjective, ProductParams, StepPolicy,
};
use crate::linalg::{hermitian_eigen, StateVector};
use crate::mub::MubSet;
use crate::sampling::random_state;

/// Restarts ending within this of the best value count as hits.
const HIT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct RestartOutcome {
    pub index: usize,
    pub value: f64,
    pub converged: bool,
    pub gradient_norm: f64,
    pub iterations: usize,
}

/// Optimized lower bound with its argmin and restart statistics.
#[derive(Debug, Clone, Serialize)]
pub struct BoundEstimate {
    pub value: f64,
    pub argmin: ProductParams,
    pub state_a: StateVector<f64>,
    pub state_b: StateVector<f64>,
    pub restarts: usize,
    pub converged_fraction: f64,
    pub best_restart_index: usize,
    /// Restarts that ended within 1e-6 of `value`.
    pub hits: usize,
    /// Smallest restart value more than 1e-6 above `value`, if any.
    pub next_local_minimum: Option<f64>,
    pub seed: u64,
    pub config: OptimizerConfig,
    #[serde(skip)]
    pub outcomes: Vec<RestartOutcome>,
}

fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

struct Run {
    value: f64,
    x: Vec<f64>,
    converged: bool,
    gradient_norm: f64,
    iterations: usize,
}

fn alternating(
    obj: &ProductObjective,
    mut a: StateVector<f64>,
    mut b: StateVector<f64>,
    config: &OptimizerConfig,
) -> Run {
    let d = obj.local_dim();
    let mut f = obj.value_for_states(a.amplitudes(), b.amplitudes());
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let ea = hermitian_eigen(&obj.weighted_projector_sum(b.amplitudes())).expect("Hermitian");
        a = ea.vectors.column(0);
        let eb = hermitian_eigen(&obj.weighted_projector_sum(a.amplitudes())).expect("Hermitian");
        b = eb.vectors.column(0);
        let f_new = eb.values[0];
        let done = f - f_new <= 1e-15 * (1.0 + f.abs());
        f = f_new;
        if done {
            break;
        }
    }
    let mut x = encode_pure_state(&a);
    x.extend(encode_pure_state(&b));
    let mut g = vec![0.0; 4 * (d - 1)];
    let value = obj.value_and_gradient(&x, &mut g);
    let gn = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Run {
        value,
        x,
        converged: gn < config.gradient_tolerance.max(1e-7),
        gradient_norm: gn,
        iterations,
    }
}

fn run_restart(obj: &ProductObjective, config: &OptimizerConfig, index: usize) -> Run {
    let d = obj.local_dim();
    let mut rng = restart_rng(config.seed, index);
    let a = random_state(d, &mut rng);
    let b = random_state(d, &mut rng);
    match config.step {
        StepPolicy::Lbfgs { memory } => {
            let mut x0 = encode_pure_state(&a);
            x0.extend(encode_pure_state(&b));
            let r = minimize_lbfgs(obj, x0, memory.max(1), config.max_iterations, config.gradient_tolerance);
            Run {
                value: r.value,
                x: r.x,
                converged: r.converged,
                gradient_norm: r.gradient_norm,
                iterations: r.iterations,
            }
        }
        StepPolicy::Alternating => alternating(obj, a, b, config),
    }
}

/// `L_m` estimate: best local minimum of `Σ_v |⟨v|a⟩|²|⟨v|b⟩|²` over
/// `config.restarts` Haar-random starts. Restart `r` draws from the ChaCha
/// stream `r` of `config.seed`; ties go to the lowest restart index, so the
/// result does not depend on scheduling.
pub fn lower_bound(set: &MubSet<f64>, config: &OptimizerConfig) -> BoundEstimate {
    let obj = ProductObjective::new(set);
    let d = set.dim();
    let restarts = config.restarts.max(1);
    let runs: Vec<Run> = (0..restarts)
        .into_par_iter()
        .map(|i| run_restart(&obj, config, i))
        .collect();

    let (best_index, best) = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .expect("at least one restart");
    let value = best.value;
    let argmin = ProductParams::from_flat(&best.x);
    let (state_a, state_b) = argmin.decode(d).expect("length 4(d-1)");
    let hits = runs.iter().filter(|r| r.value <= value + HIT_TOL).count();
    let next_local_minimum = runs
        .iter()
        .map(|r| r.value)
        .filter(|&v| v > value + HIT_TOL)
        .min_by(f64::total_cmp);
    let converged = runs.iter().filter(|r| r.converged).count();
    let outcomes = runs
        .iter()
        .enumerate()
        .map(|(index, r)| RestartOutcome {
            index,
            value: r.value,
            converged: r.converged,
            gradient_norm: r.gradient_norm,
            iterations: r.iterations,
        })
        .collect();

    BoundEstimate {
        value,
        argmin,
        state_a,
        state_b,
        restarts,
        converged_fraction: converged as f64 / restarts as f64,
        best_restart_index: best_index,
        hits,
        next_local_minimum,
        seed: config.seed,
        config: config.clone(),
        outcomes,
    }
}
