use serde::{Deserialize, Serialize};

/// Local search used by each restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepPolicy {
    /// Limited-memory BFGS on the angle vector with analytic gradients and
    /// backtracking line search.
    Lbfgs { memory: usize },
    /// Exact block-coordinate descent: `a ←` lowest eigenvector of
    /// `Σ_v |⟨v|b⟩|² |v⟩⟨v|`, then the same for `b`. Derivative-free.
    Alternating,
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::Lbfgs { memory: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop a restart once the max-norm of the angle gradient drops below this.
    pub gradient_tolerance: f64,
    pub step: StepPolicy,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            max_iterations: 2000,
            gradient_tolerance: 1e-7,
            step: StepPolicy::default(),
            seed: 0x5eed,
        }
    }
}

/// 200 restarts for d ≤ 7, 1000 for d ≥ 8.
pub fn default_restarts(d: usize) -> usize {
    if d >= 8 {
        1000
    } else {
        200
    }
}

impl OptimizerConfig {
    /// Defaults with the restart count for dimension `d`.
    pub fn for_dimension(d: usize) -> Self {
        Self {
            restarts: default_restarts(d),
            ..Self::default()
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts.max(1);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_step(mut self, step: StepPolicy) -> Self {
        self.step = step;
        self
    }
}
