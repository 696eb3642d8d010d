//! Lower bounds `L_m = min_{ρ separable} M_m(ρ)` by multi-start local search
//! over pure product states, and optimization of `M_m` over local unitaries.
//!
//! Since `M_m` is linear in `ρ` its minimum over the separable set is attained
//! at an extreme point, a pure product `|a⟩⟨a| ⊗ |b⟩⟨b|`. Each state is
//! parameterized by `2(d−1)` hyperspherical angles, see [`decode_pure_state`].

mod bound;
mod config;
mod lbfgs;
mod local_unitary;
mod objective;
mod params;

pub use bound::{lower_bound, BoundEstimate, RestartOutcome};
pub use config::{default_restarts, OptimizerConfig, StepPolicy};
pub use lbfgs::{minimize_lbfgs, LocalResult};
pub use local_unitary::{
    gell_mann_basis, maximize_over_local_unitaries, minimize_over_local_unitaries, optimize_local_unitaries, Goal,
    LocalUnitaryFamily, LocalUnitaryObjective, LocalUnitaryResult,
};
pub use objective::{gradient_check, FiniteDifference, Objective, ProductObjective};
pub use params::{decode_pure_state, encode_pure_state, ProductParams};
