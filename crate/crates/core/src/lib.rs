//! Mutually unbiased bases and the MUB entanglement witness.
//!
//! The witness `M_m(ρ) = Σ_k Σ_i ⟨i_k i_k|ρ|i_k i_k⟩` over a set of `m`
//! mutually unbiased bases is bounded on separable states by
//! `L_m ≤ M_m ≤ U_m`. The upper bound `U_m = 1 + (m−1)/d` depends only on
//! `m` and `d`; the lower bound `L_m` depends on which bases are used and is
//! computed here by multi-start minimization over product states. Differing
//! lower bounds certify that two MUB sets are inequivalent, which
//! [`classify`] uses to group the subsets of a complete set.
//!
//! Linear algebra, constructions, states and the witness are generic over
//! [`Real`]; the optimizer and everything downstream of it works in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod classify;
pub mod error;
pub mod family;
pub mod linalg;
pub mod mub;
pub mod optimize;
pub mod reference;
pub mod reproduce;
pub mod sampling;
pub mod scalar;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;
pub use num_rational::Ratio;

pub type Complex64 = Complex<f64>;
pub type CMatrix = linalg::ComplexMatrix<f64>;
pub type CMatrix32 = linalg::ComplexMatrix<f32>;
pub type Ket = linalg::StateVector<f64>;
pub type Basis = mub::Basis<f64>;
pub type MubSet = mub::MubSet<f64>;
pub type MubSet32 = mub::MubSet<f32>;
pub type DensityMatrix = states::DensityMatrix<f64>;
pub type DensityMatrix32 = states::DensityMatrix<f32>;
