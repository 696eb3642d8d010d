//! Bipartite states on `C^d ⊗ C^d`: Weyl operators, Bell projectors, the
//! magic-simplex and Werner families, and the PPT test.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, StateVector};
use crate::scalar::{root_of_unity, Real};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite operator on `C^d ⊗ C^d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct DensityMatrix<T: Real> {
    dim: usize,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity (1e-10), unit trace (1e-10) and positivity
    /// (min eigenvalue ≥ −1e-9).
    pub fn new(matrix: ComplexMatrix<T>, dim: usize) -> Result<Self> {
        let rho = Self::new_unchecked_positivity(matrix, dim)?;
        let min = rho.min_eigenvalue()?;
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(rho)
    }

    fn new_unchecked_positivity(matrix: ComplexMatrix<T>, dim: usize) -> Result<Self> {
        let n = dim * dim;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(mismatch(
                format!("{n}×{n}"),
                format!("{}×{}", matrix.rows(), matrix.cols()),
            ));
        }
        let defect = matrix.hermitian_defect().to_f64_lossy();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_asymmetry: defect });
        }
        let tr = matrix.trace();
        if (tr.re.to_f64_lossy() - 1.0).abs() > TRACE_TOL || tr.im.to_f64_lossy().abs() > TRACE_TOL {
            return Err(Error::NotNormalized {
                trace: tr.re.to_f64_lossy(),
            });
        }
        Ok(Self { dim, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ ∈ C^{d²}`.
    pub fn pure(psi: &StateVector<T>, dim: usize) -> Result<Self> {
        if !psi.is_normalized(T::lit(1e-9)) {
            return Err(Error::NotUnitVector {
                norm: psi.norm().to_f64_lossy(),
            });
        }
        Self::new_unchecked_positivity(psi.projector(), dim)
    }

    /// `|a⟩⟨a| ⊗ |b⟩⟨b|`.
    pub fn product(a: &StateVector<T>, b: &StateVector<T>) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(mismatch(a.dim(), b.dim()));
        }
        Self::pure(&a.kron(b), a.dim())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let n = dim * dim;
        Self {
            dim,
            matrix: ComplexMatrix::identity(n).scale_real(T::one() / T::from_usize_lossy(n)),
        }
    }

    /// `Σ w_i ρ_i` for weights summing to one (validated).
    pub fn mixture(parts: &[(T, &Self)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidData("empty mixture".into()))?;
        let dim = first.1.dim;
        let mut acc = ComplexMatrix::zeros(dim * dim, dim * dim);
        for (w, rho) in parts {
            if rho.dim != dim {
                return Err(mismatch(dim, rho.dim));
            }
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Self::new(acc, dim)
    }

    /// Local dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let ev = hermitian_eigenvalues(&self.matrix)?;
        Ok(ev[0].to_f64_lossy())
    }

    /// `(U ⊗ V) ρ (U ⊗ V)†`.
    pub fn local_conjugate(&self, u: &ComplexMatrix<T>, v: &ComplexMatrix<T>) -> Result<Self> {
        if u.rows() != self.dim || v.rows() != self.dim {
            return Err(mismatch(self.dim, u.rows().max(v.rows())));
        }
        let m = self.matrix.conjugate_by(&u.kron(v))?;
        Ok(Self {
            dim: self.dim,
            matrix: m.hermitian_part(),
        })
    }

    pub fn partial_transpose(&self) -> ComplexMatrix<T> {
        self.matrix
            .partial_transpose(self.dim)
            .expect("shape checked at construction")
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for DensityMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
        struct Raw<T: Real> {
            dim: usize,
            matrix: ComplexMatrix<T>,
        }
        let raw = Raw::<T>::deserialize(de)?;
        Self::new(raw.matrix, raw.dim).map_err(serde::de::Error::custom)
    }
}

/// `W_{(k,l)} = Σ_j ω_d^{jk} |j⟩⟨j+l|`.
pub fn weyl_operator<T: Real>(d: usize, k: usize, l: usize) -> Result<ComplexMatrix<T>> {
    if k >= d || l >= d {
        return Err(Error::OutOfRange(format!("Weyl index ({k},{l}) for d={d}")));
    }
    let mut w = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        w[(j, (j + l) % d)] = root_of_unity(d, (j * k) as i64);
    }
    Ok(w)
}

/// Flip operator `F|a⟩|b⟩ = |b⟩|a⟩` on `C^d ⊗ C^d`.
pub fn swap_operator<T: Real>(d: usize) -> ComplexMatrix<T> {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = Complex::new(T::one(), T::zero());
        }
    }
    f
}

/// Bell projector `P_{k,l} = (I ⊗ W_{(k,l)}) P_{0,0} (I ⊗ W_{(k,l)})†` with
/// `P_{0,0} = (1/d) Σ_{s,t} |ss⟩⟨tt|`.
pub fn bell_state<T: Real>(d: usize, k: usize, l: usize) -> Result<DensityMatrix<T>> {
    let w = weyl_operator::<T>(d, k, l)?;
    let s = T::one() / T::from_usize_lossy(d).sqrt();
    let mut psi = vec![Complex::default(); d * d];
    // (I ⊗ W)|ss⟩ = |s⟩ ⊗ W|s⟩
    for sdx in 0..d {
        for r in 0..d {
            psi[sdx * d + r] += w[(r, sdx)] * s;
        }
    }
    DensityMatrix::pure(&StateVector::new(psi), d)
}

/// `ρ_{α,β} = (1−α−β) I/d² + α P_{0,0} + β P_{0,1}`; rejects non-physical
/// parameters.
pub fn magic_simplex_state<T: Real>(d: usize, alpha: T, beta: T) -> Result<DensityMatrix<T>> {
    let mixed = DensityMatrix::<T>::maximally_mixed(d);
    let p00 = bell_state::<T>(d, 0, 0)?;
    let p01 = bell_state::<T>(d, 0, 1)?;
    let m = &(&mixed.matrix.scale_real(T::one() - alpha - beta) + &p00.matrix.scale_real(alpha))
        + &p01.matrix.scale_real(beta);
    DensityMatrix::new(m, d)
}

/// Werner family `ρ_W(φ) = (I − φ F) / (d² − φ d)`, `φ ∈ [−1, 1]`;
/// entangled iff `φ > 1/d`.
pub fn werner_state<T: Real>(d: usize, phi: T) -> Result<DensityMatrix<T>> {
    if !(phi >= -T::one() && phi <= T::one()) {
        return Err(Error::OutOfRange(format!("Werner parameter {phi} outside [-1, 1]")));
    }
    let n = d * d;
    let norm = T::one() / (T::from_usize_lossy(n) - phi * T::from_usize_lossy(d));
    let m = &ComplexMatrix::identity(n) - &swap_operator::<T>(d).scale_real(phi);
    DensityMatrix::new(m.scale_real(norm), d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptReport {
    pub ppt: bool,
    pub min_eigenvalue: f64,
}

/// PPT test: `ppt ⇔ λ_min(ρ^Γ) ≥ −tol`.
pub fn is_ppt<T: Real>(rho: &DensityMatrix<T>, tol: f64) -> Result<PptReport> {
    let ev = hermitian_eigenvalues(&rho.partial_transpose())?;
    let min = ev[0].to_f64_lossy();
    Ok(PptReport {
        ppt: min >= -tol,
        min_eigenvalue: min,
    })
}
