//! The MUB correlation functional `M_m(ρ) = Σ_k Σ_i P(i,i|B_k,B_k)` and its
//! separable upper bound `U_m = 1 + (m−1)/d`.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{mismatch, Error, Result};
use crate::linalg::StateVector;
use crate::mub::{Basis, MubSet};
use crate::scalar::Real;
use crate::states::DensityMatrix;

const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessResult<T: Real> {
    pub value: T,
    /// `Σ_i P(i,i|B_k,B_k)` for each basis.
    pub per_basis: Vec<T>,
    pub m: usize,
    pub d: usize,
}

/// `P(i,i|B,B) = ⟨i i|ρ|i i⟩` for the `i`-th vector of `basis`.
pub fn joint_probability<T: Real>(rho: &DensityMatrix<T>, basis: &Basis<T>, i: usize) -> Result<T> {
    if basis.dim() != rho.dim() {
        return Err(mismatch(rho.dim(), basis.dim()));
    }
    if i >= basis.dim() {
        return Err(Error::OutOfRange(format!("outcome {i} in d={}", basis.dim())));
    }
    let v = basis.vector(i);
    let vv = v.kron(&v);
    let p = rho.matrix().sandwich(&vv, &vv)?;
    if p.im.to_f64_lossy().abs() > IMAGINARY_RESIDUE_TOL {
        return Err(Error::NotHermitian {
            max_asymmetry: p.im.to_f64_lossy().abs(),
        });
    }
    Ok(p.re)
}

pub fn witness_value<T: Real>(rho: &DensityMatrix<T>, set: &MubSet<T>) -> Result<WitnessResult<T>> {
    if set.dim() != rho.dim() {
        return Err(mismatch(rho.dim(), set.dim()));
    }
    let per_basis = set
        .bases()
        .iter()
        .map(|b| (0..b.dim()).map(|i| joint_probability(rho, b, i)).sum::<Result<T>>())
        .collect::<Result<Vec<T>>>()?;
    Ok(WitnessResult {
        value: per_basis.iter().copied().sum(),
        per_basis,
        m: set.len(),
        d: set.dim(),
    })
}

/// `M_m(|a⟩⟨a| ⊗ |b⟩⟨b|) = Σ_k Σ_i |⟨i_k|a⟩|² |⟨i_k|b⟩|²`.
pub fn witness_value_product<T: Real>(a: &StateVector<T>, b: &StateVector<T>, set: &MubSet<T>) -> Result<T> {
    if a.dim() != set.dim() || b.dim() != set.dim() {
        return Err(mismatch(
            set.dim(),
            if a.dim() != set.dim() { a.dim() } else { b.dim() },
        ));
    }
    let tol = T::lit(1e-9);
    for v in [a, b] {
        if !v.is_normalized(tol) {
            return Err(Error::NotUnitVector {
                norm: v.norm().to_f64_lossy(),
            });
        }
    }
    let mut total = T::zero();
    for basis in set.bases() {
        for v in basis.vectors() {
            total += v.inner(a).norm_sqr() * v.inner(b).norm_sqr();
        }
    }
    Ok(total)
}

/// `U_m = 1 + (m − 1)/d`, exact.
pub fn upper_bound(d: usize, m: usize) -> Result<Ratio<u64>> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("dimension {d} < 2")));
    }
    if m == 0 || m > d + 1 {
        return Err(Error::OutOfRange(format!("m = {m} outside 1..={}", d + 1)));
    }
    Ok(Ratio::new((d + m - 1) as u64, d as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::{hw_prime_set, hw_set};
    use crate::states::bell_state;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex;

    fn singlet() -> DensityMatrix<f64> {
        let s = 0.5f64.sqrt();
        let psi = StateVector::new(vec![
            Complex::default(),
            Complex::new(s, 0.0),
            Complex::new(-s, 0.0),
            Complex::default(),
        ]);
        DensityMatrix::pure(&psi, 2).unwrap()
    }

    #[test]
    fn joint_probability_examples() {
        let p = bell_state::<f64>(2, 0, 0).unwrap();
        let std2 = Basis::standard(2);
        assert_abs_diff_eq!(joint_probability(&p, &std2, 0).unwrap(), 0.5, epsilon = 1e-15);
        let mixed = DensityMatrix::<f64>::maximally_mixed(3);
        for b in hw_set::<f64>(3).unwrap().bases() {
            for i in 0..3 {
                assert_abs_diff_eq!(joint_probability(&mixed, b, i).unwrap(), 1.0 / 9.0, epsilon = 1e-15);
            }
        }
        for b in hw_set::<f64>(2).unwrap().bases() {
            for i in 0..2 {
                assert_abs_diff_eq!(joint_probability(&singlet(), b, i).unwrap(), 0.0, epsilon = 1e-15);
            }
        }
        assert!(joint_probability(&p, &std2, 2).is_err());
        assert!(joint_probability(&p, &Basis::standard(3), 0).is_err());
    }

    #[test]
    fn witness_on_maximally_mixed_and_singlet() {
        for d in 2..=5 {
            let set = hw_set::<f64>(d).unwrap();
            let r = witness_value(&DensityMatrix::maximally_mixed(d), &set).unwrap();
            assert_abs_diff_eq!(r.value, set.len() as f64 / d as f64, epsilon = 1e-12);
            assert_eq!(r.per_basis.len(), set.len());
        }
        let r = witness_value(&singlet(), &hw_prime_set(2).unwrap()).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn hw_d4_triple_product_example() {
        let s = 0.5f64.sqrt();
        let c = |x: f64| Complex::new(x, 0.0);
        let a = StateVector::new(vec![c(s), c(0.0), c(-s), c(0.0)]);
        let b = StateVector::new(vec![c(0.0), c(s), c(0.0), c(s)]);
        let set = hw_set::<f64>(4).unwrap().subset(&[0, 1, 2]).unwrap();
        let rho = DensityMatrix::product(&a, &b).unwrap();
        let dense = witness_value(&rho, &set).unwrap().value;
        let fast = witness_value_product(&a, &b, &set).unwrap();
        assert_abs_diff_eq!(fast, dense, epsilon = 1e-12);
        assert_abs_diff_eq!(fast, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn product_examples() {
        let z2 = MubSet::new(vec![Basis::standard(2)], "Z").unwrap();
        let e0 = StateVector::<f64>::basis(2, 0);
        let e1 = StateVector::<f64>::basis(2, 1);
        assert_abs_diff_eq!(witness_value_product(&e0, &e0, &z2).unwrap(), 1.0);
        let zx = hw_prime_set::<f64>(2).unwrap().subset(&[0, 1]).unwrap();
        assert_abs_diff_eq!(witness_value_product(&e0, &e1, &zx).unwrap(), 0.5, epsilon = 1e-15);
        let bad = StateVector::new(vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]);
        assert!(matches!(
            witness_value_product(&bad, &e0, &zx),
            Err(Error::NotUnitVector { .. })
        ));
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_bound(4, 3).unwrap(), Ratio::new(6, 4));
        assert_eq!(upper_bound(5, 2).unwrap(), Ratio::new(6, 5));
        assert_eq!(upper_bound(7, 8).unwrap(), Ratio::from_integer(2));
        assert!(upper_bound(3, 5).is_err());
        assert!(upper_bound(3, 0).is_err());
    }
}
