//! Haar-random states and unitaries, random density matrices.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, StateVector};
use crate::states::DensityMatrix;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-uniform pure state in `C^d`.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> StateVector<f64> {
    StateVector::new((0..d).map(|_| gaussian(rng)).collect()).normalized()
}

/// Haar-random unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<f64> {
    let mut cols: Vec<StateVector<f64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex<f64>> = (0..d).map(|_| gaussian(rng)).collect();
        for c in &cols {
            let overlap: Complex<f64> = c.amplitudes().iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in v.iter_mut().zip(c.amplitudes()) {
                *x -= overlap * a;
            }
        }
        let v = StateVector::new(v);
        if v.norm() > 1e-8 {
            cols.push(v.normalized());
        }
    }
    ComplexMatrix::from_columns(&cols).expect("equal lengths")
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng)).hermitian_part()
}

/// Random full-rank state `G G† / tr(G G†)` on `C^d ⊗ C^d`.
pub fn random_density_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix<f64> {
    let n = d * d;
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let m = g.matmul(&g.adjoint()).expect("square");
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part(), d).expect("positive by construction")
}

/// Random separable state: a mixture of `terms` random product states.
pub fn random_separable_state<R: Rng + ?Sized>(d: usize, terms: usize, rng: &mut R) -> DensityMatrix<f64> {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for w in weights {
        let a = random_state(d, rng);
        let b = random_state(d, rng);
        acc = &acc + &a.kron(&b).projector().scale_real(w / total);
    }
    DensityMatrix::new(acc.hermitian_part(), d).expect("convex combination of states")
}
