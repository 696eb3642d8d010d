use std::ops::Index;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::scalar::Real;

/// Complex amplitude vector; serializes as a list of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct StateVector<T: Real> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    /// Computational basis vector `|i⟩` in `C^d`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut a = vec![Complex::default(); d];
        a[i] = Complex::new(T::one(), T::zero());
        Self::new(a)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm() - T::one()).abs() <= tol
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.amplitudes.iter().map(|z| z / n).collect())
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::new(
            self.amplitudes
                .iter()
                .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
                .collect(),
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.amplitudes.iter().map(|z| z.conj()).collect())
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }

    /// Multiply by the phase that makes the first non-negligible amplitude
    /// real and non-negative.
    pub fn gauge_fixed(&self) -> Self {
        let tiny = T::epsilon().sqrt();
        match self.amplitudes.iter().find(|z| z.norm() > tiny) {
            Some(z) => {
                let phase = z.conj() / z.norm();
                Self::new(self.amplitudes.iter().map(|a| a * phase).collect())
            }
            None => self.clone(),
        }
    }
}

impl<T: Real> Index<usize> for StateVector<T> {
    type Output = Complex<T>;

    fn index(&self, i: usize) -> &Complex<T> {
        &self.amplitudes[i]
    }
}
