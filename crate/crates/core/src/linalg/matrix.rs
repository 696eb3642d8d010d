use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::StateVector;
use crate::error::{mismatch, Error, Result};
use crate::scalar::Real;

/// Row-major dense complex matrix.
///
/// Serializes as `{rows, cols, entries: [[re, im], …]}`, entries row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRecord<T>", into = "MatrixRecord<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

/// Wire form of [`ComplexMatrix`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRecord<T> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[T; 2]>,
}

impl<T: Real> TryFrom<MatrixRecord<T>> for ComplexMatrix<T> {
    type Error = Error;

    fn try_from(rec: MatrixRecord<T>) -> Result<Self> {
        if rec.rows == 0 || rec.cols == 0 {
            return Err(Error::InvalidData("empty matrix".into()));
        }
        if rec.entries.len() != rec.rows * rec.cols {
            return Err(mismatch(rec.rows * rec.cols, rec.entries.len()));
        }
        if rec.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidData("non-finite matrix entry".into()));
        }
        let data = rec.entries.into_iter().map(|[re, im]| Complex::new(re, im)).collect();
        Ok(Self {
            rows: rec.rows,
            cols: rec.cols,
            data,
        })
    }
}

impl<T: Real> From<ComplexMatrix<T>> for MatrixRecord<T> {
    fn from(m: ComplexMatrix<T>) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.into_iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(mismatch(rows * cols, data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[StateVector<T>]) -> Result<Self> {
        let rows = cols.first().map_or(0, |c| c.dim());
        if let Some(bad) = cols.iter().find(|c| c.dim() != rows) {
            return Err(mismatch(rows, bad.dim()));
        }
        Ok(Self::from_fn(rows, cols.len(), |i, j| cols[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> StateVector<T> {
        StateVector::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn columns(&self) -> Vec<StateVector<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// `max |A_ij − conj(A_ji)|`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(mismatch(
                format!("{}×k", self.cols),
                format!("{}×{}", rhs.rows, rhs.cols),
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex::default() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &StateVector<T>) -> Result<StateVector<T>> {
        if self.cols != v.dim() {
            return Err(mismatch(self.cols, v.dim()));
        }
        Ok(StateVector::new(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.amplitudes()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    /// `⟨u|A|v⟩`.
    pub fn sandwich(&self, u: &StateVector<T>, v: &StateVector<T>) -> Result<Complex<T>> {
        let av = self.apply(v)?;
        if u.dim() != av.dim() {
            return Err(mismatch(av.dim(), u.dim()));
        }
        Ok(u.inner(&av))
    }

    /// Tensor product, first factor most significant.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (p, q) = (rhs.rows, rhs.cols);
        Self::from_fn(self.rows * p, self.cols * q, |i, j| {
            self[(i / p, j / q)] * rhs[(i % p, j % q)]
        })
    }

    /// Conjugation `U A U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    /// Transpose of the second tensor factor of a `d² × d²` matrix:
    /// `ρ^Γ[(i,j),(k,l)] = ρ[(i,l),(k,j)]`.
    pub fn partial_transpose(&self, d: usize) -> Result<Self> {
        if self.rows != d * d || self.cols != d * d {
            return Err(mismatch(
                format!("{0}×{0}", d * d),
                format!("{}×{}", self.rows, self.cols),
            ));
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            let (i, j) = (r / d, r % d);
            let (k, l) = (c / d, c % d);
            self[(i * d + l, k * d + j)]
        }))
    }

    /// `max |(A†A − I)_ij|`.
    pub fn unitarity_defect(&self) -> T {
        let g = self.adjoint().matmul(self).expect("square by construction");
        g.max_abs_diff(&Self::identity(self.cols))
    }

    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    /// Panics on a shape mismatch; use [`ComplexMatrix::matmul`] for a `Result`.
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn pauli_x() -> M {
        M::from_row_major(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    fn pauli_z() -> M {
        M::from_diagonal(&[c(1., 0.), c(-1., 0.)])
    }

    #[test]
    fn kron_of_identities() {
        assert_eq!(M::identity(2).kron(&M::identity(2)), M::identity(4));
    }

    #[test]
    fn kron_x_z_expands_blockwise() {
        let k = pauli_x().kron(&pauli_z());
        // [[0, Z], [Z, 0]]
        let expected = M::from_fn(4, 4, |i, j| match (i, j) {
            (0, 2) | (2, 0) => c(1., 0.),
            (1, 3) | (3, 1) => c(-1., 0.),
            _ => c(0., 0.),
        });
        assert_eq!(k, expected);
    }

    #[test]
    fn partial_transpose_of_identity_and_shape_errors() {
        let id = M::identity(9).scale_real(1.0 / 9.0);
        assert_eq!(id.partial_transpose(3).unwrap(), id);
        assert!(id.partial_transpose(2).is_err());
    }

    #[test]
    fn matmul_shape_error() {
        assert!(M::zeros(2, 3).matmul(&M::zeros(2, 3)).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = M::from_fn(2, 3, |i, j| c(0.1 * i as f64 + 1.0 / 3.0, -(j as f64).sqrt() / 7.0));
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with("{\"rows\":2,\"cols\":3,\"entries\":[["));
        let back: M = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_rejects_bad_shape() {
        let bad = r#"{"rows":2,"cols":2,"entries":[[1,0],[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<M>(bad).is_err());
    }

    #[test]
    fn hermitian_defect_detects_asymmetry() {
        let mut m = M::identity(3);
        m[(0, 1)] = c(0.0, 0.5);
        assert!((m.hermitian_defect() - 0.5).abs() < 1e-15);
        m[(1, 0)] = c(0.0, -0.5);
        assert_eq!(m.hermitian_defect(), 0.0);
    }
}
