use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 60;

/// Spectral decomposition `A = V diag(values) V†`, values ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: ComplexMatrix<T>,
}

fn hermitian_tolerance<T: Real>(a: &ComplexMatrix<T>) -> T {
    let scale = a.frobenius_norm().max(T::one());
    T::lit(1e-10).max(T::epsilon() * T::lit(1e3) * scale)
}

fn check_hermitian<T: Real>(a: &ComplexMatrix<T>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}×{}", a.rows(), a.cols()),
        });
    }
    let defect = a.hermitian_defect();
    if !(defect <= hermitian_tolerance(a)) {
        return Err(Error::NotHermitian {
            max_asymmetry: defect.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<T>> {
    check_hermitian(a)?;
    let (mut values, _) = jacobi(a.hermitian_part(), false)?;
    values.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(values)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix (cyclic complex Jacobi).
pub fn hermitian_eigen<T: Real>(a: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    check_hermitian(a)?;
    let (values, vectors) = jacobi(a.hermitian_part(), true)?;
    let vectors = vectors.expect("requested");
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite eigenvalues"));
    let n = values.len();
    Ok(HermitianEigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: ComplexMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]),
    })
}

fn off_diagonal_sq<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi<T: Real>(mut a: ComplexMatrix<T>, want_vectors: bool) -> Result<(Vec<T>, Option<ComplexMatrix<T>>)> {
    let n = a.rows();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let total = a.frobenius_norm();
    let target = (T::epsilon() * total).powi(2);
    let zero = Complex::default();

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        if off_diagonal_sq(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[(p, q)];
                let r = b.norm();
                if r <= T::min_positive_value() || r <= T::epsilon() * T::epsilon() * total {
                    continue;
                }
                let phase = (b / r).conj();
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (r + r);
                let sign = if theta < T::zero() { -T::one() } else { T::one() };
                let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) block
                let upp = Complex::new(c, T::zero());
                let upq = Complex::new(s, T::zero());
                let uqp = phase * (-s);
                let uqq = phase * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * upp + akq * uqp;
                    a[(k, q)] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[(p, q)] = zero;
                a[(q, p)] = zero;
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * upp + vkq * uqp;
                        v[(k, q)] = vkp * upq + vkq * uqq;
                    }
                }
            }
        }
    }
    if !converged && off_diagonal_sq(&a) > target * T::lit(1e4) {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}
