use num_complex::Complex;

use super::params::{decode_into, pullback_gradient};
use crate::mub::MubSet;

/// Smooth function of a real parameter vector.
pub trait Objective {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Value at `x`, writing the gradient into `grad`.
    fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64;
}

/// Wraps a closure, differentiating it by central differences.
pub struct FiniteDifference<F> {
    dim: usize,
    f: F,
    step: f64,
}

impl<F: Fn(&[f64]) -> f64> FiniteDifference<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f, step: 1e-6 }
    }
}

impl<F: Fn(&[f64]) -> f64> Objective for FiniteDifference<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        central_differences(&self.f, x, self.step, grad);
        (self.f)(x)
    }
}

fn central_differences(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64, grad: &mut [f64]) {
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = f(&probe);
        probe[i] = x[i] - h;
        let down = f(&probe);
        probe[i] = x[i];
        grad[i] = (up - down) / (2.0 * h);
    }
}

/// Max deviation between the objective's gradient and central differences
/// (step 1e-6), relative to `max(1, ‖∇f‖_∞)`.
pub fn gradient_check<O: Objective + ?Sized>(f: &O, x: &[f64]) -> f64 {
    let n = f.dim();
    let mut analytic = vec![0.0; n];
    f.value_and_gradient(x, &mut analytic);
    let mut numeric = vec![0.0; n];
    central_differences(|p| f.value(p), x, 1e-6, &mut numeric);
    let scale = numeric.iter().fold(1.0f64, |m, g| m.max(g.abs()));
    analytic
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs() / scale)
        .fold(0.0, f64::max)
}

/// `f(a, b) = Σ_v |⟨v|a⟩|² |⟨v|b⟩|²` over all vectors `v` of a MUB set, as a
/// function of the `4(d−1)` angles of `(a, b)`.
#[derive(Debug, Clone)]
pub struct ProductObjective {
    d: usize,
    /// Conjugated basis vectors, row-major `count × d`.
    conj_vectors: Vec<Complex<f64>>,
    count: usize,
}

impl ProductObjective {
    pub fn new(set: &MubSet<f64>) -> Self {
        let d = set.dim();
        let mut conj_vectors = Vec::with_capacity(set.len() * d * d);
        for b in set.bases() {
            let m = b.matrix();
            for j in 0..d {
                for i in 0..d {
                    conj_vectors.push(m[(i, j)].conj());
                }
            }
        }
        Self {
            d,
            count: set.len() * d,
            conj_vectors,
        }
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    fn overlaps(&self, a: &[Complex<f64>], out: &mut [Complex<f64>]) {
        let d = self.d;
        for (v, o) in self.conj_vectors.chunks_exact(d).zip(out.iter_mut()) {
            *o = v.iter().zip(a).map(|(x, y)| x * y).sum();
        }
    }

    /// Objective for explicit amplitude vectors.
    pub fn value_for_states(&self, a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
        let mut oa = vec![Complex::default(); self.count];
        let mut ob = vec![Complex::default(); self.count];
        self.overlaps(a, &mut oa);
        self.overlaps(b, &mut ob);
        oa.iter().zip(&ob).map(|(x, y)| x.norm_sqr() * y.norm_sqr()).sum()
    }

    /// `Q_x = Σ_v |⟨v|x⟩|² |v⟩⟨v|`, so that `f = ⟨a|Q_b|a⟩ = ⟨b|Q_a|b⟩`.
    pub fn weighted_projector_sum(&self, x: &[Complex<f64>]) -> crate::linalg::ComplexMatrix<f64> {
        let d = self.d;
        let mut o = vec![Complex::default(); self.count];
        self.overlaps(x, &mut o);
        let mut q = crate::linalg::ComplexMatrix::zeros(d, d);
        for (cv, ov) in self.conj_vectors.chunks_exact(d).zip(&o) {
            let w = ov.norm_sqr();
            for i in 0..d {
                for j in 0..d {
                    // |v⟩⟨v| entry (i, j) = v_i conj(v_j)
                    q[(i, j)] += cv[i].conj() * cv[j] * w;
                }
            }
        }
        q
    }

    fn eval(&self, x: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let d = self.d;
        let half = 2 * (d - 1);
        let mut a = vec![Complex::default(); d];
        let mut b = vec![Complex::default(); d];
        decode_into(&x[..half], d, &mut a);
        decode_into(&x[half..], d, &mut b);
        let mut oa = vec![Complex::default(); self.count];
        let mut ob = vec![Complex::default(); self.count];
        self.overlaps(&a, &mut oa);
        self.overlaps(&b, &mut ob);
        let value = oa.iter().zip(&ob).map(|(x, y)| x.norm_sqr() * y.norm_sqr()).sum();
        if let Some(grad) = grad {
            grad.iter_mut().for_each(|g| *g = 0.0);
            // w_a = Σ_v |⟨v|b⟩|² ⟨v|a⟩ |v⟩
            let mut wa = vec![Complex::default(); d];
            let mut wb = vec![Complex::default(); d];
            for ((cv, xa), xb) in self.conj_vectors.chunks_exact(d).zip(&oa).zip(&ob) {
                let ca = xa * xb.norm_sqr();
                let cb = xb * xa.norm_sqr();
                for s in 0..d {
                    let v = cv[s].conj();
                    wa[s] += v * ca;
                    wb[s] += v * cb;
                }
            }
            let (ga, gb) = grad.split_at_mut(half);
            pullback_gradient(&x[..half], d, &wa, ga);
            pullback_gradient(&x[half..], d, &wb, gb);
        }
        value
    }
}

impl Objective for ProductObjective {
    fn dim(&self) -> usize {
        4 * (self.d - 1)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x, None)
    }

    fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        self.eval(x, Some(grad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::hw_set;
    use crate::optimize::params::decode_pure_state;
    use crate::witness::witness_value_product;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quadratic_gradient_check() {
        let f = FiniteDifference::new(3, |x: &[f64]| x[0] * x[0] + 3.0 * x[1] * x[2]);
        struct Exact;
        impl Objective for Exact {
            fn dim(&self) -> usize {
                3
            }
            fn value(&self, x: &[f64]) -> f64 {
                x[0] * x[0] + 3.0 * x[1] * x[2]
            }
            fn value_and_gradient(&self, x: &[f64], g: &mut [f64]) -> f64 {
                g[0] = 2.0 * x[0];
                g[1] = 3.0 * x[2];
                g[2] = 3.0 * x[1];
                self.value(x)
            }
        }
        let x = [0.3, -1.2, 2.0];
        assert!(gradient_check(&Exact, &x) < 1e-7);
        assert!(gradient_check(&f, &x) < 1e-7);
    }

    #[test]
    fn product_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2, 3, 4, 7] {
            let obj = ProductObjective::new(&hw_set::<f64>(d).unwrap());
            for _ in 0..20 {
                let x: Vec<f64> = (0..obj.dim()).map(|_| rng.random_range(-3.0..3.0)).collect();
                let dev = gradient_check(&obj, &x);
                assert!(dev < 1e-5, "d={d} dev={dev}");
            }
        }
    }

    #[test]
    fn value_matches_witness_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let set = hw_set::<f64>(5).unwrap();
        let obj = ProductObjective::new(&set);
        for _ in 0..20 {
            let x: Vec<f64> = (0..obj.dim()).map(|_| rng.random_range(-3.0..3.0)).collect();
            let a = decode_pure_state(&x[..8], 5).unwrap();
            let b = decode_pure_state(&x[8..], 5).unwrap();
            let direct = witness_value_product(&a, &b, &set).unwrap();
            assert!((obj.value(&x) - direct).abs() < 1e-12);
            let q = obj.weighted_projector_sum(b.amplitudes());
            assert!((q.sandwich(&a, &a).unwrap().re - direct).abs() < 1e-12);
        }
    }
}
