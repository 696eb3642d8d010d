use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{minimize_lbfgs, Objective, OptimizerConfig, StepPolicy};
use crate::error::{mismatch, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::mub::MubSet;
use crate::states::DensityMatrix;
use crate::witness::witness_value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Goal {
    Maximize,
    Minimize,
}

/// Which local unitaries are searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocalUnitaryFamily {
    /// `U ⊗ U*`.
    Conjugate,
    /// Independent `U ⊗ V`.
    Independent,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalUnitaryResult {
    /// Best of the two families.
    pub value: f64,
    pub family: LocalUnitaryFamily,
    pub conjugate_value: f64,
    pub independent_value: f64,
    /// `M_m(ρ)` with no local rotation.
    pub unrotated_value: f64,
    pub u: ComplexMatrix<f64>,
    pub v: ComplexMatrix<f64>,
}

/// Generalized Gell-Mann matrices: `d² − 1` traceless Hermitian generators of
/// su(d), normalized to `tr(G_a G_b) = 2δ_ab`.
pub fn gell_mann_basis(d: usize) -> Vec<ComplexMatrix<f64>> {
    generators(d)
        .into_iter()
        .map(|g| {
            let mut m = ComplexMatrix::zeros(d, d);
            for (i, j, z) in g.entries {
                m[(i, j)] = z;
            }
            m
        })
        .collect()
}

struct Generator {
    entries: Vec<(usize, usize, Complex<f64>)>,
}

fn generators(d: usize) -> Vec<Generator> {
    let mut out = Vec::with_capacity(d * d - 1);
    let one = Complex::new(1.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    for j in 0..d {
        for k in j + 1..d {
            out.push(Generator {
                entries: vec![(j, k, one), (k, j, one)],
            });
            out.push(Generator {
                entries: vec![(j, k, -i), (k, j, i)],
            });
        }
    }
    for l in 1..d {
        let c = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut entries: Vec<_> = (0..l).map(|j| (j, j, one * c)).collect();
        entries.push((l, l, one * (-(l as f64) * c)));
        out.push(Generator { entries });
    }
    out
}

/// `±M_m((U ⊗ V) ρ (U ⊗ V)†)` with `U = exp(i Σ θ_j G_j)` (and `V = U*` or
/// `V = exp(i Σ θ'_j G_j)`), signed so that minimizing it achieves `goal`.
pub struct LocalUnitaryObjective {
    d: usize,
    rho: ComplexMatrix<f64>,
    vectors: Vec<Vec<Complex<f64>>>,
    generators: Vec<Generator>,
    family: LocalUnitaryFamily,
    sign: f64,
}

struct Expm {
    u: ComplexMatrix<f64>,
    vecs: ComplexMatrix<f64>,
    phi: ComplexMatrix<f64>,
}

impl LocalUnitaryObjective {
    pub fn new(rho: &DensityMatrix<f64>, set: &MubSet<f64>, family: LocalUnitaryFamily, goal: Goal) -> Result<Self> {
        if rho.dim() != set.dim() {
            return Err(mismatch(rho.dim(), set.dim()));
        }
        let d = set.dim();
        let vectors = set
            .bases()
            .iter()
            .flat_map(|b| b.vectors().into_iter().map(|v| v.into_amplitudes()))
            .collect();
        Ok(Self {
            d,
            rho: rho.matrix().clone(),
            vectors,
            generators: generators(d),
            family,
            sign: match goal {
                Goal::Maximize => -1.0,
                Goal::Minimize => 1.0,
            },
        })
    }

    fn hamiltonian(&self, theta: &[f64]) -> ComplexMatrix<f64> {
        let mut h = ComplexMatrix::zeros(self.d, self.d);
        for (g, &t) in self.generators.iter().zip(theta) {
            for &(i, j, z) in &g.entries {
                h[(i, j)] += z * t;
            }
        }
        h
    }

    /// `exp(iH)` with the divided differences of `e^{iλ}` for the derivative.
    fn expm(&self, theta: &[f64]) -> Expm {
        let d = self.d;
        let e = hermitian_eigen(&self.hamiltonian(theta)).expect("Hermitian by construction");
        let phases: Vec<Complex<f64>> = e.values.iter().map(|&l| Complex::from_polar(1.0, l)).collect();
        let mut u = ComplexMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                u[(r, c)] = (0..d)
                    .map(|k| e.vectors[(r, k)] * phases[k] * e.vectors[(c, k)].conj())
                    .sum();
            }
        }
        let phi = ComplexMatrix::from_fn(d, d, |a, b| {
            let (la, lb) = (e.values[a], e.values[b]);
            if (la - lb).abs() > 1e-9 {
                (phases[a] - phases[b]) / (la - lb)
            } else {
                Complex::new(0.0, 1.0) * Complex::from_polar(1.0, 0.5 * (la + lb))
            }
        });
        Expm {
            u,
            vecs: e.vectors,
            phi,
        }
    }

    /// `∂/∂θ_j 2 Re tr(dU K)` for all generators, via `Z = V((Φᵀ ∘ V†KV))V†`.
    fn pull_back(&self, ex: &Expm, k: &ComplexMatrix<f64>, grad: &mut [f64]) {
        let vh = ex.vecs.adjoint();
        let khat = vh.matmul(k).and_then(|m| m.matmul(&ex.vecs)).expect("square");
        let y = ComplexMatrix::from_fn(self.d, self.d, |b, a| ex.phi[(a, b)] * khat[(b, a)]);
        let z = ex.vecs.matmul(&y).and_then(|m| m.matmul(&vh)).expect("square");
        for (g, out) in self.generators.iter().zip(grad.iter_mut()) {
            // tr(G Z) = Σ_ab G_ab Z_ba
            let tr: Complex<f64> = g.entries.iter().map(|&(a, b, c)| c * z[(b, a)]).sum();
            *out = 2.0 * tr.re;
        }
    }

    fn unitaries(&self, x: &[f64]) -> (Expm, Option<Expm>) {
        let n = self.generators.len();
        let ua = self.expm(&x[..n]);
        let ub = match self.family {
            LocalUnitaryFamily::Conjugate => None,
            LocalUnitaryFamily::Independent => Some(self.expm(&x[n..])),
        };
        (ua, ub)
    }

    /// The pair `(U, V)` at `x`.
    pub fn local_unitaries(&self, x: &[f64]) -> (ComplexMatrix<f64>, ComplexMatrix<f64>) {
        let (ua, ub) = self.unitaries(x);
        let v = match ub {
            Some(e) => e.u,
            None => ua.u.conj(),
        };
        (ua.u, v)
    }

    fn eval(&self, x: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let d = self.d;
        let (ua, ub) = self.unitaries(x);
        let u = &ua.u;
        let vb = ub.as_ref().map_or_else(|| u.conj(), |e| e.u.clone());
        let uh = u.adjoint();
        let vbh = vb.adjoint();

        let mut value = 0.0;
        let mut ka = ComplexMatrix::zeros(d, d);
        let mut kb = ComplexMatrix::zeros(d, d);
        let mut xs = vec![Complex::default(); d * d];
        let mut ys = vec![Complex::default(); d * d];
        for v in &self.vectors {
            // Alice sees U†v, Bob V†v
            let a: Vec<Complex<f64>> = (0..d)
                .map(|i| uh.row(i).iter().zip(v).map(|(p, q)| p * q).sum())
                .collect();
            let b: Vec<Complex<f64>> = (0..d)
                .map(|i| vbh.row(i).iter().zip(v).map(|(p, q)| p * q).sum())
                .collect();
            for s in 0..d {
                for t in 0..d {
                    xs[s * d + t] = a[s] * b[t];
                }
            }
            for (r, y) in ys.iter_mut().enumerate() {
                *y = self.rho.row(r).iter().zip(&xs).map(|(p, q)| p * q).sum();
            }
            value += xs.iter().zip(&ys).map(|(p, q)| (p.conj() * q).re).sum::<f64>();

            if grad.is_some() {
                // z_s = Σ_t conj(b_t) y_st,  z'_t = Σ_s conj(a_s) y_st
                for s in 0..d {
                    let zs: Complex<f64> = (0..d).map(|t| b[t].conj() * ys[s * d + t]).sum();
                    for c in 0..d {
                        ka[(s, c)] += zs * v[c].conj();
                    }
                }
                for t in 0..d {
                    let zt: Complex<f64> = (0..d).map(|s| a[s].conj() * ys[s * d + t]).sum();
                    for c in 0..d {
                        match self.family {
                            LocalUnitaryFamily::Independent => kb[(t, c)] += zt * v[c].conj(),
                            // V = U*: contributes conj(z') vᵀ to U's gradient
                            LocalUnitaryFamily::Conjugate => ka[(t, c)] += zt.conj() * v[c],
                        }
                    }
                }
            }
        }

        if let Some(grad) = grad {
            let n = self.generators.len();
            self.pull_back(&ua, &ka, &mut grad[..n]);
            if let Some(eb) = &ub {
                self.pull_back(eb, &kb, &mut grad[n..]);
            }
            grad.iter_mut().for_each(|g| *g *= self.sign);
        }
        self.sign * value
    }
}

impl Objective for LocalUnitaryObjective {
    fn dim(&self) -> usize {
        match self.family {
            LocalUnitaryFamily::Conjugate => self.generators.len(),
            LocalUnitaryFamily::Independent => 2 * self.generators.len(),
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x, None)
    }

    fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        self.eval(x, Some(grad))
    }
}

fn search(obj: &LocalUnitaryObjective, config: &OptimizerConfig) -> (f64, Vec<f64>) {
    let memory = match config.step {
        StepPolicy::Lbfgs { memory } => memory.max(1),
        StepPolicy::Alternating => 8,
    };
    let n = obj.dim();
    let runs: Vec<(f64, Vec<f64>)> = (0..config.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            // restart 0 starts from the identity
            let x0 = if r == 0 {
                vec![0.0; n]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(r as u64);
                (0..n)
                    .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                    .collect()
            };
            let res = minimize_lbfgs(obj, x0, memory, config.max_iterations, config.gradient_tolerance);
            (res.value, res.x)
        })
        .collect();
    runs.into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.0.total_cmp(&b.0).then(i.cmp(j)))
        .map(|(_, r)| r)
        .expect("at least one restart")
}

/// Optimizes `M_m((U ⊗ V) ρ (U ⊗ V)†)` over both the `U ⊗ U*` family and
/// independent `U ⊗ V`, returning the better one. Restart 0 of each search
/// starts at the identity, so a maximum is never below the unrotated value
/// (and a minimum never above it).
pub fn optimize_local_unitaries(
    rho: &DensityMatrix<f64>,
    set: &MubSet<f64>,
    config: &OptimizerConfig,
    goal: Goal,
) -> Result<LocalUnitaryResult> {
    let unrotated_value = witness_value(rho, set)?.value;
    let mut best: Option<(f64, LocalUnitaryFamily, ComplexMatrix<f64>, ComplexMatrix<f64>)> = None;
    let mut values = [0.0; 2];
    for (slot, family) in [LocalUnitaryFamily::Conjugate, LocalUnitaryFamily::Independent]
        .into_iter()
        .enumerate()
    {
        let obj = LocalUnitaryObjective::new(rho, set, family, goal)?;
        let (signed, x) = search(&obj, config);
        let value = obj.sign * signed;
        values[slot] = value;
        let better = match (&best, goal) {
            (None, _) => true,
            (Some(b), Goal::Maximize) => value > b.0,
            (Some(b), Goal::Minimize) => value < b.0,
        };
        if better {
            let (u, v) = obj.local_unitaries(&x);
            best = Some((value, family, u, v));
        }
    }
    let (value, family, u, v) = best.expect("two families searched");
    Ok(LocalUnitaryResult {
        value,
        family,
        conjugate_value: values[0],
        independent_value: values[1],
        unrotated_value,
        u,
        v,
    })
}

pub fn maximize_over_local_unitaries(
    rho: &DensityMatrix<f64>,
    set: &MubSet<f64>,
    config: &OptimizerConfig,
) -> Result<LocalUnitaryResult> {
    optimize_local_unitaries(rho, set, config, Goal::Maximize)
}

pub fn minimize_over_local_unitaries(
    rho: &DensityMatrix<f64>,
    set: &MubSet<f64>,
    config: &OptimizerConfig,
) -> Result<LocalUnitaryResult> {
    optimize_local_unitaries(rho, set, config, Goal::Minimize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::hw_set;
    use crate::optimize::gradient_check;
    use crate::sampling::random_density_matrix;
    use crate::states::bell_state;

    #[test]
    fn gell_mann_orthonormal() {
        for d in 2..=4 {
            let g = gell_mann_basis(d);
            assert_eq!(g.len(), d * d - 1);
            for (a, ga) in g.iter().enumerate() {
                assert!(ga.hermitian_defect() < 1e-15);
                assert!(ga.trace().norm() < 1e-14);
                for (b, gb) in g.iter().enumerate() {
                    let t = ga.matmul(gb).unwrap().trace();
                    assert!((t.re - if a == b { 2.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [2, 3] {
            let set = hw_set::<f64>(d).unwrap();
            let rho = random_density_matrix(d, &mut rng);
            for family in [LocalUnitaryFamily::Conjugate, LocalUnitaryFamily::Independent] {
                let obj = LocalUnitaryObjective::new(&rho, &set, family, Goal::Maximize).unwrap();
                for _ in 0..5 {
                    let x: Vec<f64> = (0..obj.dim()).map(|_| rng.random_range(-1.5..1.5)).collect();
                    let dev = gradient_check(&obj, &x);
                    assert!(dev < 1e-5, "d={d} {family:?} dev={dev}");
                }
            }
        }
    }

    #[test]
    fn zero_parameters_give_identity() {
        let set = hw_set::<f64>(3).unwrap();
        let rho = bell_state::<f64>(3, 0, 1).unwrap();
        let obj = LocalUnitaryObjective::new(&rho, &set, LocalUnitaryFamily::Independent, Goal::Minimize).unwrap();
        let (u, v) = obj.local_unitaries(&vec![0.0; obj.dim()]);
        assert!(u.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
        assert!(v.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
        let m = witness_value(&rho, &set).unwrap().value;
        assert!((obj.value(&vec![0.0; obj.dim()]) - m).abs() < 1e-12);
    }

    #[test]
    fn value_matches_explicit_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let set = hw_set::<f64>(3).unwrap().subset(&[0, 1, 3]).unwrap();
        let rho = random_density_matrix(3, &mut rng);
        let obj = LocalUnitaryObjective::new(&rho, &set, LocalUnitaryFamily::Independent, Goal::Maximize).unwrap();
        let x: Vec<f64> = (0..obj.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (u, v) = obj.local_unitaries(&x);
        assert!(u.unitarity_defect() < 1e-12 && v.unitarity_defect() < 1e-12);
        let rotated = rho.local_conjugate(&u, &v).unwrap();
        let direct = witness_value(&rotated, &set).unwrap().value;
        assert!((-obj.value(&x) - direct).abs() < 1e-12);
    }
}
