//! Mutually unbiased bases: the Heisenberg-Weyl complete sets for prime and
//! prime-power dimensions, products of them for composite dimensions, and the
//! unextendible families in d = 4, 6, 7.
//!
//! A basis is stored as a unitary matrix whose columns are the basis vectors.
//! Sets are ordered so that `bases[0]` is the standard basis and, for prime
//! `p`, `bases[k + 1] = D^k F` with `D = diag(ω^{ℓ²})`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::{GaloisField, GaloisRing};
use crate::error::{mismatch, Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::scalar::{cis, root_of_unity, Real};

/// Orthonormal basis of `C^d`, vectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis<T: Real> {
    matrix: ComplexMatrix<T>,
    label: String,
}

impl<T: Real> Basis<T> {
    pub fn new(matrix: ComplexMatrix<T>, label: impl Into<String>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(mismatch(
                "square basis matrix",
                format!("{}×{}", matrix.rows(), matrix.cols()),
            ));
        }
        Ok(Self {
            matrix,
            label: label.into(),
        })
    }

    pub fn standard(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d),
            label: "I".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn vector(&self, i: usize) -> StateVector<T> {
        self.matrix.column(i)
    }

    pub fn vectors(&self) -> Vec<StateVector<T>> {
        self.matrix.columns()
    }

    /// `U·B`: the basis with every vector mapped by `u`.
    pub fn transformed(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        Ok(Self {
            matrix: u.matmul(&self.matrix)?,
            label: self.label.clone(),
        })
    }

    /// Reorders vectors: column `j` of the result is column `perm[j]` here.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let d = self.dim();
        Self {
            matrix: ComplexMatrix::from_fn(d, d, |i, j| self.matrix[(i, perm[j])]),
            label: self.label.clone(),
        }
    }

    /// Multiplies vector `j` by `phases[j]`.
    pub fn rephased(&self, phases: &[Complex<T>]) -> Self {
        let d = self.dim();
        Self {
            matrix: ComplexMatrix::from_fn(d, d, |i, j| self.matrix[(i, j)] * phases[j]),
            label: self.label.clone(),
        }
    }
}

/// Ordered list of bases meant to be pairwise unbiased.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet<T: Real> {
    dim: usize,
    bases: Vec<Basis<T>>,
    provenance: String,
}

impl<T: Real> MubSet<T> {
    pub fn new(bases: Vec<Basis<T>>, provenance: impl Into<String>) -> Result<Self> {
        let dim = bases
            .first()
            .map(Basis::dim)
            .ok_or_else(|| Error::InvalidData("MUB set without bases".into()))?;
        if let Some(b) = bases.iter().find(|b| b.dim() != dim) {
            return Err(mismatch(dim, b.dim()));
        }
        Ok(Self {
            dim,
            bases,
            provenance: provenance.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[Basis<T>] {
        &self.bases
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// The bases at `indices` (0-based), in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let bases = indices
            .iter()
            .map(|&i| {
                self.bases
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::OutOfRange(format!("basis index {i} in a set of {}", self.len())))
            })
            .collect::<Result<Vec<_>>>()?;
        let labels: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
        Self::new(bases, format!("{} [{}]", self.provenance, labels.join(",")))
    }

    /// One global unitary applied to every basis.
    pub fn transformed(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        let bases = self
            .bases
            .iter()
            .map(|b| b.transformed(u))
            .collect::<Result<Vec<_>>>()?;
        Self::new(bases, self.provenance.clone())
    }

    pub fn map_bases(&self, f: impl FnMut(&Basis<T>) -> Basis<T>) -> Self {
        Self {
            dim: self.dim,
            bases: self.bases.iter().map(f).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn cast<U: Real>(&self) -> MubSet<U> {
        MubSet {
            dim: self.dim,
            bases: self
                .bases
                .iter()
                .map(|b| Basis {
                    matrix: b.matrix.cast(),
                    label: b.label.clone(),
                })
                .collect(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Wire form: `{dim, provenance, bases: [matrix, …], labels}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct MubSetRecord<T: Real> {
    pub dim: usize,
    pub provenance: String,
    pub bases: Vec<ComplexMatrix<T>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl<T: Real> From<&MubSet<T>> for MubSetRecord<T> {
    fn from(set: &MubSet<T>) -> Self {
        Self {
            dim: set.dim,
            provenance: set.provenance.clone(),
            bases: set.bases.iter().map(|b| b.matrix.clone()).collect(),
            labels: set.bases.iter().map(|b| b.label.clone()).collect(),
        }
    }
}

impl<T: Real> TryFrom<MubSetRecord<T>> for MubSet<T> {
    type Error = Error;

    fn try_from(rec: MubSetRecord<T>) -> Result<Self> {
        if !rec.labels.is_empty() && rec.labels.len() != rec.bases.len() {
            return Err(mismatch(rec.bases.len(), rec.labels.len()));
        }
        let bases = rec
            .bases
            .into_iter()
            .enumerate()
            .map(|(k, m)| {
                let label = rec.labels.get(k).cloned().unwrap_or_else(|| format!("B{}", k + 1));
                Basis::new(m, label)
            })
            .collect::<Result<Vec<_>>>()?;
        let set = Self::new(bases, rec.provenance)?;
        if set.dim != rec.dim {
            return Err(mismatch(rec.dim, set.dim));
        }
        Ok(set)
    }
}

impl<T: Real + Serialize> Serialize for MubSet<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MubSetRecord::from(self).serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for MubSet<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = MubSetRecord::<T>::deserialize(d)?;
        Self::try_from(rec).map_err(serde::de::Error::custom)
    }
}

/// Outcome of [`verify_mub_set`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    /// Pair of basis indices with the largest deviation; `(k, k)` means an
    /// orthonormality defect inside basis `k`.
    pub worst_pair: Option<(usize, usize)>,
    pub max_deviation: f64,
    /// Pairs of bases that define the same projectors (equal up to vector
    /// phases and order).
    pub duplicates: Vec<(usize, usize)>,
}

/// Checks `|⟨i_k|i'_k'⟩|² = δ_ii'` within a basis and `= 1/d` across bases.
pub fn verify_mub_set<T: Real>(set: &MubSet<T>, tol: f64) -> VerifyReport {
    let d = set.dim();
    let inv_d = 1.0 / d as f64;
    let vectors: Vec<Vec<StateVector<T>>> = set.bases.iter().map(Basis::vectors).collect();
    let mut worst = (0.0f64, None);
    let mut duplicates = Vec::new();
    for k in 0..set.len() {
        for kp in k..set.len() {
            let mut dev = 0.0f64;
            let mut matched = vec![false; d];
            for (i, u) in vectors[k].iter().enumerate() {
                for (ip, v) in vectors[kp].iter().enumerate() {
                    let o = u.inner(v).norm_sqr().to_f64_lossy();
                    let target = match (k == kp, i == ip) {
                        (true, true) => 1.0,
                        (true, false) => 0.0,
                        (false, _) => inv_d,
                    };
                    dev = dev.max((o - target).abs());
                    if (o - 1.0).abs() <= tol {
                        matched[i] = true;
                    }
                }
            }
            if k != kp && matched.iter().all(|&m| m) {
                duplicates.push((k, kp));
            }
            if dev > worst.0 || worst.1.is_none() {
                worst = (dev, Some((k, kp)));
            }
        }
    }
    VerifyReport {
        ok: worst.0 <= tol && duplicates.is_empty(),
        worst_pair: worst.1,
        max_deviation: worst.0,
        duplicates,
    }
}

// ---------------------------------------------------------------------------
// Constructions

/// `F_d` with `f_jk = ω^{jk} / √d`.
pub fn fourier_matrix<T: Real>(d: usize) -> ComplexMatrix<T> {
    let s = T::one() / T::from_usize_lossy(d).sqrt();
    ComplexMatrix::from_fn(d, d, |j, k| root_of_unity::<T>(d, (j * k) as i64) * s)
}

/// Basis `{|j_k⟩}` with `|j_k⟩ = p^{-1/2} Σ_ℓ ω_p^{kℓ² + jℓ} |ℓ⟩`.
pub fn prime_state_basis<T: Real>(p: usize, k: usize) -> ComplexMatrix<T> {
    let s = T::one() / T::from_usize_lossy(p).sqrt();
    ComplexMatrix::from_fn(p, p, |l, j| root_of_unity::<T>(p, (k * l * l + j * l) as i64) * s)
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Complete Heisenberg-Weyl set for prime `p`: `I, F, DF, …, D^{p−1}F` with
/// `D = diag(ω^{ℓ²})`; for `p = 2`, `D = diag(1, i)`.
pub fn hw_prime_set<T: Real>(p: usize) -> Result<MubSet<T>> {
    if !is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not prime")));
    }
    let diag: Vec<Complex<T>> = if p == 2 {
        vec![Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::one())]
    } else {
        (0..p).map(|l| root_of_unity(p, (l * l) as i64)).collect()
    };
    let d_mat = ComplexMatrix::from_diagonal(&diag);
    let mut bases = vec![Basis::standard(p).with_label("B1")];
    let mut cur = fourier_matrix::<T>(p);
    for k in 0..p {
        bases.push(Basis::new(cur.clone(), format!("B{}", k + 2))?);
        cur = d_mat.matmul(&cur)?;
    }
    MubSet::new(bases, format!("HW-prime d={p}"))
}

/// Complete set for `d = p^n`, `p` odd:
/// `|j_k⟩ = d^{-1/2} Σ_{ℓ∈F_d} ω_p^{tr(kℓ² + jℓ)} |ℓ⟩`, preceded by the
/// standard basis. `k`, `j`, `ℓ` run over the field in code order
/// (0, 1, …, p−1, x, x+1, …).
pub fn hw_odd_prime_power_set<T: Real>(p: usize, n: usize) -> Result<MubSet<T>> {
    if p.is_multiple_of(2) {
        return Err(Error::Unsupported("p must be odd".into()));
    }
    let field = GaloisField::new(p as u32, n)?;
    let d = field.order();
    let s = T::one() / T::from_usize_lossy(d).sqrt();
    let els: Vec<_> = field.elements().collect();
    let mut bases = vec![Basis::standard(d).with_label("B1")];
    for (ki, &k) in els.iter().enumerate() {
        let m = ComplexMatrix::from_fn(d, d, |li, ji| {
            let l = els[li];
            let arg = field.add(field.mul(k, field.mul(l, l)), field.mul(els[ji], l));
            root_of_unity::<T>(p, field.trace(arg) as i64) * s
        });
        bases.push(Basis::new(m, format!("B{}", ki + 2))?);
    }
    MubSet::new(
        bases,
        format!("HW-field d={d} ({field}, modulus {:?}, code order)", field.modulus()),
    )
}

/// Complete set for `d = 2^n` from GR(4, n):
/// `|j_k⟩ = 2^{-n/2} Σ_{ℓ∈T_n} i^{tr((k + 2j)ℓ)} |ℓ⟩`, preceded by the
/// standard basis. `k`, `j`, `ℓ` run over `T_n = (0, 1, ξ, ξ², …)`.
pub fn hw_even_prime_power_set<T: Real>(n: usize) -> Result<MubSet<T>> {
    let ring = GaloisRing::new(n)?;
    let t = ring.teichmuller().to_vec();
    let d = t.len();
    let s = T::one() / T::from_usize_lossy(d).sqrt();
    let mut bases = vec![Basis::standard(d).with_label("B1")];
    for (ki, &k) in t.iter().enumerate() {
        let mut m = ComplexMatrix::zeros(d, d);
        for (li, &l) in t.iter().enumerate() {
            for (ji, &j) in t.iter().enumerate() {
                let arg = ring.mul(ring.add(k, ring.scale(j, 2)), l);
                m[(li, ji)] = root_of_unity::<T>(4, ring.trace(arg)? as i64) * s;
            }
        }
        bases.push(Basis::new(m, format!("B{}", ki + 2))?);
    }
    MubSet::new(
        bases,
        format!(
            "HW-ring d={d} (GR(4,{n}), modulus {:?}, Teichmüller order)",
            ring.modulus()
        ),
    )
}

fn prime_power_factors(mut d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut p = 2;
    while d > 1 {
        let mut n = 0;
        while d.is_multiple_of(p) {
            d /= p;
            n += 1;
        }
        if n > 0 {
            out.push((p, n));
        }
        p += 1;
    }
    out
}

fn complete_set<T: Real>(p: usize, n: usize) -> Result<MubSet<T>> {
    match (p, n) {
        (_, 1) => hw_prime_set(p),
        (2, _) => hw_even_prime_power_set(n),
        _ => hw_odd_prime_power_set(p, n),
    }
}

/// The Heisenberg-Weyl set for `d`: complete (`d + 1` bases) for prime powers
/// in scope; for other `d` the tensor products of the prime-power factors'
/// sets, giving `1 + min(p_i^{n_i})` bases (three for d = 6).
pub fn hw_set<T: Real>(d: usize) -> Result<MubSet<T>> {
    if d < 2 {
        return Err(Error::Unsupported(format!("dimension {d}")));
    }
    let factors = prime_power_factors(d);
    if factors.len() == 1 {
        let (p, n) = factors[0];
        return complete_set(p, n);
    }
    let sets = factors
        .iter()
        .map(|&(p, n)| complete_set::<T>(p, n))
        .collect::<Result<Vec<_>>>()?;
    let count = sets.iter().map(MubSet::len).min().expect("at least two factors");
    let mut bases = Vec::with_capacity(count);
    for k in 0..count {
        let m = sets
            .iter()
            .map(|s| s.bases()[k].matrix().clone())
            .reduce(|acc, m| acc.kron(&m))
            .expect("nonempty");
        bases.push(Basis::new(m, format!("B{}", k + 1))?);
    }
    let names: Vec<String> = factors.iter().map(|(p, n)| format!("{}", p.pow(*n as u32))).collect();
    MubSet::new(bases, format!("HW-product d={d} ({})", names.join("⊗")))
}

/// One-parameter Fourier family `F(x)` in d = 4.
pub fn fourier_family_d4<T: Real>(x: T) -> Basis<T> {
    let h = T::lit(0.5);
    let one = Complex::new(h, T::zero());
    let e = Complex::new(T::zero(), h) * cis(x);
    let rows = [
        [one, one, one, one],
        [one, one, -one, -one],
        [one, -one, e, -e],
        [one, -one, -e, e],
    ];
    Basis {
        matrix: ComplexMatrix::from_fn(4, 4, |i, j| rows[i][j]),
        label: format!("F({x})"),
    }
}

/// Two-parameter Hadamard family `H(y, z)` in d = 4.
pub fn h_family_d4<T: Real>(y: T, z: T) -> Basis<T> {
    let h = T::lit(0.5);
    let one = Complex::new(h, T::zero());
    let ey = cis(y) * h;
    let ez = cis(z) * h;
    let rows = [
        [one, one, one, one],
        [one, one, -one, -one],
        [-ey, ey, ez, -ez],
        [ey, -ey, ez, -ez],
    ];
    Basis {
        matrix: ComplexMatrix::from_fn(4, 4, |i, j| rows[i][j]),
        label: format!("H({y},{z})"),
    }
}

/// `{I, F(x), H(y, z)}`; unextendible unless `x = y = z = π/2`.
pub fn d4_triple<T: Real>(x: T, y: T, z: T) -> MubSet<T> {
    MubSet::new(
        vec![Basis::standard(4), fourier_family_d4(x), h_family_d4(y, z)],
        format!("d4 triple x={x} y={y} z={z}"),
    )
    .expect("consistent dimensions")
}

/// Tao matrix `S₆`, entries in `{1, ω₃, ω₃²} / √6`.
pub fn tao_matrix<T: Real>() -> Basis<T> {
    const EXP: [[i64; 6]; 6] = [
        [0, 0, 0, 0, 0, 0],
        [0, 0, 1, 1, 2, 2],
        [0, 1, 0, 2, 2, 1],
        [0, 1, 2, 0, 1, 2],
        [0, 2, 2, 1, 0, 1],
        [0, 2, 1, 2, 1, 0],
    ];
    let s = T::one() / T::lit(6.0).sqrt();
    Basis {
        matrix: ComplexMatrix::from_fn(6, 6, |i, j| root_of_unity::<T>(3, EXP[i][j]) * s),
        label: "S6".into(),
    }
}

/// The unextendible pair `{I, S₆}`.
pub fn tao_pair<T: Real>() -> MubSet<T> {
    MubSet::new(vec![Basis::standard(6), tao_matrix()], "Tao pair d=6").expect("d=6")
}

/// `A₇` with `α = (−3 + i√7)/4`.
pub fn grassl_a7<T: Real>() -> Basis<T> {
    // true marks an α entry
    const ALPHA: [[bool; 7]; 7] = [
        [true, true, true, false, true, false, false],
        [false, true, true, true, false, true, false],
        [false, false, true, true, true, false, true],
        [true, false, false, true, true, true, false],
        [false, true, false, false, true, true, true],
        [true, false, true, false, false, true, true],
        [true, true, false, true, false, false, true],
    ];
    let alpha = Complex::new(T::lit(-0.75), T::lit(7.0).sqrt() / T::lit(4.0));
    let s = T::one() / T::lit(7.0).sqrt();
    Basis {
        matrix: ComplexMatrix::from_fn(7, 7, |i, j| {
            if ALPHA[i][j] {
                alpha * s
            } else {
                Complex::new(s, T::zero())
            }
        }),
        label: "A7".into(),
    }
}

/// The unextendible triple `{I, F₇, A₇}`.
pub fn grassl_triple<T: Real>() -> MubSet<T> {
    MubSet::new(
        vec![
            Basis::standard(7),
            Basis::new(fourier_matrix(7), "F7").expect("square"),
            grassl_a7(),
        ],
        "unextendible triple d=7 {I,F7,A7}",
    )
    .expect("d=7")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TOL: f64 = 1e-10;

    #[test]
    fn every_hw_set_is_unbiased() {
        for (d, expected) in [(2, 3), (3, 4), (4, 5), (5, 6), (6, 3), (7, 8), (8, 9), (9, 10)] {
            let set = hw_set::<f64>(d).unwrap();
            assert_eq!(set.len(), expected, "d={d}");
            let r = verify_mub_set(&set, TOL);
            assert!(r.ok, "d={d}: {r:?}");
        }
    }

    #[test]
    fn hw_d3_exact() {
        let r = verify_mub_set(&hw_prime_set::<f64>(3).unwrap(), TOL);
        assert!(r.ok && r.max_deviation < 1e-12);
    }

    #[test]
    fn p2_uses_quarter_phase_diagonal() {
        let set = hw_prime_set::<f64>(2).unwrap();
        let b3 = set.bases()[2].matrix();
        let s = 1.0 / 2f64.sqrt();
        // D₂F₂ = diag(1, i)·F₂
        assert!((b3[(1, 0)] - Complex::new(0.0, s)).norm() < 1e-15);
        assert!((b3[(1, 1)] - Complex::new(0.0, -s)).norm() < 1e-15);
    }

    #[test]
    fn prime_diagonals_match_printed_d5_d7() {
        for (p, printed) in [(5usize, vec![0i64, 1, 4, 4, 1]), (7, vec![0, 1, 4, 2, 2, 4, 1])] {
            let set = hw_prime_set::<f64>(p).unwrap();
            let f = fourier_matrix::<f64>(p);
            let d_mat =
                ComplexMatrix::from_diagonal(&printed.iter().map(|&e| root_of_unity::<f64>(p, e)).collect::<Vec<_>>());
            let mut expected = f.clone();
            for k in 0..p {
                assert!(set.bases()[k + 1].matrix().max_abs_diff(&expected) < 1e-14);
                expected = d_mat.matmul(&expected).unwrap();
            }
        }
    }

    #[test]
    fn prime_state_formula_unbiased_to_every_other_hw_basis() {
        for p in [3usize, 5, 7] {
            let set = hw_prime_set::<f64>(p).unwrap();
            for k in 0..p {
                let b = Basis::new(prime_state_basis::<f64>(p, k), "formula").unwrap();
                let mut same = 0;
                for (idx, other) in set.bases().iter().enumerate() {
                    let pair = MubSet::new(vec![b.clone(), other.clone()], "pair").unwrap();
                    let r = verify_mub_set(&pair, TOL);
                    if r.duplicates.is_empty() {
                        assert!(r.ok, "p={p} k={k} vs basis {idx}");
                    } else {
                        same += 1;
                        assert_eq!(idx, k + 1);
                    }
                }
                assert_eq!(same, 1);
            }
        }
    }

    #[test]
    fn odd_prime_power_k0_is_fourier_type() {
        let set = hw_odd_prime_power_set::<f64>(3, 2).unwrap();
        assert_eq!(set.len(), 10);
        let b = set.bases()[1].matrix();
        for i in 0..9 {
            for j in 0..9 {
                assert!((b[(i, j)].norm() - 1.0 / 3.0).abs() < 1e-15);
            }
        }
        let pairs: usize = (0..10).map(|k| 9 - k).sum();
        assert_eq!(pairs, 45);
        assert!(verify_mub_set(&set, TOL).ok);
    }

    #[test]
    fn even_prime_power_sets() {
        let d4 = hw_even_prime_power_set::<f64>(2).unwrap();
        assert_eq!(d4.len(), 5);
        assert!(verify_mub_set(&d4, TOL).ok);
        let d8 = hw_even_prime_power_set::<f64>(3).unwrap();
        assert_eq!(d8.len(), 9);
        assert!(verify_mub_set(&d8, TOL).ok);
    }

    #[test]
    fn fourier_and_h_families() {
        for &x in &[0.0, 0.3, FRAC_PI_2, 2.5, PI] {
            let f = fourier_family_d4::<f64>(x);
            assert!(f.matrix().unitarity_defect() < 1e-14);
            assert!(f.matrix().as_slice().iter().all(|z| (z.norm() - 0.5).abs() < 1e-15));
        }
        // printed entries at x = 0 and x = π/2
        let f0 = fourier_family_d4::<f64>(0.0);
        assert!((f0.matrix()[(2, 2)] - Complex::new(0.0, 0.5)).norm() < 1e-15);
        let fpi2 = fourier_family_d4::<f64>(FRAC_PI_2);
        assert!((fpi2.matrix()[(2, 2)] - Complex::new(-0.5, 0.0)).norm() < 1e-15);
        assert!((fpi2.matrix()[(2, 3)] - Complex::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn d4_triples_are_unbiased_for_any_parameters() {
        for &(x, y, z) in &[
            (0.3, 1.1, 2.0),
            (FRAC_PI_2, 0.0, 0.0),
            (FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
            (3.0, 0.1, 2.9),
        ] {
            let r = verify_mub_set(&d4_triple::<f64>(x, y, z), TOL);
            assert!(r.ok, "{x} {y} {z}: {r:?}");
        }
    }

    #[test]
    fn tao_and_grassl() {
        let s6 = tao_matrix::<f64>();
        assert!(s6
            .matrix()
            .as_slice()
            .iter()
            .all(|z| (z.norm_sqr() - 1.0 / 6.0).abs() < 1e-15));
        assert!(s6.matrix().unitarity_defect() < 1e-14);
        assert!(verify_mub_set(&tao_pair::<f64>(), TOL).ok);

        let a7 = grassl_a7::<f64>();
        assert!(a7
            .matrix()
            .as_slice()
            .iter()
            .all(|z| (z.norm_sqr() - 1.0 / 7.0).abs() < 1e-15));
        assert!(verify_mub_set(&grassl_triple::<f64>(), TOL).ok);
    }

    #[test]
    fn duplicate_basis_fails() {
        let f2 = Basis::new(fourier_matrix::<f64>(2), "F2").unwrap();
        let set = MubSet::new(vec![Basis::standard(2), f2, Basis::standard(2)], "dup").unwrap();
        let r = verify_mub_set(&set, TOL);
        assert!(!r.ok);
        assert_eq!(r.duplicates, vec![(0, 2)]);
        assert!((r.max_deviation - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constructors_are_deterministic() {
        for d in [4, 5, 8, 9] {
            assert_eq!(hw_set::<f64>(d).unwrap(), hw_set::<f64>(d).unwrap());
        }
    }

    #[test]
    fn works_in_single_precision() {
        let set = hw_set::<f32>(7).unwrap();
        assert!(verify_mub_set(&set, 1e-5).ok);
    }

    #[test]
    fn json_round_trip() {
        let set = grassl_triple::<f64>();
        let s = serde_json::to_string(&set).unwrap();
        let back: MubSet<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn non_prime_rejected() {
        assert!(hw_prime_set::<f64>(4).is_err());
        assert!(hw_set::<f64>(1).is_err());
    }
}
