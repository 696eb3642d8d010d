use super::poly::{Coeffs, QuotientRing};
use crate::error::{Error, Result};

/// Element of a [`GaloisRing`] in coefficient form over Z₄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingElement(pub(crate) Coeffs);

impl RingElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }
}

/// The Galois ring GR(4, n) = Z₄[x] / (h(x)) with `h` a monic basic
/// irreducible polynomial, together with its Teichmüller set and the 2-adic
/// decomposition table `x = k + 2j`, `k, j ∈ T_n`.
#[derive(Debug, Clone)]
pub struct GaloisRing {
    ring: QuotientRing,
    teichmuller: Vec<RingElement>,
    /// Indexed by element code: positions of `(k, j)` in `teichmuller`.
    decomposition: Vec<(usize, usize)>,
}

impl GaloisRing {
    /// GR(4, n) for n ∈ {1, 2, 3}. The moduli are Hensel lifts dividing
    /// `x^(2^n − 1) − 1`: x + 3, x² + x + 1, x³ + 2x² + x + 3.
    pub fn new(n: usize) -> Result<Self> {
        let modulus: &[u32] = match n {
            1 => &[3, 1],
            2 => &[1, 1, 1],
            3 => &[3, 1, 2, 1],
            _ => return Err(Error::Unsupported(format!("GR(4,{n}) not pinned"))),
        };
        Self::with_modulus(modulus)
    }

    pub fn with_modulus(modulus: &[u32]) -> Result<Self> {
        let ring = QuotientRing::new(4, modulus)?;
        let n = ring.degree();
        let order = (1u64 << n) - 1;
        let generator = ring
            .elements()
            .find(|e| multiplicative_order(&ring, e, order) == Some(order))
            .ok_or_else(|| {
                Error::Algebra(format!(
                    "no element of order {order} in Z4[x]/{modulus:?}; modulus is not basic irreducible"
                ))
            })?;
        let mut teichmuller = vec![RingElement(ring.constant(0))];
        let mut cur = ring.constant(1);
        for _ in 0..order {
            teichmuller.push(RingElement(cur));
            cur = ring.mul(&cur, &generator);
        }

        let mut decomposition = vec![None; ring.size()];
        for (ki, k) in teichmuller.iter().enumerate() {
            for (ji, j) in teichmuller.iter().enumerate() {
                let x = ring.add(&k.0, &ring.scale(&j.0, 2));
                let slot = &mut decomposition[ring.code(&x)];
                if slot.is_some() {
                    return Err(Error::Algebra("2-adic decomposition not unique".into()));
                }
                *slot = Some((ki, ji));
            }
        }
        let decomposition = decomposition
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Algebra("2-adic decomposition incomplete".into()))?;

        Ok(Self {
            ring,
            teichmuller,
            decomposition,
        })
    }

    pub fn degree(&self) -> usize {
        self.ring.degree()
    }

    pub fn size(&self) -> usize {
        self.ring.size()
    }

    pub fn modulus(&self) -> &[u32] {
        self.ring.modulus()
    }

    /// `T_n = {0, 1, ξ, ξ², …}`, in that order.
    pub fn teichmuller(&self) -> &[RingElement] {
        &self.teichmuller
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        self.ring.elements().map(RingElement)
    }

    pub fn code(&self, a: RingElement) -> usize {
        self.ring.code(&a.0)
    }

    pub fn zero(&self) -> RingElement {
        RingElement(self.ring.constant(0))
    }

    pub fn one(&self) -> RingElement {
        RingElement(self.ring.constant(1))
    }

    pub fn from_int(&self, k: u32) -> RingElement {
        RingElement(self.ring.constant(k))
    }

    pub fn add(&self, a: RingElement, b: RingElement) -> RingElement {
        RingElement(self.ring.add(&a.0, &b.0))
    }

    pub fn mul(&self, a: RingElement, b: RingElement) -> RingElement {
        RingElement(self.ring.mul(&a.0, &b.0))
    }

    pub fn scale(&self, a: RingElement, s: u32) -> RingElement {
        RingElement(self.ring.scale(&a.0, s))
    }

    pub fn pow(&self, a: RingElement, e: u64) -> RingElement {
        RingElement(self.ring.pow(&a.0, e))
    }

    /// Reduction modulo 2, as coefficients of a GF(2^n) element.
    pub fn reduce_mod2(&self, a: RingElement) -> Vec<u32> {
        a.0[..self.degree()].iter().map(|c| c % 2).collect()
    }

    /// Teichmüller digits `(k, j)` with `a = k + 2j`.
    pub fn decompose(&self, a: RingElement) -> Result<(RingElement, RingElement)> {
        let (ki, ji) = self
            .decomposition
            .get(self.code(a))
            .copied()
            .ok_or_else(|| Error::Algebra(format!("cannot decompose {:?}", a.0)))?;
        Ok((self.teichmuller[ki], self.teichmuller[ji]))
    }

    /// Frobenius lift `σ(k + 2j) = k² + 2j²`.
    pub fn frobenius(&self, a: RingElement) -> Result<RingElement> {
        let (k, j) = self.decompose(a)?;
        Ok(self.add(self.mul(k, k), self.scale(self.mul(j, j), 2)))
    }

    /// Trace `Σ_{t<n} σ^t(x)` into Z₄.
    pub fn trace(&self, a: RingElement) -> Result<u32> {
        let mut acc = self.zero();
        let mut term = a;
        for _ in 0..self.degree() {
            acc = self.add(acc, term);
            term = self.frobenius(term)?;
        }
        if !self.ring.is_constant(&acc.0) {
            return Err(Error::Algebra(format!("trace {:?} did not land in Z4", acc.0)));
        }
        Ok(acc.0[0])
    }
}

/// The Teichmüller set of GR(4, n) with the pinned modulus.
pub fn teichmuller_set(n: usize) -> Result<Vec<RingElement>> {
    Ok(GaloisRing::new(n)?.teichmuller().to_vec())
}

fn multiplicative_order(ring: &QuotientRing, e: &Coeffs, max: u64) -> Option<u64> {
    let one = ring.constant(1);
    let mut cur = *e;
    for k in 1..=max {
        if cur == one {
            return Some(k);
        }
        cur = ring.mul(&cur, e);
    }
    None
}
