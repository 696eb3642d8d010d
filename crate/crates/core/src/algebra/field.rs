use std::fmt;

use super::poly::{Coeffs, QuotientRing};
use crate::error::{Error, Result};

/// Element of a [`GaloisField`] in coefficient form (lowest degree first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement(pub(crate) Coeffs);

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }
}

/// GF(p^n) as `F_p[x] / (f(x))` for a monic irreducible `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    ring: QuotientRing,
}

impl GaloisField {
    /// Field with the pinned modulus for the supported orders:
    /// GF(p) for any prime p, GF(4): x²+x+1, GF(8): x³+x+1, GF(9): x²+1.
    pub fn new(p: u32, n: usize) -> Result<Self> {
        let modulus: Vec<u32> = match (p, n) {
            (_, 1) => vec![0, 1],
            (2, 2) => vec![1, 1, 1],
            (2, 3) => vec![1, 1, 0, 1],
            (3, 2) => vec![1, 0, 1],
            _ => return Err(Error::Unsupported(format!("no pinned modulus for GF({p}^{n})"))),
        };
        Self::with_modulus(p, &modulus)
    }

    /// Field over an explicit modulus, verified by checking that every nonzero
    /// element is invertible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Algebra(format!("{p} is not prime")));
        }
        let field = Self {
            p,
            ring: QuotientRing::new(p, modulus)?,
        };
        for a in field.elements().skip(1) {
            if field.inv(a).is_none() {
                return Err(Error::Algebra(format!("modulus {modulus:?} is reducible over F_{p}")));
            }
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.ring.degree()
    }

    pub fn order(&self) -> usize {
        self.ring.size()
    }

    pub fn modulus(&self) -> &[u32] {
        self.ring.modulus()
    }

    /// All elements ordered by their base-p code: 0, 1, …, p−1, x, x+1, …
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.ring.elements().map(FieldElement)
    }

    pub fn element(&self, code: usize) -> FieldElement {
        FieldElement(self.ring.decode(code % self.order()))
    }

    pub fn code(&self, a: FieldElement) -> usize {
        self.ring.code(&a.0)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(self.ring.constant(0))
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(self.ring.constant(1))
    }

    pub fn from_int(&self, k: u32) -> FieldElement {
        FieldElement(self.ring.constant(k))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.ring.add(&a.0, &b.0))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.ring.neg(&a.0))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.ring.mul(&a.0, &b.0))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(self.ring.pow(&a.0, e))
    }

    /// Multiplicative inverse via `a^(q-2)`, `None` for zero or when the
    /// modulus is not irreducible.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a == self.zero() {
            return None;
        }
        let b = self.pow(a, self.order() as u64 - 2);
        (self.mul(a, b) == self.one()).then_some(b)
    }

    /// Absolute trace `α + α^p + … + α^(p^(n−1))`, an element of F_p.
    pub fn trace(&self, a: FieldElement) -> u32 {
        let mut acc = self.zero();
        let mut term = a;
        for _ in 0..self.degree() {
            acc = self.add(acc, term);
            term = self.pow(term, self.p as u64);
        }
        debug_assert!(self.ring.is_constant(&acc.0), "trace left the prime field");
        acc.0[0]
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.degree())
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}
