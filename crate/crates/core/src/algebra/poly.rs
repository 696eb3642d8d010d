use crate::error::{Error, Result};

/// Largest extension degree supported by the coefficient representation.
pub const MAX_DEGREE: usize = 4;

pub(crate) type Coeffs = [u32; MAX_DEGREE];

/// `Z_q[x] / (f(x))` for a monic `f` of degree `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct QuotientRing {
    q: u32,
    n: usize,
    /// Coefficients of `f`, lowest degree first, length `n + 1`, leading 1.
    modulus: Vec<u32>,
}

impl QuotientRing {
    pub(crate) fn new(q: u32, modulus: &[u32]) -> Result<Self> {
        if q < 2 {
            return Err(Error::Algebra(format!("coefficient modulus {q} < 2")));
        }
        let n = modulus.len().saturating_sub(1);
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::Algebra(format!("modulus degree {n} outside 1..={MAX_DEGREE}")));
        }
        if modulus[n] % q != 1 {
            return Err(Error::Algebra("modulus polynomial is not monic".into()));
        }
        let modulus = modulus.iter().map(|c| c % q).collect();
        Ok(Self { q, n, modulus })
    }

    pub(crate) fn degree(&self) -> usize {
        self.n
    }

    pub(crate) fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub(crate) fn size(&self) -> usize {
        (self.q as usize).pow(self.n as u32)
    }

    pub(crate) fn constant(&self, c: u32) -> Coeffs {
        let mut out = [0; MAX_DEGREE];
        out[0] = c % self.q;
        out
    }

    /// The class of `x` (or of `-f_0` when `n = 1`).
    #[cfg(test)]
    pub(crate) fn generator(&self) -> Coeffs {
        let mut out = [0; MAX_DEGREE];
        if self.n == 1 {
            out[0] = (self.q - self.modulus[0]) % self.q;
        } else {
            out[1] = 1;
        }
        out
    }

    /// Base-`q` encoding, lowest coefficient least significant.
    pub(crate) fn code(&self, a: &Coeffs) -> usize {
        a[..self.n]
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.q as usize + c as usize)
    }

    pub(crate) fn decode(&self, mut code: usize) -> Coeffs {
        let mut out = [0; MAX_DEGREE];
        for c in out.iter_mut().take(self.n) {
            *c = (code % self.q as usize) as u32;
            code /= self.q as usize;
        }
        out
    }

    pub(crate) fn add(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        let mut out = [0; MAX_DEGREE];
        for i in 0..self.n {
            out[i] = (a[i] + b[i]) % self.q;
        }
        out
    }

    pub(crate) fn neg(&self, a: &Coeffs) -> Coeffs {
        let mut out = [0; MAX_DEGREE];
        for i in 0..self.n {
            out[i] = (self.q - a[i]) % self.q;
        }
        out
    }

    pub(crate) fn scale(&self, a: &Coeffs, s: u32) -> Coeffs {
        let mut out = [0; MAX_DEGREE];
        for i in 0..self.n {
            out[i] = (a[i] * (s % self.q)) % self.q;
        }
        out
    }

    pub(crate) fn mul(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        let n = self.n;
        let q = self.q;
        let mut prod = [0u32; 2 * MAX_DEGREE];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % q;
            }
        }
        // x^n = -(f_0 + f_1 x + ... + f_{n-1} x^{n-1})
        for deg in (n..2 * n - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..n {
                let sub = (c * self.modulus[i]) % q;
                prod[deg - n + i] = (prod[deg - n + i] + q - sub) % q;
            }
        }
        let mut out = [0; MAX_DEGREE];
        out[..n].copy_from_slice(&prod[..n]);
        out
    }

    pub(crate) fn pow(&self, a: &Coeffs, mut e: u64) -> Coeffs {
        let mut base = *a;
        let mut acc = self.constant(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn is_constant(&self, a: &Coeffs) -> bool {
        a[1..self.n].iter().all(|&c| c == 0)
    }

    pub(crate) fn elements(&self) -> impl Iterator<Item = Coeffs> + '_ {
        (0..self.size()).map(move |c| self.decode(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_round_trip() {
        let r = QuotientRing::new(3, &[1, 0, 1]).unwrap();
        for code in 0..r.size() {
            assert_eq!(r.code(&r.decode(code)), code);
        }
    }

    #[test]
    fn x_squared_reduces_with_modulus() {
        // x^2 = -1 in GF(3)[x]/(x^2+1)
        let r = QuotientRing::new(3, &[1, 0, 1]).unwrap();
        let x = r.generator();
        assert_eq!(r.mul(&x, &x), r.constant(2));
    }

    #[test]
    fn rejects_non_monic() {
        assert!(QuotientRing::new(3, &[1, 0, 2]).is_err());
        assert!(QuotientRing::new(3, &[1]).is_err());
    }
}
