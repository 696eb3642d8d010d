//! Finite fields GF(p^n) and the Galois rings GR(4, n) used by the prime-power
//! MUB constructions.
//!
//! Both are quotients `Z_q[x] / (f(x))` with `f` monic, so they share one
//! coefficient-vector arithmetic in [`poly`]. Element sizes are tiny (at most
//! 64 elements in scope) and everything is done in coefficient form.

mod field;
mod poly;
mod ring;

pub use field::{FieldElement, GaloisField};
pub use poly::MAX_DEGREE;
pub use ring::{teichmuller_set, GaloisRing, RingElement};
