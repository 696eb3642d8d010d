use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the linear algebra, constructions and witness are generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{iθ}`.
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `ω_d^k = exp(2πik/d)`, reducing `k` modulo `d` first so large exponents stay exact.
pub fn root_of_unity<T: Real>(d: usize, k: i64) -> Complex<T> {
    let k = k.rem_euclid(d as i64);
    if k == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let angle = T::TAU() * T::lit(k as f64) / T::from_usize_lossy(d);
    cis(angle)
}
