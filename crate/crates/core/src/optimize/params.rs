use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Result};
use crate::linalg::StateVector;

/// Angles of a product state `|a⟩ ⊗ |b⟩`, `2(d−1)` each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductParams {
    pub theta_a: Vec<f64>,
    pub theta_b: Vec<f64>,
}

impl ProductParams {
    pub fn from_flat(x: &[f64]) -> Self {
        let half = x.len() / 2;
        Self {
            theta_a: x[..half].to_vec(),
            theta_b: x[half..].to_vec(),
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut x = self.theta_a.clone();
        x.extend_from_slice(&self.theta_b);
        x
    }

    pub fn decode(&self, d: usize) -> Result<(StateVector<f64>, StateVector<f64>)> {
        Ok((
            decode_pure_state(&self.theta_a, d)?,
            decode_pure_state(&self.theta_b, d)?,
        ))
    }
}

/// Raw hyperspherical decoding without the gauge fix.
///
/// `theta = [θ_0 … θ_{d−2}, φ_1 … φ_{d−1}]`;
/// `a_0 = cos θ_0`, `a_k = sin θ_0 ⋯ sin θ_{k−1} · cos θ_k · e^{iφ_k}`,
/// with `cos θ_{d−1} ≡ 1`.
pub(crate) fn decode_into(theta: &[f64], d: usize, out: &mut [Complex<f64>]) {
    let (mags, phases) = theta.split_at(d - 1);
    let mut run = 1.0;
    for k in 0..d {
        let r = if k < d - 1 { run * mags[k].cos() } else { run };
        out[k] = if k == 0 {
            Complex::new(r, 0.0)
        } else {
            Complex::from_polar(r, phases[k - 1])
        };
        if k < d - 1 {
            run *= mags[k].sin();
        }
    }
}

/// Chain rule: given `w = ∂f/∂a*` (so `∂f/∂t = 2 Re ⟨∂_t a|w⟩`), accumulate
/// the angle gradient into `grad`.
pub(crate) fn pullback_gradient(theta: &[f64], d: usize, w: &[Complex<f64>], grad: &mut [f64]) {
    let (mags, phases) = theta.split_at(d - 1);
    let (g_mag, g_phase) = grad.split_at_mut(d - 1);
    let sin: Vec<f64> = mags.iter().map(|t| t.sin()).collect();
    let cos: Vec<f64> = mags.iter().map(|t| t.cos()).collect();
    // Re(e^{−iφ_k} w_k): derivative along the radial direction of a_k
    let radial: Vec<f64> = (0..d)
        .map(|k| {
            if k == 0 {
                w[0].re
            } else {
                let (s, c) = phases[k - 1].sin_cos();
                c * w[k].re + s * w[k].im
            }
        })
        .collect();

    let mut prefix = 1.0; // Π_{i<j} sin θ_i
    for j in 0..d - 1 {
        // k = j: ∂ cos θ_j = −sin θ_j
        let mut g = -prefix * sin[j] * radial[j];
        let mut run = prefix * cos[j];
        for k in j + 1..d {
            let c = if k < d - 1 { cos[k] } else { 1.0 };
            g += run * c * radial[k];
            if k < d - 1 {
                run *= sin[k];
            }
        }
        g_mag[j] += 2.0 * g;
        prefix *= sin[j];
    }

    // ∂a_k/∂φ_k = i a_k  →  2 Re(conj(i a_k) w_k) = 2 Im(conj(a_k) w_k)
    let mut r = 1.0;
    for k in 0..d {
        let rk = if k < d - 1 { r * cos[k] } else { r };
        if k > 0 {
            let (s, c) = phases[k - 1].sin_cos();
            // conj(a_k) w_k with a_k = rk e^{iφ}
            let im = rk * (c * w[k].im - s * w[k].re);
            g_phase[k - 1] += 2.0 * im;
        }
        if k < d - 1 {
            r *= sin[k];
        }
    }
}

/// Unit vector for `2(d−1)` angles, gauge-fixed so the first nonzero
/// amplitude is real and non-negative.
pub fn decode_pure_state(theta: &[f64], d: usize) -> Result<StateVector<f64>> {
    if d < 1 || theta.len() != 2 * (d - 1) {
        return Err(mismatch(2 * d.saturating_sub(1), theta.len()));
    }
    let mut a = vec![Complex::default(); d];
    decode_into(theta, d, &mut a);
    Ok(StateVector::new(a).gauge_fixed())
}

/// Angles for a (not necessarily normalized) nonzero vector; inverse of
/// [`decode_pure_state`] up to global phase.
pub fn encode_pure_state(v: &StateVector<f64>) -> Vec<f64> {
    let d = v.dim();
    let v = v.normalized().gauge_fixed();
    let amps = v.amplitudes();
    let r: Vec<f64> = amps.iter().map(|z| z.norm()).collect();
    let mut tail: Vec<f64> = vec![0.0; d + 1];
    for k in (0..d).rev() {
        tail[k] = tail[k + 1] + r[k] * r[k];
    }
    let mut theta = Vec::with_capacity(2 * (d - 1));
    for j in 0..d - 1 {
        theta.push(tail[j + 1].sqrt().atan2(r[j]));
    }
    let ref_phase = if r[0] > 0.0 { amps[0].arg() } else { 0.0 };
    theta.extend(amps[1..].iter().map(|a| a.arg() - ref_phase));
    theta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zero_angles_give_first_basis_vector() {
        let v = decode_pure_state(&[0.0; 4], 3).unwrap();
        assert_eq!(v, StateVector::basis(3, 0));
    }

    #[test]
    fn quarter_turn_in_d2() {
        let v = decode_pure_state(&[FRAC_PI_2, 0.0], 2).unwrap();
        assert!((v[0].norm()) < 1e-16);
        assert!((v[1] - Complex::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(decode_pure_state(&[0.0; 3], 3).is_err());
    }

    #[test]
    fn round_trip_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=9 {
            for _ in 0..50 {
                let v = random_state(d, &mut rng);
                let back = decode_pure_state(&encode_pure_state(&v), d).unwrap();
                assert!((back.norm() - 1.0).abs() < 1e-12);
                assert!((v.inner(&back).norm() - 1.0).abs() < 1e-12);
                let re = back[0];
                assert!(re.im.abs() < 1e-15 && re.re >= 0.0);
            }
        }
    }

    #[test]
    fn round_trip_sparse_states() {
        // vectors with leading zeros exercise the gauge on a later amplitude
        let v = StateVector::new(vec![
            Complex::default(),
            Complex::new(0.0, 0.6),
            Complex::default(),
            Complex::new(-0.8, 0.0),
        ]);
        let back = decode_pure_state(&encode_pure_state(&v), 4).unwrap();
        assert!((v.inner(&back).norm() - 1.0).abs() < 1e-12);
    }
}
