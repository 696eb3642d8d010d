use std::collections::VecDeque;

use serde::Serialize;

use super::Objective;

#[derive(Debug, Clone, Serialize)]
pub struct LocalResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Max-norm of the gradient at `x`.
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;
const STALL_LIMIT: usize = 8;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Limited-memory BFGS with backtracking Armijo line search.
///
/// Stops when `‖∇f‖_∞ < gradient_tolerance` (converged), when the iteration
/// cap is hit, or when the value has stopped changing beyond rounding for
/// several iterations.
pub fn minimize_lbfgs<O: Objective + ?Sized>(
    obj: &O,
    x0: Vec<f64>,
    memory: usize,
    max_iterations: usize,
    gradient_tolerance: f64,
) -> LocalResult {
    let n = obj.dim();
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut f = obj.value_and_gradient(&x, &mut g);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(memory);
    let mut direction = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut alpha_buf = vec![0.0; memory.max(1)];
    let mut stalled = 0;
    let mut iterations = 0;

    while iterations < max_iterations {
        if max_norm(&g) < gradient_tolerance {
            break;
        }
        iterations += 1;

        // two-loop recursion: direction = −H g
        direction.copy_from_slice(&g);
        for (i, (s, y, rho)) in history.iter().enumerate().rev() {
            let a = rho * dot(s, &direction);
            alpha_buf[i] = a;
            direction.iter_mut().zip(y).for_each(|(q, yi)| *q -= a * yi);
        }
        if let Some((s, y, _)) = history.back() {
            let gamma = dot(s, y) / dot(y, y);
            direction.iter_mut().for_each(|q| *q *= gamma);
        }
        for (i, (s, y, rho)) in history.iter().enumerate() {
            let b = rho * dot(y, &direction);
            let a = alpha_buf[i];
            direction.iter_mut().zip(s).for_each(|(r, si)| *r += (a - b) * si);
        }
        direction.iter_mut().for_each(|r| *r = -*r);

        let mut slope = dot(&g, &direction);
        if !(slope < 0.0) {
            history.clear();
            direction.iter_mut().zip(&g).for_each(|(r, gi)| *r = -gi);
            slope = dot(&g, &direction);
        }
        let mut step = if history.is_empty() {
            (1.0 / max_norm(&g)).min(1.0)
        } else {
            1.0
        };

        let slack = 1e-15 * (1.0 + f.abs());
        let f_new = loop {
            x_new
                .iter_mut()
                .zip(&x)
                .zip(&direction)
                .for_each(|((xn, xi), di)| *xn = xi + step * di);
            let fv = obj.value_and_gradient(&x_new, &mut g_new);
            if fv.is_finite() && fv <= f + ARMIJO * step * slope + slack {
                break Some(fv);
            }
            step *= 0.5;
            if step < MIN_STEP {
                break None;
            }
        };
        let Some(f_new) = f_new else {
            if history.is_empty() {
                break;
            }
            history.clear();
            continue;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            if history.len() == memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }

        stalled = if (f - f_new).abs() <= slack { stalled + 1 } else { 0 };
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut g, &mut g_new);
        f = f_new;
        if stalled >= STALL_LIMIT {
            break;
        }
    }

    let gradient_norm = max_norm(&g);
    LocalResult {
        x,
        value: f,
        gradient_norm,
        iterations,
        converged: gradient_norm < gradient_tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Rosenbrock;

    impl Objective for Rosenbrock {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, x: &[f64]) -> f64 {
            (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
        }
        fn value_and_gradient(&self, x: &[f64], g: &mut [f64]) -> f64 {
            g[0] = -2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]);
            g[1] = 200.0 * (x[1] - x[0] * x[0]);
            self.value(x)
        }
    }

    #[test]
    fn solves_rosenbrock() {
        let r = minimize_lbfgs(&Rosenbrock, vec![-1.2, 1.0], 8, 2000, 1e-9);
        assert!(r.converged, "{r:?}");
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn already_stationary() {
        let r = minimize_lbfgs(&Rosenbrock, vec![1.0, 1.0], 8, 100, 1e-9);
        assert_eq!(r.iterations, 0);
        assert!(r.converged);
    }
}
