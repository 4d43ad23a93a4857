//! Pseudospectral differentiation and trigonometric interpolation on the
//! uniform periodic grid theta_j = 2*pi*j/n.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

static PLANNER: Lazy<Mutex<HashMap<usize, Arc<Plans>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn plans(n: usize) -> Arc<Plans> {
    let mut cache = PLANNER.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

/// Signed wavenumber of bin j: 0, 1, ..., n/2, -n/2+1, ..., -1.
fn wavenumber(j: usize, n: usize) -> f64 {
    if j <= n / 2 {
        j as f64
    } else {
        j as f64 - n as f64
    }
}

fn forward(f: &[f64]) -> Vec<Complex<f64>> {
    let n = f.len();
    let mut buf: Vec<Complex<f64>> = f.iter().map(|&x| Complex::new(x, 0.0)).collect();
    plans(n).forward.process(&mut buf);
    buf
}

fn inverse_real(mut buf: Vec<Complex<f64>>) -> Vec<f64> {
    let n = buf.len();
    plans(n).inverse.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|c| c.re * scale).collect()
}

/// First and second periodic derivatives of grid samples.
///
/// Exact (to rounding) for trigonometric polynomials of degree < n/2. The
/// Nyquist mode is dropped from the first derivative and kept (with -k^2)
/// in the second, the usual convention for real data.
pub fn derivatives(f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = f.len();
    let hat = forward(f);
    let mut d1 = vec![Complex::new(0.0, 0.0); n];
    let mut d2 = vec![Complex::new(0.0, 0.0); n];
    for j in 0..n {
        let k = wavenumber(j, n);
        if j != n / 2 {
            d1[j] = hat[j] * Complex::new(0.0, k);
        }
        d2[j] = hat[j] * (-k * k);
    }
    (inverse_real(d1), inverse_real(d2))
}

/// First periodic derivative only.
pub fn derivative(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let hat = forward(f);
    let mut d1 = vec![Complex::new(0.0, 0.0); n];
    for j in 0..n {
        if j != n / 2 {
            let k = wavenumber(j, n);
            d1[j] = hat[j] * Complex::new(0.0, k);
        }
    }
    inverse_real(d1)
}

/// Samples of the trigonometric interpolant at theta_j + delta.
///
/// A pure phase shift in Fourier space; the Nyquist mode is shifted with
/// cos so real data stays real.
pub fn rotate(f: &[f64], delta: f64) -> Vec<f64> {
    let n = f.len();
    let hat = forward(f);
    let mut shifted = vec![Complex::new(0.0, 0.0); n];
    for j in 0..n {
        let k = wavenumber(j, n);
        if j == n / 2 {
            shifted[j] = hat[j] * (k * delta).cos();
        } else {
            shifted[j] = hat[j] * Complex::new(0.0, k * delta).exp();
        }
    }
    inverse_real(shifted)
}

/// Evaluate the trigonometric interpolant of the grid samples at an
/// arbitrary angle.
pub fn interpolate(f: &[f64], theta: f64) -> f64 {
    let n = f.len();
    let hat = forward(f);
    let mut acc = hat[0].re;
    for j in 1..n / 2 {
        let k = j as f64;
        // conjugate-pair contribution of modes +-k
        let c = hat[j] * Complex::new(0.0, k * theta).exp();
        acc += 2.0 * c.re;
    }
    acc += hat[n / 2].re * (0.5 * n as f64 * theta).cos();
    acc / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
    }

    #[test]
    fn derivative_exact_for_single_mode() {
        let n = 64;
        let f: Vec<f64> = grid(n).iter().map(|&t| t.cos()).collect();
        let (d1, d2) = derivatives(&f);
        for (j, &t) in grid(n).iter().enumerate() {
            assert!((d1[j] + t.sin()).abs() < 1e-12);
            assert!((d2[j] + t.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let f = vec![3.5; 64];
        let (d1, d2) = derivatives(&f);
        assert!(d1.iter().all(|x| x.abs() < 1e-12));
        assert!(d2.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn derivative_matches_analytic_mixed_modes() {
        let n = 64;
        let f: Vec<f64> = grid(n)
            .iter()
            .map(|&t| (3.0 * t).cos() + 0.5 * (7.0 * t).sin())
            .collect();
        let (d1, d2) = derivatives(&f);
        for (j, &t) in grid(n).iter().enumerate() {
            let a1 = -3.0 * (3.0 * t).sin() + 3.5 * (7.0 * t).cos();
            let a2 = -9.0 * (3.0 * t).cos() - 24.5 * (7.0 * t).sin();
            assert!((d1[j] - a1).abs() < 1e-11);
            assert!((d2[j] - a2).abs() < 1e-11);
        }
    }

    #[test]
    fn rotate_shifts_band_limited_samples() {
        let n = 64;
        let f: Vec<f64> = grid(n).iter().map(|&t| 1.0 + 0.3 * (2.0 * t).cos()).collect();
        let delta = 0.7;
        let g = rotate(&f, delta);
        for (j, &t) in grid(n).iter().enumerate() {
            let want = 1.0 + 0.3 * (2.0 * (t + delta)).cos();
            assert!((g[j] - want).abs() < 1e-13);
        }
    }

    #[test]
    fn interpolate_reproduces_off_grid_values() {
        let n = 64;
        let f: Vec<f64> = grid(n)
            .iter()
            .map(|&t| 2.0 + 0.4 * t.sin() - 0.1 * (5.0 * t).cos())
            .collect();
        for &t in &[0.123, 1.9, 4.71, 6.2] {
            let want = 2.0 + 0.4 * f64::sin(t) - 0.1 * f64::cos(5.0 * t);
            assert!((interpolate(&f, t) - want).abs() < 1e-12);
        }
    }
}
