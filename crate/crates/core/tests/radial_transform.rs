//! The radial inverse transforms against a brute-force 64³ FFT of the same
//! isotropic spectrum on a periodic box.

use std::f64::consts::PI;

use landau::fields::{inverse_radial_transform, inverse_radial_transform_scalar};
use landau::model::RadialGrid;
use num_complex::Complex64;
use rustfft::FftPlanner;

const N: usize = 64;
const DX: f64 = 0.5;

fn spectrum(kappa: f64) -> f64 {
    (-0.5 * kappa * kappa).exp()
}

fn wavenumber(i: usize) -> f64 {
    let m = if i < N / 2 { i as f64 } else { i as f64 - N as f64 };
    2.0 * PI * m / (N as f64 * DX)
}

fn index(i: usize, j: usize, k: usize) -> usize {
    (i * N + j) * N + k
}

/// Unnormalized inverse FFT along all three axes of an `N³` array.
fn inverse_fft_3d(data: &mut [Complex64]) {
    let fft = FftPlanner::new().plan_fft_inverse(N);
    let mut line = vec![Complex64::new(0.0, 0.0); N];
    for axis in 0..3 {
        for a in 0..N {
            for b in 0..N {
                let at = |c: usize| match axis {
                    0 => index(c, a, b),
                    1 => index(a, c, b),
                    _ => index(a, b, c),
                };
                for (c, v) in line.iter_mut().enumerate() {
                    *v = data[at(c)];
                }
                fft.process(&mut line);
                for (c, v) in line.iter().enumerate() {
                    data[at(c)] = *v;
                }
            }
        }
    }
}

/// Values along the positive x axis at `r = i·DX` of the inverse transform of
/// `factor(kx, κ)·spectrum(κ)`.
fn fft_oracle(factor: impl Fn(f64, f64) -> Complex64) -> Vec<Complex64> {
    let mut data = vec![Complex64::new(0.0, 0.0); N * N * N];
    for i in 0..N {
        for j in 0..N {
            for k in 0..N {
                let (kx, ky, kz) = (wavenumber(i), wavenumber(j), wavenumber(k));
                let kappa = (kx * kx + ky * ky + kz * kz).sqrt();
                data[index(i, j, k)] = factor(kx, kappa) * spectrum(kappa);
            }
        }
    }
    inverse_fft_3d(&mut data);
    let volume = (N as f64 * DX).powi(3);
    (0..N / 4).map(|i| data[index(i, 0, 0)] / volume).collect()
}

fn radial_setup() -> (RadialGrid, Vec<Complex64>, Vec<f64>) {
    let grid = RadialGrid::panels(1e-3, 8.0, 0.7, 1.3, 0.05, 0.25, 16).unwrap();
    let amp = grid.kappa().iter().map(|&k| Complex64::new(spectrum(k), 0.0)).collect();
    let r = (0..N / 4).map(|i| i as f64 * DX).collect();
    (grid, amp, r)
}

fn max_error(a: &[Complex64], b: &[Complex64]) -> (f64, f64) {
    let err = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let peak = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    (err, peak)
}

#[test]
fn scalar_transform_matches_fft() {
    let (grid, amp, r) = radial_setup();
    let radial = inverse_radial_transform_scalar(&grid, &amp, &r).unwrap();
    let oracle = fft_oracle(|_, _| Complex64::new(1.0, 0.0));
    let (err, peak) = max_error(&radial, &oracle);
    assert!(err <= 1e-3 * peak, "error {err} against peak {peak}");
}

#[test]
fn vector_transform_matches_fft() {
    let (grid, amp, r) = radial_setup();
    let radial = inverse_radial_transform(&grid, &amp, &r).unwrap();
    // Spectrum −i k̂ e(κ); on the x axis the radial component is E_x.
    let oracle = fft_oracle(|kx, kappa| if kappa == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, -kx / kappa) });
    let (err, peak) = max_error(&radial, &oracle);
    assert!(err <= 1e-3 * peak, "error {err} against peak {peak}");
}
