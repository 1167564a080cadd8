//! Special functions: the Faddeeva function, the Gaussian–Laplace moments
//! `J_n(u) = ∫₀^∞ sⁿ e^{−us − s²/2} ds` for n = 0, 1, 2, the scaled
//! complementary error function, spherical Bessel functions and
//! probabilists' Hermite polynomials.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Number of terms in the rational Faddeeva expansion.
const WEIDEMAN_N: usize = 64;

/// Radius in `u` below which the moments come from the Faddeeva function;
/// above it the asymptotic series plus the Stokes term is used.
const SERIES_RADIUS: f64 = 9.9;

struct Weideman {
    l: f64,
    coeffs: Vec<f64>,
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let len = 2 * m;
        let l = (n as f64 / 2f64.sqrt()).sqrt();
        // f on k = −M+1..M−1 with a leading zero, then fftshift.
        let mut f = vec![0.0; len];
        for (idx, k) in (-(m as i64) + 1..m as i64).enumerate() {
            let theta = k as f64 * PI / m as f64;
            let t = l * (0.5 * theta).tan();
            f[idx + 1] = (-t * t).exp() * (l * l + t * t);
        }
        let shifted: Vec<f64> = (0..len).map(|i| f[(i + len / 2) % len]).collect();
        // Real part of the DFT at frequencies 1..=N, scaled by 1/len.
        let coeffs = (1..=n)
            .map(|freq| {
                shifted
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * (2.0 * PI * ((freq * i) % len) as f64 / len as f64).cos())
                    .sum::<f64>()
                    / len as f64
            })
            .collect();
        Weideman { l, coeffs }
    })
}

/// Faddeeva function `w(z) = e^{−z²} erfc(−iz)`.
///
/// Rational expansion in the closed upper half-plane, reflection
/// `w(z) = 2e^{−z²} − w(−z)` below it. Relative accuracy is near 1e-14 for
/// `|z| ≤ 7`; the moment routines never call it outside that disc.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return 2.0 * (-z * z).exp() - faddeeva_upper(-z);
    }
    faddeeva_upper(z)
}

fn faddeeva_upper(z: Complex64) -> Complex64 {
    let tab = weideman();
    let i = Complex64::i();
    let denom = tab.l - i * z;
    let big_z = (tab.l + i * z) / denom;
    let poly = tab.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * big_z + c);
    2.0 * poly / (denom * denom) + (1.0 / PI.sqrt()) / denom
}

/// Scaled complementary error function `erfcx(x) = e^{x²} erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x < 25.0 {
        return libm::erfc(x) * (x * x).exp();
    }
    // Asymptotic series; at x ≥ 25 its terms fall below 1e-17 within a few orders.
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..20 {
        term *= -((2 * n - 1) as f64) * inv;
        sum += term;
        if term.abs() < 1e-17 {
            break;
        }
    }
    sum / (x * PI.sqrt())
}

/// Gaussian–Laplace moments `(J₀, J₁, J₂)(u)` with `J_n(u) = ∫₀^∞ sⁿ e^{−us−s²/2} ds`,
/// continued analytically to all complex `u`.
///
/// Returns non-finite values only when the result genuinely overflows
/// (strongly negative `Re u`, where the moments grow like `e^{u²/2}`).
pub fn gaussian_moments(u: Complex64) -> [Complex64; 3] {
    if u.norm() < SERIES_RADIUS {
        let c = (PI / 2.0).sqrt();
        let zeta = Complex64::i() * u / 2f64.sqrt();
        let j0 = c * faddeeva(zeta);
        let j1 = 1.0 - u * j0;
        let j2 = j0 - u * j1;
        [j0, j1, j2]
    } else {
        asymptotic_moments(u)
    }
}

/// Large-`|u|` moments: optimally truncated asymptotic series plus the
/// exponentially small Gaussian contribution weighted by `erfc(Re u)`,
/// which switches smoothly across the Stokes line `Re u = 0`.
fn asymptotic_moments(u: Complex64) -> [Complex64; 3] {
    let inv_u2 = 1.0 / (u * u);
    let mut t = Complex64::new(1.0, 0.0);
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    for n in 1..200 {
        // t_n = (−1)^{n+1} (2n−1)!! / u^{2n}
        t = if n == 1 { inv_u2 } else { -t * ((2 * n - 1) as f64) * inv_u2 };
        let mag = t.norm();
        if mag > prev {
            break;
        }
        s1 += t;
        s2 += t * (2 * n) as f64 / u;
        prev = mag;
        if mag < 1e-17 * s1.norm() {
            break;
        }
    }
    let x = u.re;
    let stokes = if x > 0.0 {
        // erfc(x)·e^{u²/2} = erfcx(x)·e^{u²/2 − x²}, exponent has Re = −|u|²/2.
        erfcx(x) * (u * u / 2.0 - x * x).exp()
    } else {
        libm::erfc(x) * (u * u / 2.0).exp()
    };
    let c = (PI / 2.0).sqrt();
    let j1 = s1 - c * u * stokes;
    let j2 = s2 + c * (1.0 + u * u) * stokes;
    let j0 = (1.0 - j1) / u;
    [j0, j1, j2]
}

/// Spherical Bessel function `j₀(x) = sin x / x`.
pub fn spherical_j0(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Spherical Bessel function `j₁(x) = sin x / x² − cos x / x`.
pub fn spherical_j1(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0)))
    } else {
        (x.sin() / x - x.cos()) / x
    }
}

/// Probabilists' Hermite polynomial `Heₙ(x)`.
pub fn hermite_he(n: usize, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = x;
    for k in 1..n {
        let p2 = x * p1 - k as f64 * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}
