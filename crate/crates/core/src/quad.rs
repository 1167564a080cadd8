//! Quadrature and fitting utilities: Gauss–Legendre panels, fourth-order
//! Gregory weights for uniform grids, discrete convolutions and small
//! least-squares solves.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on the reference interval [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false: a rule has at least one node.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Reference nodes on [−1, 1].
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Reference weights on [−1, 1].
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped affinely onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Integrates `f` over [a, b] with this rule.
    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        self.mapped(a, b).fold(T::default(), |acc, (x, w)| acc + f(x) * w)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = if n == 0 { 0.0 } else { n as f64 * (x * p1 - p0) / (x * x - 1.0) };
    (p, dp)
}

/// Composite Gauss–Legendre nodes and weights over consecutive panels whose
/// edges are given by `breaks` (strictly increasing).
pub fn composite_rule(breaks: &[f64], rule: &GaussLegendre) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(breaks.len().saturating_sub(1) * rule.len());
    let mut w = Vec::with_capacity(x.capacity());
    for pair in breaks.windows(2) {
        for (xi, wi) in rule.mapped(pair[0], pair[1]) {
            x.push(xi);
            w.push(wi);
        }
    }
    (x, w)
}

/// Geometric panel edges `a, a·r, a·r², …` ending exactly at `b`.
pub fn geometric_breaks(a: f64, b: f64, ratio: f64) -> Vec<f64> {
    assert!(a > 0.0 && b > a && ratio > 1.0);
    let n = ((b / a).ln() / ratio.ln()).ceil().max(1.0) as usize;
    let r = (b / a).powf(1.0 / n as f64);
    let mut out: Vec<f64> = (0..=n).map(|i| a * r.powi(i as i32)).collect();
    out[n] = b;
    out
}

/// Uniform panel edges splitting [a, b] into `n` pieces.
pub fn uniform_breaks(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Unit-step weights for integrating over `n` intervals (n + 1 samples).
///
/// Fourth-order Gregory weights for `n ≥ 5`; closed Newton–Cotes rules of
/// matching or higher order for shorter spans.
pub fn gregory_weights(n: usize) -> Vec<f64> {
    match n {
        0 => vec![0.0],
        1 => vec![0.5, 0.5],
        2 => vec![1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0],
        3 => vec![3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0],
        4 => vec![14.0 / 45.0, 64.0 / 45.0, 24.0 / 45.0, 64.0 / 45.0, 14.0 / 45.0],
        _ => {
            let mut w = vec![1.0; n + 1];
            let ends = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
            for (i, &e) in ends.iter().enumerate() {
                w[i] = e;
                w[n - i] = e;
            }
            w
        }
    }
}

/// Integral of uniformly sampled values with step `h` using [`gregory_weights`].
pub fn gregory_integral(values: &[Complex64], h: f64) -> Complex64 {
    if values.len() < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let w = gregory_weights(values.len() - 1);
    values.iter().zip(&w).map(|(v, &wi)| v * wi).sum::<Complex64>() * h
}

/// Running integrals `I_n = ∫₀^{t_n} f` of uniformly sampled `f` with step
/// `h`, fourth-order accurate at every `n` (Gregory end corrections on both
/// ends of each partial span, a cubic start-up rule for the first step).
pub fn cumulative_integral(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n_pts = f.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n_pts];
    let mut trap = Complex64::new(0.0, 0.0);
    for n in 1..n_pts {
        trap += 0.5 * (f[n - 1] + f[n]);
        out[n] = if n == 1 && n_pts >= 4 {
            // cubic through the first four samples
            (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0
        } else if n < 5 {
            let w = gregory_weights(n);
            f[..=n].iter().zip(&w).map(|(v, &wi)| v * wi).sum::<Complex64>()
        } else {
            trap + (-f[0] / 8.0 + f[1] / 6.0 - f[2] / 24.0)
                + (-f[n - 2] / 24.0 + f[n - 1] / 6.0 - f[n] / 8.0)
        } * h;
    }
    out
}

/// Discrete convolution `c_n = ∫₀^{t_n} a(t_n − τ) b(τ) dτ` of uniformly
/// sampled sequences by fourth-order Gregory weights (direct O(N²) sums).
/// The first step uses the trapezoid rule, a local O(h³) error that does
/// not propagate.
pub fn convolve_gregory(a: &[Complex64], b: &[Complex64], h: f64) -> Vec<Complex64> {
    assert_eq!(a.len(), b.len(), "convolution operands must share a grid");
    let n_pts = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n_pts];
    for n in 1..n_pts {
        let mut s = Complex64::new(0.0, 0.0);
        if n < 5 {
            let w = gregory_weights(n);
            for j in 0..=n {
                s += a[n - j] * b[j] * w[j];
            }
        } else {
            for j in 0..=n {
                s += a[n - j] * b[j];
            }
            let corr = [-0.5 - 1.0 / 8.0, 1.0 / 6.0, -1.0 / 24.0];
            for (i, &c) in corr.iter().enumerate() {
                s += a[n - i] * b[i] * c;
                s += a[i] * b[n - i] * c;
            }
        }
        out[n] = s * h;
    }
    out
}

/// [`convolve_gregory`] for a real kernel `a` and a sequence `b` that
/// vanishes from index `b_support` on; the sums skip the zero tail.
pub fn convolve_gregory_real(a: &[f64], b: &[Complex64], b_support: usize, h: f64) -> Vec<Complex64> {
    assert_eq!(a.len(), b.len(), "convolution operands must share a grid");
    let n_pts = a.len();
    let bj = |j: usize| if j < b_support { b[j] } else { Complex64::new(0.0, 0.0) };
    let mut out = vec![Complex64::new(0.0, 0.0); n_pts];
    for n in 1..n_pts {
        let mut s = Complex64::new(0.0, 0.0);
        if n < 5 {
            let w = gregory_weights(n);
            for j in 0..=n {
                s += a[n - j] * w[j] * bj(j);
            }
        } else {
            for j in 0..=n.min(b_support.saturating_sub(1)) {
                s += a[n - j] * b[j];
            }
            let corr = [-0.5 - 1.0 / 8.0, 1.0 / 6.0, -1.0 / 24.0];
            for (i, &c) in corr.iter().enumerate() {
                s += a[n - i] * c * bj(i);
                s += a[i] * c * bj(n - i);
            }
        }
        out[n] = s * h;
    }
    out
}

/// Trapezoidal discrete convolution (second order), used where the scheme
/// must match the trapezoidal time march.
pub fn convolve_trapezoid(a: &[Complex64], b: &[Complex64], h: f64) -> Vec<Complex64> {
    assert_eq!(a.len(), b.len(), "convolution operands must share a grid");
    let n_pts = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n_pts];
    for n in 1..n_pts {
        let mut s = 0.5 * (a[n] * b[0] + a[0] * b[n]);
        for j in 1..n {
            s += a[n - j] * b[j];
        }
        out[n] = s * h;
    }
    out
}

/// Ordinary least squares `y ≈ Σ c_i · columns_i` by modified Gram–Schmidt QR.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let m = y.len();
    let p = columns.len();
    if p == 0 || m < p {
        return Err(Error::Fit(format!("{m} samples cannot determine {p} coefficients")));
    }
    if columns.iter().any(|c| c.len() != m) {
        return Err(Error::Fit("design columns and data differ in length".into()));
    }
    let mut q: Vec<Vec<f64>> = columns.to_vec();
    let mut r = vec![vec![0.0; p]; p];
    for k in 0..p {
        let norm = q[k].iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = columns[k].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Fit(format!("design column {k} is numerically dependent")));
        }
        r[k][k] = norm;
        for v in q[k].iter_mut() {
            *v /= norm;
        }
        for j in (k + 1)..p {
            let dot: f64 = q[k].iter().zip(&q[j]).map(|(a, b)| a * b).sum();
            r[k][j] = dot;
            let qk = q[k].clone();
            for (v, a) in q[j].iter_mut().zip(&qk) {
                *v -= dot * a;
            }
        }
    }
    let qty: Vec<f64> = (0..p).map(|k| q[k].iter().zip(y).map(|(a, b)| a * b).sum()).collect();
    let mut c = vec![0.0; p];
    for k in (0..p).rev() {
        let s: f64 = ((k + 1)..p).map(|j| r[k][j] * c[j]).sum();
        c[k] = (qty[k] - s) / r[k][k];
    }
    Ok(c)
}

/// Straight-line fit `y ≈ slope·x + intercept` with coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least-squares line through the points `(x_i, y_i)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Fit(format!("line fit needs ≥ 2 paired samples, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Fit("non-finite sample in line fit".into()));
    }
    let c = least_squares(&[vec![1.0; x.len()], x.to_vec()], y)?;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - c[0] - c[1] * xi).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LineFit { slope: c[1], intercept: c[0], r2 })
}

/// Indices of strict local maxima of `v` (interior points only).
pub fn local_maxima(v: &[f64]) -> Vec<usize> {
    (1..v.len().saturating_sub(1)).filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1]).collect()
}

/// Vertex of the parabola through three equally spaced samples centred at
/// index `i` with step `h`: returns `(offset, value)` relative to `x_i`.
pub fn parabolic_peak(v: &[f64], i: usize, h: f64) -> (f64, f64) {
    let (a, b, c) = (v[i - 1], v[i], v[i + 1]);
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        return (0.0, b);
    }
    let d = 0.5 * (a - c) / denom;
    (d * h, b - 0.25 * (a - c) * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 33] {
            let rule = GaussLegendre::new(n);
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-14, "n={n}");
            let deg = 2 * n - 1;
            let got: f64 = rule.integrate(0.0, 1.0, |x: f64| x.powi(deg as i32));
            assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn gauss_legendre_nodes_are_sorted_and_symmetric() {
        let rule = GaussLegendre::new(16);
        for w in rule.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..16 {
            assert!((rule.nodes()[i] + rule.nodes()[15 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn gregory_weights_sum_to_span_and_are_fourth_order() {
        for n in 0..12 {
            let s: f64 = gregory_weights(n).iter().sum();
            assert!((s - n as f64).abs() < 1e-13, "n={n}");
        }
        // cubic integrated exactly on any span of two or more intervals
        for n in 2..15 {
            let h = 0.1;
            let vals: Vec<Complex64> = (0..=n).map(|i| c((i as f64 * h).powi(3))).collect();
            let exact = (n as f64 * h).powi(4) / 4.0;
            assert!((gregory_integral(&vals, h).re - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn cumulative_integral_matches_closed_form() {
        let h = 0.01;
        let f: Vec<Complex64> = (0..2001).map(|i| Complex64::new(0.0, i as f64 * h).exp()).collect();
        let out = cumulative_integral(&f, h);
        for (n, v) in out.iter().enumerate() {
            let t = n as f64 * h;
            let exact = (Complex64::new(0.0, t).exp() - 1.0) / Complex64::new(0.0, 1.0);
            assert!((v - exact).norm() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn gregory_convolution_is_fourth_order() {
        // (e^{-t} * cos t)(t) closed form
        let exact = |t: f64| 0.5 * (t.sin() + t.cos() - (-t).exp());
        let err = |h: f64| {
            let n = (4.0 / h).round() as usize;
            let a: Vec<Complex64> = (0..=n).map(|i| c((-(i as f64) * h).exp())).collect();
            let b: Vec<Complex64> = (0..=n).map(|i| c((i as f64 * h).cos())).collect();
            let conv = convolve_gregory(&a, &b, h);
            conv.iter().enumerate().skip(2).map(|(i, v)| (v.re - exact(i as f64 * h)).abs()).fold(0.0, f64::max)
        };
        let e1 = err(0.04);
        let e2 = err(0.02);
        assert!(e1 / e2 > 12.0, "ratio {}", e1 / e2);
        assert!(e2 < 5e-8, "e1 {e1} e2 {e2}");
    }

    #[test]
    fn trapezoid_convolution_is_second_order() {
        let exact = |t: f64| 0.5 * (t.sin() + t.cos() - (-t).exp());
        let err = |h: f64| {
            let n = (4.0 / h).round() as usize;
            let a: Vec<Complex64> = (0..=n).map(|i| c((-(i as f64) * h).exp())).collect();
            let b: Vec<Complex64> = (0..=n).map(|i| c((i as f64 * h).cos())).collect();
            let conv = convolve_trapezoid(&a, &b, h);
            conv.iter().enumerate().map(|(i, v)| (v.re - exact(i as f64 * h)).abs()).fold(0.0, f64::max)
        };
        let ratio = err(0.04) / err(0.02);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn least_squares_recovers_quadratic() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 3.0 * v - 0.5 * v * v).collect();
        let cols = vec![vec![1.0; 20], x.clone(), x.iter().map(|v| v * v).collect()];
        let c = least_squares(&cols, &y).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-12 && (c[1] - 3.0).abs() < 1e-12 && (c[2] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn line_fit_rejects_single_point() {
        assert!(fit_line(&[1.0], &[2.0]).is_err());
    }

    #[test]
    fn geometric_breaks_hit_endpoints() {
        let b = geometric_breaks(1e-3, 0.7, 1.3);
        assert_eq!(b[0], 1e-3);
        assert_eq!(*b.last().unwrap(), 0.7);
        for w in b.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn parabolic_peak_recovers_vertex() {
        let h = 0.1;
        let v: Vec<f64> = (0..5).map(|i| 2.0 - (i as f64 * h - 0.23).powi(2)).collect();
        let (d, val) = parabolic_peak(&v, 2, h);
        assert!((0.2 + d - 0.23).abs() < 1e-12);
        assert!((val - 2.0).abs() < 1e-12);
    }

    #[test]
    fn real_kernel_convolution_matches_general_one() {
        let h = 0.05;
        let a: Vec<f64> = (0..300).map(|i| (0.3 * i as f64 * h).sin() * (-0.05 * i as f64 * h).exp()).collect();
        let mut b: Vec<Complex64> = (0..300).map(|i| Complex64::new((-(i as f64 * h - 3.0).powi(2)).exp(), 0.1 * (i as f64 * h).cos())).collect();
        let ac: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let full = convolve_gregory(&ac, &b, h);
        let same = convolve_gregory_real(&a, &b, b.len(), h);
        for (x, y) in full.iter().zip(&same) {
            assert!((x - y).norm() < 1e-13);
        }
        for v in b.iter_mut().skip(200) {
            *v = Complex64::new(0.0, 0.0);
        }
        let full = convolve_gregory(&ac, &b, h);
        let cut = convolve_gregory_real(&a, &b, 200, h);
        for (x, y) in full.iter().zip(&cut) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}
