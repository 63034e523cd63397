//! Exact power-law kernel weights shared by the Riccati solver, the variance
//! simulation, and the forward-variance solve.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

/// Step weights `b_m = (1/Gamma(alpha)) int_{(m-1)h}^{mh} s^{alpha-1} ds` for
/// `m = 1..=n`, with a zero slot at index 0 so `b[m]` is the lag-`m` weight.
///
/// These are the rectangle (Euler) weights: the convolution
/// `(1/Gamma(alpha)) int_0^{t_i} (t_i - s)^{alpha-1} f(s) ds` is approximated
/// by `sum_{j<i} b[i-j] f(t_j)`.
pub fn euler_kernel_weights(alpha: f64, n: usize, h: f64) -> Vec<f64> {
    let scale = h.powf(alpha) / gamma(alpha + 1.0);
    let mut b = Vec::with_capacity(n + 1);
    b.push(0.0);
    for m in 1..=n {
        let m = m as f64;
        b.push(scale * (m.powf(alpha) - (m - 1.0).powf(alpha)));
    }
    b
}

/// Riemann-Liouville fractional integral `I^gamma f` evaluated at the final
/// grid point, with `f` piecewise linear on a uniform grid of spacing `h`
/// (product-trapezoid weights, exact for the singular kernel).
pub fn fractional_integral(f: &[Complex64], gamma_exp: f64, h: f64) -> Complex64 {
    let n = f.len() - 1;
    if n == 0 {
        return f[0];
    }
    let g = gamma_exp;
    let scale = h.powf(g) / gamma(g + 2.0);
    let nf = n as f64;
    let mut acc = f[0] * ((nf - 1.0).powf(g + 1.0) - (nf - 1.0 - g) * nf.powf(g));
    for (j, &fj) in f.iter().enumerate().take(n).skip(1) {
        let m = (n - j) as f64;
        let w = (m + 1.0).powf(g + 1.0) + (m - 1.0).powf(g + 1.0) - 2.0 * m.powf(g + 1.0);
        acc += fj * w;
    }
    acc += f[n];
    acc * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_weights_sum_to_kernel_integral() {
        // sum of weights = (1/Gamma(alpha)) int_0^{nh} s^{alpha-1} ds = (nh)^alpha / Gamma(alpha+1)
        let (alpha, n, h) = (0.62, 50, 0.01);
        let b = euler_kernel_weights(alpha, n, h);
        let total: f64 = b.iter().sum();
        let exact = (n as f64 * h).powf(alpha) / gamma(alpha + 1.0);
        assert!((total - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn fractional_integral_reduces_to_trapezoid_at_gamma_one() {
        let h = 0.1;
        let f: Vec<Complex64> = (0..=10)
            .map(|i| Complex64::new((i as f64 * h).sin(), 0.0))
            .collect();
        let frac = fractional_integral(&f, 1.0, h);
        let mut trap = Complex64::new(0.0, 0.0);
        for pair in f.windows(2) {
            trap += 0.5 * (pair[0] + pair[1]) * h;
        }
        assert!((frac - trap).norm() < 1e-12);
    }

    #[test]
    fn fractional_integral_matches_closed_form_power() {
        // I^g [t] (T) = T^{1+g} / Gamma(2+g); f(t) = t is exactly piecewise linear
        let h = 0.02;
        let n = 50;
        let t_end = h * n as f64;
        let f: Vec<Complex64> = (0..=n).map(|i| Complex64::new(i as f64 * h, 0.0)).collect();
        for &g in &[0.2, 0.38, 0.5, 0.8] {
            let got = fractional_integral(&f, g, h).re;
            let exact = t_end.powf(1.0 + g) / gamma(2.0 + g);
            assert!((got - exact).abs() < 1e-10 * exact.max(1.0), "g={g}: {got} vs {exact}");
        }
    }
}
