//! Classical Heston oracle: closed-form Riccati solution, characteristic
//! function, and a call pricer built on the P1/P2 probability representation
//! with adaptive Simpson quadrature.
//!
//! Dynamics (zero rate, forward measure): dS = S sqrt(v) dW,
//! dv = kappa (theta - v) dt + zeta sqrt(v) dB, d<W,B> = rho dt.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct HestonParams {
    pub v0: f64,
    pub kappa: f64,
    pub theta: f64,
    pub zeta: f64,
    pub rho: f64,
}

/// Closed-form solution D(t) of dD/dt = c + b D + a D^2, D(0) = 0, with
/// a = zeta^2/2, b = rho*zeta*w - kappa, c = (w^2 - w)/2, i.e. the classical
/// limit of the fractional Riccati equation for the exponent
/// `E[exp(w log(S_t/S_0))]`.
pub fn heston_riccati_d(w: Complex64, t: f64, p: &HestonParams) -> Complex64 {
    let a = 0.5 * p.zeta * p.zeta;
    let b = p.rho * p.zeta * w - p.kappa;
    let c = 0.5 * (w * w - w);
    let d = (b * b - 4.0 * a * c).sqrt();
    let r_minus = (-b - d) / (2.0 * a);
    let r_plus = (-b + d) / (2.0 * a);
    if r_minus.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let g = r_minus / r_plus;
    let e = (-d * t).exp();
    r_minus * (1.0 - e) / (1.0 - g * e)
}

/// `E[exp(w log(S_t/S_0))]` in closed form.
pub fn heston_cf(w: Complex64, t: f64, p: &HestonParams) -> Complex64 {
    let a = 0.5 * p.zeta * p.zeta;
    let b = p.rho * p.zeta * w - p.kappa;
    let c = 0.5 * (w * w - w);
    let d = (b * b - 4.0 * a * c).sqrt();
    let r_minus = (-b - d) / (2.0 * a);
    let r_plus = (-b + d) / (2.0 * a);
    let dd = heston_riccati_d(w, t, p);
    let big_a = if r_minus.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let g = r_minus / r_plus;
        let e = (-d * t).exp();
        p.kappa * p.theta * (r_minus * t - 2.0 / (p.zeta * p.zeta) * ((1.0 - g * e) / (1.0 - g)).ln())
    };
    (big_a + dd * p.v0).exp()
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1)
            + simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1)
    }
}

fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    simpson(&f, a, b, f(a), f(m), f(b), tol, 48)
}

/// European call, zero rate, via `C = S0 P1 - K P2`.
pub fn heston_call(s0: f64, k: f64, t: f64, p: &HestonParams) -> f64 {
    if k <= 0.0 {
        return s0;
    }
    let log_m = (k / s0).ln();
    let prob = |shifted: bool| -> f64 {
        let integrand = |u: f64| -> f64 {
            let w = if shifted {
                Complex64::new(1.0, u)
            } else {
                Complex64::new(0.0, u)
            };
            let phi = heston_cf(w, t, p);
            let num = (Complex64::new(0.0, -u * log_m)).exp() * phi;
            (num / Complex64::new(0.0, u)).re
        };
        let mut total = 0.0;
        let mut a = 1e-9;
        let block = 25.0;
        let mut quiet_blocks = 0;
        for i in 0..64 {
            let b = (i + 1) as f64 * block;
            let part = integrate(&integrand, a, b, 1e-12);
            total += part;
            a = b;
            if part.abs() < 1e-12 {
                quiet_blocks += 1;
                if quiet_blocks >= 2 {
                    break;
                }
            } else {
                quiet_blocks = 0;
            }
        }
        0.5 + total / std::f64::consts::PI
    };
    let p1 = prob(true);
    let p2 = prob(false);
    (s0 * p1 - k * p2).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cf_normalization() {
        let p = HestonParams { v0: 0.04, kappa: 1.0, theta: 0.04, zeta: 0.3, rho: -0.7 };
        let one = heston_cf(Complex64::new(0.0, 0.0), 0.5, &p);
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // martingale: E[S_T] = S_0
        let mart = heston_cf(Complex64::new(1.0, 0.0), 0.5, &p);
        assert!((mart - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn degenerate_vol_matches_black_scholes() {
        // zeta -> 0 with v0 = theta reduces to BS with variance v0
        let p = HestonParams { v0: 0.04, kappa: 1.0, theta: 0.04, zeta: 1e-6, rho: 0.0 };
        let t = 0.25;
        let c = heston_call(100.0, 105.0, t, &p);
        // BS reference computed from the analytic formula
        let sd = 0.2 * t.sqrt();
        let d1 = ((100.0f64 / 105.0).ln() + 0.5 * sd * sd) / sd;
        let d2 = d1 - sd;
        let n = |x: f64| 0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2));
        let bs = 100.0 * n(d1) - 105.0 * n(d2);
        assert!((c - bs).abs() < 1e-6, "heston={c} bs={bs}");
    }

    // minimal erf for the test above (Abramowitz-Stegun 7.1.26)
    fn erf(x: f64) -> f64 {
        let sign = x.signum();
        let x = x.abs();
        let t = 1.0 / (1.0 + 0.3275911 * x);
        let y = 1.0
            - (((((1.061405429 * t - 1.453152027) * t) + 1.421413741) * t - 0.284496736) * t
                + 0.254829592)
                * t
                * (-x * x).exp();
        sign * y
    }

    #[test]
    fn call_respects_monotonicity_and_bounds() {
        let p = HestonParams { v0: 0.04, kappa: 1.5, theta: 0.05, zeta: 0.4, rho: -0.6 };
        let mut prev = f64::INFINITY;
        for &k in &[60.0, 80.0, 100.0, 120.0, 150.0] {
            let c = heston_call(100.0, k, 0.5, &p);
            assert!(c <= prev + 1e-10);
            assert!(c >= (100.0 - k).max(0.0) - 1e-8);
            assert!(c <= 100.0);
            prev = c;
        }
    }
}
