//! Black-Scholes utilities: forward-measure call/put prices, vega, and a
//! robust implied-volatility inversion. Used for initialization, noise
//! modeling in vol units, and reporting; not a pricing model for the pipeline
//! itself.

use crate::stats::normal_cdf;

/// Undiscounted call on a forward `f` with total volatility `vol * sqrt(t)`.
pub fn call_price(f: f64, k: f64, t: f64, vol: f64) -> f64 {
    if k <= 0.0 {
        return f;
    }
    if vol <= 0.0 || t <= 0.0 {
        return (f - k).max(0.0);
    }
    let sd = vol * t.sqrt();
    let d1 = ((f / k).ln() + 0.5 * sd * sd) / sd;
    let d2 = d1 - sd;
    f * normal_cdf(d1) - k * normal_cdf(d2)
}

pub fn put_price(f: f64, k: f64, t: f64, vol: f64) -> f64 {
    call_price(f, k, t, vol) - f + k
}

pub fn vega(f: f64, k: f64, t: f64, vol: f64) -> f64 {
    if vol <= 0.0 || t <= 0.0 || k <= 0.0 {
        return 0.0;
    }
    let sd = vol * t.sqrt();
    let d1 = ((f / k).ln() + 0.5 * sd * sd) / sd;
    let pdf = (-0.5 * d1 * d1).exp() / (2.0 * std::f64::consts::PI).sqrt();
    f * pdf * t.sqrt()
}

/// Implied volatility by bisection with Newton polishing. Returns `None`
/// when the price falls outside the arbitrage band `[(f-k)^+, f)`.
pub fn implied_vol(price: f64, f: f64, k: f64, t: f64) -> Option<f64> {
    let intrinsic = (f - k).max(0.0);
    if !(price >= intrinsic - 1e-12 * f && price < f) || t <= 0.0 {
        return None;
    }
    if price <= intrinsic + 1e-14 * f {
        return Some(0.0);
    }
    let (mut lo, mut hi) = (1e-6, 5.0);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if call_price(f, k, t, mid) < price {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut v: f64 = 0.5 * (lo + hi);
    for _ in 0..4 {
        let diff = call_price(f, k, t, v) - price;
        let vg = vega(f, k, t, v);
        if vg < 1e-14 {
            break;
        }
        v = (v - diff / vg).clamp(lo - 0.05, hi + 0.05).max(1e-9);
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_call_parity() {
        let (f, k, t, v) = (100.0, 110.0, 0.5, 0.25);
        let c = call_price(f, k, t, v);
        let p = put_price(f, k, t, v);
        assert!((c - p - (f - k)).abs() < 1e-10);
    }

    #[test]
    fn implied_vol_round_trip() {
        for &k in &[60.0, 90.0, 100.0, 120.0, 180.0] {
            for &v in &[0.08, 0.2, 0.6] {
                let p = call_price(100.0, k, 0.25, v);
                let iv = implied_vol(p, 100.0, k, 0.25).unwrap();
                assert!((iv - v).abs() < 1e-7, "k={k} v={v} iv={iv}");
            }
        }
    }

    #[test]
    fn implied_vol_rejects_out_of_band() {
        assert!(implied_vol(101.0, 100.0, 90.0, 0.25).is_none());
        assert!(implied_vol(5.0, 100.0, 90.0, 0.25).is_none()); // below intrinsic 10
    }
}
