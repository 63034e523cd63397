//! Direct primal solver for entropically regularized transport on a finite
//! support: maximize `E_q[g] - KL(q||p)/lambda` over the probability simplex
//! under linear equality constraints and two-sided band constraints.
//!
//! Solved with an augmented Lagrangian over the constraints and entropic
//! mirror descent on the simplex for each inner problem. Deliberately avoids
//! dual/log-sum-exp machinery so it stays an independent check on the
//! production tilting code.

#[derive(Debug, Clone)]
pub struct PrimalProblem {
    /// Prior weights on the atoms, strictly positive, summing to one.
    pub prior: Vec<f64>,
    /// Payoff to push up (maximize) or down (minimize).
    pub objective: Vec<f64>,
    /// KL temperature: the term `KL(q||p) / lambda`.
    pub lambda: f64,
    /// Rows `(a, b)` enforcing `a . q = b`.
    pub equalities: Vec<(Vec<f64>, f64)>,
    /// Rows `(a, c, sigma)` enforcing `|a . q - c| <= sigma`.
    pub bands: Vec<(Vec<f64>, f64, f64)>,
    pub maximize: bool,
}

struct AugState {
    mu: f64,
    y_eq: Vec<f64>,
    y_hi: Vec<f64>,
    y_lo: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl PrimalProblem {
    fn value_and_grad(&self, q: &[f64], s: &AugState, grad: &mut [f64]) -> f64 {
        let n = q.len();
        let sign = if self.maximize { -1.0 } else { 1.0 };
        let inv_lambda = 1.0 / self.lambda;
        let mut val = 0.0;
        for i in 0..n {
            let ratio = (q[i] / self.prior[i]).max(1e-300);
            val += sign * q[i] * self.objective[i] + inv_lambda * q[i] * ratio.ln();
            grad[i] = sign * self.objective[i] + inv_lambda * (ratio.ln() + 1.0);
        }
        for (e, (a, b)) in self.equalities.iter().enumerate() {
            let v = dot(a, q) - b;
            val += s.y_eq[e] * v + 0.5 * s.mu * v * v;
            let coef = s.y_eq[e] + s.mu * v;
            for i in 0..n {
                grad[i] += coef * a[i];
            }
        }
        for (cix, (a, c, sigma)) in self.bands.iter().enumerate() {
            let v = dot(a, q) - c;
            // upper side: v - sigma <= 0
            let hi = (s.y_hi[cix] + s.mu * (v - sigma)).max(0.0);
            val += (hi * hi - s.y_hi[cix] * s.y_hi[cix]) / (2.0 * s.mu);
            // lower side: -v - sigma <= 0
            let lo = (s.y_lo[cix] + s.mu * (-v - sigma)).max(0.0);
            val += (lo * lo - s.y_lo[cix] * s.y_lo[cix]) / (2.0 * s.mu);
            let coef = hi - lo;
            for i in 0..n {
                grad[i] += coef * a[i];
            }
        }
        val
    }

    fn max_violation(&self, q: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in &self.equalities {
            worst = worst.max((dot(a, q) - b).abs());
        }
        for (a, c, sigma) in &self.bands {
            worst = worst.max(((dot(a, q) - c).abs() - sigma).max(0.0));
        }
        worst
    }
}

/// Entropic mirror-descent inner solve; returns the stationarity residual.
fn inner_solve(p: &PrimalProblem, s: &AugState, q: &mut Vec<f64>, max_iter: usize) -> f64 {
    let n = q.len();
    let mut grad = vec![0.0; n];
    let mut step = 0.5 * p.lambda.min(10.0);
    let mut val = p.value_and_grad(q, s, &mut grad);
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let mean_grad = dot(&grad, q);
        residual = grad
            .iter()
            .zip(q.iter())
            .map(|(g, &w)| w * (g - mean_grad).abs())
            .fold(0.0f64, f64::max);
        if residual < 1e-14 {
            break;
        }
        // mirror step with backtracking on the AL value
        let mut accepted = false;
        for _ in 0..60 {
            let mut trial: Vec<f64> = q
                .iter()
                .zip(&grad)
                .map(|(&w, g)| w * (-step * (g - mean_grad)).exp())
                .collect();
            let z: f64 = trial.iter().sum();
            for w in trial.iter_mut() {
                *w /= z;
            }
            let mut tg = vec![0.0; n];
            let tv = p.value_and_grad(&trial, s, &mut tg);
            if tv <= val - 1e-16 * val.abs().max(1.0) || tv < val {
                *q = trial;
                grad = tg;
                val = tv;
                step *= 1.3;
                accepted = true;
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    residual
}

/// Solves the problem to high accuracy; returns the optimal weights.
pub fn solve_primal(p: &PrimalProblem, tol: f64, max_outer: usize) -> Vec<f64> {
    let n = p.prior.len();
    assert!(n > 0);
    assert!(p.objective.len() == n);
    let mut q = p.prior.clone();
    let z: f64 = q.iter().sum();
    for w in q.iter_mut() {
        *w /= z;
    }
    let mut s = AugState {
        mu: 10.0,
        y_eq: vec![0.0; p.equalities.len()],
        y_hi: vec![0.0; p.bands.len()],
        y_lo: vec![0.0; p.bands.len()],
    };
    let mut prev_violation = f64::INFINITY;
    for _ in 0..max_outer {
        inner_solve(p, &s, &mut q, 40_000);
        let violation = p.max_violation(&q);
        if violation < tol {
            // one more tight inner pass at the final multipliers
            inner_solve(p, &s, &mut q, 40_000);
            if p.max_violation(&q) < tol {
                break;
            }
        }
        for (e, (a, b)) in p.equalities.iter().enumerate() {
            s.y_eq[e] += s.mu * (dot(a, &q) - b);
        }
        for (cix, (a, c, sigma)) in p.bands.iter().enumerate() {
            let v = dot(a, &q) - c;
            s.y_hi[cix] = (s.y_hi[cix] + s.mu * (v - sigma)).max(0.0);
            s.y_lo[cix] = (s.y_lo[cix] + s.mu * (-v - sigma)).max(0.0);
        }
        if violation > 0.25 * prev_violation {
            s.mu = (s.mu * 4.0).min(1e12);
        }
        prev_violation = violation;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_tilt_matches_gibbs_closed_form() {
        // max E[g] - KL/lambda with only the normalization: q_i ~ p_i exp(lambda g_i)
        let prior = vec![0.4, 0.3, 0.2, 0.1];
        let g = vec![0.0, 1.0, 2.0, 3.0];
        let lambda = 0.7;
        let p = PrimalProblem {
            prior: prior.clone(),
            objective: g.clone(),
            lambda,
            equalities: vec![],
            bands: vec![],
            maximize: true,
        };
        let q = solve_primal(&p, 1e-12, 50);
        let mut expect: Vec<f64> = prior.iter().zip(&g).map(|(p, g)| p * (lambda * g).exp()).collect();
        let z: f64 = expect.iter().sum();
        for w in expect.iter_mut() {
            *w /= z;
        }
        for (a, b) in q.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn equality_constraint_is_enforced() {
        let prior = vec![0.25; 4];
        let atoms = [1.0, 2.0, 3.0, 4.0];
        let p = PrimalProblem {
            prior,
            objective: atoms.to_vec(),
            lambda: 2.0,
            equalities: vec![(atoms.to_vec(), 2.5)],
            bands: vec![],
            maximize: true,
        };
        let q = solve_primal(&p, 1e-11, 80);
        let mean: f64 = q.iter().zip(&atoms).map(|(w, a)| w * a).sum();
        assert!((mean - 2.5).abs() < 1e-9, "mean={mean}");
        // objective equals the constraint value, so KL should be minimal: q = p
        for w in &q {
            assert!((w - 0.25).abs() < 1e-7);
        }
    }
}
