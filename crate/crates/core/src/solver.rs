//! Solver for the separable power program
//!
//! ```text
//! minimize   Σ_x μ_x ρ_x^p
//! subject to C ρ ≥ 1,  ρ ≥ 0
//! ```
//!
//! with a nonnegative constraint matrix `C` whose rows are nonzero. This is
//! the shape of both the discrete p-modulus and the L^p-minimal upper
//! gradient problems.
//!
//! For `p > 1` the Lagrange dual is a smooth concave maximization over the
//! nonnegative orthant, `D(λ) = Σλ − (p−1) Σ μ_x ρ_x(λ)^p` with
//! `ρ_x(λ) = ((Cᵀλ)_x / (p μ_x))^{1/(p−1)}`, whose gradient is the residual
//! `1 − Cρ(λ)`. It is maximized by accelerated projected gradient ascent
//! (clamp to `λ ≥ 0`, backtracking step, adaptive restart). Each iterate
//! yields a feasible primal point by rescaling `ρ(λ)`, so the duality gap
//! certifies accuracy.
//!
//! For `p = 1` the program is a linear program; its dual
//! `max Σλ s.t. Cᵀλ ≤ μ, λ ≥ 0` starts feasible at the slack basis and is
//! solved by the simplex exchange method with Bland's rule. The optimal
//! primal vertex is read off the slack reduced costs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Relative duality gap accepted as converged.
    pub gap_tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-11,
            max_iterations: 1_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub rho: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// `max(0, 1 − min_i (Cρ)_i)`.
    pub violation: f64,
}

pub(crate) fn solve(
    weights: &[f64],
    rows: &[Vec<f64>],
    p: f64,
    options: &SolverOptions,
) -> Result<Solution> {
    let n = weights.len();
    if rows.is_empty() {
        return Ok(Solution {
            rho: vec![0.0; n],
            value: 0.0,
            iterations: 0,
            violation: 0.0,
        });
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));

    // Columns no constraint touches stay at zero.
    let active: Vec<usize> = (0..n)
        .filter(|&x| rows.iter().any(|r| r[x] > 0.0))
        .collect();
    if rows.iter().any(|r| active.iter().all(|&x| r[x] <= 0.0)) {
        return Err(Error::InvalidArgument(
            "constraint row with no positive coefficient is infeasible".into(),
        ));
    }
    let reduced = Reduced {
        weights: active.iter().map(|&x| weights[x]).collect(),
        rows: rows
            .iter()
            .map(|r| active.iter().map(|&x| r[x]).collect())
            .collect(),
    };

    let expand = |reduced_rho: &[f64]| {
        let mut rho = vec![0.0; n];
        for (k, &x) in active.iter().enumerate() {
            rho[x] = reduced_rho[k];
        }
        rho
    };
    let sol = if p == 1.0 {
        reduced.simplex()
    } else {
        reduced.dual_ascent(p, options)
    };
    match sol {
        Ok(sol) => Ok(Solution {
            rho: expand(&sol.rho),
            ..sol
        }),
        Err(Error::NotConverged {
            iterations,
            violation,
            gap,
            best,
        }) => Err(Error::NotConverged {
            iterations,
            violation,
            gap,
            best: expand(&best),
        }),
        Err(e) => Err(e),
    }
}

struct Reduced {
    weights: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl Reduced {
    fn apply(&self, rho: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(rho).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn objective(&self, rho: &[f64], p: f64) -> f64 {
        self.weights
            .iter()
            .zip(rho)
            .map(|(m, r)| m * r.powf(p))
            .sum()
    }

    /// Rescales `rho` so its tightest constraint is exactly 1.
    fn feasible(&self, rho: &[f64]) -> Option<Vec<f64>> {
        let theta = self.apply(rho).into_iter().fold(f64::INFINITY, f64::min);
        if theta > 0.0 && theta.is_finite() {
            Some(rho.iter().map(|r| r / theta).collect())
        } else {
            None
        }
    }

    fn violation(&self, rho: &[f64]) -> f64 {
        self.apply(rho)
            .into_iter()
            .map(|v| (1.0 - v).max(0.0))
            .fold(0.0, f64::max)
    }

    fn dual_ascent(&self, p: f64, options: &SolverOptions) -> Result<Solution> {
        let m = self.rows.len();
        let n = self.weights.len();
        let inv = 1.0 / (p - 1.0);

        let primal_of = |lambda: &[f64]| -> Vec<f64> {
            let mut s = vec![0.0; n];
            for (row, &l) in self.rows.iter().zip(lambda) {
                if l != 0.0 {
                    for (sx, &c) in s.iter_mut().zip(row) {
                        *sx += l * c;
                    }
                }
            }
            s.iter()
                .zip(&self.weights)
                .map(|(&sx, &mu)| (sx / (p * mu)).max(0.0).powf(inv))
                .collect()
        };
        // Dual value and gradient at λ, plus the primal point ρ(λ).
        let evaluate = |lambda: &[f64]| -> (f64, Vec<f64>, Vec<f64>) {
            let rho = primal_of(lambda);
            let value = lambda.iter().sum::<f64>() - (p - 1.0) * self.objective(&rho, p);
            let grad = self.apply(&rho).into_iter().map(|v| 1.0 - v).collect();
            (value, grad, rho)
        };

        // Best multiple of the all-ones multiplier, in logs: for p near 1 the
        // energy of ρ(1) overflows.
        let mut s1 = vec![0.0; n];
        for row in &self.rows {
            for (sx, &c) in s1.iter_mut().zip(row) {
                *sx += c;
            }
        }
        let logs: Vec<f64> = s1
            .iter()
            .zip(&self.weights)
            .filter(|(&sx, _)| sx > 0.0)
            .map(|(&sx, &mu)| mu.ln() + p * inv * (sx / (p * mu)).ln())
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_k1 = top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
        let t0 = ((p - 1.0) * ((m as f64).ln() - p.ln() - log_k1)).exp();
        let mut lambda: Vec<f64> = vec![t0; m];

        let (mut value, _, rho) = evaluate(&lambda);
        let mut best = self.feasible(&rho).expect("positive multipliers give positive densities");
        let mut best_value = self.objective(&best, p);
        let mut lower = value;

        let mut previous = lambda.clone();
        let mut momentum_k = 0usize;
        let mut lipschitz = 1.0;

        for it in 1..=options.max_iterations {
            let beta = momentum_k as f64 / (momentum_k as f64 + 3.0);
            let y: Vec<f64> = lambda
                .iter()
                .zip(&previous)
                .map(|(l, pl)| (l + beta * (l - pl)).max(0.0))
                .collect();
            let (fy, gy, _) = evaluate(&y);

            let (next, f_next, rho_next) = loop {
                let cand: Vec<f64> = y
                    .iter()
                    .zip(&gy)
                    .map(|(yi, gi)| (yi + gi / lipschitz).max(0.0))
                    .collect();
                let (fc, _, rho_c) = evaluate(&cand);
                let mut lin = 0.0;
                let mut sq = 0.0;
                for ((c, yi), gi) in cand.iter().zip(&y).zip(&gy) {
                    let d = c - yi;
                    lin += gi * d;
                    sq += d * d;
                }
                if fc >= fy + lin - 0.5 * lipschitz * sq - 1e-15 * fy.abs() || lipschitz > 1e300 {
                    break (cand, fc, rho_c);
                }
                lipschitz *= 2.0;
            };
            lipschitz *= 0.9;

            if f_next < value {
                // Ascent stalled along the momentum direction.
                momentum_k = 0;
            } else {
                momentum_k += 1;
            }
            previous = std::mem::replace(&mut lambda, next);
            value = f_next;
            lower = lower.max(value);

            if let Some(cand) = self.feasible(&rho_next) {
                let v = self.objective(&cand, p);
                if v < best_value {
                    best_value = v;
                    best = cand;
                }
            }
            if best_value - lower <= options.gap_tol * best_value {
                return Ok(Solution {
                    violation: self.violation(&best),
                    rho: best,
                    value: best_value,
                    iterations: it,
                });
            }
        }
        Err(Error::NotConverged {
            iterations: options.max_iterations,
            violation: self.violation(&best),
            gap: best_value - lower,
            best,
        })
    }

    fn simplex(&self) -> Result<Solution> {
        const TOL: f64 = 1e-12;
        let m = self.rows.len();
        let n = self.weights.len();
        let cols = m + n;
        // Constraint rows: Σ_i C_ix λ_i + w_x = μ_x.
        let mut tab: Vec<Vec<f64>> = (0..n)
            .map(|x| {
                let mut row = vec![0.0; cols + 1];
                for (r, source) in row.iter_mut().zip(&self.rows) {
                    *r = source[x];
                }
                row[m + x] = 1.0;
                row[cols] = self.weights[x];
                row
            })
            .collect();
        // Reduced costs for maximizing Σλ.
        let mut reduced = vec![0.0; cols + 1];
        reduced[..m].iter_mut().for_each(|r| *r = 1.0);
        let mut basis: Vec<usize> = (m..cols).collect();

        let max_pivots = 50 * (cols + 1) * (n + 1);
        let mut pivots = 0;
        while let Some(enter) = (0..cols).find(|&j| reduced[j] > TOL) {
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..n {
                let a = tab[r][enter];
                if a > TOL {
                    let ratio = tab[r][cols] / a;
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            ratio < best_ratio - TOL
                                || (ratio <= best_ratio + TOL && basis[r] < basis[l])
                        }
                    };
                    if better {
                        best_ratio = ratio;
                        leave = Some(r);
                    }
                }
            }
            let Some(leave) = leave else {
                return Err(Error::InvalidArgument("linear program is unbounded".into()));
            };

            let pivot = tab[leave][enter];
            tab[leave].iter_mut().for_each(|v| *v /= pivot);
            let pivot_row = tab[leave].clone();
            for (r, row) in tab.iter_mut().enumerate() {
                if r != leave {
                    let f = row[enter];
                    if f != 0.0 {
                        row.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
                    }
                }
            }
            let f = reduced[enter];
            reduced.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
            basis[leave] = enter;

            pivots += 1;
            if pivots > max_pivots {
                return Err(Error::NotConverged {
                    iterations: pivots,
                    violation: f64::NAN,
                    gap: f64::NAN,
                    best: (0..n).map(|x| (-reduced[m + x]).max(0.0)).collect(),
                });
            }
        }

        let rho: Vec<f64> = (0..n).map(|x| (-reduced[m + x]).max(0.0)).collect();
        let rho = if self.violation(&rho) > 0.0 {
            self.feasible(&rho).unwrap_or(rho)
        } else {
            rho
        };
        Ok(Solution {
            value: self.objective(&rho, 1.0),
            violation: self.violation(&rho),
            rho,
            iterations: pivots,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(weights: &[f64], rows: &[Vec<f64>], p: f64) -> Solution {
        solve(weights, rows, p, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn single_constraint_closed_form() {
        // min a² + b² s.t. (a + b)/2 ≥ 1 → a = b = 1, value 2.
        let s = run(&[1.0, 1.0], &[vec![0.5, 0.5]], 2.0);
        assert!((s.value - 2.0).abs() < 1e-9, "{}", s.value);
        assert!((s.rho[0] - 1.0).abs() < 1e-5);
        assert!(s.violation <= 1e-12);
    }

    #[test]
    fn linear_program_optimal_vertex() {
        // min 2a + b s.t. a + b ≥ 1, a ≥ 0.5·… → all weight on b.
        let s = run(&[2.0, 1.0], &[vec![1.0, 1.0]], 1.0);
        assert!((s.value - 1.0).abs() < 1e-12);
        assert_eq!(s.rho, vec![0.0, 1.0]);
    }

    #[test]
    fn untouched_columns_stay_zero() {
        let s = run(&[1.0, 1.0, 1.0], &[vec![1.0, 0.0, 1.0]], 3.0);
        assert_eq!(s.rho[1], 0.0);
        // Symmetric split: 2·(1/2)^3 = 1/4.
        assert!((s.value - 0.25).abs() < 1e-9);
    }

    #[test]
    fn no_constraints_means_zero() {
        let s = run(&[1.0, 2.0], &[], 2.0);
        assert_eq!(s.value, 0.0);
        assert_eq!(s.rho, vec![0.0, 0.0]);
    }

    #[test]
    fn iteration_cap_reports_best_iterate() {
        let rows = vec![vec![1.0, 0.2, 0.0], vec![0.0, 0.3, 1.0], vec![0.4, 0.4, 0.4]];
        let opts = SolverOptions {
            gap_tol: 0.0,
            max_iterations: 3,
        };
        match solve(&[1.0, 1.0, 1.0], &rows, 1.7, &opts) {
            Err(Error::NotConverged { best, violation, .. }) => {
                assert_eq!(best.len(), 3);
                assert!(violation <= 1e-12);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
