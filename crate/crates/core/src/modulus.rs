//! p-modulus of finite curve families.

use crate::error::{Error, Result};
use crate::graph::{check_exponent, line_integral, line_integral_row, CurveFamily, MetricGraph, VertexFunction};
use crate::solver::{self, SolverOptions};

/// Slack allowed on the unit line-integral constraint of an extremal density.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusResult {
    /// `Mod_p(Γ)`, possibly `+∞`.
    pub value: f64,
    /// Minimizing density; `None` when the value is `0` or `+∞`.
    pub extremal_density: Option<VertexFunction>,
    pub solver_iterations: usize,
    pub constraint_violation: f64,
}

/// Whether `∫_γ ρ ds ≥ 1 − tol` for every curve of the family.
pub fn is_admissible(
    graph: &MetricGraph,
    rho: &VertexFunction,
    family: &CurveFamily,
    tol: f64,
) -> Result<bool> {
    graph.check_function(rho)?;
    rho.check_nonnegative()?;
    if family.contains_constant() {
        return Ok(false);
    }
    for curve in family {
        if line_integral(graph, rho, curve)? < 1.0 - tol {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn compute_modulus(graph: &MetricGraph, family: &CurveFamily, p: f64) -> Result<ModulusResult> {
    compute_modulus_with(graph, family, p, &SolverOptions::default())
}

pub fn compute_modulus_with(
    graph: &MetricGraph,
    family: &CurveFamily,
    p: f64,
    options: &SolverOptions,
) -> Result<ModulusResult> {
    check_exponent(p)?;
    if family.contains_constant() {
        return Ok(ModulusResult {
            value: f64::INFINITY,
            extremal_density: None,
            solver_iterations: 0,
            constraint_violation: 0.0,
        });
    }
    if family.is_empty() {
        return Ok(ModulusResult {
            value: 0.0,
            extremal_density: None,
            solver_iterations: 0,
            constraint_violation: 0.0,
        });
    }
    let rows = family
        .iter()
        .map(|c| line_integral_row(graph, c))
        .collect::<Result<Vec<_>>>()?;
    let sol = solver::solve(graph.masses(), &rows, p, options)?;
    if sol.violation > ADMISSIBILITY_TOL {
        return Err(Error::NotConverged {
            iterations: sol.iterations,
            violation: sol.violation,
            gap: f64::NAN,
            best: sol.rho,
        });
    }
    Ok(ModulusResult {
        value: sol.value,
        extremal_density: Some(VertexFunction::new(sol.rho)),
        solver_iterations: sol.iterations,
        constraint_violation: sol.violation,
    })
}
