//! Discrete upper gradients.
//!
//! The canonical gradient `g_f` is the local slope
//! `g_f(x) = max_{y∼x} |f(x) − f(y)| / ℓ(xy)`. It dominates every edge
//! increment, `|f(u) − f(v)| ≤ (g_f(u) + g_f(v))/2 · ℓ(uv)`, and by summing
//! along a path the full upper-gradient inequality holds for every curve.
//! It acts exactly as a scalar, `g_{cf} = |c| g_f`, and is sub-linear and
//! local, which is what the time-smoothing estimates rely on.
//!
//! The L^p-minimal gradient (smallest norm among nonnegative functions
//! satisfying all edge inequalities) is kept for comparison.

use crate::error::{Error, Result};
use crate::graph::{line_integral, CurveFamily, MetricGraph, VertexFunction};
use crate::solver::{self, SolverOptions};

/// Tolerance used by [`verify_upper_gradient`].
pub const UPPER_GRADIENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientKind {
    LocalSlope,
    LpMinimal,
}

/// A function together with one of its upper gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientPair {
    pub f: VertexFunction,
    pub g: VertexFunction,
    pub kind: GradientKind,
}

impl GradientPair {
    pub fn local_slope(graph: &MetricGraph, f: VertexFunction) -> Result<Self> {
        let g = local_slope_gradient(graph, &f)?;
        Ok(Self {
            f,
            g,
            kind: GradientKind::LocalSlope,
        })
    }

    pub fn lp_minimal(graph: &MetricGraph, f: VertexFunction, p: f64) -> Result<Self> {
        let g = lp_minimal_gradient(graph, &f, p)?;
        Ok(Self {
            f,
            g,
            kind: GradientKind::LpMinimal,
        })
    }

    /// Largest violation of the edge inequality, `max(0, |Δf| − ḡ ℓ)`.
    pub fn edge_violation(&self, graph: &MetricGraph) -> f64 {
        graph
            .edges()
            .iter()
            .map(|e| {
                let jump = (self.f[e.a] - self.f[e.b]).abs();
                (jump - 0.5 * (self.g[e.a] + self.g[e.b]) * e.length).max(0.0)
            })
            .fold(0.0, f64::max)
    }
}

pub fn local_slope_gradient(graph: &MetricGraph, f: &VertexFunction) -> Result<VertexFunction> {
    graph.check_function(f)?;
    Ok(VertexFunction::new(
        (0..graph.len())
            .map(|x| {
                graph
                    .neighbors(x)
                    .iter()
                    .map(|&(y, l)| (f[x] - f[y]).abs() / l)
                    .fold(0.0, f64::max)
            })
            .collect(),
    ))
}

/// Whether `|f(γ_end) − f(γ_start)| ≤ ∫_γ h ds` holds for every curve.
pub fn verify_upper_gradient(
    graph: &MetricGraph,
    f: &VertexFunction,
    h: &VertexFunction,
    family: &CurveFamily,
) -> Result<bool> {
    graph.check_function(f)?;
    graph.check_function(h)?;
    h.check_nonnegative()?;
    for curve in family {
        let jump = (f[curve.end()] - f[curve.start()]).abs();
        let integral = line_integral(graph, h, curve)?;
        if jump > integral + UPPER_GRADIENT_TOL * (1.0 + integral) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn lp_minimal_gradient(graph: &MetricGraph, f: &VertexFunction, p: f64) -> Result<VertexFunction> {
    lp_minimal_gradient_with(graph, f, p, &SolverOptions::default())
}

pub fn lp_minimal_gradient_with(
    graph: &MetricGraph,
    f: &VertexFunction,
    p: f64,
    options: &SolverOptions,
) -> Result<VertexFunction> {
    graph.check_function(f)?;
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidExponent {
            p,
            reason: "the L^p-minimal gradient needs p > 1",
        });
    }
    // (h_a + h_b) ℓ / 2 ≥ |Δf|, normalized to a unit right-hand side.
    let rows: Vec<Vec<f64>> = graph
        .edges()
        .iter()
        .filter_map(|e| {
            let jump = (f[e.a] - f[e.b]).abs();
            (jump > 0.0).then(|| {
                let mut row = vec![0.0; graph.len()];
                row[e.a] = 0.5 * e.length / jump;
                row[e.b] = 0.5 * e.length / jump;
                row
            })
        })
        .collect();
    let sol = solver::solve(graph.masses(), &rows, p, options)?;
    Ok(VertexFunction::new(sol.rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_paths, lp_norm_all, Curve};

    fn p3() -> MetricGraph {
        MetricGraph::path(3, 1.0, 1.0).unwrap()
    }

    #[test]
    fn local_slope_examples() {
        let g = p3();
        let c = VertexFunction::constant(3, 4.2);
        assert_eq!(local_slope_gradient(&g, &c).unwrap(), VertexFunction::zeros(3));

        let f = VertexFunction::new(vec![0.0, 1.0, 2.0]);
        let gf = local_slope_gradient(&g, &f).unwrap();
        assert_eq!(gf.values(), &[1.0, 1.0, 1.0]);

        let g3 = local_slope_gradient(&g, &f.scale(3.0)).unwrap();
        assert_eq!(g3, gf.scale(3.0));
    }

    #[test]
    fn verify_examples() {
        let g = p3();
        let f = VertexFunction::new(vec![0.0, 1.0, 0.5]);
        let fam = enumerate_paths(&g, &[0, 1, 2], &[0, 1, 2], 2).unwrap();
        let gf = local_slope_gradient(&g, &f).unwrap();
        assert!(verify_upper_gradient(&g, &f, &gf, &fam).unwrap());
        assert!(!verify_upper_gradient(&g, &f, &VertexFunction::zeros(3), &fam).unwrap());

        let c = VertexFunction::constant(3, 1.0);
        assert!(verify_upper_gradient(&g, &c, &VertexFunction::zeros(3), &fam).unwrap());

        let neg = VertexFunction::new(vec![0.0, -1.0, 0.0]);
        assert!(verify_upper_gradient(&g, &f, &neg, &fam).is_err());
    }

    #[test]
    fn lp_minimal_single_edge() {
        let g = MetricGraph::path(2, 1.0, 1.0).unwrap();
        let f = VertexFunction::new(vec![0.0, 1.0]);
        let h = lp_minimal_gradient(&g, &f, 2.0).unwrap();
        assert!((h[0] - 1.0).abs() < 1e-5 && (h[1] - 1.0).abs() < 1e-5, "{h:?}");
    }

    #[test]
    fn lp_minimal_on_p3_hat() {
        // Grid-search oracle over three variables gives (2/3, 4/3, 2/3),
        // squared norm 8/3 (tests/common::grid_min3).
        let g = p3();
        let f = VertexFunction::new(vec![0.0, 1.0, 0.0]);
        let h = lp_minimal_gradient(&g, &f, 2.0).unwrap();
        let norm2 = lp_norm_all(&g, &h, 2.0).unwrap().powi(2);
        assert!((norm2 - 8.0 / 3.0).abs() < 1e-8, "{norm2}");
        let slope = local_slope_gradient(&g, &f).unwrap();
        assert!(lp_norm_all(&g, &h, 2.0).unwrap() <= lp_norm_all(&g, &slope, 2.0).unwrap());
        let pair = GradientPair {
            f,
            g: h,
            kind: GradientKind::LpMinimal,
        };
        assert!(pair.edge_violation(&g) < 1e-9);
    }

    #[test]
    fn lp_minimal_of_constant_is_zero() {
        let g = p3();
        let h = lp_minimal_gradient(&g, &VertexFunction::constant(3, 2.0), 2.0).unwrap();
        assert_eq!(h, VertexFunction::zeros(3));
        assert!(lp_minimal_gradient(&g, &VertexFunction::zeros(3), 1.0).is_err());
    }

    #[test]
    fn local_slope_dominates_every_curve() {
        let g = MetricGraph::grid(3, 3).unwrap();
        let f = VertexFunction::new(vec![0.3, -1.0, 2.0, 0.0, 0.7, 1.1, -0.4, 0.9, 0.2]);
        let gf = GradientPair::local_slope(&g, f.clone()).unwrap();
        assert_eq!(gf.edge_violation(&g), 0.0);
        let all: Vec<usize> = (0..9).collect();
        let fam = enumerate_paths(&g, &all, &all, 8).unwrap();
        assert!(verify_upper_gradient(&g, &f, &gf.g, &fam).unwrap());
        let edge = Curve::new(&g, vec![0, 1]).unwrap();
        let single = CurveFamily::new(vec![edge]).unwrap();
        assert!(verify_upper_gradient(&g, &f, &gf.g, &single).unwrap());
    }
}
