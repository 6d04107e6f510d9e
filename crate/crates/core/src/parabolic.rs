//! Parabolic step functions `f(t) = Σ_k 1_{E_k}(t)·v_k` on a graph, their
//! slice-wise gradients, time shifts, and product-space norms over
//! subcylinders `U × I`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gradient::local_slope_gradient;
use crate::graph::{check_exponent, MetricGraph, VertexFunction};
use crate::interval::IntervalUnion;

/// Disjoint pieces `E_1, …, E_N` covering a region `[lo, hi) ⊆ [0, τ)`.
///
/// Freshly built partitions cover all of `[0, τ)`; time shifts leave an
/// uncovered strip at one end.
#[derive(Debug, Clone, PartialEq)]
pub struct TimePartition {
    horizon: f64,
    domain: (f64, f64),
    pieces: Vec<IntervalUnion>,
    /// `(a, b, piece)` sorted by `a`, contiguous over the domain.
    index: Vec<(f64, f64, usize)>,
}

impl TimePartition {
    pub fn new(horizon: f64, pieces: Vec<IntervalUnion>) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidPartition(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        Self::with_domain(horizon, (0.0, horizon), pieces)
    }

    /// Single piece `[0, τ)`.
    pub fn whole(horizon: f64) -> Result<Self> {
        Self::new(horizon, vec![IntervalUnion::interval(0.0, horizon)?])
    }

    /// Pieces `[b_{k-1}, b_k)` for breakpoints `0 < b_1 < … < τ`.
    pub fn from_breakpoints(horizon: f64, breakpoints: &[f64]) -> Result<Self> {
        let mut edges = vec![0.0];
        edges.extend_from_slice(breakpoints);
        edges.push(horizon);
        let pieces = edges
            .windows(2)
            .map(|w| IntervalUnion::interval(w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(horizon, pieces)
    }

    /// Pieces covering exactly `[lo, hi) ⊆ [0, τ)`.
    pub fn with_domain(horizon: f64, domain: (f64, f64), pieces: Vec<IntervalUnion>) -> Result<Self> {
        let (lo, hi) = domain;
        if !(lo >= 0.0 && lo < hi && hi <= horizon) {
            return Err(Error::InvalidPartition(format!(
                "covered region [{lo}, {hi}) must be a nonempty subset of [0, {horizon})"
            )));
        }
        let mut index: Vec<(f64, f64, usize)> = pieces
            .iter()
            .enumerate()
            .flat_map(|(k, e)| e.parts().iter().map(move |&(a, b)| (a, b, k)))
            .collect();
        if let Some(k) = pieces.iter().position(IntervalUnion::is_empty) {
            return Err(Error::InvalidPartition(format!("piece {k} is empty")));
        }
        index.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut cursor = domain.0;
        for &(a, b, _) in &index {
            if a < cursor {
                return Err(Error::InvalidPartition(format!(
                    "pieces overlap near t = {a}"
                )));
            }
            if a > cursor {
                return Err(Error::InvalidPartition(format!(
                    "pieces leave the gap [{cursor}, {a}) uncovered"
                )));
            }
            cursor = b;
        }
        if cursor != domain.1 {
            return Err(Error::InvalidPartition(format!(
                "pieces cover up to {cursor} instead of {}",
                domain.1
            )));
        }
        Ok(Self {
            horizon,
            domain,
            pieces,
            index,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Covered region `[lo, hi)`.
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn pieces(&self) -> &[IntervalUnion] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Index of the piece containing `t`.
    pub fn locate(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.domain;
        if !(t >= lo && t < hi) {
            return Err(Error::OutsideDomain { t, lo, hi });
        }
        let pos = self.index.partition_point(|&(a, _, _)| a <= t);
        Ok(self.index[pos - 1].2)
    }

    /// Sorted interior breakpoints of the partition.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.index.iter().skip(1).map(|&(a, _, _)| a).collect()
    }
}

/// `f(t) = Σ_k 1_{E_k}(t)·v_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicStepFunction {
    graph: Arc<MetricGraph>,
    partition: TimePartition,
    values: Vec<VertexFunction>,
}

impl ParabolicStepFunction {
    pub fn new(
        graph: impl Into<Arc<MetricGraph>>,
        partition: TimePartition,
        values: Vec<VertexFunction>,
    ) -> Result<Self> {
        let graph = graph.into();
        if values.len() != partition.len() {
            return Err(Error::InvalidPartition(format!(
                "{} values for {} pieces",
                values.len(),
                partition.len()
            )));
        }
        for v in &values {
            graph.check_function(v)?;
        }
        Ok(Self {
            graph,
            partition,
            values,
        })
    }

    /// The same vertex function at every time in `[0, τ)`.
    pub fn constant_in_time(
        graph: impl Into<Arc<MetricGraph>>,
        horizon: f64,
        value: VertexFunction,
    ) -> Result<Self> {
        Self::new(graph, TimePartition::whole(horizon)?, vec![value])
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn shared_graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn partition(&self) -> &TimePartition {
        &self.partition
    }

    pub fn values(&self) -> &[VertexFunction] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        self.partition.horizon
    }

    pub fn domain(&self) -> (f64, f64) {
        self.partition.domain
    }

    /// `(E_k, v_k)` pairs.
    pub fn pieces(&self) -> impl Iterator<Item = (&IntervalUnion, &VertexFunction)> {
        self.partition.pieces.iter().zip(&self.values)
    }

    /// The slice `f(t)`; pieces are half-open so jumps take the right value.
    pub fn evaluate(&self, t: f64) -> Result<&VertexFunction> {
        Ok(&self.values[self.partition.locate(t)?])
    }

    /// Slice-wise local-slope gradient `g_{f(t)} = Σ_k 1_{E_k}(t)·g_{v_k}`.
    pub fn gradient(&self) -> ParabolicStepFunction {
        let values = self
            .values
            .iter()
            .map(|v| local_slope_gradient(&self.graph, v).expect("values match the graph"))
            .collect();
        Self {
            graph: self.graph.clone(),
            partition: self.partition.clone(),
            values,
        }
    }

    /// `t ↦ f(t − s)`: pieces move by `s` and are clipped to `[0, τ)`.
    pub fn time_shift(&self, s: f64) -> Result<ParabolicStepFunction> {
        if !s.is_finite() {
            return Err(Error::InvalidArgument(format!("shift must be finite, got {s}")));
        }
        if s == 0.0 {
            return Ok(self.clone());
        }
        let tau = self.horizon();
        let (lo, hi) = self.domain();
        let domain = ((lo + s).max(0.0), (hi + s).min(tau));
        if domain.0 >= domain.1 {
            return Err(Error::InvalidArgument(format!(
                "shift {s} moves every piece out of [0, {tau})"
            )));
        }
        let mut pieces = Vec::new();
        let mut values = Vec::new();
        for (e, v) in self.pieces() {
            let moved = e.translate(s).clip(domain.0, domain.1);
            if !moved.is_empty() {
                pieces.push(moved);
                values.push(v.clone());
            }
        }
        Ok(Self {
            graph: self.graph.clone(),
            partition: TimePartition::with_domain(tau, domain, pieces)?,
            values,
        })
    }

    /// `α f + β h` on the common refinement of both partitions.
    pub fn combine(
        f: &ParabolicStepFunction,
        h: &ParabolicStepFunction,
        alpha: f64,
        beta: f64,
    ) -> Result<ParabolicStepFunction> {
        if !(Arc::ptr_eq(&f.graph, &h.graph) || f.graph == h.graph) {
            return Err(Error::InvalidArgument(
                "cannot combine functions on different graphs".into(),
            ));
        }
        if f.horizon() != h.horizon() {
            return Err(Error::InvalidArgument(format!(
                "cannot combine horizons {} and {}",
                f.horizon(),
                h.horizon()
            )));
        }
        let (flo, fhi) = f.domain();
        let (hlo, hhi) = h.domain();
        let domain = (flo.max(hlo), fhi.min(hhi));
        if domain.0 >= domain.1 {
            return Err(Error::InvalidArgument(
                "functions have disjoint covered regions".into(),
            ));
        }
        let mut pieces = Vec::new();
        let mut values = Vec::new();
        for (e, v) in f.pieces() {
            let e = e.clip(domain.0, domain.1);
            if e.is_empty() {
                continue;
            }
            for (d, w) in h.pieces() {
                let common = e.intersect(d);
                if !common.is_empty() {
                    pieces.push(common);
                    values.push(v.lincomb(alpha, w, beta));
                }
            }
        }
        Ok(Self {
            graph: f.graph.clone(),
            partition: TimePartition::with_domain(f.horizon(), domain, pieces)?,
            values,
        })
    }

    /// `c·f`.
    pub fn scale(&self, c: f64) -> ParabolicStepFunction {
        Self {
            graph: self.graph.clone(),
            partition: self.partition.clone(),
            values: self.values.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// `(Σ_k |E_k ∩ I| · Σ_{x∈U} |v_k(x)|^p μ(x))^{1/p}`.
    pub fn product_lp_norm(&self, window: &Subcylinder, p: f64) -> Result<f64> {
        check_exponent(p)?;
        window.validate(self)?;
        let (t0, t1) = window.time;
        let sum: f64 = self
            .pieces()
            .map(|(e, v)| {
                let dt = e.measure_within(t0, t1);
                if dt == 0.0 {
                    return 0.0;
                }
                let space: f64 = window
                    .vertices
                    .iter()
                    .map(|&x| v[x].abs().powf(p) * self.graph.mass(x))
                    .sum();
                dt * space
            })
            .sum();
        Ok(sum.powf(1.0 / p))
    }

    /// Same norm, integrating in time first at each vertex and then in space.
    pub fn product_lp_norm_vertex_major(&self, window: &Subcylinder, p: f64) -> Result<f64> {
        check_exponent(p)?;
        window.validate(self)?;
        let (t0, t1) = window.time;
        let measures: Vec<f64> = self
            .partition
            .pieces
            .iter()
            .map(|e| e.measure_within(t0, t1))
            .collect();
        let sum: f64 = window
            .vertices
            .iter()
            .map(|&x| {
                let time: f64 = measures
                    .iter()
                    .zip(&self.values)
                    .map(|(dt, v)| dt * v[x].abs().powf(p))
                    .sum();
                time * self.graph.mass(x)
            })
            .sum();
        Ok(sum.powf(1.0 / p))
    }
}

/// `K = U × [t0, t1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subcylinder {
    vertices: Vec<usize>,
    time: (f64, f64),
}

impl Subcylinder {
    pub fn new(mut vertices: Vec<usize>, t0: f64, t1: f64) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.is_empty() {
            return Err(Error::InvalidSubcylinder("vertex set is empty".into()));
        }
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(Error::InvalidSubcylinder(format!(
                "time window [{t0}, {t1}] must satisfy t0 < t1"
            )));
        }
        Ok(Self {
            vertices,
            time: (t0, t1),
        })
    }

    /// Every vertex of `graph` over `[t0, t1]`.
    pub fn all_vertices(graph: &MetricGraph, t0: f64, t1: f64) -> Result<Self> {
        Self::new((0..graph.len()).collect(), t0, t1)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn time(&self) -> (f64, f64) {
        self.time
    }

    pub fn length(&self) -> f64 {
        self.time.1 - self.time.0
    }

    /// Same vertex set over `[t0 + δ, t1 + δ]`.
    pub fn translate(&self, delta: f64) -> Result<Self> {
        Self::new(self.vertices.clone(), self.time.0 + delta, self.time.1 + delta)
    }

    /// Distance from the time window to `{0, τ}`.
    pub fn margin(&self, horizon: f64) -> f64 {
        self.time.0.min(horizon - self.time.1)
    }

    /// Checks `0 < t0 < t1 < τ`, that the window lies in the covered region
    /// of `f`, and that `U` indexes vertices of its graph.
    pub fn validate(&self, f: &ParabolicStepFunction) -> Result<()> {
        let tau = f.horizon();
        let (t0, t1) = self.time;
        if !(t0 > 0.0 && t1 < tau) {
            return Err(Error::InvalidSubcylinder(format!(
                "time window [{t0}, {t1}] is not compactly contained in (0, {tau})"
            )));
        }
        let (lo, hi) = f.domain();
        if t0 < lo || t1 > hi {
            return Err(Error::InvalidSubcylinder(format!(
                "time window [{t0}, {t1}] leaves the covered region [{lo}, {hi})"
            )));
        }
        for &x in &self.vertices {
            f.graph().check_vertex(x)?;
        }
        Ok(())
    }
}
