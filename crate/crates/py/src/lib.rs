//! Python bindings for the `nsobolev` crate.

use std::sync::Arc;

use nsobolev::formats::{parse_graph, parse_parabolic, write_graph, write_parabolic};
use nsobolev::{
    compute_modulus, enumerate_paths, epsilon_sweep, local_slope_gradient, lp_minimal_gradient, shift_sweep,
    verify_proof_bound, ConvergenceReport, Curve, CurveFamily, GraphSpec, IntervalUnion, KernelKind, MetricGraph,
    ParabolicStepFunction, Schedule, Subcylinder, SweepMode, TimePartition, VertexFunction,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: nsobolev::error::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Weighted graph with vertex masses and edge lengths.
#[pyclass(name = "Graph", module = "pynsobolev", frozen)]
struct PyGraph {
    inner: Arc<MetricGraph>,
}

impl PyGraph {
    fn index(&self, id: &str) -> PyResult<usize> {
        self.inner
            .index_of(id)
            .ok_or_else(|| PyValueError::new_err(format!("unknown vertex {id:?}")))
    }

    fn indices(&self, ids: &[String]) -> PyResult<Vec<usize>> {
        ids.iter().map(|id| self.index(id)).collect()
    }

    fn function(&self, values: Vec<f64>) -> PyResult<VertexFunction> {
        let u = VertexFunction::new(values);
        self.inner.check_function(&u).map_err(py_err)?;
        Ok(u)
    }
}

#[pymethods]
impl PyGraph {
    /// `vertices` is a list of `(id, mass)`, `edges` a list of `(a, b, length)`.
    #[new]
    fn new(vertices: Vec<(String, f64)>, edges: Vec<(String, String, f64)>) -> PyResult<Self> {
        let mut spec = GraphSpec::default();
        for (id, mass) in vertices {
            spec = spec.vertex(id, mass);
        }
        for (a, b, len) in edges {
            spec = spec.edge(a, b, len);
        }
        let inner = MetricGraph::build(&spec).map_err(py_err)?;
        Ok(Self { inner: Arc::new(inner) })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: Arc::new(parse_graph(text).map_err(py_err)?) })
    }

    #[staticmethod]
    #[pyo3(signature = (n, mass = 1.0, length = 1.0))]
    fn path(n: usize, mass: f64, length: f64) -> PyResult<Self> {
        Ok(Self { inner: Arc::new(MetricGraph::path(n, mass, length).map_err(py_err)?) })
    }

    fn to_text(&self) -> String {
        write_graph(&self.inner)
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.ids().to_vec()
    }

    #[getter]
    fn masses(&self) -> Vec<f64> {
        self.inner.masses().to_vec()
    }

    fn distance(&self, a: &str, b: &str) -> PyResult<f64> {
        Ok(self.inner.distance(self.index(a)?, self.index(b)?))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Graph({} vertices, {} edges)", self.inner.len(), self.inner.edges().len())
    }
}

/// p-modulus of all simple paths from `source` to `target`, or of the
/// explicit `curves` (lists of vertex ids) when given. Returns the value and
/// the extremal density, if any.
#[pyfunction]
#[pyo3(signature = (graph, p, source = None, target = None, curves = None, max_hops = None))]
fn modulus(
    graph: &PyGraph,
    p: f64,
    source: Option<String>,
    target: Option<String>,
    curves: Option<Vec<Vec<String>>>,
    max_hops: Option<usize>,
) -> PyResult<(f64, Option<Vec<f64>>)> {
    let g = &graph.inner;
    let family = match curves {
        Some(curves) => {
            let curves = curves
                .iter()
                .map(|c| Curve::new(g, graph.indices(c)?).map_err(py_err))
                .collect::<PyResult<Vec<_>>>()?;
            CurveFamily::new(curves).map_err(py_err)?
        }
        None => {
            let (Some(a), Some(b)) = (source, target) else {
                return Err(PyValueError::new_err("give source and target, or curves"));
            };
            let hops = max_hops.unwrap_or(g.len().saturating_sub(1));
            enumerate_paths(g, &[graph.index(&a)?], &[graph.index(&b)?], hops).map_err(py_err)?
        }
    };
    let r = compute_modulus(g, &family, p).map_err(py_err)?;
    Ok((r.value, r.extremal_density.map(VertexFunction::into_values)))
}

#[pyfunction]
fn local_slope(graph: &PyGraph, values: Vec<f64>) -> PyResult<Vec<f64>> {
    let u = graph.function(values)?;
    Ok(local_slope_gradient(&graph.inner, &u).map_err(py_err)?.into_values())
}

#[pyfunction]
fn lp_minimal(graph: &PyGraph, values: Vec<f64>, p: f64) -> PyResult<Vec<f64>> {
    let u = graph.function(values)?;
    Ok(lp_minimal_gradient(&graph.inner, &u, p).map_err(py_err)?.into_values())
}

/// Piecewise-constant-in-time function on a graph.
#[pyclass(name = "StepFunction", module = "pynsobolev", frozen)]
struct PyStepFunction {
    inner: ParabolicStepFunction,
}

#[pymethods]
impl PyStepFunction {
    /// Pieces `[b_{k-1}, b_k)` from the breakpoints on `[0, horizon)`, one
    /// list of vertex values per piece.
    #[new]
    fn new(graph: &PyGraph, horizon: f64, breakpoints: Vec<f64>, values: Vec<Vec<f64>>) -> PyResult<Self> {
        let partition = TimePartition::from_breakpoints(horizon, &breakpoints).map_err(py_err)?;
        let values = values.into_iter().map(|v| graph.function(v)).collect::<PyResult<Vec<_>>>()?;
        let inner = ParabolicStepFunction::new(graph.inner.clone(), partition, values).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Pieces given as lists of `(a, b)` intervals.
    #[staticmethod]
    fn from_sets(graph: &PyGraph, horizon: f64, sets: Vec<Vec<(f64, f64)>>, values: Vec<Vec<f64>>) -> PyResult<Self> {
        let sets = sets
            .into_iter()
            .map(|s| IntervalUnion::new(s).map_err(py_err))
            .collect::<PyResult<Vec<_>>>()?;
        let partition = TimePartition::new(horizon, sets).map_err(py_err)?;
        let values = values.into_iter().map(|v| graph.function(v)).collect::<PyResult<Vec<_>>>()?;
        let inner = ParabolicStepFunction::new(graph.inner.clone(), partition, values).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn parse(text: &str, graph: &PyGraph) -> PyResult<Self> {
        Ok(Self { inner: parse_parabolic(text, graph.inner.clone()).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        write_parabolic(&self.inner)
    }

    #[getter]
    fn horizon(&self) -> f64 {
        self.inner.horizon()
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        self.inner.domain()
    }

    fn evaluate(&self, t: f64) -> PyResult<Vec<f64>> {
        Ok(self.inner.evaluate(t).map_err(py_err)?.values().to_vec())
    }

    /// Local-slope gradient, piece by piece.
    fn gradient(&self) -> Self {
        Self { inner: self.inner.gradient() }
    }

    fn time_shift(&self, s: f64) -> PyResult<Self> {
        Ok(Self { inner: self.inner.time_shift(s).map_err(py_err)? })
    }

    #[pyo3(signature = (p, t0, t1, vertices = None))]
    fn product_norm(&self, p: f64, t0: f64, t1: f64, vertices: Option<Vec<String>>) -> PyResult<f64> {
        let k = window(&self.inner, t0, t1, vertices)?;
        self.inner.product_lp_norm(&k, p).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("StepFunction({} pieces on [0, {}))", self.inner.partition().len(), self.inner.horizon())
    }
}

fn window(f: &ParabolicStepFunction, t0: f64, t1: f64, vertices: Option<Vec<String>>) -> PyResult<Subcylinder> {
    let g = f.graph();
    let idx = match vertices {
        None => (0..g.len()).collect(),
        Some(ids) => ids
            .iter()
            .map(|id| g.index_of(id).ok_or_else(|| PyValueError::new_err(format!("unknown vertex {id:?}"))))
            .collect::<PyResult<Vec<_>>>()?,
    };
    let k = Subcylinder::new(idx, t0, t1).map_err(py_err)?;
    k.validate(f).map_err(py_err)?;
    Ok(k)
}

fn sweep_window(
    f: &ParabolicStepFunction,
    window_time: Option<(f64, f64)>,
    vertices: Option<Vec<String>>,
) -> PyResult<Subcylinder> {
    let tau = f.horizon();
    let (t0, t1) = window_time.unwrap_or((0.1 * tau, 0.9 * tau));
    window(f, t0, t1, vertices)
}

fn schedule(k: &Subcylinder, horizon: f64, eps0: Option<f64>, factor: f64, steps: usize) -> PyResult<Schedule> {
    match eps0 {
        Some(first) => Schedule::geometric(first, factor, steps),
        None if factor == 0.5 && steps == 12 => Schedule::default_for(k, horizon),
        None => Schedule::geometric(0.5 * k.margin(horizon), factor, steps),
    }
    .map_err(py_err)
}

/// Outcome of a convergence sweep.
#[pyclass(name = "Report", module = "pynsobolev", frozen, get_all)]
struct PyReport {
    mode: String,
    p: f64,
    params: Vec<f64>,
    norms: Vec<f64>,
    sup_norms: Option<Vec<f64>>,
    envelope: Vec<f64>,
    rate: Option<f64>,
    decay_pass: bool,
    rate_pass: Option<bool>,
    passed: bool,
}

impl From<ConvergenceReport> for PyReport {
    fn from(r: ConvergenceReport) -> Self {
        Self {
            mode: match r.mode {
                SweepMode::Smoothing => "smoothing".into(),
                SweepMode::Shift => "shift".into(),
            },
            p: r.p,
            params: r.params,
            norms: r.norms,
            sup_norms: r.sup_norms,
            envelope: r.envelope,
            rate: r.rate,
            decay_pass: r.decay_pass,
            rate_pass: r.rate_pass,
            passed: r.passed,
        }
    }
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        let rate = self.rate.map_or("None".to_string(), |r| r.to_string());
        format!("Report(mode={}, p={}, rate={rate}, passed={})", self.mode, self.p, self.passed)
    }
}

#[pyfunction]
#[pyo3(signature = (f, p, kernel = "hat", eps0 = None, factor = 0.5, steps = 12, window_time = None, window_vertices = None))]
#[allow(clippy::too_many_arguments)]
fn smoothing_sweep(
    f: &PyStepFunction,
    p: f64,
    kernel: &str,
    eps0: Option<f64>,
    factor: f64,
    steps: usize,
    window_time: Option<(f64, f64)>,
    window_vertices: Option<Vec<String>>,
) -> PyResult<PyReport> {
    let kernel: KernelKind = kernel.parse().map_err(py_err)?;
    let k = sweep_window(&f.inner, window_time, window_vertices)?;
    let s = schedule(&k, f.inner.horizon(), eps0, factor, steps)?;
    Ok(epsilon_sweep(&f.inner, p, &k, &s, kernel).map_err(py_err)?.into())
}

#[pyfunction(name = "shift_sweep")]
#[pyo3(signature = (f, p, eps0 = None, factor = 0.5, steps = 12, window_time = None, window_vertices = None))]
fn py_shift_sweep(
    f: &PyStepFunction,
    p: f64,
    eps0: Option<f64>,
    factor: f64,
    steps: usize,
    window_time: Option<(f64, f64)>,
    window_vertices: Option<Vec<String>>,
) -> PyResult<PyReport> {
    let k = sweep_window(&f.inner, window_time, window_vertices)?;
    let s = schedule(&k, f.inner.horizon(), eps0, factor, steps)?;
    Ok(shift_sweep(&f.inner, p, &k, &s).map_err(py_err)?.into())
}

/// Returns `(lhs, rhs, ok)` of the shift domination bound.
#[pyfunction]
#[pyo3(signature = (f, s, p, window_time = None, window_vertices = None))]
fn proof_bound(
    f: &PyStepFunction,
    s: f64,
    p: f64,
    window_time: Option<(f64, f64)>,
    window_vertices: Option<Vec<String>>,
) -> PyResult<(f64, f64, bool)> {
    let k = sweep_window(&f.inner, window_time, window_vertices)?;
    let b = verify_proof_bound(&f.inner, s, p, &k).map_err(py_err)?;
    Ok((b.lhs, b.rhs, b.ok))
}

#[pymodule]
fn pynsobolev(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyStepFunction>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(modulus, m)?)?;
    m.add_function(wrap_pyfunction!(local_slope, m)?)?;
    m.add_function(wrap_pyfunction!(lp_minimal, m)?)?;
    m.add_function(wrap_pyfunction!(smoothing_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(py_shift_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(proof_bound, m)?)?;
    Ok(())
}
