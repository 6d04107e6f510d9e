//! Finite metric measure spaces realized as connected weighted graphs.
//!
//! Vertices carry positive masses (the measure), edges carry positive
//! lengths (the metric is the induced shortest-path distance). Curves are
//! edge paths; densities and functions live on vertices and are integrated
//! along curves with the trapezoidal rule on each edge.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::ops::Index;

use crate::error::{Error, Result};

/// Default cap on the number of paths [`enumerate_paths`] may emit.
pub const DEFAULT_PATH_CAP: usize = 100_000;

/// Plain description of a graph before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GraphSpec {
    pub vertices: Vec<(String, f64)>,
    pub edges: Vec<(String, String, f64)>,
}

impl GraphSpec {
    pub fn vertex(mut self, id: impl Into<String>, mass: f64) -> Self {
        self.vertices.push((id.into(), mass));
        self
    }

    pub fn edge(mut self, a: impl Into<String>, b: impl Into<String>, length: f64) -> Self {
        self.edges.push((a.into(), b.into(), length));
        self
    }
}

/// An undirected edge between two vertex indices, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

/// A validated finite metric measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    ids: Vec<String>,
    masses: Vec<f64>,
    edges: Vec<Edge>,
    /// `adjacency[x]` lists `(neighbor, length)`.
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl MetricGraph {
    /// Validates a description and builds the graph.
    pub fn build(spec: &GraphSpec) -> Result<Self> {
        if spec.vertices.is_empty() {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut ids = Vec::with_capacity(spec.vertices.len());
        let mut masses = Vec::with_capacity(spec.vertices.len());
        for (id, mass) in &spec.vertices {
            if index.insert(id.as_str(), ids.len()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {id:?}")));
            }
            if !(mass.is_finite() && *mass > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "vertex {id:?} has nonpositive mass {mass}"
                )));
            }
            ids.push(id.clone());
            masses.push(*mass);
        }

        let n = ids.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut seen = HashSet::new();
        for (a, b, length) in &spec.edges {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| Error::InvalidGraph(format!("edge references unknown vertex {a:?}")))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| Error::InvalidGraph(format!("edge references unknown vertex {b:?}")))?;
            if ia == ib {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a:?}")));
            }
            if !(length.is_finite() && *length > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge {a:?}-{b:?} has nonpositive length {length}"
                )));
            }
            let key = (ia.min(ib), ia.max(ib));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge {a:?}-{b:?}")));
            }
            adjacency[ia].push((ib, *length));
            adjacency[ib].push((ia, *length));
            edges.push(Edge {
                a: key.0,
                b: key.1,
                length: *length,
            });
        }

        let graph = Self {
            ids,
            masses,
            edges,
            adjacency,
        };
        if !graph.is_connected() {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        Ok(graph)
    }

    /// Path graph on `n` vertices with ids `0..n`.
    pub fn path(n: usize, mass: f64, length: f64) -> Result<Self> {
        let mut spec = GraphSpec::default();
        for i in 0..n {
            spec = spec.vertex(i.to_string(), mass);
        }
        for i in 1..n {
            spec = spec.edge((i - 1).to_string(), i.to_string(), length);
        }
        Self::build(&spec)
    }

    /// `rows × cols` grid with unit masses and unit lengths. Vertex `(r, c)`
    /// has index `r * cols + c` and id `r_c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let id = |r: usize, c: usize| format!("{r}_{c}");
        let mut spec = GraphSpec::default();
        for r in 0..rows {
            for c in 0..cols {
                spec = spec.vertex(id(r, c), 1.0);
            }
        }
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    spec = spec.edge(id(r, c), id(r, c + 1), 1.0);
                }
                if r + 1 < rows {
                    spec = spec.edge(id(r, c), id(r + 1, c), 1.0);
                }
            }
        }
        Self::build(&spec)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|v| v == id)
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, x: usize) -> f64 {
        self.masses[x]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.adjacency[x]
    }

    /// Length of the edge `a`-`b`, if present.
    pub fn edge_length(&self, a: usize, b: usize) -> Option<f64> {
        self.adjacency
            .get(a)?
            .iter()
            .find(|(y, _)| *y == b)
            .map(|&(_, l)| l)
    }

    /// Same graph with every mass multiplied by `factor`.
    pub fn scale_masses(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mass scale factor must be positive, got {factor}"
            )));
        }
        let mut out = self.clone();
        out.masses.iter_mut().for_each(|m| *m *= factor);
        Ok(out)
    }

    /// Description that rebuilds this graph.
    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self
                .ids
                .iter()
                .cloned()
                .zip(self.masses.iter().copied())
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| (self.ids[e.a].clone(), self.ids[e.b].clone(), e.length))
                .collect(),
        }
    }

    /// Shortest-path distances from `source` to every vertex.
    pub fn distances_from(&self, source: usize) -> Vec<f64> {
        #[derive(PartialEq)]
        struct State(f64, usize);
        impl Eq for State {}
        impl PartialOrd for State {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for State {
            fn cmp(&self, other: &Self) -> Ordering {
                other.0.total_cmp(&self.0).then(self.1.cmp(&other.1))
            }
        }

        let mut dist = vec![f64::INFINITY; self.len()];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::from([State(0.0, source)]);
        while let Some(State(d, x)) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            for &(y, l) in &self.adjacency[x] {
                let nd = d + l;
                if nd < dist[y] {
                    dist[y] = nd;
                    heap.push(State(nd, y));
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.distances_from(a)[b]
    }

    pub fn diameter(&self) -> f64 {
        (0..self.len())
            .flat_map(|x| self.distances_from(x))
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "vertex index {x} out of range for a graph with {} vertices",
                self.len()
            )))
        }
    }

    pub fn check_function(&self, u: &VertexFunction) -> Result<()> {
        if u.len() == self.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.len(),
                got: u.len(),
            })
        }
    }
}

/// A real function on the vertices of a graph, in vertex index order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self(vec![c; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, 0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self(self.0.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// `α·self + β·other`.
    pub fn lincomb(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| alpha * a + beta * b)
                .collect(),
        )
    }

    /// Adds `c·other` in place.
    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        debug_assert_eq!(self.len(), other.len());
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a += c * b;
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&v| v >= 0.0)
    }

    pub(crate) fn check_nonnegative(&self) -> Result<()> {
        match self.0.iter().position(|&v| v < 0.0 || v.is_nan()) {
            None => Ok(()),
            Some(vertex) => Err(Error::NegativeDensity {
                vertex,
                value: self.0[vertex],
            }),
        }
    }
}

impl Index<usize> for VertexFunction {
    type Output = f64;

    fn index(&self, x: usize) -> &f64 {
        &self.0[x]
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// A nonconstant edge path `v_0, …, v_n`, `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Curve(Vec<usize>);

impl Curve {
    pub fn new(graph: &MetricGraph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidCurve(
                "a curve needs at least one edge; constant curves are not representable".into(),
            ));
        }
        for &x in &vertices {
            graph.check_vertex(x)?;
        }
        for w in vertices.windows(2) {
            if graph.edge_length(w[0], w[1]).is_none() {
                return Err(Error::InvalidCurve(format!(
                    "vertices {} and {} are not joined by an edge",
                    graph.ids()[w[0]],
                    graph.ids()[w[1]]
                )));
            }
        }
        Ok(Self(vertices))
    }

    /// Builds a curve from vertex ids.
    pub fn from_ids(graph: &MetricGraph, ids: &[&str]) -> Result<Self> {
        let vertices = ids
            .iter()
            .map(|id| {
                graph
                    .index_of(id)
                    .ok_or_else(|| Error::InvalidCurve(format!("unknown vertex {id:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn hops(&self) -> usize {
        self.0.len() - 1
    }

    pub fn start(&self) -> usize {
        self.0[0]
    }

    pub fn end(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn length(&self, graph: &MetricGraph) -> Result<f64> {
        self.edge_lengths(graph).map(|ls| ls.iter().map(|(_, _, l)| l).sum())
    }

    /// `(u, v, ℓ(uv))` for each consecutive pair.
    pub(crate) fn edge_lengths(&self, graph: &MetricGraph) -> Result<Vec<(usize, usize, f64)>> {
        self.0
            .windows(2)
            .map(|w| {
                graph
                    .edge_length(w[0], w[1])
                    .map(|l| (w[0], w[1], l))
                    .ok_or_else(|| Error::InvalidCurve("curve is not a path in this graph".into()))
            })
            .collect()
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &Curve) -> Result<Curve> {
        if self.end() != other.start() {
            return Err(Error::InvalidCurve(
                "concatenated curves must share an endpoint".into(),
            ));
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Ok(Curve(v))
    }
}

/// A finite family of distinct curves.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveFamily {
    curves: Vec<Curve>,
    contains_constant: bool,
    pub tag: Option<String>,
}

impl CurveFamily {
    pub fn new(curves: Vec<Curve>) -> Result<Self> {
        let mut family = Self::default();
        for c in curves {
            family.push(c)?;
        }
        Ok(family)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    /// Marks the family as also containing a constant curve, which no
    /// density can make admissible.
    pub fn with_constant_curve(mut self) -> Self {
        self.contains_constant = true;
        self
    }

    pub fn contains_constant(&self) -> bool {
        self.contains_constant
    }

    pub fn push(&mut self, curve: Curve) -> Result<()> {
        if self.curves.contains(&curve) {
            return Err(Error::InvalidCurve("duplicate curve in family".into()));
        }
        self.curves.push(curve);
        Ok(())
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Curve> {
        self.curves.iter()
    }

    /// Union with another family, skipping curves already present.
    pub fn union(&self, other: &CurveFamily) -> CurveFamily {
        let mut out = self.clone();
        for c in other.iter() {
            if !out.curves.contains(c) {
                out.curves.push(c.clone());
            }
        }
        out.contains_constant |= other.contains_constant;
        out.tag = None;
        out
    }

    /// Subfamily of the curves at the given positions.
    pub fn select(&self, positions: &[usize]) -> CurveFamily {
        let mut out = CurveFamily::empty();
        for &i in positions {
            let c = &self.curves[i];
            if !out.curves.contains(c) {
                out.curves.push(c.clone());
            }
        }
        out
    }
}

impl<'a> IntoIterator for &'a CurveFamily {
    type Item = &'a Curve;
    type IntoIter = std::slice::Iter<'a, Curve>;

    fn into_iter(self) -> Self::IntoIter {
        self.curves.iter()
    }
}

/// `∫_γ ρ ds` with the trapezoidal rule on each edge.
pub fn line_integral(graph: &MetricGraph, rho: &VertexFunction, curve: &Curve) -> Result<f64> {
    graph.check_function(rho)?;
    Ok(curve
        .edge_lengths(graph)?
        .into_iter()
        .map(|(u, v, l)| 0.5 * (rho[u] + rho[v]) * l)
        .sum())
}

/// Coefficient row of the linear map `ρ ↦ ∫_γ ρ ds`.
pub(crate) fn line_integral_row(graph: &MetricGraph, curve: &Curve) -> Result<Vec<f64>> {
    let mut row = vec![0.0; graph.len()];
    for (u, v, l) in curve.edge_lengths(graph)? {
        row[u] += 0.5 * l;
        row[v] += 0.5 * l;
    }
    Ok(row)
}

/// All simple paths starting in `from`, ending in `to`, with at most
/// `max_hops` edges. Constant curves are never emitted.
pub fn enumerate_paths(
    graph: &MetricGraph,
    from: &[usize],
    to: &[usize],
    max_hops: usize,
) -> Result<CurveFamily> {
    enumerate_paths_capped(graph, from, to, max_hops, DEFAULT_PATH_CAP)
}

pub fn enumerate_paths_capped(
    graph: &MetricGraph,
    from: &[usize],
    to: &[usize],
    max_hops: usize,
    cap: usize,
) -> Result<CurveFamily> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::InvalidArgument(
            "path endpoints sets must be nonempty".into(),
        ));
    }
    if max_hops == 0 {
        return Err(Error::InvalidArgument("max_hops must be at least 1".into()));
    }
    for &x in from.iter().chain(to) {
        graph.check_vertex(x)?;
    }

    let mut target = vec![false; graph.len()];
    for &b in to {
        target[b] = true;
    }
    let mut starts: Vec<usize> = from.to_vec();
    starts.sort_unstable();
    starts.dedup();

    struct Search<'a> {
        graph: &'a MetricGraph,
        target: Vec<bool>,
        max_hops: usize,
        cap: usize,
        on_path: Vec<bool>,
        path: Vec<usize>,
        out: Vec<Curve>,
    }

    impl Search<'_> {
        fn dfs(&mut self, x: usize) -> Result<()> {
            if self.path.len() > 1 && self.target[x] {
                if self.out.len() == self.cap {
                    return Err(Error::PathCapExceeded { cap: self.cap });
                }
                self.out.push(Curve(self.path.clone()));
            }
            if self.path.len() > self.max_hops {
                return Ok(());
            }
            for i in 0..self.graph.neighbors(x).len() {
                let y = self.graph.neighbors(x)[i].0;
                if self.on_path[y] {
                    continue;
                }
                self.on_path[y] = true;
                self.path.push(y);
                self.dfs(y)?;
                self.path.pop();
                self.on_path[y] = false;
            }
            Ok(())
        }
    }

    let mut search = Search {
        graph,
        target,
        max_hops,
        cap,
        on_path: vec![false; graph.len()],
        path: Vec::new(),
        out: Vec::new(),
    };
    for s in starts {
        search.on_path[s] = true;
        search.path.push(s);
        search.dfs(s)?;
        search.path.pop();
        search.on_path[s] = false;
    }

    Ok(CurveFamily {
        curves: search.out,
        contains_constant: false,
        tag: Some(format!("simple paths, at most {max_hops} hops")),
    })
}

/// `(Σ_{x∈U} |u(x)|^p μ(x))^{1/p}`; repeated entries of `subset` count once.
pub fn lp_norm(graph: &MetricGraph, u: &VertexFunction, p: f64, subset: &[usize]) -> Result<f64> {
    check_exponent(p)?;
    graph.check_function(u)?;
    if subset.is_empty() {
        return Err(Error::InvalidArgument("norm subset must be nonempty".into()));
    }
    let mut member = vec![false; graph.len()];
    for &x in subset {
        graph.check_vertex(x)?;
        member[x] = true;
    }
    let sum: f64 = (0..graph.len())
        .filter(|&x| member[x])
        .map(|x| u[x].abs().powf(p) * graph.mass(x))
        .sum();
    Ok(sum.powf(1.0 / p))
}

/// `lp_norm` over every vertex.
pub fn lp_norm_all(graph: &MetricGraph, u: &VertexFunction, p: f64) -> Result<f64> {
    let all: Vec<usize> = (0..graph.len()).collect();
    lp_norm(graph, u, p, &all)
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent {
            p,
            reason: "exponent must be finite and at least 1",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> MetricGraph {
        MetricGraph::path(3, 1.0, 1.0).unwrap()
    }

    #[test]
    fn path_graph_has_diameter_two() {
        let g = p3();
        assert_eq!(g.len(), 3);
        assert_eq!(g.diameter(), 2.0);
    }

    #[test]
    fn grid_counts() {
        let g = MetricGraph::grid(4, 4).unwrap();
        assert_eq!(g.len(), 16);
        assert_eq!(g.edges().len(), 24);
    }

    #[test]
    fn rejects_bad_graphs() {
        let zero_mass = GraphSpec::default().vertex("a", 0.0);
        assert!(matches!(MetricGraph::build(&zero_mass), Err(Error::InvalidGraph(_))));

        let bad_len = GraphSpec::default()
            .vertex("a", 1.0)
            .vertex("b", 1.0)
            .edge("a", "b", -1.0);
        assert!(MetricGraph::build(&bad_len).is_err());

        let disconnected = GraphSpec::default().vertex("a", 1.0).vertex("b", 1.0);
        assert!(MetricGraph::build(&disconnected).is_err());

        let self_loop = GraphSpec::default().vertex("a", 1.0).edge("a", "a", 1.0);
        assert!(MetricGraph::build(&self_loop).is_err());

        let dup = GraphSpec::default()
            .vertex("a", 1.0)
            .vertex("b", 1.0)
            .edge("a", "b", 1.0)
            .edge("b", "a", 2.0);
        assert!(MetricGraph::build(&dup).is_err());
    }

    #[test]
    fn line_integral_examples() {
        let g = p3();
        let edge = Curve::new(&g, vec![0, 1]).unwrap();
        assert_eq!(line_integral(&g, &VertexFunction::constant(3, 1.0), &edge).unwrap(), 1.0);
        assert_eq!(line_integral(&g, &VertexFunction::zeros(3), &edge).unwrap(), 0.0);

        let long = MetricGraph::path(2, 1.0, 2.0).unwrap();
        let e = Curve::new(&long, vec![0, 1]).unwrap();
        let rho = VertexFunction::new(vec![1.0, 3.0]);
        assert_eq!(line_integral(&long, &rho, &e).unwrap(), 4.0);
    }

    #[test]
    fn curve_must_follow_edges() {
        let g = p3();
        assert!(Curve::new(&g, vec![0, 2]).is_err());
        assert!(Curve::new(&g, vec![1]).is_err());
        // A curve valid in one graph is rejected by another.
        let c = Curve::new(&MetricGraph::grid(2, 2).unwrap(), vec![0, 2]).unwrap();
        assert!(line_integral(&g, &VertexFunction::zeros(3), &c).is_err());
    }

    #[test]
    fn family_rejects_duplicates() {
        let g = p3();
        let c = Curve::new(&g, vec![0, 1]).unwrap();
        assert!(CurveFamily::new(vec![c.clone(), c]).is_err());
    }

    #[test]
    fn enumerate_single_path() {
        let g = p3();
        let fam = enumerate_paths(&g, &[0], &[2], 2).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.curves()[0].vertices(), &[0, 1, 2]);
        assert!(enumerate_paths(&g, &[0], &[2], 1).unwrap().is_empty());
    }

    #[test]
    fn overlapping_endpoint_sets_emit_no_constant_curves() {
        let g = p3();
        let fam = enumerate_paths(&g, &[0, 1], &[0, 1], 2).unwrap();
        assert!(fam.iter().all(|c| c.hops() >= 1));
        let set: Vec<_> = fam.iter().map(|c| c.vertices().to_vec()).collect();
        assert_eq!(set, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn path_cap_is_enforced() {
        let g = MetricGraph::grid(4, 4).unwrap();
        let err = enumerate_paths_capped(&g, &[0], &[15], 15, 10).unwrap_err();
        assert!(matches!(err, Error::PathCapExceeded { cap: 10 }));
    }

    #[test]
    fn lp_norm_examples() {
        let g = MetricGraph::path(2, 1.0, 1.0).unwrap();
        let u = VertexFunction::new(vec![1.0, 2.0]);
        assert!((lp_norm_all(&g, &u, 2.0).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(lp_norm_all(&g, &VertexFunction::zeros(2), 3.0).unwrap(), 0.0);
        assert!(lp_norm_all(&g, &u, 0.5).is_err());

        let weighted = MetricGraph::build(
            &GraphSpec::default()
                .vertex("a", 2.0)
                .vertex("b", 3.0)
                .edge("a", "b", 1.0),
        )
        .unwrap();
        let c = VertexFunction::constant(2, -1.5);
        let expected = 1.5 * 5f64.powf(1.0 / 3.0);
        assert!((lp_norm_all(&weighted, &c, 3.0).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn shortest_path_distances() {
        let g = MetricGraph::build(
            &GraphSpec::default()
                .vertex("a", 1.0)
                .vertex("b", 1.0)
                .vertex("c", 1.0)
                .edge("a", "b", 1.0)
                .edge("b", "c", 1.0)
                .edge("a", "c", 5.0),
        )
        .unwrap();
        assert_eq!(g.distance(0, 2), 2.0);
    }
}
