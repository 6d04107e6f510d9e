//! Seeded random test instances: connected weighted graphs and parabolic step
//! functions with well-separated jump times.

use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GraphSpec, MetricGraph, VertexFunction};
use crate::interval::IntervalUnion;
use crate::parabolic::{ParabolicStepFunction, Subcylinder, TimePartition};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random spanning tree plus extra edges with probability `extra`. Unit masses
/// and lengths unless `weighted`, in which case both are drawn from `[0.5, 2]`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, extra: f64, weighted: bool) -> Result<MetricGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
    }
    let draw = |rng: &mut R| if weighted { rng.random_range(0.5..2.0) } else { 1.0 };
    let mut spec = GraphSpec::default();
    for i in 0..n {
        spec = spec.vertex(format!("x{i}"), draw(rng));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut adjacent = vec![vec![false; n]; n];
    for i in 1..n {
        let (a, b) = (order[i], order[rng.random_range(0..i)]);
        adjacent[a][b] = true;
        adjacent[b][a] = true;
        spec = spec.edge(format!("x{a}"), format!("x{b}"), draw(rng));
    }
    for (a, row) in adjacent.iter().enumerate() {
        for (b, &linked) in row.iter().enumerate().skip(a + 1) {
            if !linked && rng.random_bool(extra) {
                spec = spec.edge(format!("x{a}"), format!("x{b}"), draw(rng));
            }
        }
    }
    MetricGraph::build(&spec)
}

/// Requirements on the jump times of generated step functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpLayout {
    pub horizon: f64,
    /// Minimum distance between consecutive jump times.
    pub min_gap: f64,
    /// Times jumps must stay `min_gap / 2` away from (window endpoints).
    pub avoid: (f64, f64),
}

impl JumpLayout {
    pub fn unit(window: (f64, f64)) -> Self {
        Self {
            horizon: 1.0,
            min_gap: 0.04,
            avoid: window,
        }
    }
}

fn jump_times<R: Rng>(rng: &mut R, count: usize, layout: &JumpLayout) -> Result<Vec<f64>> {
    let JumpLayout {
        horizon,
        min_gap,
        avoid,
    } = *layout;
    for _ in 0..10_000 {
        let mut t: Vec<f64> = (0..count)
            .map(|_| rng.random_range(min_gap..horizon - min_gap))
            .collect();
        t.sort_by(f64::total_cmp);
        let separated = t.windows(2).all(|w| w[1] - w[0] >= min_gap);
        let clear = t
            .iter()
            .all(|&x| (x - avoid.0).abs() >= 0.5 * min_gap && (x - avoid.1).abs() >= 0.5 * min_gap);
        if separated && clear {
            return Ok(t);
        }
    }
    Err(Error::InvalidArgument(format!(
        "could not place {count} jumps with gap {min_gap} in [0, {horizon})"
    )))
}

/// Step function with `pieces` pieces. The horizon is cut into up to
/// `pieces + 2` intervals, so some pieces are unions of several intervals;
/// neighbouring intervals always belong to different pieces.
pub fn random_step_function<R: Rng>(
    rng: &mut R,
    graph: Arc<MetricGraph>,
    pieces: usize,
    layout: &JumpLayout,
) -> Result<ParabolicStepFunction> {
    if pieces == 0 {
        return Err(Error::InvalidArgument("need at least one piece".into()));
    }
    let intervals = if pieces == 1 { 1 } else { pieces + rng.random_range(0..=2) };
    let times = jump_times(rng, intervals - 1, layout)?;

    // A label sequence without equal neighbours, so every cut is a real jump.
    let mut labels: Vec<usize> = (0..pieces).collect();
    labels.shuffle(rng);
    while labels.len() < intervals {
        let pos = rng.random_range(0..=labels.len());
        let left = pos.checked_sub(1).map(|i| labels[i]);
        let right = labels.get(pos).copied();
        let options: Vec<usize> = (0..pieces)
            .filter(|&k| Some(k) != left && Some(k) != right)
            .collect();
        match options.choose(rng) {
            Some(&k) => labels.insert(pos, k),
            None => {
                let last = *labels.last().unwrap();
                labels.push(if last == 0 { 1 } else { 0 });
            }
        }
    }

    let mut edges = vec![0.0];
    edges.extend(times);
    edges.push(layout.horizon);
    let mut parts: Vec<Vec<(f64, f64)>> = vec![Vec::new(); pieces];
    for (i, w) in edges.windows(2).enumerate() {
        parts[labels[i]].push((w[0], w[1]));
    }
    let unions = parts
        .into_iter()
        .map(IntervalUnion::new)
        .collect::<Result<Vec<_>>>()?;
    let n = graph.len();
    let values = (0..pieces)
        .map(|_| VertexFunction::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect()))
        .collect();
    ParabolicStepFunction::new(graph, TimePartition::new(layout.horizon, unions)?, values)
}

/// Nonempty random vertex subset.
pub fn random_vertex_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(rng.random_range(1..=n));
    all.sort_unstable();
    all
}

/// One seeded instance: graph, step function and subcylinder.
#[derive(Debug, Clone)]
pub struct Instance {
    pub function: ParabolicStepFunction,
    pub window: Subcylinder,
}

/// Graph of `vertices` vertices, `pieces` pieces on `[0, 1)`, window
/// `U × [0.1, 0.9]` with `U` all vertices or a random subset.
pub fn random_instance(seed: u64, vertices: usize, pieces: usize, all_vertices: bool) -> Result<Instance> {
    let mut rng = rng_from_seed(seed);
    let graph = Arc::new(random_graph(&mut rng, vertices, 0.3, true)?);
    let time = (0.1, 0.9);
    let function = random_step_function(&mut rng, graph.clone(), pieces, &JumpLayout::unit(time))?;
    let u = if all_vertices {
        (0..graph.len()).collect()
    } else {
        random_vertex_subset(&mut rng, graph.len())
    };
    Ok(Instance {
        window: Subcylinder::new(u, time.0, time.1)?,
        function,
    })
}
