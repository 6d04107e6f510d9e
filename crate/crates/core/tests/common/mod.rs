//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use nsobolev::{Curve, CurveFamily, GraphSpec, MetricGraph, ParabolicStepFunction, Subcylinder};

/// Local slope computed straight from the definition.
pub fn slope(graph: &MetricGraph, u: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0f64; graph.len()];
    for e in graph.edges() {
        let q = (u[e.a] - u[e.b]).abs() / e.length;
        g[e.a] = g[e.a].max(q);
        g[e.b] = g[e.b].max(q);
    }
    g
}

/// Trapezoid line integral of `rho` along a curve.
pub fn line(graph: &MetricGraph, rho: &[f64], curve: &Curve) -> f64 {
    curve
        .vertices()
        .windows(2)
        .map(|w| 0.5 * (rho[w[0]] + rho[w[1]]) * graph.edge_length(w[0], w[1]).unwrap())
        .sum()
}

/// Brute-force modulus by grid refinement.
///
/// `Mod_p(Γ) = 1 / φ^p` with `φ = max_{w ≥ 0, w ≠ 0} min_γ ∫_γ w / ‖w‖_{p,μ}`;
/// the ratio is scale invariant and quasi-concave, so a shrinking full grid
/// around the incumbent converges to the maximum. Only vertices touched by
/// some curve are searched.
pub fn modulus_oracle(graph: &MetricGraph, family: &CurveFamily, p: f64) -> f64 {
    if family.is_empty() {
        return 0.0;
    }
    let used: Vec<usize> = family
        .iter()
        .flat_map(|c| c.vertices().iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let d = used.len();
    let rows: Vec<Vec<f64>> = family
        .iter()
        .map(|c| {
            let mut row = vec![0.0; d];
            for w in c.vertices().windows(2) {
                let l = graph.edge_length(w[0], w[1]).unwrap();
                for x in [w[0], w[1]] {
                    row[used.iter().position(|&y| y == x).unwrap()] += 0.5 * l;
                }
            }
            row
        })
        .collect();
    let mass: Vec<f64> = used.iter().map(|&x| graph.mass(x)).collect();
    let ratio = |w: &[f64]| -> f64 {
        let norm: f64 = w.iter().zip(&mass).map(|(w, m)| m * w.powf(p)).sum::<f64>().powf(1.0 / p);
        if norm == 0.0 {
            return 0.0;
        }
        let worst = rows
            .iter()
            .map(|r| r.iter().zip(w).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        worst / norm
    };

    let k: usize = match d {
        0..=3 => 11,
        4 => 9,
        5 => 7,
        _ => 5,
    };
    let mut center = vec![0.5; d];
    let mut half = 0.5;
    let mut best = ratio(&center);
    let mut point = vec![0.0; d];
    while half > 1e-10 {
        let total = k.pow(d as u32);
        let mut next = center.clone();
        for idx in 0..total {
            let mut r = idx;
            for i in 0..d {
                let step = (r % k) as f64 / (k - 1) as f64;
                r /= k;
                point[i] = (center[i] - half + 2.0 * half * step).max(0.0);
            }
            let v = ratio(&point);
            if v > best {
                best = v;
                next.copy_from_slice(&point);
            }
        }
        center = next;
        half *= 0.6;
    }
    best.powf(-p)
}

/// Connected simple graphs on `n` vertices up to isomorphism, unit data.
pub fn connected_graph_classes(n: usize) -> Vec<MetricGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        if !connected(n, &edges) {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|p| {
                let mut relabeled: Vec<(usize, usize)> = edges
                    .iter()
                    .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
                    .collect();
                relabeled.sort_unstable();
                relabeled
            })
            .min()
            .unwrap();
        if seen.insert(canonical) {
            let mut spec = GraphSpec::default();
            for i in 0..n {
                spec = spec.vertex(format!("v{i}"), 1.0);
            }
            for (a, b) in edges {
                spec = spec.edge(format!("v{a}"), format!("v{b}"), 1.0);
            }
            out.push(MetricGraph::build(&spec).unwrap());
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut reach = vec![false; n];
    reach[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in edges {
            if reach[a] != reach[b] {
                reach[a] = true;
                reach[b] = true;
                changed = true;
            }
        }
    }
    reach.into_iter().all(|r| r)
}

/// Every simple path between `a` and `b`, by plain recursion.
pub fn all_simple_paths(graph: &MetricGraph, a: usize, b: usize) -> Vec<Vec<usize>> {
    fn walk(graph: &MetricGraph, path: &mut Vec<usize>, b: usize, out: &mut Vec<Vec<usize>>) {
        let x = *path.last().unwrap();
        if x == b {
            out.push(path.clone());
            return;
        }
        for &(y, _) in graph.neighbors(x) {
            if !path.contains(&y) {
                path.push(y);
                walk(graph, path, b, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(graph, &mut vec![a], b, &mut out);
    out
}

/// Hat-kernel cumulative distribution, from the closed form.
pub fn hat_cdf(x: f64) -> f64 {
    if x <= -1.0 {
        0.0
    } else if x <= 0.0 {
        0.5 * (1.0 + x) * (1.0 + x)
    } else if x < 1.0 {
        1.0 - 0.5 * (1.0 - x) * (1.0 - x)
    } else {
        1.0
    }
}

/// `Σ_{x∈U} μ g^p` of `(f − f_ε)(t)` for the hat kernel, entirely from the
/// definitions.
pub fn smoothing_integrand(f: &ParabolicStepFunction, eps: f64, window: &Subcylinder, p: f64, t: f64) -> f64 {
    let n = f.graph().len();
    let mut d = vec![0.0; n];
    for (e, v) in f.pieces() {
        let mollified: f64 = e
            .parts()
            .iter()
            .map(|&(a, b)| hat_cdf((t - a) / eps) - hat_cdf((t - b) / eps))
            .sum();
        let alpha = if e.contains(t) { 1.0 } else { 0.0 } - mollified;
        for x in 0..n {
            d[x] += alpha * v[x];
        }
    }
    let g = slope(f.graph(), &d);
    window.vertices().iter().map(|&x| f.graph().mass(x) * g[x].powf(p)).sum()
}

/// Midpoint Riemann sum of the smoothing integrand at spacing
/// `eps / cells_per_eps`, restricted to the `ε`-neighbourhoods of jump times
/// where it can be nonzero.
pub fn smoothing_norm_riemann(
    f: &ParabolicStepFunction,
    eps: f64,
    window: &Subcylinder,
    p: f64,
    cells_per_eps: f64,
) -> f64 {
    let (t0, t1) = window.time();
    let mut spans: Vec<(f64, f64)> = f
        .partition()
        .breakpoints()
        .into_iter()
        .map(|b| ((b - eps).max(t0), (b + eps).min(t1)))
        .filter(|(a, b)| a < b)
        .collect();
    spans.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, b) in spans {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    let h = eps / cells_per_eps;
    let mut total = 0.0;
    for (a, b) in merged {
        let cells = ((b - a) / h).ceil() as usize;
        let w = (b - a) / cells as f64;
        for i in 0..cells {
            total += w * smoothing_integrand(f, eps, window, p, a + (i as f64 + 0.5) * w);
        }
    }
    total.powf(1.0 / p)
}

/// `‖g_{f(·−s)−f}‖_{L^p(K)}` by a fine midpoint grid in time.
pub fn shift_norm_grid(f: &ParabolicStepFunction, s: f64, window: &Subcylinder, p: f64, cells: usize) -> f64 {
    let (t0, t1) = window.time();
    let h = (t1 - t0) / cells as f64;
    let mut total = 0.0;
    for i in 0..cells {
        let t = t0 + (i as f64 + 0.5) * h;
        let now = f.evaluate(t).unwrap();
        let before = f.evaluate(t - s).unwrap();
        let d: Vec<f64> = before.iter().zip(now.iter()).map(|(a, b)| a - b).collect();
        let g = slope(f.graph(), &d);
        total += h * window.vertices().iter().map(|&x| f.graph().mass(x) * g[x].powf(p)).sum::<f64>();
    }
    total.powf(1.0 / p)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs()).max(1e-300)
    }
}
