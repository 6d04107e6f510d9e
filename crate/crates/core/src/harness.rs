//! Convergence sweeps for time smoothing and time translation.
//!
//! For a step function `f = Σ_k 1_{E_k} v_k` the difference
//! `f − f_ε = Σ_k (1_{E_k} − (1_{E_k})_ε) v_k` has time-only coefficients,
//! so its slice-wise gradient is dominated by `Σ_k |1_{E_k} − (1_{E_k})_ε| g_{v_k}`.
//! The sweeps measure `‖g_{f−f_ε}‖_{L^p(K)}` and `‖g_{f(·−s)−f}‖_{L^p(K)}` on
//! decreasing schedules and fit the log-log decay rate.
//!
//! With the hat kernel every coefficient is piecewise quadratic in `t`
//! (breakpoints at `a`, `a ± ε` for each interval endpoint `a`), each edge
//! difference quotient of `(f − f_ε)(t)` is a quadratic, and the local slope
//! is the upper envelope of their absolute values. The time integral is then
//! computed piece by piece after isolating sign changes and envelope
//! crossings. The bump kernel falls back to adaptive quadrature of the
//! pointwise integrand.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gradient::local_slope_gradient;
use crate::graph::{check_exponent, lp_norm, VertexFunction};
use crate::mollifier::{KernelKind, Mollifier};
use crate::parabolic::{ParabolicStepFunction, Subcylinder};
use crate::quadrature::{adaptive_gauss, gauss10_on};

/// Required decay of the last envelope value relative to the first.
pub const DECAY_RTOL: f64 = 1e-3;
/// Allowed distance of the fitted log-log rate from `1/p`.
pub const RATE_TOL: f64 = 0.15;
/// Number of trailing schedule points used in the rate fit.
pub const RATE_FIT_POINTS: usize = 6;
/// Slack in the proof-bound comparison, `lhs ≤ rhs + SLACK·(1 + rhs)`.
pub const PROOF_BOUND_SLACK: f64 = 1e-9;
/// Number of evenly spaced window offsets in the shift uniformity check.
pub const SHIFT_OFFSETS: usize = 21;

/// Slice `(f − f_ε)(t)`'s gradient and its dominating bound.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceGradient {
    /// `g_{(f−f_ε)(t)}`.
    pub direct: VertexFunction,
    /// `Σ_k |1_{E_k}(t) − (1_{E_k})_ε(t)| · g_{v_k}`.
    pub bound: VertexFunction,
}

fn difference_coefficients(f: &ParabolicStepFunction, m: &Mollifier, t: f64) -> Result<Vec<f64>> {
    m.check_window(t, f.domain())?;
    Ok(f
        .partition()
        .pieces()
        .iter()
        .map(|e| (if e.contains(t) { 1.0 } else { 0.0 }) - m.indicator_at(e, t))
        .collect())
}

/// `(f − f_ε)(t) = Σ_k (1_{E_k}(t) − (1_{E_k})_ε(t)) v_k`.
pub fn difference_slice(f: &ParabolicStepFunction, m: &Mollifier, t: f64) -> Result<VertexFunction> {
    let alpha = difference_coefficients(f, m, t)?;
    let mut d = VertexFunction::zeros(f.graph().len());
    for (a, v) in alpha.iter().zip(f.values()) {
        if *a != 0.0 {
            d.add_scaled(*a, v);
        }
    }
    Ok(d)
}

pub fn gradient_of_difference(
    f: &ParabolicStepFunction,
    m: &Mollifier,
    t: f64,
) -> Result<DifferenceGradient> {
    let alpha = difference_coefficients(f, m, t)?;
    let graph = f.graph();
    let mut d = VertexFunction::zeros(graph.len());
    let mut bound = VertexFunction::zeros(graph.len());
    for (a, v) in alpha.iter().zip(f.values()) {
        if *a != 0.0 {
            d.add_scaled(*a, v);
            bound.add_scaled(a.abs(), &local_slope_gradient(graph, v)?);
        }
    }
    Ok(DifferenceGradient {
        direct: local_slope_gradient(graph, &d)?,
        bound,
    })
}

/// `∫_I Σ_{x∈U} μ(x) g_{(f−f_ε)(t)}(x)^p dt`.
pub fn difference_gradient_integral(
    f: &ParabolicStepFunction,
    m: &Mollifier,
    window: &Subcylinder,
    p: f64,
) -> Result<f64> {
    check_exponent(p)?;
    window.validate(f)?;
    let (t0, t1) = window.time();
    m.check_window(t0, f.domain())?;
    m.check_window(t1, f.domain())?;

    let eps = m.eps();
    let mut cuts = vec![t0, t1];
    for e in f.partition().pieces() {
        for a in e.endpoints() {
            cuts.extend([a - eps, a, a + eps].into_iter().filter(|&c| c > t0 && c < t1));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (l, r) = (w[0], w[1]);
        if r <= l {
            continue;
        }
        total += match m.kind() {
            KernelKind::Hat => hat_segment(f, m, window, p, l, r)?,
            KernelKind::Bump => {
                let g = |t: f64| slice_integrand(f, m, window, p, t).unwrap_or(f64::NAN);
                let scale = g(0.5 * (l + r)).abs().max(g(l).abs()) * (r - l);
                adaptive_gauss(&g, l, r, 1e-10 * scale + 1e-300, 400)
            }
        };
    }
    Ok(total)
}

/// `Σ_{x∈U} μ(x) g_{(f−f_ε)(t)}(x)^p` at a single time.
pub fn slice_integrand(
    f: &ParabolicStepFunction,
    m: &Mollifier,
    window: &Subcylinder,
    p: f64,
    t: f64,
) -> Result<f64> {
    let g = local_slope_gradient(f.graph(), &difference_slice(f, m, t)?)?;
    Ok(window
        .vertices()
        .iter()
        .map(|&x| f.graph().mass(x) * g[x].powf(p))
        .sum())
}

/// `‖g_{f−f_ε}‖_{L^p(K)}`.
pub fn smoothing_norm(
    f: &ParabolicStepFunction,
    m: &Mollifier,
    window: &Subcylinder,
    p: f64,
) -> Result<f64> {
    Ok(difference_gradient_integral(f, m, window, p)?.powf(1.0 / p))
}

type Quadratic = [f64; 3];

fn eval_quadratic(q: &Quadratic, u: f64) -> f64 {
    q[0] + u * (q[1] + u * q[2])
}

/// Quadratic in `u ∈ [0, 1]` through samples at `u = 1/4, 1/2, 3/4`.
fn fit_quadratic(y: [f64; 3]) -> Quadratic {
    // Second difference with step 1/4.
    let c2 = 8.0 * (y[0] - 2.0 * y[1] + y[2]);
    let c1 = 2.0 * (y[2] - y[0]) - c2;
    let c0 = y[1] - 0.5 * c1 - 0.25 * c2;
    [c0, c1, c2]
}

/// Roots of `q` strictly inside `(0, 1)`.
fn roots_in_unit(q: &Quadratic, scale: f64, out: &mut Vec<f64>) {
    let tiny = 1e-14 * scale;
    let [c, b, a] = *q;
    if a.abs() <= tiny {
        if b.abs() > tiny {
            out.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let qq = -0.5 * (b + b.signum() * sq);
            if qq != 0.0 {
                out.push(qq / a);
                out.push(c / qq);
            } else {
                out.push(0.0);
            }
        }
    }
    out.retain(|u| *u > 0.0 && *u < 1.0);
}

fn integrate_power(q: &Quadratic, p: f64, a: f64, b: f64, sign: f64) -> f64 {
    let integrand = |u: f64| (sign * eval_quadratic(q, u)).max(0.0).powf(p);
    if p.fract() == 0.0 && p <= 9.0 {
        // |q|^p is a polynomial of degree ≤ 18 on a sign-definite piece.
        return gauss10_on(&integrand, a, b);
    }
    // Roots of q at the piece ends make |q|^p algebraically singular there;
    // u = end ± (b − a)·w² restores smoothness.
    let (fa, fm, fb) = (integrand(a), integrand(0.5 * (a + b)), integrand(b));
    let peak = fa.max(fm).max(fb);
    if peak == 0.0 {
        return 0.0;
    }
    let tiny = 1e-6 * peak;
    let graded = |from: f64, to: f64| {
        let h = to - from;
        let g = move |w: f64| integrand(from + h * w * w) * 2.0 * w;
        h * adaptive_gauss(&g, 0.0, 1.0, 1e-10 * peak, 200)
    };
    let tol = 1e-10 * peak * (b - a);
    match (fa <= tiny, fb <= tiny) {
        (false, false) => adaptive_gauss(&integrand, a, b, tol, 200),
        (true, false) => graded(a, b),
        (false, true) => -graded(b, a),
        (true, true) => {
            let m = 0.5 * (a + b);
            graded(a, m) - graded(b, m)
        }
    }
}

/// Exact contribution of one hat-kernel segment `[l, r]` on which every
/// coefficient is a single quadratic.
fn hat_segment(
    f: &ParabolicStepFunction,
    m: &Mollifier,
    window: &Subcylinder,
    p: f64,
    l: f64,
    r: f64,
) -> Result<f64> {
    let h = r - l;
    let samples = [0.25, 0.5, 0.75].map(|u| l + u * h);
    let alpha_at = samples
        .iter()
        .map(|&t| difference_coefficients(f, m, t))
        .collect::<Result<Vec<_>>>()?;
    let alphas: Vec<(usize, Quadratic)> = (0..f.values().len())
        .filter_map(|k| {
            let y = [alpha_at[0][k], alpha_at[1][k], alpha_at[2][k]];
            (y != [0.0; 3]).then(|| (k, fit_quadratic(y)))
        })
        .collect();
    if alphas.is_empty() {
        return Ok(0.0);
    }

    let graph = f.graph();
    let values = f.values();
    let mut total = 0.0;
    let mut quotients: Vec<Quadratic> = Vec::new();
    let mut cuts: Vec<f64> = Vec::new();
    for &x in window.vertices() {
        quotients.clear();
        for &(y, len) in graph.neighbors(x) {
            let mut q = [0.0; 3];
            for (k, a) in &alphas {
                let dv = (values[*k][x] - values[*k][y]) / len;
                if dv != 0.0 {
                    for i in 0..3 {
                        q[i] += a[i] * dv;
                    }
                }
            }
            if q != [0.0; 3] {
                quotients.push(q);
            }
        }
        if quotients.is_empty() {
            continue;
        }
        let scale = quotients
            .iter()
            .flat_map(|q| q.iter().map(|c| c.abs()))
            .fold(0.0, f64::max);

        cuts.clear();
        cuts.extend([0.0, 1.0]);
        for (i, qi) in quotients.iter().enumerate() {
            let mut found = Vec::new();
            roots_in_unit(qi, scale, &mut found);
            for qj in &quotients[i + 1..] {
                let minus = [qi[0] - qj[0], qi[1] - qj[1], qi[2] - qj[2]];
                let plus = [qi[0] + qj[0], qi[1] + qj[1], qi[2] + qj[2]];
                roots_in_unit(&minus, scale, &mut found);
                roots_in_unit(&plus, scale, &mut found);
            }
            cuts.extend(found);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        let mut vertex_sum = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let mid = 0.5 * (a + b);
            let (best, value) = quotients
                .iter()
                .map(|q| (q, eval_quadratic(q, mid)))
                .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
                .expect("nonempty");
            if value != 0.0 {
                vertex_sum += integrate_power(best, p, a, b, value.signum());
            }
        }
        total += graph.mass(x) * vertex_sum;
    }
    Ok(total * h)
}

/// `‖g_{f(·−s) − f}‖_{L^p(K)}`, exact on step functions.
pub fn shift_norm(f: &ParabolicStepFunction, s: f64, window: &Subcylinder, p: f64) -> Result<f64> {
    check_shift(f, s, window)?;
    let diff = ParabolicStepFunction::combine(&f.time_shift(s)?, f, 1.0, -1.0)?;
    diff.gradient().product_lp_norm(window, p)
}

fn check_shift(f: &ParabolicStepFunction, s: f64, window: &Subcylinder) -> Result<()> {
    let margin = window.margin(f.horizon());
    if s.is_nan() || s.abs() >= margin {
        return Err(Error::InvalidSchedule(format!(
            "shift {s} must be smaller in magnitude than the window margin {margin}"
        )));
    }
    Ok(())
}

/// Both sides of the Minkowski–Fubini domination
/// `‖g_{f(·−s)−f}‖_{L^p(K)} ≤ Σ_k ‖1_{E_k}(·−s) − 1_{E_k}‖_{L^p(I)} ‖g_{v_k}‖_{L^p(U)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

pub fn verify_proof_bound(
    f: &ParabolicStepFunction,
    s: f64,
    p: f64,
    window: &Subcylinder,
) -> Result<ProofBound> {
    let lhs = shift_norm(f, s, window, p)?;
    let (t0, t1) = window.time();
    let mut rhs = 0.0;
    for (e, v) in f.pieces() {
        let moved = e.translate(s);
        let time = e.symmetric_difference_within(&moved, t0, t1).powf(1.0 / p);
        if time > 0.0 {
            let g = local_slope_gradient(f.graph(), v)?;
            rhs += time * lp_norm(f.graph(), &g, p, window.vertices())?;
        }
    }
    Ok(ProofBound {
        lhs,
        rhs,
        ok: lhs <= rhs + PROOF_BOUND_SLACK * (1.0 + rhs),
    })
}

/// Strictly decreasing positive parameter schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule(Vec<f64>);

impl Schedule {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSchedule("schedule is empty".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidSchedule("schedule values must be positive".into()));
        }
        if values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidSchedule(
                "schedule must be strictly decreasing".into(),
            ));
        }
        Ok(Self(values))
    }

    /// `first · factor^j` for `j = 0..=steps`.
    pub fn geometric(first: f64, factor: f64, steps: usize) -> Result<Self> {
        if !(factor > 0.0 && factor < 1.0) {
            return Err(Error::InvalidSchedule(format!(
                "factor must lie in (0, 1), got {factor}"
            )));
        }
        Self::new((0..=steps).map(|j| first * factor.powi(j as i32)).collect())
    }

    /// `ε_j = ε₀ 2^{−j}`, `j = 0..=12`, `ε₀` half the window margin.
    pub fn default_for(window: &Subcylinder, horizon: f64) -> Result<Self> {
        Self::geometric(0.5 * window.margin(horizon), 0.5, 12)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn first(&self) -> f64 {
        self.0[0]
    }

    fn check_margin(&self, window: &Subcylinder, horizon: f64) -> Result<()> {
        let margin = window.margin(horizon);
        if self.first() >= margin {
            return Err(Error::InvalidSchedule(format!(
                "largest parameter {} must be below the distance {margin} from the time window [{}, {}] to {{0, {horizon}}}",
                self.first(),
                window.time().0,
                window.time().1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Smoothing,
    Shift,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub mode: SweepMode,
    pub p: f64,
    pub params: Vec<f64>,
    pub norms: Vec<f64>,
    /// Shift mode: supremum of the norm over translated windows.
    pub sup_norms: Option<Vec<f64>>,
    /// Running minimum of the tracked norm along the schedule.
    pub envelope: Vec<f64>,
    /// Slope between consecutive points on log-log axes.
    pub running_rates: Vec<Option<f64>>,
    /// Least-squares log-log slope over the trailing points.
    pub rate: Option<f64>,
    pub decay_pass: bool,
    /// `None` when the rate is undefined (some norm vanishes).
    pub rate_pass: Option<bool>,
    pub passed: bool,
}

impl ConvergenceReport {
    fn assemble(mode: SweepMode, p: f64, params: Vec<f64>, norms: Vec<f64>, sup_norms: Option<Vec<f64>>) -> Self {
        let tracked = sup_norms.as_ref().unwrap_or(&norms);
        let mut envelope = Vec::with_capacity(tracked.len());
        let mut low = f64::INFINITY;
        for &v in tracked {
            low = low.min(v);
            envelope.push(low);
        }
        let decay_pass = envelope[envelope.len() - 1] <= DECAY_RTOL * envelope[0];

        let running_rates = std::iter::once(None)
            .chain(params.windows(2).zip(norms.windows(2)).map(|(e, n)| {
                (n[0] > 0.0 && n[1] > 0.0).then(|| (n[1] / n[0]).ln() / (e[1] / e[0]).ln())
            }))
            .collect();
        let rate = fit_rate(&params, &norms, RATE_FIT_POINTS);
        let rate_pass = match mode {
            SweepMode::Smoothing => rate.map(|r| (r - 1.0 / p).abs() <= RATE_TOL),
            SweepMode::Shift => None,
        };
        Self {
            mode,
            p,
            params,
            norms,
            sup_norms,
            envelope,
            running_rates,
            rate,
            decay_pass,
            rate_pass,
            passed: decay_pass && rate_pass.unwrap_or(true),
        }
    }

    /// CSV with header `param,norm,sup_norm,rate_running`; numbers carry 17
    /// significant digits, missing values are empty fields.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["param", "norm", "sup_norm", "rate_running"])?;
        let fmt = |v: f64| format!("{v:.16e}");
        for i in 0..self.params.len() {
            w.write_record([
                fmt(self.params[i]),
                fmt(self.norms[i]),
                self.sup_norms.as_ref().map(|s| fmt(s[i])).unwrap_or_default(),
                self.running_rates[i].map(fmt).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Least-squares slope of `ln norm` against `ln param` over the last
/// `points` entries; `None` if any of them is not positive.
pub fn fit_rate(params: &[f64], norms: &[f64], points: usize) -> Option<f64> {
    let n = params.len().min(norms.len());
    let start = n.saturating_sub(points);
    if n - start < 2 {
        return None;
    }
    let pairs: Vec<(f64, f64)> = params[start..n]
        .iter()
        .zip(&norms[start..n])
        .map(|(e, v)| (e.ln(), v.ln()))
        .collect();
    if norms[start..n].iter().any(|v| v.is_nan() || *v <= 0.0) {
        return None;
    }
    let k = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pairs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pairs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

/// `N(ε) = ‖g_{f−f_ε}‖_{L^p(K)}` over the schedule.
pub fn epsilon_sweep(
    f: &ParabolicStepFunction,
    p: f64,
    window: &Subcylinder,
    schedule: &Schedule,
    kernel: KernelKind,
) -> Result<ConvergenceReport> {
    check_exponent(p)?;
    window.validate(f)?;
    schedule.check_margin(window, f.horizon())?;
    let norms = schedule
        .values()
        .par_iter()
        .map(|&eps| {
            let m = crate::mollifier::make_mollifier(kernel, eps)?;
            smoothing_norm(f, &m, window, p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::assemble(
        SweepMode::Smoothing,
        p,
        schedule.values().to_vec(),
        norms,
        None,
    ))
}

/// Window offsets `δ` keeping `I + δ` inside the region every shift of the
/// schedule leaves covered.
pub fn translate_offsets(window: &Subcylinder, horizon: f64, largest_shift: f64) -> Vec<f64> {
    let (t0, t1) = window.time();
    let lo = largest_shift - t0;
    let hi = horizon - largest_shift - t1;
    let mut offsets: Vec<f64> = (0..SHIFT_OFFSETS)
        .map(|i| lo + (hi - lo) * i as f64 / (SHIFT_OFFSETS - 1) as f64)
        .collect();
    offsets.push(0.0);
    offsets.sort_by(f64::total_cmp);
    offsets.dedup();
    offsets
}

/// `M(s) = ‖g_{f(·−s)−f}‖_{L^p(K)}` over the schedule, together with the
/// supremum over translated windows `I + δ`.
pub fn shift_sweep(
    f: &ParabolicStepFunction,
    p: f64,
    window: &Subcylinder,
    schedule: &Schedule,
) -> Result<ConvergenceReport> {
    check_exponent(p)?;
    window.validate(f)?;
    schedule.check_margin(window, f.horizon())?;
    let offsets = translate_offsets(window, f.horizon(), schedule.first());
    let windows = offsets
        .iter()
        .map(|&d| window.translate(d))
        .collect::<Result<Vec<_>>>()?;
    let rows = schedule
        .values()
        .par_iter()
        .map(|&s| {
            let diff = ParabolicStepFunction::combine(&f.time_shift(s)?, f, 1.0, -1.0)?;
            let grad = diff.gradient();
            let norm = grad.product_lp_norm(window, p)?;
            let sup = windows
                .iter()
                .map(|w| grad.product_lp_norm(w, p))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(norm, f64::max);
            Ok((norm, sup))
        })
        .collect::<Result<Vec<_>>>()?;
    let (norms, sups) = rows.into_iter().unzip();
    Ok(ConvergenceReport::assemble(
        SweepMode::Shift,
        p,
        schedule.values().to_vec(),
        norms,
        Some(sups),
    ))
}
