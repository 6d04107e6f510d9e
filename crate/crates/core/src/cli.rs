//! Command-line front end.
//!
//! Exit status: 0 on success, 2 when a sweep or bound check fails its
//! criterion, 1 on input or solver errors. File formats are described in
//! [`crate::formats`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, ValueEnum};

use crate::error::{Error, Result};
use crate::formats;
use crate::generate::{random_graph, random_step_function, rng_from_seed, JumpLayout};
use crate::gradient::{local_slope_gradient, lp_minimal_gradient};
use crate::graph::{enumerate_paths, MetricGraph, VertexFunction};
use crate::harness::{
    epsilon_sweep, shift_sweep, verify_proof_bound, ConvergenceReport, Schedule, SweepMode,
};
use crate::modulus::compute_modulus;
use crate::mollifier::KernelKind;
use crate::parabolic::{ParabolicStepFunction, Subcylinder};
use crate::plot::render_svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// p-modulus of the simple paths between two vertices (or of a curve file).
    Modulus,
    /// Upper gradient of a vertex function, or slice-wise of a step function.
    Gradient,
    /// Gradient norm of f − f_ε over a decreasing ε schedule.
    SmoothSweep,
    /// Gradient norm of f(· − s) − f over a decreasing shift schedule.
    ShiftSweep,
    /// Both sides of the shift domination bound at one shift.
    VerifyBound,
    /// Writes a seeded random graph and step function.
    Generate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GradientChoice {
    /// Local slope max_y |f(x) − f(y)| / ℓ(x, y).
    Local,
    /// Minimal-norm edge-admissible gradient (needs p > 1).
    Lp,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "nsobolev", version, about = "Newton-Sobolev calculus on weighted graphs")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = KernelKind::Hat)]
    pub kernel: KernelKind,
    /// First schedule entry; defaults to half the window margin.
    #[arg(long)]
    pub eps0: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub factor: f64,
    #[arg(long, default_value_t = 12)]
    pub steps: usize,
    /// `all` or comma-separated vertex ids.
    #[arg(long, default_value = "all")]
    pub window_vertices: String,
    /// `t0,t1`; defaults to `τ/10, 9τ/10`.
    #[arg(long)]
    pub window_time: Option<String>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub function: Option<PathBuf>,
    /// Curve file for `modulus`, replacing path enumeration.
    #[arg(long)]
    pub curves: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG plot destination for sweeps.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub from: Option<String>,
    #[arg(long)]
    pub to: Option<String>,
    #[arg(long)]
    pub max_hops: Option<usize>,
    #[arg(long)]
    pub shift: Option<f64>,
    #[arg(long, value_enum, default_value_t = GradientChoice::Local)]
    pub gradient_kind: GradientChoice,
    /// Vertex count for `generate`.
    #[arg(long, default_value_t = 6)]
    pub vertices: usize,
    /// Piece count for `generate`.
    #[arg(long, default_value_t = 3)]
    pub pieces: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    CriterionFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::CriterionFailed => 2,
        }
    }
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required for this command")))
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `v` rounded to 12 significant digits, in `{:?}` form (`2.0`, `0.125`).
pub fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v:?}");
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    format!("{rounded:?}")
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p >= 1.0) {
            return Err(Error::InvalidExponent {
                p: self.p,
                reason: "p must be at least 1",
            });
        }
        if !(self.factor > 0.0 && self.factor < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "--factor must lie in (0, 1), got {}",
                self.factor
            )));
        }
        Ok(())
    }

    fn load_graph(&self) -> Result<Arc<MetricGraph>> {
        Ok(Arc::new(formats::read_graph(required(&self.graph, "graph")?)?))
    }

    fn vertex(&self, graph: &MetricGraph, id: &str) -> Result<usize> {
        graph
            .index_of(id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex {id:?}")))
    }

    fn window(&self, f: &ParabolicStepFunction) -> Result<Subcylinder> {
        let graph = f.graph();
        let vertices = if self.window_vertices.trim() == "all" {
            (0..graph.len()).collect()
        } else {
            self.window_vertices
                .split(',')
                .map(|id| self.vertex(graph, id.trim()))
                .collect::<Result<Vec<_>>>()?
        };
        let tau = f.horizon();
        let (t0, t1) = match &self.window_time {
            None => (0.1 * tau, 0.9 * tau),
            Some(spec) => {
                let parts: Vec<&str> = spec.split(',').collect();
                let parse = |s: &str| {
                    s.trim().parse::<f64>().map_err(|_| {
                        Error::InvalidArgument(format!("--window-time expects t0,t1, got {spec:?}"))
                    })
                };
                match parts.as_slice() {
                    [a, b] => (parse(a)?, parse(b)?),
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "--window-time expects t0,t1, got {spec:?}"
                        )))
                    }
                }
            }
        };
        if !(0.0 < t0 && t0 < t1 && t1 < tau) {
            return Err(Error::InvalidSubcylinder(format!(
                "time window [{t0}, {t1}] must satisfy 0 < t0 < t1 < tau = {tau}"
            )));
        }
        let window = Subcylinder::new(vertices, t0, t1)?;
        window.validate(f)?;
        Ok(window)
    }

    fn schedule(&self, window: &Subcylinder, horizon: f64) -> Result<Schedule> {
        let first = self.eps0.unwrap_or(0.5 * window.margin(horizon));
        Schedule::geometric(first, self.factor, self.steps)
    }

    fn load_function(&self, graph: Arc<MetricGraph>) -> Result<ParabolicStepFunction> {
        formats::read_parabolic(required(&self.function, "function")?, graph)
    }
}

/// Runs one command, writing primary output to `--out` or `stdout` and a
/// short summary of sweeps to `summary`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, summary: &mut dyn Write) -> Result<Status> {
    config.validate()?;
    match config.command {
        Command::Modulus => run_modulus(config, stdout),
        Command::Gradient => run_gradient(config, stdout),
        Command::SmoothSweep | Command::ShiftSweep => run_sweep(config, stdout, summary),
        Command::VerifyBound => run_verify(config, stdout),
        Command::Generate => run_generate(config),
    }
}

fn run_modulus(config: &RunConfig, stdout: &mut dyn Write) -> Result<Status> {
    let graph = config.load_graph()?;
    let family = match &config.curves {
        Some(path) => formats::parse_curves(&formats::read_to_string(path)?, &graph)?,
        None => {
            let (a, b) = match (&config.from, &config.to) {
                (Some(a), Some(b)) => (config.vertex(&graph, a)?, config.vertex(&graph, b)?),
                (None, None) => farthest_pair(&graph),
                _ => {
                    return Err(Error::InvalidArgument(
                        "--from and --to must be given together".into(),
                    ))
                }
            };
            let hops = config.max_hops.unwrap_or(graph.len().saturating_sub(1).max(1));
            enumerate_paths(&graph, &[a], &[b], hops)?
        }
    };
    let result = compute_modulus(&graph, &family, config.p)?;
    writeln!(stdout, "{}", format_value(result.value))?;
    if let (Some(path), Some(rho)) = (&config.out, &result.extremal_density) {
        fs::write(path, formats::write_vertex_function(&graph, rho))?;
    }
    Ok(Status::Pass)
}

/// First pair `(a, b)`, `a < b`, attaining the diameter.
fn farthest_pair(graph: &MetricGraph) -> (usize, usize) {
    let mut best = (0, 0, f64::NEG_INFINITY);
    for a in 0..graph.len() {
        let d = graph.distances_from(a);
        for (b, &dist) in d.iter().enumerate().skip(a + 1) {
            if dist > best.2 {
                best = (a, b, dist);
            }
        }
    }
    (best.0, best.1)
}

fn run_gradient(config: &RunConfig, stdout: &mut dyn Write) -> Result<Status> {
    let graph = config.load_graph()?;
    let text = formats::read_to_string(required(&config.function, "function")?)?;
    let slope = |u: &VertexFunction| match config.gradient_kind {
        GradientChoice::Local => local_slope_gradient(&graph, u),
        GradientChoice::Lp => lp_minimal_gradient(&graph, u, config.p),
    };
    let output = if formats::looks_parabolic(&text) {
        let f = formats::parse_parabolic(&text, graph.clone())?;
        let values = f.values().iter().map(slope).collect::<Result<Vec<_>>>()?;
        let g = ParabolicStepFunction::new(graph.clone(), f.partition().clone(), values)?;
        formats::write_parabolic(&g)
    } else {
        let u = formats::parse_vertex_function(&text, &graph)?;
        formats::write_vertex_function(&graph, &slope(&u)?)
    };
    emit(&config.out, stdout, &output)?;
    Ok(Status::Pass)
}

fn run_sweep(config: &RunConfig, stdout: &mut dyn Write, summary: &mut dyn Write) -> Result<Status> {
    let graph = config.load_graph()?;
    let f = config.load_function(graph)?;
    let window = config.window(&f)?;
    let schedule = config.schedule(&window, f.horizon())?;
    let report = match config.command {
        Command::SmoothSweep => epsilon_sweep(&f, config.p, &window, &schedule, config.kernel)?,
        _ => shift_sweep(&f, config.p, &window, &schedule)?,
    };
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    emit(&config.out, stdout, std::str::from_utf8(&csv).expect("csv is utf-8"))?;
    if let Some(path) = &config.plot {
        fs::write(path, render_svg(&report))?;
    }
    write_summary(&report, summary)?;
    Ok(if report.passed {
        Status::Pass
    } else {
        Status::CriterionFailed
    })
}

fn write_summary(report: &ConvergenceReport, out: &mut dyn Write) -> Result<()> {
    let tracked = match report.mode {
        SweepMode::Smoothing => "norm",
        SweepMode::Shift => "sup norm",
    };
    let first = report.envelope[0];
    let last = *report.envelope.last().unwrap();
    let ratio = if first > 0.0 { last / first } else { 0.0 };
    writeln!(
        out,
        "decay: {tracked} envelope {last:.6e} / {first:.6e} = {ratio:.3e} ({})",
        if report.decay_pass { "pass" } else { "fail" }
    )?;
    match (report.rate, report.rate_pass) {
        (Some(r), Some(ok)) => writeln!(
            out,
            "rate: {r:.6} vs 1/p = {:.6} ({})",
            1.0 / report.p,
            if ok { "pass" } else { "fail" }
        )?,
        (Some(r), None) => writeln!(out, "rate: {r:.6}")?,
        (None, _) => writeln!(out, "rate: undefined (vanishing norms)")?,
    }
    Ok(())
}

fn run_verify(config: &RunConfig, stdout: &mut dyn Write) -> Result<Status> {
    let graph = config.load_graph()?;
    let f = config.load_function(graph)?;
    let window = config.window(&f)?;
    let s = config
        .shift
        .ok_or_else(|| Error::InvalidArgument("--shift is required for verify-bound".into()))?;
    let bound = verify_proof_bound(&f, s, config.p, &window)?;
    let text = format!(
        "lhs {}\nrhs {}\nok {}\n",
        format_value(bound.lhs),
        format_value(bound.rhs),
        bound.ok
    );
    emit(&config.out, stdout, &text)?;
    Ok(if bound.ok {
        Status::Pass
    } else {
        Status::CriterionFailed
    })
}

fn run_generate(config: &RunConfig) -> Result<Status> {
    let graph_path = required(&config.graph, "graph")?;
    let function_path = required(&config.function, "function")?;
    let mut rng = rng_from_seed(config.seed);
    let graph = Arc::new(random_graph(&mut rng, config.vertices, 0.3, true)?);
    let f = random_step_function(&mut rng, graph.clone(), config.pieces, &JumpLayout::unit((0.1, 0.9)))?;
    fs::write(graph_path, formats::write_graph(&graph))?;
    fs::write(function_path, formats::write_parabolic(&f))?;
    Ok(Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(2.0), "2.0");
        assert_eq!(format_value(1.9999999999999996), "2.0");
        assert_eq!(format_value(0.125), "0.125");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(2.0 / 3.0), "0.666666666667");
    }

    #[test]
    fn rejects_bad_flags() {
        let cfg = RunConfig::try_parse_from(["nsobolev", "modulus", "--p", "0.5"]).unwrap();
        assert!(matches!(
            run(&cfg, &mut Vec::new(), &mut Vec::new()),
            Err(Error::InvalidExponent { .. })
        ));
        let cfg = RunConfig::try_parse_from(["nsobolev", "smooth-sweep", "--factor", "1.5"]).unwrap();
        assert!(run(&cfg, &mut Vec::new(), &mut Vec::new()).is_err());
        assert!(RunConfig::try_parse_from(["nsobolev", "smooth-sweep", "--kernel", "box"]).is_err());
    }
}
