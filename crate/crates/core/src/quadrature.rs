//! One-dimensional quadrature: adaptive Simpson and Gauss–Legendre rules.

use std::sync::OnceLock;

/// Default absolute tolerance for adaptive Simpson.
pub const SIMPSON_TOL: f64 = 1e-10;
/// Default cap on interval subdivisions for adaptive Simpson.
pub const SIMPSON_MAX_SUBDIVISIONS: usize = 10_000;

/// Adaptive Simpson with absolute tolerance `tol`. Subdivision stops once
/// `max_subdivisions` intervals have been split; the remaining intervals keep
/// their current (Richardson-corrected) estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_subdivisions: usize,
) -> f64 {
    if a == b {
        return 0.0;
    }
    struct Segment {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
    }
    let simpson = |fa: f64, fm: f64, fb: f64, h: f64| h * (fa + 4.0 * fm + fb) / 6.0;

    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let mut stack = vec![Segment {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(fa, fm, fb, b - a),
        tol,
    }];
    let mut total = 0.0;
    let mut splits = 0;
    while let Some(s) = stack.pop() {
        let m = 0.5 * (s.a + s.b);
        let (lm, rm) = (0.5 * (s.a + m), 0.5 * (m + s.b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(s.fa, flm, s.fm, m - s.a);
        let right = simpson(s.fm, frm, s.fb, s.b - m);
        let delta = left + right - s.whole;
        let tiny = (s.b - s.a).abs() <= 4.0 * f64::EPSILON * s.a.abs().max(s.b.abs());
        if delta.abs() <= 15.0 * s.tol || splits >= max_subdivisions || tiny {
            total += left + right + delta / 15.0;
        } else {
            splits += 1;
            stack.push(Segment {
                a: s.a,
                b: m,
                fa: s.fa,
                fm: flm,
                fb: s.fm,
                whole: left,
                tol: 0.5 * s.tol,
            });
            stack.push(Segment {
                a: m,
                b: s.b,
                fa: s.fm,
                fm: frm,
                fb: s.fb,
                whole: right,
                tol: 0.5 * s.tol,
            });
        }
    }
    total
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, refined by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn gauss10() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(10))
}

/// Ten-point Gauss–Legendre on `[a, b]`; exact for polynomials of degree ≤ 19.
pub fn gauss10_on<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss10();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(c + h * x))
        .sum::<f64>()
}

/// Globally adaptive ten-point Gauss: repeatedly bisects the segment with the
/// largest error estimate until the summed estimate is below `tol`
/// (absolute) or `max_segments` segments exist.
pub fn adaptive_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_segments: usize) -> f64 {
    struct Segment {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    }
    let split = |a: f64, b: f64, whole: f64| -> [Segment; 2] {
        let m = 0.5 * (a + b);
        let (left, right) = (gauss10_on(f, a, m), gauss10_on(f, m, b));
        let error = (left + right - whole).abs() * 0.5;
        [
            Segment { a, b: m, value: left, error },
            Segment { a: m, b, value: right, error },
        ]
    };
    if a == b {
        return 0.0;
    }
    let mut segments: Vec<Segment> = split(a, b, gauss10_on(f, a, b)).into();
    while segments.len() < max_segments.max(2) {
        let total: f64 = segments.iter().map(|s| s.error).sum();
        if total <= tol {
            break;
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let s = segments.swap_remove(worst);
        segments.extend(split(s.a, s.b, s.value));
    }
    segments.iter().map(|s| s.value).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_smooth_functions() {
        let v = adaptive_simpson(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 10_000);
        assert!((v - 2.0).abs() < 1e-11);
        let cubic = adaptive_simpson(|x: f64| x * x * x, 0.0, 2.0, 1e-12, 10);
        assert!((cubic - 4.0).abs() < 1e-13);
    }

    #[test]
    fn simpson_handles_kinks() {
        let v = adaptive_simpson(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-12, 10_000);
        assert!((v - (0.045 + 0.245)).abs() < 1e-11);
    }

    #[test]
    fn gauss_rules_are_exact_on_polynomials() {
        for n in [1, 2, 5, 10] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14, "n={n}");
            let deg = 2 * n - 1;
            let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            // ∫ x^{deg-1} over [-1, 1], deg - 1 even.
            let exact = 2.0 / deg as f64;
            assert!((integral - exact).abs() < 1e-14, "n={n}");
        }
        let v = gauss10_on(&|t: f64| 3.0 * t.powi(19) + t.powi(6), 0.0, 1.0);
        assert!((v - (3.0 / 20.0 + 1.0 / 7.0)).abs() < 1e-15);
    }

    #[test]
    fn adaptive_gauss_handles_endpoint_singularity() {
        let v = adaptive_gauss(&|t: f64| t.powf(1.5), 0.0, 1.0, 1e-14, 200);
        assert!((v - 0.4).abs() < 1e-13);
    }
}
