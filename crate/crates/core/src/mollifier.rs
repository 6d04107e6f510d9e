//! Time mollifiers and the mollification of parabolic step functions.
//!
//! Kernels are `η_ε(s) = η(s/ε)/ε` for a unit-mass profile `η` supported in
//! `[-1, 1]`. Mollified indicators of interval unions reduce to differences
//! of the profile's cumulative distribution:
//! `(1_{[a,b)})_ε(t) = H((t−a)/ε) − H((t−b)/ε)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::VertexFunction;
use crate::interval::IntervalUnion;
use crate::parabolic::ParabolicStepFunction;
use crate::quadrature::{adaptive_simpson, SIMPSON_MAX_SUBDIVISIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `η(x) = (1 − |x|)₊`.
    Hat,
    /// `η(x) ∝ exp(−1/(1 − x²))` on `(−1, 1)`.
    Bump,
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelKind::Hat => "hat",
            KernelKind::Bump => "bump",
        })
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hat" => Ok(KernelKind::Hat),
            "bump" => Ok(KernelKind::Bump),
            other => Err(Error::InvalidArgument(format!("unknown kernel {other:?}"))),
        }
    }
}

/// Tolerance for the bump profile integrals.
const BUMP_TOL: f64 = 1e-13;

fn bump_raw(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    kind: KernelKind,
    eps: f64,
    /// `1 / ∫ raw profile`; 1 for the hat.
    normalization: f64,
}

pub fn make_mollifier(kind: KernelKind, eps: f64) -> Result<Mollifier> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mollifier radius must be positive, got {eps}"
        )));
    }
    let normalization = match kind {
        KernelKind::Hat => 1.0,
        KernelKind::Bump => {
            1.0 / adaptive_simpson(bump_raw, -1.0, 1.0, BUMP_TOL, SIMPSON_MAX_SUBDIVISIONS)
        }
    };
    Ok(Mollifier {
        kind,
        eps,
        normalization,
    })
}

impl Mollifier {
    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Same kernel with another radius.
    pub fn with_eps(&self, eps: f64) -> Result<Mollifier> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mollifier radius must be positive, got {eps}"
            )));
        }
        Ok(Mollifier { eps, ..*self })
    }

    /// Unit-mass profile on `[-1, 1]`.
    pub fn profile(&self, x: f64) -> f64 {
        match self.kind {
            KernelKind::Hat => (1.0 - x.abs()).max(0.0),
            KernelKind::Bump => self.normalization * bump_raw(x),
        }
    }

    /// `η_ε(s) = η(s/ε)/ε`.
    pub fn density(&self, s: f64) -> f64 {
        self.profile(s / self.eps) / self.eps
    }

    /// `∫_{-ε}^{ε} η_ε`: exactly 1 for the hat, adaptive Simpson for the bump.
    pub fn mass(&self) -> f64 {
        match self.kind {
            KernelKind::Hat => 1.0,
            KernelKind::Bump => adaptive_simpson(
                |s| self.density(s),
                -self.eps,
                self.eps,
                1e-12,
                SIMPSON_MAX_SUBDIVISIONS,
            ),
        }
    }

    /// Cumulative profile `H(x) = ∫_{-1}^{x} η`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= -1.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        match self.kind {
            KernelKind::Hat => {
                if x <= 0.0 {
                    0.5 * (1.0 + x) * (1.0 + x)
                } else {
                    1.0 - 0.5 * (1.0 - x) * (1.0 - x)
                }
            }
            KernelKind::Bump => {
                let tail = |y: f64| {
                    self.normalization
                        * adaptive_simpson(bump_raw, -1.0, y, BUMP_TOL, SIMPSON_MAX_SUBDIVISIONS)
                };
                if x <= 0.0 {
                    tail(x)
                } else {
                    1.0 - tail(-x)
                }
            }
        }
    }

    /// `(1_E)_ε(t)` without any domain check.
    pub fn indicator_at(&self, e: &IntervalUnion, t: f64) -> f64 {
        e.parts()
            .iter()
            .map(|&(a, b)| self.interval_weight(a, b, t))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    fn interval_weight(&self, a: f64, b: f64, t: f64) -> f64 {
        let (ua, ub) = ((t - a) / self.eps, (t - b) / self.eps);
        if ub >= 1.0 || ua <= -1.0 {
            return 0.0;
        }
        if ua >= 1.0 && ub <= -1.0 {
            return 1.0;
        }
        self.cdf(ua) - self.cdf(ub)
    }

    /// Checks `[t − ε, t + ε] ⊆ [lo, hi]`.
    pub fn check_window(&self, t: f64, domain: (f64, f64)) -> Result<()> {
        let (lo, hi) = (t - self.eps, t + self.eps);
        if lo >= domain.0 && hi <= domain.1 {
            Ok(())
        } else {
            Err(Error::WindowOutsideDomain {
                lo,
                hi,
                domain_lo: domain.0,
                domain_hi: domain.1,
            })
        }
    }
}

/// `(1_E)_ε(t) = ∫ η_ε(s) 1_E(t − s) ds`, requiring the kernel window around
/// `t` to stay inside `domain`.
pub fn mollify_indicator(
    e: &IntervalUnion,
    m: &Mollifier,
    t: f64,
    domain: (f64, f64),
) -> Result<f64> {
    m.check_window(t, domain)?;
    Ok(m.indicator_at(e, t))
}

/// `f_ε(t) = Σ_k (1_{E_k})_ε(t)·v_k`, with coefficients evaluated on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct MollifiedFunction {
    f: ParabolicStepFunction,
    m: Mollifier,
}

pub fn mollify(f: &ParabolicStepFunction, m: &Mollifier) -> MollifiedFunction {
    MollifiedFunction {
        f: f.clone(),
        m: *m,
    }
}

impl MollifiedFunction {
    pub fn source(&self) -> &ParabolicStepFunction {
        &self.f
    }

    pub fn mollifier(&self) -> &Mollifier {
        &self.m
    }

    /// Whether `[t − ε, t + ε]` lies in the covered region.
    pub fn is_admissible(&self, t: f64) -> bool {
        self.m.check_window(t, self.f.domain()).is_ok()
    }

    /// `c_k(t) = (1_{E_k})_ε(t)` for every piece.
    pub fn coefficients(&self, t: f64) -> Result<Vec<f64>> {
        self.m.check_window(t, self.f.domain())?;
        Ok(self
            .f
            .partition()
            .pieces()
            .iter()
            .map(|e| self.m.indicator_at(e, t))
            .collect())
    }

    pub fn evaluate(&self, t: f64) -> Result<VertexFunction> {
        let coefficients = self.coefficients(t)?;
        let mut out = VertexFunction::zeros(self.f.graph().len());
        for (c, v) in coefficients.iter().zip(self.f.values()) {
            if *c != 0.0 {
                out.add_scaled(*c, v);
            }
        }
        Ok(out)
    }
}
