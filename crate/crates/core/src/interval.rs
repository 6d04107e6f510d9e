//! Finite unions of half-open intervals `[a, b)`.

use std::fmt;

use crate::error::{Error, Result};

/// A finite union of disjoint half-open intervals, kept sorted with touching
/// intervals merged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    parts: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Builds a union; overlapping or touching inputs are merged.
    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut parts: Vec<(f64, f64)> = intervals.into_iter().collect();
        for &(a, b) in &parts {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidPartition(format!(
                    "interval [{a}, {b}) must have finite endpoints and positive length"
                )));
            }
        }
        parts.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(Self::merge_sorted(parts))
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new([(a, b)])
    }

    pub fn empty() -> Self {
        Self::default()
    }

    fn merge_sorted(parts: Vec<(f64, f64)>) -> Self {
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Self { parts: merged }
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.parts.iter().any(|&(a, b)| a <= t && t < b)
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a, b) = self.parts[i];
            let (c, d) = other.parts[j];
            let lo = a.max(c);
            let hi = b.min(d);
            if lo < hi {
                out.push((lo, hi));
            }
            if b < d {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { parts: out }
    }

    /// Intersection with `[lo, hi)`.
    pub fn clip(&self, lo: f64, hi: f64) -> IntervalUnion {
        if lo >= hi {
            return Self::empty();
        }
        self.intersect(&Self {
            parts: vec![(lo, hi)],
        })
    }

    /// Measure of the intersection with `[lo, hi]`.
    pub fn measure_within(&self, lo: f64, hi: f64) -> f64 {
        self.parts
            .iter()
            .map(|&(a, b)| (b.min(hi) - a.max(lo)).max(0.0))
            .sum()
    }

    pub fn translate(&self, s: f64) -> IntervalUnion {
        Self {
            parts: self.parts.iter().map(|&(a, b)| (a + s, b + s)).collect(),
        }
    }

    /// Measure of `(self Δ other) ∩ [lo, hi]`.
    pub fn symmetric_difference_within(&self, other: &IntervalUnion, lo: f64, hi: f64) -> f64 {
        let both = self.intersect(other).measure_within(lo, hi);
        (self.measure_within(lo, hi) + other.measure_within(lo, hi) - 2.0 * both).max(0.0)
    }

    /// All interval endpoints in increasing order.
    pub fn endpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.parts.iter().flat_map(|&(a, b)| [a, b])
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "[{a},{b})")?;
        }
        Ok(())
    }
}
