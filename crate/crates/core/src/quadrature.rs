//! Numerical routes to `∫∫ F dC`: Riemann–Stieltjes grid sums, the
//! one-dimensional integral of the `G` functional, and Cesàro means along
//! low-discrepancy sequences.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copulas::{Copula, HPair, TransportMap};
use crate::costs::CostField;
use crate::error::{Error, Result};

/// Number of cells per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec(usize);

impl GridSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("grid needs n >= 2, got {n}")));
        }
        Ok(Self(n))
    }

    pub fn n(self) -> usize {
        self.0
    }
}

/// `Σ F(cell midpoint)·C-volume(cell)` over an `n × n` grid.
pub fn rs_integral(cost: &CostField, c: &Copula, grid: GridSpec) -> f64 {
    let n = grid.n();
    let h = 1.0 / n as f64;
    let node = |i: usize| if i == n { 1.0 } else { i as f64 * h };
    // One row of copula values per x node.
    let rows: Vec<Vec<f64>> =
        (0..=n).into_par_iter().map(|i| (0..=n).map(|j| c.eval_unchecked(node(i), node(j))).collect()).collect();
    let row_sums: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (lo, hi) = (&rows[i], &rows[i + 1]);
            let x = (i as f64 + 0.5) * h;
            (0..n)
                .map(|j| {
                    let vol = hi[j + 1] - hi[j] - lo[j + 1] + lo[j];
                    if vol == 0.0 {
                        0.0
                    } else {
                        cost.eval(x, (j as f64 + 0.5) * h) * vol
                    }
                })
                .sum::<f64>()
        })
        .collect();
    row_sums.iter().sum()
}

fn three_branches(cost: &CostField, h: &HPair) -> Result<[crate::costs::Branch; 3]> {
    let branches = cost.branches().ok_or_else(|| Error::InvalidParameter("cost is not piecewise in x".into()))?;
    let [b1, b2, b3] = branches else {
        return Err(Error::InvalidParameter(format!("cost has {} branches, expected 3", branches.len())));
    };
    if (b1.x_hi - h.x1).abs() > 1e-12 || (b2.x_hi - h.x2).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "cost breakpoints ({}, {}) do not match pair breakpoints ({}, {})",
            b1.x_hi, b2.x_hi, h.x1, h.x2
        )));
    }
    Ok([b1.clone(), b2.clone(), b3.clone()])
}

// A zero cost factor annihilates a divergent slope (y·ln y → 0 policy).
fn weighted(factor: f64, weight: f64) -> f64 {
    if factor == 0.0 {
        0.0
    } else {
        factor * weight
    }
}

/// The three summands of `G(y)`:
/// `F₁(h₁, y)·h₁′`, `F₂(x₂ − h₂ + h₁, y)·(h₂′ − h₁′)`, `F₃(x₂ − h₂ + y, y)·(1 − h₂′)`.
pub fn g_terms(cost: &CostField, h: &HPair, y: f64) -> Result<[f64; 3]> {
    let [f1, f2, f3] = three_branches(cost, h)?;
    Ok(g_terms_with(&[f1, f2, f3], h, y))
}

pub(crate) fn g_terms_with(b: &[crate::costs::Branch; 3], h: &HPair, y: f64) -> [f64; 3] {
    let (v1, v2) = (h.h1.eval(y), h.h2.eval(y));
    let (d1, d2) = (h.h1.deriv(y), h.h2.deriv(y));
    [
        weighted(b[0].eval(v1, y), d1),
        weighted(b[1].eval(h.x2 - v2 + v1, y), d2 - d1),
        weighted(b[2].eval(h.x2 - v2 + y, y), 1.0 - d2),
    ]
}

pub fn g_functional(cost: &CostField, h: &HPair, y: f64) -> Result<f64> {
    Ok(g_terms(cost, h, y)?.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Midpoint,
    Simpson,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(Scheme::Midpoint),
            "simpson" => Ok(Scheme::Simpson),
            _ => Err(Error::InvalidParameter(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Composite quadrature of `y ↦ f(y)` over `[0, 1]` with `n` cells. With
/// `open_start` the first cell uses only its midpoint.
pub(crate) fn integrate_unit(
    f: impl Fn(f64) -> Result<f64>,
    scheme: Scheme,
    n: usize,
    open_start: bool,
) -> Result<f64> {
    let h = 1.0 / n as f64;
    let sample = |y: f64| -> Result<f64> {
        let v = f(y)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { y })
        }
    };
    let mut acc = 0.0;
    for i in 0..n {
        let a = i as f64 * h;
        let b = if i + 1 == n { 1.0 } else { (i + 1) as f64 * h };
        let m = 0.5 * (a + b);
        acc += match scheme {
            Scheme::Simpson if !(open_start && i == 0) => (b - a) * (sample(a)? + 4.0 * sample(m)? + sample(b)?) / 6.0,
            _ => (b - a) * sample(m)?,
        };
    }
    Ok(acc)
}

/// `∫₀¹ G dy`. When a boundary function has a divergent slope at 0 the first
/// cell is integrated by its midpoint.
pub fn integrate_g(cost: &CostField, h: &HPair, scheme: Scheme, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one cell".into()));
    }
    let branches = three_branches(cost, h)?;
    integrate_unit(|y| Ok(g_terms_with(&branches, h, y).iter().sum()), scheme, n, h.singular_at_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceKind {
    VanDerCorput { base: u32 },
    Kronecker { alpha: f64 },
}

/// A uniformly distributed sequence in `[0, 1)` with an internal counter
/// starting at 1 (or a chosen offset).
#[derive(Debug, Clone)]
pub struct SequenceGen {
    kind: SequenceKind,
    index: u64,
}

impl SequenceGen {
    pub fn new(kind: SequenceKind) -> Self {
        Self { kind, index: 1 }
    }

    pub fn van_der_corput(base: u32) -> Self {
        assert!(base >= 2, "radical-inverse base must be at least 2");
        Self::new(SequenceKind::VanDerCorput { base })
    }

    pub fn kronecker(alpha: f64) -> Self {
        Self::new(SequenceKind::Kronecker { alpha })
    }

    /// Kronecker with the golden-ratio conjugate `(√5 − 1)/2`.
    pub fn kronecker_default() -> Self {
        Self::kronecker((5f64.sqrt() - 1.0) / 2.0)
    }

    /// Starts the counter at `start` so parallel streams stay disjoint.
    pub fn with_offset(mut self, start: u64) -> Self {
        self.index = start;
        self
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn next_point(&mut self) -> f64 {
        let n = self.index;
        self.index += 1;
        match self.kind {
            SequenceKind::VanDerCorput { base } => radical_inverse(n, base),
            SequenceKind::Kronecker { alpha } => (n as f64 * alpha).rem_euclid(1.0),
        }
    }
}

impl Iterator for SequenceGen {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        Some(self.next_point())
    }
}

pub fn radical_inverse(mut n: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while n > 0 {
        out += (n % b) as f64 * scale;
        n /= b;
        scale *= inv;
    }
    out
}

/// Star discrepancy of a point set in `[0, 1)`.
pub fn star_discrepancy(points: &[f64]) -> f64 {
    let mut s = points.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter().enumerate().map(|(i, &x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n)).fold(0.0, f64::max)
}

/// `(1/N) Σ F(xₙ, Γ(xₙ))` with `xₙ` drawn from `seq`.
pub fn cesaro_mean(cost: &CostField, t: &TransportMap, seq: &mut SequenceGen, n: usize) -> f64 {
    let mut acc = 0.0;
    for _ in 0..n {
        let x = seq.next_point();
        acc += cost.eval(x, t.apply(x));
    }
    acc / n as f64
}

/// Running means at the requested prefix lengths (ascending).
pub fn cesaro_trace(
    cost: &CostField,
    t: &TransportMap,
    seq: &mut SequenceGen,
    checkpoints: &[usize],
) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = 0.0;
    let mut k = 0usize;
    for &cp in checkpoints {
        while k < cp {
            let x = seq.next_point();
            acc += cost.eval(x, t.apply(x));
            k += 1;
        }
        out.push((cp, acc / cp as f64));
    }
    out
}
