//! Piecewise monotone maps `Γ: [0, 1] → [0, 1]` whose graph `(U, Γ(U))`
//! carries a coupling of two uniform laws.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hpair::HPair;
use crate::error::{Error, Result};
use crate::quadrature::SequenceGen;

const BISECTION_TOL: f64 = 1e-13;
const MEASURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Which inverse of the boundary pair a branch realises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HBranch {
    /// Inverse of `h₁`.
    G1,
    /// Inverse of `x₂ − (h₂ − h₁)`.
    G2,
    /// Inverse of `x₂ + y − h₂`.
    G3,
}

impl HBranch {
    fn name(self) -> &'static str {
        match self {
            HBranch::G1 => "g1",
            HBranch::G2 => "g2",
            HBranch::G3 => "g3",
        }
    }

    /// The function of `y` whose inverse is the branch.
    fn preimage(self, pair: &HPair, y: f64) -> f64 {
        match self {
            HBranch::G1 => pair.h1.eval(y),
            HBranch::G2 => pair.x2 - (pair.h2.eval(y) - pair.h1.eval(y)),
            HBranch::G3 => pair.x2 + y - pair.h2.eval(y),
        }
    }
}

#[derive(Debug, Clone)]
pub enum BranchMap {
    Affine { slope: f64, intercept: f64 },
    HInverse { pair: Arc<HPair>, which: HBranch },
}

#[derive(Debug, Clone)]
pub struct MapBranch {
    pub lo: f64,
    pub hi: f64,
    pub direction: Direction,
    pub map: BranchMap,
}

impl MapBranch {
    pub fn affine(lo: f64, hi: f64, slope: f64, intercept: f64) -> Self {
        let direction = if slope >= 0.0 { Direction::Increasing } else { Direction::Decreasing };
        Self { lo, hi, direction, map: BranchMap::Affine { slope, intercept } }
    }

    pub fn forward(&self, x: f64) -> f64 {
        match &self.map {
            BranchMap::Affine { slope, intercept } => slope * x + intercept,
            BranchMap::HInverse { pair, which } => {
                // Solve preimage(y) = x on [0, 1] by bisection.
                let f = |y: f64| which.preimage(pair, y) - x;
                let sign = if self.direction == Direction::Increasing { 1.0 } else { -1.0 };
                let (mut a, mut b) = (0.0_f64, 1.0_f64);
                if sign * f(a) >= 0.0 {
                    return a;
                }
                if sign * f(b) <= 0.0 {
                    return b;
                }
                while b - a > BISECTION_TOL {
                    let m = 0.5 * (a + b);
                    if sign * f(m) < 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                0.5 * (a + b)
            }
        }
    }

    /// The `u` with `forward(u) = y`, clamped to the branch interval.
    pub fn inverse(&self, y: f64) -> f64 {
        let u = match &self.map {
            BranchMap::Affine { slope, intercept } => {
                if *slope == 0.0 {
                    if y >= *intercept {
                        f64::INFINITY
                    } else {
                        f64::NEG_INFINITY
                    }
                } else {
                    (y - intercept) / slope
                }
            }
            BranchMap::HInverse { pair, which } => which.preimage(pair, y.clamp(0.0, 1.0)),
        };
        u.clamp(self.lo, self.hi)
    }

    /// `λ{u ∈ [lo, min(hi, x)] : Γ(u) ≤ y}`.
    pub fn mass_below(&self, x: f64, y: f64) -> f64 {
        let top = x.min(self.hi);
        if top <= self.lo {
            return 0.0;
        }
        let u = self.inverse(y);
        match self.direction {
            Direction::Increasing => (top.min(u) - self.lo).max(0.0),
            Direction::Decreasing => (top - u.max(self.lo)).max(0.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransportMap {
    branches: Vec<MapBranch>,
}

impl TransportMap {
    /// Branches must tile `[0, 1]` in order. Zero-length branches are
    /// dropped. Measure preservation is checked separately.
    pub fn new(branches: Vec<MapBranch>) -> Result<Self> {
        let branches: Vec<MapBranch> = branches.into_iter().filter(|b| b.hi > b.lo).collect();
        if branches.is_empty() || branches[0].lo != 0.0 || branches[branches.len() - 1].hi != 1.0 {
            return Err(Error::InvalidParameter("branches must cover [0, 1]".into()));
        }
        if branches.windows(2).any(|w| w[0].hi != w[1].lo) {
            return Err(Error::InvalidParameter("branches must be contiguous".into()));
        }
        Ok(Self { branches })
    }

    pub fn identity() -> Self {
        Self { branches: vec![MapBranch::affine(0.0, 1.0, 1.0, 0.0)] }
    }

    pub fn reversal() -> Self {
        Self { branches: vec![MapBranch::affine(0.0, 1.0, -1.0, 1.0)] }
    }

    pub fn branches(&self) -> &[MapBranch] {
        &self.branches
    }

    pub fn apply(&self, x: f64) -> f64 {
        let i = self.branches.partition_point(|b| b.hi <= x).min(self.branches.len() - 1);
        self.branches[i].forward(x)
    }

    /// `λ{u ≤ x : Γ(u) ≤ y}`, the copula of `(U, Γ(U))`.
    pub fn joint_cdf(&self, x: f64, y: f64) -> f64 {
        self.branches.iter().map(|b| b.mass_below(x, y)).sum()
    }

    /// Length of `Γ⁻¹([a, b])`.
    pub fn preimage_length(&self, a: f64, b: f64) -> f64 {
        self.joint_cdf(1.0, b) - self.joint_cdf(1.0, a)
    }

    /// Checks `|Γ⁻¹([a, b])| = b − a` on 200 quasi-random intervals and
    /// returns the first failing one.
    pub fn check_measure_preserving(&self) -> Result<()> {
        let mut s2 = SequenceGen::van_der_corput(2);
        let mut s3 = SequenceGen::van_der_corput(3);
        for _ in 0..200 {
            let (p, q) = (s2.next_point(), s3.next_point());
            let (a, b) = if p < q { (p, q) } else { (q, p) };
            let length = self.preimage_length(a, b);
            if (length - (b - a)).abs() > MEASURE_TOL {
                return Err(Error::NotMeasurePreserving { a, b, length });
            }
        }
        Ok(())
    }

    pub fn to_spec(&self) -> Result<Vec<AffinePiece>> {
        self.branches
            .iter()
            .map(|b| match b.map {
                BranchMap::Affine { slope, intercept } => Ok(AffinePiece { lo: b.lo, hi: b.hi, slope, intercept }),
                BranchMap::HInverse { .. } => {
                    Err(Error::Unsupported("boundary-pair branches serialize via their pair".into()))
                }
            })
            .collect()
    }

    pub fn from_spec(pieces: &[AffinePiece]) -> Result<Self> {
        Self::new(pieces.iter().map(|p| MapBranch::affine(p.lo, p.hi, p.slope, p.intercept)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub lo: f64,
    pub hi: f64,
    pub slope: f64,
    pub intercept: f64,
}

/// The map carried by the three-strip copula: `g₁` on `[0, x₁)`, `g₂`
/// (decreasing) on `[x₁, x₂)`, `g₃` on `[x₂, 1]`. Each branch function must be
/// strictly monotone on the check grid.
pub fn transport_map_from_hpair(h: &HPair) -> Result<TransportMap> {
    let report = h.validate();
    if !report.is_valid() {
        return Err(Error::InvalidHPair(Box::new(report)));
    }
    let pair = Arc::new(h.clone());
    let grid = h.check_grid();
    let specs = [
        (HBranch::G1, 0.0, h.x1, Direction::Increasing),
        (HBranch::G2, h.x1, h.x2, Direction::Decreasing),
        (HBranch::G3, h.x2, 1.0, Direction::Increasing),
    ];
    let mut branches = Vec::with_capacity(3);
    for (which, lo, hi, direction) in specs {
        if hi <= lo {
            continue;
        }
        for w in grid.windows(2) {
            let (a, b) = (which.preimage(h, w[0]), which.preimage(h, w[1]));
            let step = if direction == Direction::Increasing { b - a } else { a - b };
            if step <= 1e-12 {
                return Err(Error::NonInvertible { branch: which.name(), lo: w[0], hi: w[1] });
            }
        }
        branches.push(MapBranch { lo, hi, direction, map: BranchMap::HInverse { pair: pair.clone(), which } });
    }
    TransportMap::new(branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copulas::HFunction;

    #[test]
    fn identity_and_reversal_preserve_measure() {
        TransportMap::identity().check_measure_preserving().unwrap();
        TransportMap::reversal().check_measure_preserving().unwrap();
        assert!((TransportMap::reversal().apply(0.3) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn squashing_map_is_rejected() {
        let t = TransportMap::new(vec![MapBranch::affine(0.0, 1.0, 0.5, 0.0)]).unwrap();
        assert!(matches!(t.check_measure_preserving(), Err(Error::NotMeasurePreserving { .. })));
    }

    #[test]
    fn from_linear_pair() {
        let h = crate::copulas::HPair::linear(1.0 / 3.0, 2.0 / 3.0).unwrap();
        let t = transport_map_from_hpair(&h).unwrap();
        assert!((t.apply(0.2) - 0.6).abs() < 1e-12);
        assert!((t.apply(0.8) - 0.4).abs() < 1e-12);
        assert_eq!(t.branches()[1].direction, Direction::Decreasing);
        t.check_measure_preserving().unwrap();
    }

    #[test]
    fn flat_branch_rejected() {
        // h1 is flat on [0, 2/3], so g1 does not exist.
        let h = crate::copulas::HPair::lower_bounds(1.0 / 3.0, 2.0 / 3.0).unwrap();
        match transport_map_from_hpair(&h) {
            Err(Error::NonInvertible { branch, .. }) => assert_eq!(branch, "g1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_pair_rejected() {
        let h = crate::copulas::HPair::new(HFunction::x_log(0.3), HFunction::x_log(0.6), 0.3, 0.6).unwrap();
        assert!(matches!(transport_map_from_hpair(&h), Err(Error::InvalidHPair(_))));
    }
}
