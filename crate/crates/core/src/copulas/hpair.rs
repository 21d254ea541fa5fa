//! Boundary functions `h₁(y) = C(x₁, y)` and `h₂(y) = C(x₂, y)` of the
//! three-strip copula, and the five conditions under which that construction
//! is a copula.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::costs::Eval1;
use crate::error::{Error, Result};
use crate::fmt17;

const CHECK_TOL: f64 = 1e-9;
const CHECK_GRID: usize = 1000;

/// Strictly increasing knots on `[0, 1]` with linear interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HTable {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl HTable {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() || knots.len() < 2 {
            return Err(Error::InvalidParameter("table needs matching knots and values".into()));
        }
        if knots[0] != 0.0 || knots[knots.len() - 1] != 1.0 {
            return Err(Error::InvalidParameter("table knots must start at 0 and end at 1".into()));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("table knots must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("table values must be finite".into()));
        }
        Ok(Self { knots, values })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment(&self, y: f64) -> usize {
        let n = self.knots.len();
        self.knots.partition_point(|&k| k <= y).clamp(1, n - 1) - 1
    }

    fn slope(&self, seg: usize) -> f64 {
        (self.values[seg + 1] - self.values[seg]) / (self.knots[seg + 1] - self.knots[seg])
    }

    pub fn eval(&self, y: f64) -> f64 {
        let s = self.segment(y);
        self.values[s] + self.slope(s) * (y - self.knots[s])
    }

    /// Left and right slopes at `y` (equal away from knots).
    pub fn one_sided(&self, y: f64) -> (f64, f64) {
        let s = self.segment(y);
        let right = self.slope(s);
        if y == self.knots[s] && s > 0 {
            (self.slope(s - 1), right)
        } else {
            (right, right)
        }
    }
}

/// A boundary function given either as a table or in closed form.
#[derive(Clone)]
pub enum HFunction {
    Table(HTable),
    /// `slope·y`.
    Linear {
        slope: f64,
    },
    /// `c·y − x·y·ln y`, the general solution of `h′ = h/y − x`; the value at
    /// `y = 0` is the limit 0 and the slope diverges there when `x > 0`.
    LogFamily {
        c: f64,
        x: f64,
    },
    Custom {
        value: Eval1,
        deriv: Eval1,
        singular_at_zero: bool,
    },
}

impl fmt::Debug for HFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HFunction::Table(t) => f.debug_tuple("Table").field(t).finish(),
            HFunction::Linear { slope } => f.debug_struct("Linear").field("slope", slope).finish(),
            HFunction::LogFamily { c, x } => f.debug_struct("LogFamily").field("c", c).field("x", x).finish(),
            HFunction::Custom { .. } => f.write_str("Custom"),
        }
    }
}

/// Serializable form of [`HFunction`] (custom closures excluded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum HFunctionSpec {
    Table { knots: Vec<f64>, values: Vec<f64> },
    Linear { slope: f64 },
    LogFamily { c: f64, x: f64 },
}

impl HFunction {
    pub fn table(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(HFunction::Table(HTable::new(knots, values)?))
    }

    /// `x·y·(1 − ln y)`.
    pub fn x_log(x: f64) -> Self {
        HFunction::LogFamily { c: x, x }
    }

    /// Upper bound `min(y, x)` for a boundary function ending at `x`.
    pub fn upper_bound(x: f64) -> Self {
        HFunction::Table(HTable { knots: vec![0.0, x, 1.0], values: vec![0.0, x, x] })
    }

    /// Lower bound `max(0, y − (1 − x))`.
    pub fn lower_bound(x: f64) -> Self {
        HFunction::Table(HTable { knots: vec![0.0, 1.0 - x, 1.0], values: vec![0.0, 0.0, x] })
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            HFunction::Table(t) => t.eval(y),
            HFunction::Linear { slope } => slope * y,
            HFunction::LogFamily { c, x } => {
                if y <= 0.0 {
                    0.0
                } else {
                    c * y - x * y * y.ln()
                }
            }
            HFunction::Custom { value, .. } => value(y),
        }
    }

    /// Derivative; right slope at table knots (left slope at `y = 1`).
    pub fn deriv(&self, y: f64) -> f64 {
        match self {
            HFunction::Table(t) => {
                let (l, r) = t.one_sided(y);
                if y >= 1.0 {
                    l
                } else {
                    r
                }
            }
            _ => self.one_sided(y).1,
        }
    }

    pub fn one_sided(&self, y: f64) -> (f64, f64) {
        match self {
            HFunction::Table(t) => t.one_sided(y),
            HFunction::Linear { slope } => (*slope, *slope),
            HFunction::LogFamily { c, x } => {
                let d = if y <= 0.0 {
                    if *x > 0.0 {
                        f64::INFINITY
                    } else if *x < 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        *c
                    }
                } else {
                    c - x * (y.ln() + 1.0)
                };
                (d, d)
            }
            HFunction::Custom { deriv, .. } => {
                let d = deriv(y);
                (d, d)
            }
        }
    }

    /// True when a one-sided slope is genuinely two-valued at `y`.
    pub fn is_kink(&self, y: f64) -> bool {
        let (l, r) = self.one_sided(y);
        l != r
    }

    pub fn knots(&self) -> &[f64] {
        match self {
            HFunction::Table(t) => t.knots(),
            _ => &[],
        }
    }

    pub fn singular_at_zero(&self) -> bool {
        match self {
            HFunction::LogFamily { x, .. } => *x != 0.0,
            HFunction::Custom { singular_at_zero, .. } => *singular_at_zero,
            _ => false,
        }
    }

    pub fn to_spec(&self) -> Result<HFunctionSpec> {
        Ok(match self {
            HFunction::Table(t) => HFunctionSpec::Table { knots: t.knots.clone(), values: t.values.clone() },
            HFunction::Linear { slope } => HFunctionSpec::Linear { slope: *slope },
            HFunction::LogFamily { c, x } => HFunctionSpec::LogFamily { c: *c, x: *x },
            HFunction::Custom { .. } => {
                return Err(Error::Unsupported("custom boundary functions are not serializable".into()))
            }
        })
    }

    pub fn from_spec(spec: &HFunctionSpec) -> Result<Self> {
        Ok(match spec {
            HFunctionSpec::Table { knots, values } => HFunction::table(knots.clone(), values.clone())?,
            HFunctionSpec::Linear { slope } => HFunction::Linear { slope: *slope },
            HFunctionSpec::LogFamily { c, x } => HFunction::LogFamily { c: *c, x: *x },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// `h₁`, `h₂` nondecreasing.
    #[serde(rename = "i")]
    I,
    /// `h₁(0) = h₂(0) = 0`.
    #[serde(rename = "ii")]
    II,
    /// `h₁(1) = x₁`, `h₂(1) = x₂`.
    #[serde(rename = "iii")]
    III,
    /// `0 ≤ h₁ ≤ h₂ ≤ y`.
    #[serde(rename = "iv")]
    IV,
    /// `0 ≤ h₁′ ≤ h₂′ ≤ 1`.
    #[serde(rename = "v")]
    V,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::I => "(i)",
            Condition::II => "(ii)",
            Condition::III => "(iii)",
            Condition::IV => "(iv)",
            Condition::V => "(v)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    #[serde(rename = "h1")]
    H1,
    #[serde(rename = "h2")]
    H2,
    #[serde(rename = "h1,h2")]
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub y: f64,
    pub which: Which,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub passed: bool,
    /// First grid point (in increasing `y`) where the condition fails.
    pub witness: Option<Witness>,
    /// Smallest and largest failing grid abscissae.
    pub extent: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub checks: Vec<ConditionCheck>,
}

impl ConditionReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, c: Condition) -> &ConditionCheck {
        self.checks.iter().find(|k| k.condition == c).expect("all five conditions are checked")
    }

    pub fn violated(&self) -> Vec<Condition> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.condition).collect()
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in self.checks.iter().filter(|c| !c.passed) {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "condition {} violated", c.condition)?;
            if let Some(w) = &c.witness {
                write!(f, " at y = {} ({:?}: {})", w.y, w.which, w.detail)?;
            }
        }
        if first {
            f.write_str("all conditions hold")?;
        }
        Ok(())
    }
}

struct Tracker {
    condition: Condition,
    witness: Option<Witness>,
    extent: Option<(f64, f64)>,
}

impl Tracker {
    fn new(condition: Condition) -> Self {
        Self { condition, witness: None, extent: None }
    }

    fn fail(&mut self, y: f64, which: Which, detail: impl FnOnce() -> String) {
        if self.witness.is_none() {
            self.witness = Some(Witness { y, which, detail: detail() });
        }
        self.extent = Some(match self.extent {
            None => (y, y),
            Some((lo, hi)) => (lo.min(y), hi.max(y)),
        });
    }

    fn finish(self) -> ConditionCheck {
        ConditionCheck {
            condition: self.condition,
            passed: self.witness.is_none(),
            witness: self.witness,
            extent: self.extent,
        }
    }
}

/// The pair `(h₁, h₂)` with breakpoints `x₁ ≤ x₂`. Construction does not
/// validate; see [`HPair::validate`].
#[derive(Debug, Clone)]
pub struct HPair {
    pub h1: HFunction,
    pub h2: HFunction,
    pub x1: f64,
    pub x2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPairSpec {
    pub x1: f64,
    pub x2: f64,
    pub h1: HFunctionSpec,
    pub h2: HFunctionSpec,
}

impl HPair {
    pub fn new(h1: HFunction, h2: HFunction, x1: f64, x2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x1) || !(0.0..=1.0).contains(&x2) || x1 > x2 {
            return Err(Error::InvalidParameter(format!("need 0 <= x1 <= x2 <= 1, got x1 = {x1}, x2 = {x2}")));
        }
        Ok(Self { h1, h2, x1, x2 })
    }

    /// `h₁ = x₁·y`, `h₂ = x₂·y`.
    pub fn linear(x1: f64, x2: f64) -> Result<Self> {
        Self::new(HFunction::Linear { slope: x1 }, HFunction::Linear { slope: x2 }, x1, x2)
    }

    /// The lower bounds `max(0, y − 1 + xᵢ)`.
    pub fn lower_bounds(x1: f64, x2: f64) -> Result<Self> {
        Self::new(HFunction::lower_bound(x1), HFunction::lower_bound(x2), x1, x2)
    }

    /// The upper bounds `min(y, xᵢ)`.
    pub fn upper_bounds(x1: f64, x2: f64) -> Result<Self> {
        Self::new(HFunction::upper_bound(x1), HFunction::upper_bound(x2), x1, x2)
    }

    pub fn singular_at_zero(&self) -> bool {
        self.h1.singular_at_zero() || self.h2.singular_at_zero()
    }

    /// Union of the table knots of both functions.
    pub fn knots(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self.h1.knots().iter().chain(self.h2.knots()).copied().collect();
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// Uniform check grid plus all table knots.
    pub fn check_grid(&self) -> Vec<f64> {
        let mut g: Vec<f64> = (0..=CHECK_GRID).map(|i| i as f64 / CHECK_GRID as f64).collect();
        g.extend(self.knots());
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    }

    /// Evaluates the five copula conditions on the check grid, tolerance
    /// `1e-9`. At table knots both one-sided slopes must satisfy (v).
    pub fn validate(&self) -> ConditionReport {
        let grid = self.check_grid();
        let tol = CHECK_TOL;
        let (h1, h2) = (&self.h1, &self.h2);

        let mut c1 = Tracker::new(Condition::I);
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            if h1.eval(b) < h1.eval(a) - tol {
                c1.fail(a, Which::H1, || format!("h1({b}) < h1({a})"));
            }
            if h2.eval(b) < h2.eval(a) - tol {
                c1.fail(a, Which::H2, || format!("h2({b}) < h2({a})"));
            }
        }

        let mut c2 = Tracker::new(Condition::II);
        let (a0, b0) = (h1.eval(0.0), h2.eval(0.0));
        if a0.abs() > tol || b0.abs() > tol {
            let which = match (a0.abs() > tol, b0.abs() > tol) {
                (true, true) => Which::Both,
                (true, false) => Which::H1,
                _ => Which::H2,
            };
            c2.fail(0.0, which, || format!("h1(0) = {a0}, h2(0) = {b0}"));
        }

        let mut c3 = Tracker::new(Condition::III);
        let (a1, b1) = (h1.eval(1.0), h2.eval(1.0));
        let bad1 = (a1 - self.x1).abs() > tol;
        let bad2 = (b1 - self.x2).abs() > tol;
        if bad1 || bad2 {
            let which = match (bad1, bad2) {
                (true, true) => Which::Both,
                (true, false) => Which::H1,
                _ => Which::H2,
            };
            c3.fail(1.0, which, || format!("h1(1) = {a1} vs x1 = {}, h2(1) = {b1} vs x2 = {}", self.x1, self.x2));
        }

        let mut c4 = Tracker::new(Condition::IV);
        let mut c5 = Tracker::new(Condition::V);
        for &y in &grid {
            let (v1, v2) = (h1.eval(y), h2.eval(y));
            if v1 < -tol {
                c4.fail(y, Which::H1, || format!("h1 = {v1} < 0"));
            } else if v1 > v2 + tol {
                c4.fail(y, Which::Both, || format!("h1 = {v1} > h2 = {v2}"));
            } else if v2 > y + tol {
                c4.fail(y, Which::H2, || format!("h2 = {v2} > y"));
            }

            let (l1, r1) = h1.one_sided(y);
            let (l2, r2) = h2.one_sided(y);
            let mut sides = vec![(r1, r2)];
            if y > 0.0 && (l1 != r1 || l2 != r2) {
                sides.push((l1, l2));
            }
            for (d1, d2) in sides {
                if !(d1 >= -tol) {
                    c5.fail(y, Which::H1, || format!("h1' = {d1} < 0"));
                } else if !(d1 <= d2 + tol) {
                    c5.fail(y, Which::Both, || format!("h1' = {d1} > h2' = {d2}"));
                } else if !(d2 <= 1.0 + tol) {
                    c5.fail(y, Which::H2, || format!("h2' = {d2} > 1"));
                }
            }
        }

        ConditionReport { checks: vec![c1.finish(), c2.finish(), c3.finish(), c4.finish(), c5.finish()] }
    }

    pub fn to_spec(&self) -> Result<HPairSpec> {
        Ok(HPairSpec { x1: self.x1, x2: self.x2, h1: self.h1.to_spec()?, h2: self.h2.to_spec()? })
    }

    pub fn from_spec(spec: &HPairSpec) -> Result<Self> {
        Self::new(HFunction::from_spec(&spec.h1)?, HFunction::from_spec(&spec.h2)?, spec.x1, spec.x2)
    }

    /// Writes the pair as CSV with columns `y,h1,h2` on the union of the
    /// table knots. Only tables are exported.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        if !matches!(self.h1, HFunction::Table(_)) || !matches!(self.h2, HFunction::Table(_)) {
            return Err(Error::Unsupported("only tabulated pairs export to CSV".into()));
        }
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["y", "h1", "h2"])?;
        for y in self.knots() {
            wr.write_record([fmt17(y), fmt17(self.h1.eval(y)), fmt17(self.h2.eval(y))])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Reads a `y,h1,h2` table; `x₁`, `x₂` are taken from the last row.
    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let (mut ys, mut a, mut b) = (vec![], vec![], vec![]);
        for rec in rd.deserialize::<(f64, f64, f64)>() {
            let (y, v1, v2) = rec?;
            ys.push(y);
            a.push(v1);
            b.push(v2);
        }
        let (x1, x2) = match (a.last(), b.last()) {
            (Some(&x1), Some(&x2)) => (x1, x2),
            _ => return Err(Error::InvalidParameter("empty table".into())),
        };
        Self::new(HFunction::table(ys.clone(), a)?, HFunction::table(ys, b)?, x1, x2)
    }
}

/// Weights and support curves of the singular density at one `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceWeights {
    /// `(h₁′, h₂′ − h₁′, 1 − h₂′)`.
    pub weights: [f64; 3],
    /// `x = h₁`, `x = x₂ − h₂ + h₁`, `x = x₂ − h₂ + y`.
    pub support: [f64; 3],
    /// Set when `y` is a kink of a table and right slopes were used.
    pub one_sided: bool,
}

/// The measure of the three-strip copula is carried by three curves; this
/// evaluates their weights per unit `y`.
#[derive(Debug, Clone)]
pub struct DensitySlices {
    pair: Arc<HPair>,
}

pub fn density_slices(h: &HPair) -> DensitySlices {
    DensitySlices { pair: Arc::new(h.clone()) }
}

impl DensitySlices {
    pub fn at(&self, y: f64) -> SliceWeights {
        let p = &self.pair;
        let (d1, d2) = (p.h1.deriv(y), p.h2.deriv(y));
        let (v1, v2) = (p.h1.eval(y), p.h2.eval(y));
        SliceWeights {
            weights: [d1, d2 - d1, 1.0 - d2],
            support: [v1, p.x2 - v2 + v1, p.x2 - v2 + y],
            one_sided: p.h1.is_kink(y) || p.h2.is_kink(y),
        }
    }

    /// `∫₀¹` of each weight: midpoint rule on `n` cells per knot interval,
    /// exact for tabulated pairs.
    pub fn integrate(&self, n: usize) -> [f64; 3] {
        let mut knots = self.pair.knots();
        if knots.is_empty() {
            knots = vec![0.0, 1.0];
        }
        let mut acc = [0.0; 3];
        for w in knots.windows(2) {
            let h = (w[1] - w[0]) / n as f64;
            for i in 0..n {
                let s = self.at(w[0] + (i as f64 + 0.5) * h);
                for (a, w) in acc.iter_mut().zip(s.weights) {
                    *a += w * h;
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X1: f64 = 1.0 / 3.0;
    const X2: f64 = 2.0 / 3.0;

    #[test]
    fn linear_pair_is_valid() {
        let r = HPair::linear(X1, X2).unwrap().validate();
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn bound_pairs_are_valid() {
        assert!(HPair::lower_bounds(X1, X2).unwrap().validate().is_valid());
        assert!(HPair::upper_bounds(X1, X2).unwrap().validate().is_valid());
    }

    #[test]
    fn log_pair_violates_slope_condition_near_zero() {
        let p = HPair::new(HFunction::x_log(X1), HFunction::x_log(X2), X1, X2).unwrap();
        let r = p.validate();
        let v = r.get(Condition::V);
        assert!(!v.passed);
        let w = v.witness.as_ref().unwrap();
        assert!(w.y < 0.01, "witness at {}", w.y);
        // h2' = x2·(−ln y) exceeds 1 below e^{−1/x2}.
        let (_, hi) = v.extent.unwrap();
        assert!((hi - (-1.0 / X2).exp()).abs() < 2e-3, "extent ends at {hi}");
        assert!(r.violated().contains(&Condition::V));
    }

    #[test]
    fn detects_each_condition() {
        // (i): decreasing somewhere.
        let p = HPair::new(
            HFunction::table(vec![0.0, 0.5, 1.0], vec![0.0, 0.3, 0.25]).unwrap(),
            HFunction::Linear { slope: 0.5 },
            0.25,
            0.5,
        )
        .unwrap();
        assert!(!p.validate().get(Condition::I).passed);
        // (ii)
        let p = HPair::new(
            HFunction::Custom { value: Arc::new(|y| 0.1 + 0.2 * y), deriv: Arc::new(|_| 0.2), singular_at_zero: false },
            HFunction::Linear { slope: 0.5 },
            0.3,
            0.5,
        )
        .unwrap();
        assert!(!p.validate().get(Condition::II).passed);
        // (iii)
        let p = HPair::new(HFunction::Linear { slope: 0.2 }, HFunction::Linear { slope: 0.5 }, 0.3, 0.5).unwrap();
        let r = p.validate();
        assert!(!r.get(Condition::III).passed);
        assert_eq!(r.get(Condition::III).witness.as_ref().unwrap().which, Which::H1);
        // (iv): h2 above the diagonal.
        let p = HPair::new(
            HFunction::Linear { slope: 0.2 },
            HFunction::table(vec![0.0, 0.1, 1.0], vec![0.0, 0.15, 0.5]).unwrap(),
            0.2,
            0.5,
        )
        .unwrap();
        let r = p.validate();
        assert!(!r.get(Condition::IV).passed);
        assert!(!r.get(Condition::V).passed);
    }

    #[test]
    fn kink_slopes_checked_on_both_sides() {
        // h1 has slope 0.6 on [0.5, 1] while h2 has slope 0.4 there.
        let p = HPair::new(
            HFunction::table(vec![0.0, 0.5, 1.0], vec![0.0, 0.0, 0.3]).unwrap(),
            HFunction::table(vec![0.0, 0.5, 1.0], vec![0.0, 0.4, 0.6]).unwrap(),
            0.3,
            0.6,
        )
        .unwrap();
        let v = p.validate();
        let c = v.get(Condition::V);
        assert!(!c.passed);
        assert_eq!(c.witness.as_ref().unwrap().y, 0.5);
    }

    #[test]
    fn density_linear_pair() {
        let d = density_slices(&HPair::linear(X1, X2).unwrap());
        for i in 0..=20 {
            let s = d.at(i as f64 / 20.0);
            assert!((s.weights[0] - X1).abs() < 1e-15);
            assert!((s.weights[1] - (X2 - X1)).abs() < 1e-15);
            assert!((s.weights[2] - (1.0 - X2)).abs() < 1e-15);
            assert!((s.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        let ints = d.integrate(100);
        assert!((ints[0] - X1).abs() < 1e-12);
        assert!((ints[1] - (X2 - X1)).abs() < 1e-12);
        assert!((ints[2] - (1.0 - X2)).abs() < 1e-12);
    }

    #[test]
    fn density_flags_kinks() {
        let d = density_slices(&HPair::upper_bounds(X1, X2).unwrap());
        assert!(d.at(X1).one_sided);
        assert!(!d.at(0.5).one_sided);
        let ints = d.integrate(1);
        assert!((ints[0] - X1).abs() < 1e-14);
        assert!((ints[2] - (1.0 - X2)).abs() < 1e-14);
    }

    #[test]
    fn csv_round_trip() {
        let p = HPair::new(
            HFunction::table(vec![0.0, 0.3, 1.0], vec![0.0, 0.1, 0.25]).unwrap(),
            HFunction::table(vec![0.0, 0.6, 1.0], vec![0.0, 0.5, 0.7]).unwrap(),
            0.25,
            0.7,
        )
        .unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let q = HPair::read_csv(buf.as_slice()).unwrap();
        for i in 0..=100 {
            let y = i as f64 / 100.0;
            assert!((p.h1.eval(y) - q.h1.eval(y)).abs() < 1e-12);
            assert!((p.h2.eval(y) - q.h2.eval(y)).abs() < 1e-12);
        }
        assert_eq!(q.x1, 0.25);
    }
}
