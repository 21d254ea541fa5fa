//! Cost functions `F` on the unit square.
//!
//! A [`CostField`] carries the evaluator together with whatever structure the
//! solvers downstream can exploit: a split into vertical strips with a known
//! sign of the mixed derivative `∂²F/∂x∂y` (the variational route), the
//! `φ(x + y)` form (the coupling route), or a product `f(x)·y`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::spline::MonotoneCubic;

pub type Eval1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Eval2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Sign of a mixed second derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Zero => "0",
        })
    }
}

/// One vertical strip `[x_lo, x_hi)` of a piecewise-in-x cost.
#[derive(Clone)]
pub struct Branch {
    pub x_lo: f64,
    pub x_hi: f64,
    pub d2_sign: Sign,
    eval: Eval2,
    dx: Option<Eval2>,
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Branch")
            .field("x_lo", &self.x_lo)
            .field("x_hi", &self.x_hi)
            .field("d2_sign", &self.d2_sign)
            .finish_non_exhaustive()
    }
}

impl Branch {
    pub fn new(x_lo: f64, x_hi: f64, d2_sign: Sign, eval: Eval2) -> Self {
        Self { x_lo, x_hi, d2_sign, eval, dx: None }
    }

    pub fn with_dx(mut self, dx: Eval2) -> Self {
        self.dx = Some(dx);
        self
    }

    /// Branch formula, evaluated anywhere (not only inside its strip).
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    /// `∂F/∂x` of the branch formula; central difference when no closed form
    /// was supplied.
    pub fn dx(&self, x: f64, y: f64) -> f64 {
        match &self.dx {
            Some(d) => d(x, y),
            None => {
                let h = 1e-6;
                ((self.eval)(x + h, y) - (self.eval)(x - h, y)) / (2.0 * h)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiKind {
    Sine,
    Table,
    Custom,
}

/// The profile `φ` of a cost `F(x, y) = φ(x + y)`, with its first two
/// derivatives and the inflection abscissa `k`.
#[derive(Clone)]
pub struct PhiProfile {
    kind: PhiKind,
    k: f64,
    phi: Eval1,
    d1: Eval1,
    d2: Eval1,
}

impl fmt::Debug for PhiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiProfile").field("kind", &self.kind).field("k", &self.k).finish()
    }
}

impl PhiProfile {
    pub fn sine() -> Self {
        Self {
            kind: PhiKind::Sine,
            k: 1.0,
            phi: Arc::new(|z| (PI * z).sin()),
            d1: Arc::new(|z| PI * (PI * z).cos()),
            d2: Arc::new(|z| -PI * PI * (PI * z).sin()),
        }
    }

    pub fn custom(k: f64, phi: Eval1, d1: Eval1, d2: Eval1) -> Self {
        Self { kind: PhiKind::Custom, k, phi, d1, d2 }
    }

    /// Profile interpolated from `(z, φ(z))` samples covering `[0, 2]`.
    /// When `k` is `None` it is located as the minimiser of the interpolant's
    /// slope.
    pub fn from_table(samples: &[(f64, f64)], k: Option<f64>) -> Result<Self> {
        let (zs, vs): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        let first = zs.first().copied().unwrap_or(f64::NAN);
        let last = zs.last().copied().unwrap_or(f64::NAN);
        if first > 1e-12 || last < 2.0 - 1e-12 {
            return Err(Error::InvalidParameter(format!("phi table must cover [0, 2], got [{first}, {last}]")));
        }
        let spline = Arc::new(MonotoneCubic::new(zs, vs)?);
        let k = match k {
            Some(k) => k,
            None => locate_inflection(|z| spline.derivative(z))
                .ok_or_else(|| Error::InvalidParameter("phi table has no concave-to-convex inflection".into()))?,
        };
        if !(k > 0.0 && k < 2.0) {
            return Err(Error::InvalidParameter(format!("inflection k = {k} not in (0, 2)")));
        }
        let (s0, s1, s2) = (spline.clone(), spline.clone(), spline);
        Ok(Self {
            kind: PhiKind::Table,
            k,
            phi: Arc::new(move |z| s0.eval(z)),
            d1: Arc::new(move |z| s1.derivative(z)),
            d2: Arc::new(move |z| s2.second_derivative(z)),
        })
    }

    pub fn kind(&self) -> PhiKind {
        self.kind
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn phi(&self, z: f64) -> f64 {
        (self.phi)(z)
    }

    pub fn phi_d1(&self, z: f64) -> f64 {
        (self.d1)(z)
    }

    pub fn phi_d2(&self, z: f64) -> f64 {
        (self.d2)(z)
    }

    /// Same profile shifted by a constant.
    pub fn shifted(&self, c: f64) -> Self {
        let phi = self.phi.clone();
        Self {
            kind: PhiKind::Custom,
            k: self.k,
            phi: Arc::new(move |z| phi(z) + c),
            d1: self.d1.clone(),
            d2: self.d2.clone(),
        }
    }

    /// Checks `φ'' < 0` on `(0, k)` and `φ'' > 0` on `(k, 2)` at the midpoints
    /// of `samples` equal cells, skipping those within `exclusion` of `k`.
    /// Returns the first offending abscissa on failure.
    pub fn check_inflection(&self, samples: usize, exclusion: f64) -> std::result::Result<(), f64> {
        for i in 0..samples {
            let z = 2.0 * (i as f64 + 0.5) / samples as f64;
            if (z - self.k).abs() < exclusion {
                continue;
            }
            let d2 = self.phi_d2(z);
            let ok = if z < self.k { d2 < 0.0 } else { d2 > 0.0 };
            if !ok {
                return Err(z);
            }
        }
        Ok(())
    }
}

// For a concave-then-convex profile `φ'` is smallest at the inflection, which
// is far less noisy to locate than a sign change of an interpolated `φ''`.
fn locate_inflection(d1: impl Fn(f64) -> f64) -> Option<f64> {
    let n = 4000;
    let (i, _) = (0..=n).map(|i| (i, d1(2.0 * i as f64 / n as f64))).min_by(|a, b| a.1.total_cmp(&b.1))?;
    (i > 0 && i < n).then(|| 2.0 * i as f64 / n as f64)
}

#[derive(Clone)]
pub enum CostStructure {
    Generic(Eval2),
    PiecewiseX(Vec<Branch>),
    SeparableSum(PhiProfile),
    ProductFy(Eval1),
}

/// Serializable description of the cost families the CLI and config files
/// understand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostSpec {
    PiecewiseLinear {
        x1: f64,
        x2: f64,
    },
    Sine,
    PhiTable {
        samples: Vec<(f64, f64)>,
        k: Option<f64>,
    },
    /// `F(x, y) = x·y`.
    Bilinear,
}

impl CostSpec {
    pub fn build(&self) -> Result<CostField> {
        match self {
            CostSpec::PiecewiseLinear { x1, x2 } => make_piecewise_linear_cost(*x1, *x2),
            CostSpec::Sine => Ok(make_sine_cost()),
            CostSpec::PhiTable { samples, k } => {
                let mut c = CostField::separable(PhiProfile::from_table(samples, *k)?);
                c.spec = Some(self.clone());
                Ok(c)
            }
            CostSpec::Bilinear => {
                let mut c = CostField::product(Arc::new(|x| x));
                c.spec = Some(self.clone());
                Ok(c)
            }
        }
    }
}

#[derive(Clone)]
pub struct CostField {
    structure: CostStructure,
    spec: Option<CostSpec>,
}

impl fmt::Debug for CostField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.structure {
            CostStructure::Generic(_) => "generic",
            CostStructure::PiecewiseX(_) => "piecewise_x",
            CostStructure::SeparableSum(_) => "separable_sum",
            CostStructure::ProductFy(_) => "product_fy",
        };
        f.debug_struct("CostField").field("structure", &kind).field("spec", &self.spec).finish()
    }
}

impl CostField {
    pub fn generic(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { structure: CostStructure::Generic(Arc::new(f)), spec: None }
    }

    pub fn separable(phi: PhiProfile) -> Self {
        Self { structure: CostStructure::SeparableSum(phi), spec: None }
    }

    /// `F(x, y) = f(x)·y`.
    pub fn product(f: Eval1) -> Self {
        Self { structure: CostStructure::ProductFy(f), spec: None }
    }

    /// Piecewise-in-x cost. Strips must tile `[0, 1]` with interior
    /// breakpoints strictly increasing in `(0, 1)`, and each declared sign
    /// must agree with the estimated mixed derivative at the strip centre.
    pub fn piecewise(branches: Vec<Branch>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidParameter("no branches".into()));
        }
        if branches[0].x_lo != 0.0 || branches[branches.len() - 1].x_hi != 1.0 {
            return Err(Error::InvalidParameter("branches must span [0, 1]".into()));
        }
        for w in branches.windows(2) {
            if w[0].x_hi != w[1].x_lo {
                return Err(Error::InvalidParameter("branches must be contiguous".into()));
            }
        }
        for b in &branches {
            if !(b.x_hi > b.x_lo) {
                return Err(Error::InvalidParameter(format!(
                    "breakpoints not strictly increasing at [{}, {}]",
                    b.x_lo, b.x_hi
                )));
            }
        }
        for b in &branches {
            let xm = 0.5 * (b.x_lo + b.x_hi);
            let step = (0.25 * (b.x_hi - b.x_lo)).min(1e-3);
            let single = CostField::generic({
                let b = b.clone();
                move |x, y| b.eval(x, y)
            });
            let est = estimate_d2_sign(&single, xm, 0.5, step)?;
            if est != b.d2_sign {
                return Err(Error::InvalidParameter(format!(
                    "branch on [{}, {}] declares D2 sign {} but estimate is {}",
                    b.x_lo, b.x_hi, b.d2_sign, est
                )));
            }
        }
        Ok(Self { structure: CostStructure::PiecewiseX(branches), spec: None })
    }

    pub fn structure(&self) -> &CostStructure {
        &self.structure
    }

    pub fn spec(&self) -> Option<&CostSpec> {
        self.spec.as_ref()
    }

    pub fn branches(&self) -> Option<&[Branch]> {
        match &self.structure {
            CostStructure::PiecewiseX(b) => Some(b),
            _ => None,
        }
    }

    pub fn phi_profile(&self) -> Option<&PhiProfile> {
        match &self.structure {
            CostStructure::SeparableSum(p) => Some(p),
            _ => None,
        }
    }

    /// Interior breakpoints of a piecewise cost.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.branches().map(|b| b[1..].iter().map(|br| br.x_lo).collect()).unwrap_or_default()
    }

    /// Unchecked evaluation; breakpoints belong to the branch on their right.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.structure {
            CostStructure::Generic(f) => f(x, y),
            CostStructure::PiecewiseX(branches) => {
                let i = branches.partition_point(|b| b.x_hi <= x).min(branches.len() - 1);
                branches[i].eval(x, y)
            }
            CostStructure::SeparableSum(p) => p.phi(x + y),
            CostStructure::ProductFy(f) => f(x) * y,
        }
    }

    pub fn eval_checked(&self, x: f64, y: f64) -> Result<f64> {
        check_unit(x, y)?;
        Ok(self.eval(x, y))
    }

    pub fn negated(&self) -> Self {
        let me = self.clone();
        Self::generic(move |x, y| -me.eval(x, y))
    }

    /// `F(x, y) + g(x) + h(y)`.
    pub fn plus_separable(&self, g: Eval1, h: Eval1) -> Self {
        let me = self.clone();
        Self::generic(move |x, y| me.eval(x, y) + g(x) + h(y))
    }

    /// Rough `sup |F|` from an 11×11 sample.
    pub fn sup_norm_estimate(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..=10 {
            for j in 0..=10 {
                m = m.max(self.eval(i as f64 / 10.0, j as f64 / 10.0).abs());
            }
        }
        m
    }
}

/// The three-strip cost `x/x₁·y`, `(x₂−x)/(x₂−x₁)·y`, `(x−x₂)/(1−x₂)·y`.
pub fn make_piecewise_linear_cost(x1: f64, x2: f64) -> Result<CostField> {
    if !(0.0 < x1 && x1 < x2 && x2 < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < x1 < x2 < 1, got x1 = {x1}, x2 = {x2}")));
    }
    let w2 = x2 - x1;
    let w3 = 1.0 - x2;
    let branches = vec![
        Branch::new(0.0, x1, Sign::Positive, Arc::new(move |x, y| x / x1 * y)).with_dx(Arc::new(move |_, y| y / x1)),
        Branch::new(x1, x2, Sign::Negative, Arc::new(move |x, y| (x2 - x) / w2 * y))
            .with_dx(Arc::new(move |_, y| -y / w2)),
        Branch::new(x2, 1.0, Sign::Positive, Arc::new(move |x, y| (x - x2) / w3 * y))
            .with_dx(Arc::new(move |_, y| y / w3)),
    ];
    let mut c = CostField::piecewise(branches)?;
    c.spec = Some(CostSpec::PiecewiseLinear { x1, x2 });
    Ok(c)
}

/// `F(x, y) = sin(π(x + y))`.
pub fn make_sine_cost() -> CostField {
    let mut c = CostField::separable(PhiProfile::sine());
    c.spec = Some(CostSpec::Sine);
    c
}

/// Central-difference estimate of `∂²F/∂x∂y` at `(x, y)`.
pub fn mixed_derivative(cost: &CostField, x: f64, y: f64, step: f64) -> f64 {
    let h = step;
    (cost.eval(x + h, y + h) - cost.eval(x + h, y - h) - cost.eval(x - h, y + h) + cost.eval(x - h, y - h))
        / (4.0 * h * h)
}

/// Classifies the sign of the mixed derivative. Estimates below
/// `1e-8·(1 + sup|F|)` in magnitude are reported as [`Sign::Zero`].
pub fn estimate_d2_sign(cost: &CostField, x: f64, y: f64, step: f64) -> Result<Sign> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
    }
    check_unit(x, y)?;
    check_unit(x - step, y - step)?;
    check_unit(x + step, y + step)?;
    if let Some(bp) = cost.breakpoints().into_iter().find(|b| (x - b).abs() < step) {
        return Err(Error::InvalidParameter(format!("stencil at x = {x} straddles breakpoint {bp}")));
    }
    let est = mixed_derivative(cost, x, y, step);
    let band = 1e-8 * (1.0 + cost.sup_norm_estimate());
    Ok(if est.abs() < band {
        Sign::Zero
    } else if est > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pl() -> CostField {
        make_piecewise_linear_cost(1.0 / 3.0, 2.0 / 3.0).unwrap()
    }

    #[test]
    fn piecewise_linear_values() {
        let c = pl();
        assert!((c.eval(1.0 / 3.0, 1.0) - 1.0).abs() < 1e-15);
        for i in 0..=10 {
            let y = i as f64 / 10.0;
            assert!(c.eval(2.0 / 3.0, y).abs() < 1e-15);
        }
        assert!((c.eval(0.5, 0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn piecewise_linear_rejects_bad_order() {
        assert!(matches!(make_piecewise_linear_cost(0.6, 0.4), Err(Error::InvalidParameter(_))));
        assert!(make_piecewise_linear_cost(0.0, 0.5).is_err());
        assert!(make_piecewise_linear_cost(0.3, 1.0).is_err());
    }

    #[test]
    fn piecewise_continuity_at_breakpoints() {
        let c = pl();
        let branches = c.branches().unwrap();
        for w in branches.windows(2) {
            let bp = w[0].x_hi;
            for i in 0..100 {
                let y = i as f64 / 99.0;
                assert!((w[0].eval(bp, y) - w[1].eval(bp, y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn piecewise_signs_declared() {
        let signs: Vec<Sign> = pl().branches().unwrap().iter().map(|b| b.d2_sign).collect();
        assert_eq!(signs, vec![Sign::Positive, Sign::Negative, Sign::Positive]);
    }

    #[test]
    fn piecewise_rejects_wrong_declared_sign() {
        let b = vec![
            Branch::new(0.0, 0.5, Sign::Negative, Arc::new(|x, y| x * y)),
            Branch::new(0.5, 1.0, Sign::Positive, Arc::new(|x, y| x * y)),
        ];
        assert!(CostField::piecewise(b).is_err());
    }

    #[test]
    fn sine_values() {
        let c = make_sine_cost();
        assert_eq!(c.eval(0.0, 0.0), 0.0);
        assert!((c.eval(0.25, 0.25) - 1.0).abs() < 1e-15);
        let p = c.phi_profile().unwrap();
        assert!((p.phi_d2(0.5) + PI * PI).abs() < 1e-12);
        assert_eq!(p.k(), 1.0);
    }

    #[test]
    fn sine_second_derivative_changes_sign_once_near_k() {
        let p = PhiProfile::sine();
        let zs: Vec<f64> = (0..1000).map(|i| 2.0 * (i as f64 + 0.5) / 1000.0).collect();
        let changes: Vec<f64> = zs
            .windows(2)
            .filter(|w| p.phi_d2(w[0]).signum() != p.phi_d2(w[1]).signum())
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect();
        assert_eq!(changes.len(), 1);
        assert!((changes[0] - 1.0).abs() < 1e-2);
        assert!(p.check_inflection(1000, 1e-3).is_ok());
    }

    #[test]
    fn d2_sign_examples() {
        let c = pl();
        assert_eq!(estimate_d2_sign(&c, 0.1, 0.5, 1e-4).unwrap(), Sign::Positive);
        assert_eq!(estimate_d2_sign(&c, 0.5, 0.5, 1e-4).unwrap(), Sign::Negative);
        let add = CostField::generic(|x, y| x + y);
        for &(x, y) in &[(0.3, 0.7), (0.5, 0.5), (0.123, 0.877), (0.9, 0.1)] {
            assert_eq!(estimate_d2_sign(&add, x, y, 1e-4).unwrap(), Sign::Zero);
        }
    }

    #[test]
    fn d2_sign_domain_errors() {
        let c = CostField::generic(|x, y| x * y);
        assert!(matches!(estimate_d2_sign(&c, 0.0, 0.5, 1e-4), Err(Error::Domain { .. })));
        assert!(matches!(estimate_d2_sign(&c, 1.2, 0.5, 1e-4), Err(Error::Domain { .. })));
        assert!(estimate_d2_sign(&c, 0.5, 0.5, 0.0).is_err());
        assert!(estimate_d2_sign(&pl(), 1.0 / 3.0, 0.5, 1e-4).is_err());
    }

    #[test]
    fn phi_table_round_trip_through_spec() {
        let samples: Vec<(f64, f64)> = (0..=80).map(|i| 2.0 * i as f64 / 80.0).map(|z| (z, (PI * z).sin())).collect();
        let spec = CostSpec::PhiTable { samples, k: None };
        let json = serde_json::to_string(&spec).unwrap();
        let back: CostSpec = serde_json::from_str(&json).unwrap();
        let c = back.build().unwrap();
        let p = c.phi_profile().unwrap();
        assert!((p.k() - 1.0).abs() < 0.05, "k = {}", p.k());
        assert!((c.eval(0.2, 0.3) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn spec_json_shapes() {
        let s: CostSpec = serde_json::from_str(r#"{"kind":"piecewise_linear","x1":0.25,"x2":0.5}"#).unwrap();
        assert_eq!(s, CostSpec::PiecewiseLinear { x1: 0.25, x2: 0.5 });
        let s: CostSpec = serde_json::from_str(r#"{"kind":"sine"}"#).unwrap();
        assert_eq!(s, CostSpec::Sine);
    }

    proptest! {
        #[test]
        fn d2_sign_ignores_separable_perturbations(
            x in 0.05f64..0.95, y in 0.05f64..0.95, a in -2.0f64..2.0, b in -2.0f64..2.0,
        ) {
            let base = make_sine_cost();
            let pert = base.plus_separable(
                Arc::new(move |x| a * (3.0 * x).sin()),
                Arc::new(move |y| b * y * y),
            );
            let s0 = estimate_d2_sign(&base, x, y, 1e-4).unwrap();
            let s1 = estimate_d2_sign(&pert, x, y, 1e-4).unwrap();
            // x + y near 1 puts the true mixed derivative inside the zero band.
            prop_assume!(((x + y) - 1.0).abs() > 1e-3);
            prop_assert_eq!(s0, s1);
        }
    }
}
