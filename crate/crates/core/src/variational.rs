//! Euler–Lagrange analysis of the one-dimensional functional
//! `∫₀¹ G(y, h₁, h₂, h₁′, h₂′) dy` attached to a three-strip copula, the
//! Legendre second-order test, and the worked piecewise-linear example.

use serde::{Deserialize, Serialize};

use crate::copulas::{Condition, ConditionCheck, ConditionReport, HFunction, HPair, Which};
use crate::costs::{Branch, CostField, CostSpec, Sign};
use crate::error::{Error, Result};
use crate::quadrature::{g_terms_with, integrate_g, Scheme};

/// A point of the phase space `(y, h, h′)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeState {
    pub y: f64,
    pub h: [f64; 2],
    pub hp: [f64; 2],
}

impl SlopeState {
    pub fn on_pair(pair: &HPair, y: f64) -> Self {
        Self { y, h: [pair.h1.eval(y), pair.h2.eval(y)], hp: [pair.h1.deriv(y), pair.h2.deriv(y)] }
    }
}

const SLOPE_STEP: f64 = 1e-3;

/// An integrand `G(y, h, h′)`.
pub trait Lagrangian {
    fn value(&self, s: &SlopeState) -> f64;

    /// `∂²G/∂h′ᵢ∂h′ⱼ` by central differences.
    fn slope_hessian(&self, s: &SlopeState) -> [[f64; 2]; 2] {
        let e = SLOPE_STEP;
        let at = |d0: f64, d1: f64| self.value(&SlopeState { hp: [s.hp[0] + d0, s.hp[1] + d1], ..*s });
        let c = at(0.0, 0.0);
        let h11 = (at(e, 0.0) - 2.0 * c + at(-e, 0.0)) / (e * e);
        let h22 = (at(0.0, e) - 2.0 * c + at(0.0, -e)) / (e * e);
        let h12 = (at(e, e) - at(e, -e) - at(-e, e) + at(-e, -e)) / (4.0 * e * e);
        [[h11, h12], [h12, h22]]
    }
}

/// Wraps a closure as a [`Lagrangian`].
pub struct FnLagrangian<F>(pub F);

impl<F: Fn(&SlopeState) -> f64> Lagrangian for FnLagrangian<F> {
    fn value(&self, s: &SlopeState) -> f64 {
        (self.0)(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualForm {
    /// Closed-form reduction for the piecewise-linear cost:
    /// `rᵢ = hᵢ′ − hᵢ/y + xᵢ`.
    Reduced,
    /// `∂G/∂hᵢ − d/dy ∂G/∂hᵢ′` from analytic partials and a centred
    /// difference in `y`.
    General,
}

/// Euler–Lagrange system of the `G` functional for a three-branch cost.
#[derive(Debug, Clone)]
pub struct ElSystem {
    branches: [Branch; 3],
    pub x1: f64,
    pub x2: f64,
    pub form: ResidualForm,
}

const DY_STEP: f64 = 1e-5;

/// Residual grids start here; `h/y` is singular at the origin.
pub const RESIDUAL_Y_MIN: f64 = 1e-3;

/// The system for a cost made of three `x`-strips whose middle strip has
/// `D₂ < 0`.
pub fn build_el_system(cost: &CostField) -> Result<ElSystem> {
    let branches = cost.branches().ok_or_else(|| Error::InvalidParameter("cost is not piecewise in x".into()))?;
    let [b1, b2, b3] = branches else {
        return Err(Error::InvalidParameter(format!("cost has {} branches, expected 3", branches.len())));
    };
    if b2.d2_sign != Sign::Negative {
        return Err(Error::InvalidParameter(format!("middle branch has sign {}, expected -", b2.d2_sign)));
    }
    let form = match cost.spec() {
        Some(CostSpec::PiecewiseLinear { .. }) => ResidualForm::Reduced,
        _ => ResidualForm::General,
    };
    Ok(ElSystem { branches: [b1.clone(), b2.clone(), b3.clone()], x1: b1.x_hi, x2: b2.x_hi, form })
}

impl ElSystem {
    fn args(&self, s: &SlopeState) -> [f64; 3] {
        [s.h[0], self.x2 - s.h[1] + s.h[0], self.x2 - s.h[1] + s.y]
    }

    /// `(∂G/∂h₁′, ∂G/∂h₂′) = (F₁ − F₂, F₂ − F₃)`.
    pub fn slope_partials(&self, s: &SlopeState) -> [f64; 2] {
        let [a1, a2, a3] = self.args(s);
        let (f1, f2, f3) =
            (self.branches[0].eval(a1, s.y), self.branches[1].eval(a2, s.y), self.branches[2].eval(a3, s.y));
        [f1 - f2, f2 - f3]
    }

    /// `∂G/∂h₁ = F₁ₓ·h₁′ + F₂ₓ·(h₂′ − h₁′)`, `∂G/∂h₂ = −F₂ₓ·(h₂′ − h₁′) − F₃ₓ·(1 − h₂′)`.
    pub fn value_partials(&self, s: &SlopeState) -> [f64; 2] {
        let [a1, a2, a3] = self.args(s);
        let d1 = self.branches[0].dx(a1, s.y);
        let d2 = self.branches[1].dx(a2, s.y);
        let d3 = self.branches[2].dx(a3, s.y);
        let mid = s.hp[1] - s.hp[0];
        [d1 * s.hp[0] + d2 * mid, -d2 * mid - d3 * (1.0 - s.hp[1])]
    }

    /// Residuals of both equations along the boundary pair at `y`.
    pub fn residuals(&self, pair: &HPair, y: f64) -> [f64; 2] {
        match self.form {
            ResidualForm::Reduced => reduced_residuals(self.x1, self.x2, &SlopeState::on_pair(pair, y)),
            ResidualForm::General => self.general_residuals(pair, y),
        }
    }

    pub fn general_residuals(&self, pair: &HPair, y: f64) -> [f64; 2] {
        let s = SlopeState::on_pair(pair, y);
        let vp = self.value_partials(&s);
        let at = |t: f64| self.slope_partials(&SlopeState::on_pair(pair, t));
        let (lo, hi) = ((y - DY_STEP).max(0.0), (y + DY_STEP).min(1.0));
        let (pl, ph) = (at(lo), at(hi));
        let w = hi - lo;
        [vp[0] - (ph[0] - pl[0]) / w, vp[1] - (ph[1] - pl[1]) / w]
    }

    /// Largest residual magnitude over `points` evenly spaced abscissae in
    /// `[RESIDUAL_Y_MIN, 1 − RESIDUAL_Y_MIN]`.
    pub fn max_residual(&self, pair: &HPair, points: usize) -> f64 {
        let span = 1.0 - 2.0 * RESIDUAL_Y_MIN;
        (0..points)
            .map(|i| RESIDUAL_Y_MIN + span * i as f64 / (points - 1).max(1) as f64)
            .flat_map(|y| self.residuals(pair, y))
            .fold(0.0, |a: f64, r| a.max(r.abs()))
    }
}

impl Lagrangian for ElSystem {
    fn value(&self, s: &SlopeState) -> f64 {
        let [a1, a2, a3] = self.args(s);
        let t = [
            self.branches[0].eval(a1, s.y) * s.hp[0],
            self.branches[1].eval(a2, s.y) * (s.hp[1] - s.hp[0]),
            self.branches[2].eval(a3, s.y) * (1.0 - s.hp[1]),
        ];
        t.iter().sum()
    }
}

/// `rᵢ = hᵢ′ − hᵢ/y + xᵢ`.
pub fn reduced_residuals(x1: f64, x2: f64, s: &SlopeState) -> [f64; 2] {
    [s.hp[0] - s.h[0] / s.y + x1, s.hp[1] - s.h[1] / s.y + x2]
}

/// The coupled pair of first-variation expressions for the piecewise-linear
/// cost, before decoupling:
/// `h₁′y/x₁ − (h₂′−h₁′)y/(x₂−x₁) − h₁/x₁ + (h₂−h₁)/(x₂−x₁)` and
/// `(h₂′−h₁′)y/(x₂−x₁) − (1−h₂′)y/(1−x₂) − (h₂−h₁)/(x₂−x₁) + (y−h₂)/(1−x₂) + y/(1−x₂)`.
pub fn coupled_forms(x1: f64, x2: f64, s: &SlopeState) -> [f64; 2] {
    let SlopeState { y, h: [h1, h2], hp: [d1, d2] } = *s;
    let (w1, w2, w3) = (x1, x2 - x1, 1.0 - x2);
    [
        d1 / w1 * y - (d2 - d1) / w2 * y - h1 / w1 + (h2 - h1) / w2,
        (d2 - d1) / w2 * y - (1.0 - d2) / w3 * y - (h2 - h1) / w2 + (y - h2) / w3 + y / w3,
    ]
}

/// The two decoupling steps, as `lhs − rhs`: the sum of the coupled forms
/// scaled by `(1 − x₂)/y`, and the first form scaled by `(x₂ − x₁)/y`.
/// Their sum is `r₁/x₁`.
pub fn decoupled_forms(x1: f64, x2: f64, s: &SlopeState) -> [f64; 2] {
    let SlopeState { y, h: [h1, h2], hp: [d1, d2] } = *s;
    let a = (1.0 - x2) / x1;
    let b = (x2 - x1) / x1 + 1.0;
    [d1 * a + d2 - (h1 / y * a + h2 / y - 1.0), d1 * b - d2 - (h1 / y * b - h2 / y)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LegendreClass {
    Max,
    Min,
    Saddle,
    Inconclusive,
}

const LEGENDRE_TOL: f64 = 1e-6;

/// Second-order test on the slope Hessian at `y`: negative definite → max,
/// positive definite → min, indefinite → saddle, otherwise inconclusive.
pub fn legendre_check(l: &impl Lagrangian, pair: &HPair, y: f64) -> LegendreClass {
    let h = l.slope_hessian(&SlopeState::on_pair(pair, y));
    let a = h[0][0];
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if det > LEGENDRE_TOL && a < -LEGENDRE_TOL {
        LegendreClass::Max
    } else if det > LEGENDRE_TOL && a > LEGENDRE_TOL {
        LegendreClass::Min
    } else if det < -LEGENDRE_TOL {
        LegendreClass::Saddle
    } else {
        LegendreClass::Inconclusive
    }
}

/// Closed-form stationary pair `hᵢ(y) = xᵢy(1 − ln y)` and its validity.
#[derive(Debug, Clone)]
pub struct ElSolution {
    pub pair: HPair,
    pub report: ConditionReport,
}

impl ElSolution {
    /// Boundary values `(h₁(0), h₂(0), h₁(1), h₂(1))`, the origin as a limit.
    pub fn boundary(&self) -> [f64; 4] {
        [self.pair.h1.eval(0.0), self.pair.h2.eval(0.0), self.pair.h1.eval(1.0), self.pair.h2.eval(1.0)]
    }
}

/// Solves `hᵢ′ = hᵢ/y − xᵢ` with `hᵢ(0) = 0`, `hᵢ(1) = xᵢ`.
pub fn solve_el_linear_case(x1: f64, x2: f64) -> Result<ElSolution> {
    if !(0.0 < x1 && x1 < x2 && x2 < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < x1 < x2 < 1, got x1 = {x1}, x2 = {x2}")));
    }
    let pair = HPair::new(HFunction::x_log(x1), HFunction::x_log(x2), x1, x2)?;
    let report = pair.validate();
    Ok(ElSolution { pair, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryVerdict {
    ElNotMaximal,
    ElNotBeaten,
}

impl std::fmt::Display for StationaryVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StationaryVerdict::ElNotMaximal => "EL solution not maximal",
            StationaryVerdict::ElNotBeaten => "EL solution not beaten by the linear pair",
        })
    }
}

/// A slope that leaves `[0, 1]`, evaluated directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeWitness {
    pub y: f64,
    pub which: Which,
    pub slope: f64,
}

/// End-to-end comparison of the stationary pair with the linear pair for
/// the piecewise-linear cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryPairReport {
    pub x1: f64,
    pub x2: f64,
    /// `x₂/(1 − x₂)·(−1/27) + 1/3`.
    pub value_el_closed_form: f64,
    pub value_el_quadrature: f64,
    /// Same integral with ten times as many cells.
    pub value_el_quadrature_fine: f64,
    pub value_linear_closed_form: f64,
    pub value_linear_quadrature: f64,
    pub verdict: StationaryVerdict,
    pub verdict_stable_under_refinement: bool,
    pub violated_conditions: Vec<Condition>,
    pub condition_v: ConditionCheck,
    /// `h₂′ > 1` exactly for `y < e^{−1/x₂}`.
    pub slope_violation_below: f64,
    pub slope_witness: SlopeWitness,
    pub max_el_residual: f64,
    pub legendre_at_half: LegendreClass,
    /// Value attained by the monotone u.d.p. family, a lower bound for the
    /// copula maximum.
    pub lower_bound: f64,
    pub scheme: Scheme,
    pub quadrature_cells: usize,
}

pub const COMPARISON_CELLS: usize = 1000;

/// Runs the comparison for breakpoints `x1 < x2` with Simpson's rule on
/// 1000 cells.
pub fn compare_stationary_pair(x1: f64, x2: f64) -> Result<StationaryPairReport> {
    compare_stationary_pair_with(x1, x2, Scheme::Simpson, COMPARISON_CELLS)
}

pub fn compare_stationary_pair_with(x1: f64, x2: f64, scheme: Scheme, n: usize) -> Result<StationaryPairReport> {
    let cost = crate::costs::make_piecewise_linear_cost(x1, x2)?;
    let sys = build_el_system(&cost)?;
    let sol = solve_el_linear_case(x1, x2)?;
    let linear = HPair::linear(x1, x2)?;
    let value_el_quadrature = integrate_g(&cost, &sol.pair, scheme, n)?;
    let value_el_quadrature_fine = integrate_g(&cost, &sol.pair, scheme, 10 * n)?;
    let value_linear_quadrature = integrate_g(&cost, &linear, scheme, n)?;
    let value_el_closed_form = x2 / (1.0 - x2) * (-1.0 / 27.0) + 1.0 / 3.0;
    let value_linear_closed_form = 1.0 / 3.0;
    let verdict_of = |el: f64| {
        if el < value_linear_quadrature {
            StationaryVerdict::ElNotMaximal
        } else {
            StationaryVerdict::ElNotBeaten
        }
    };
    let verdict = verdict_of(value_el_quadrature);
    let y_w = 0.1;
    Ok(StationaryPairReport {
        x1,
        x2,
        value_el_closed_form,
        value_el_quadrature,
        value_el_quadrature_fine,
        value_linear_closed_form,
        value_linear_quadrature,
        verdict,
        verdict_stable_under_refinement: verdict_of(value_el_quadrature_fine) == verdict,
        violated_conditions: sol.report.violated(),
        condition_v: sol.report.get(Condition::V).clone(),
        slope_violation_below: (-1.0 / x2).exp(),
        slope_witness: SlopeWitness { y: y_w, which: Which::H2, slope: sol.pair.h2.deriv(y_w) },
        max_el_residual: sys.max_residual(&sol.pair, 1000),
        legendre_at_half: legendre_check(&sys, &sol.pair, 0.5),
        lower_bound: 1.0 / 3.0,
        scheme,
        quadrature_cells: n,
    })
}

/// CSV `y,h1,h2,G` of the stationary pair on `points` abscissae.
pub fn write_stationary_pair_csv<W: std::io::Write>(x1: f64, x2: f64, points: usize, w: W) -> Result<()> {
    let cost = crate::costs::make_piecewise_linear_cost(x1, x2)?;
    let sys = build_el_system(&cost)?;
    let sol = solve_el_linear_case(x1, x2)?;
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["y", "h1", "h2", "G"])?;
    for i in 0..points {
        let y = i as f64 / (points - 1).max(1) as f64;
        let g: f64 = g_terms_with(&sys.branches, &sol.pair, y).iter().sum();
        wr.write_record([y, sol.pair.h1.eval(y), sol.pair.h2.eval(y), g].map(crate::fmt17))?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::make_piecewise_linear_cost;
    use crate::oracle::log_pair_value;
    use proptest::prelude::*;

    const X1: f64 = 1.0 / 3.0;
    const X2: f64 = 2.0 / 3.0;

    fn sys() -> ElSystem {
        build_el_system(&make_piecewise_linear_cost(X1, X2).unwrap()).unwrap()
    }

    #[test]
    fn stationary_pair_has_zero_residuals() {
        let s = sys();
        assert_eq!(s.form, ResidualForm::Reduced);
        let sol = solve_el_linear_case(X1, X2).unwrap();
        for i in 1..=9 {
            let r = s.residuals(&sol.pair, i as f64 / 10.0);
            assert!(r[0].abs() < 1e-14 && r[1].abs() < 1e-14);
        }
        assert!(s.max_residual(&sol.pair, 1000) < 1e-10);
    }

    #[test]
    fn linear_pair_is_not_stationary() {
        let r = sys().residuals(&HPair::linear(X1, X2).unwrap(), 0.4);
        assert!((r[0] - X1).abs() < 1e-15);
        assert!((r[1] - X2).abs() < 1e-15);
    }

    #[test]
    fn endpoint_residual_vanishes() {
        let s = SlopeState { y: 1.0, h: [X1, X2], hp: [0.0, 0.0] };
        assert_eq!(reduced_residuals(X1, X2, &s)[0], 0.0);
    }

    #[test]
    fn log_family_solves_the_ode_for_any_constant() {
        for &c in &[-0.7, 0.0, 0.25, 1.3] {
            let h = HFunction::Custom {
                value: std::sync::Arc::new(move |y| c * y - X1 * y * y.ln()),
                deriv: std::sync::Arc::new(move |y| c - X1 * (y.ln() + 1.0)),
                singular_at_zero: true,
            };
            for i in 1..=99 {
                let y = i as f64 / 100.0;
                assert!((h.deriv(y) - h.eval(y) / y + X1).abs() < 1e-13);
            }
        }
        // Pinning h(1) = x recovers the closed-form pair.
        let sol = solve_el_linear_case(X1, X2).unwrap();
        assert!((sol.pair.h1.eval(0.37) - (X1 * 0.37 - X1 * 0.37 * 0.37f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn solution_boundary_and_conditions() {
        let sol = solve_el_linear_case(X1, X2).unwrap();
        let [a0, b0, a1, b1] = sol.boundary();
        assert_eq!((a0, b0), (0.0, 0.0));
        assert!((a1 - X1).abs() < 1e-15 && (b1 - X2).abs() < 1e-15);
        assert!(!sol.report.get(Condition::V).passed);
        assert!(sol.report.violated().contains(&Condition::V));
        assert!(sol.pair.h1.deriv(0.1) <= 1.0);
        assert!((sol.pair.h2.deriv(0.1) - 1.535).abs() < 1e-3);
        assert!(solve_el_linear_case(0.5, 0.5).is_err());
    }

    #[test]
    fn general_form_agrees_with_direct_derivatives() {
        // For the piecewise-linear cost the general route differentiates the
        // true integrand, whose Euler–Lagrange expressions are algebraic.
        let cost = make_piecewise_linear_cost(X1, X2).unwrap();
        let mut s = build_el_system(&cost).unwrap();
        s.form = ResidualForm::General;
        let pair = HPair::linear(X1, X2).unwrap();
        for i in 1..10 {
            let y = i as f64 / 10.0;
            let r = s.residuals(&pair, y);
            assert!(r[0].abs() < 1e-6 && r[1].abs() < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn rejects_bad_costs() {
        assert!(build_el_system(&crate::costs::make_sine_cost()).is_err());
        let flipped = make_piecewise_linear_cost(X1, X2).unwrap().negated();
        assert!(build_el_system(&flipped).is_err());
    }

    #[test]
    fn legendre_examples() {
        let pair = HPair::linear(X1, X2).unwrap();
        assert_eq!(legendre_check(&sys(), &pair, 0.5), LegendreClass::Inconclusive);
        let neg = FnLagrangian(|s: &SlopeState| -s.hp[0] * s.hp[0] - s.hp[1] * s.hp[1]);
        assert_eq!(legendre_check(&neg, &pair, 0.5), LegendreClass::Max);
        let pos = FnLagrangian(|s: &SlopeState| s.hp[0] * s.hp[0]);
        assert_ne!(legendre_check(&pos, &pair, 0.5), LegendreClass::Max);
        let both = FnLagrangian(|s: &SlopeState| s.hp[0] * s.hp[0] + s.hp[1] * s.hp[1]);
        assert_eq!(legendre_check(&both, &pair, 0.5), LegendreClass::Min);
        let saddle = FnLagrangian(|s: &SlopeState| s.hp[0] * s.hp[0] - s.hp[1] * s.hp[1]);
        assert_eq!(legendre_check(&saddle, &pair, 0.5), LegendreClass::Saddle);
    }

    #[test]
    fn stationary_pair_report() {
        let r = compare_stationary_pair(X1, X2).unwrap();
        assert!((r.value_el_closed_form - 7.0 / 27.0).abs() < 1e-15);
        assert!((r.value_el_quadrature - 7.0 / 27.0).abs() < 1e-6);
        assert!((r.value_linear_quadrature - 1.0 / 3.0).abs() < 1e-9);
        assert_eq!(r.verdict, StationaryVerdict::ElNotMaximal);
        assert_eq!(r.verdict.to_string(), "EL solution not maximal");
        assert!(r.verdict_stable_under_refinement);
        assert!(!r.condition_v.passed);
        assert!(r.slope_witness.slope > 1.0);
        assert!(r.max_el_residual < 1e-10);
        assert_eq!(r.legendre_at_half, LegendreClass::Inconclusive);
        let v = r.condition_v.extent.unwrap();
        assert!((v.1 - r.slope_violation_below).abs() < 2e-3, "{v:?}");
    }

    #[test]
    fn stationary_pair_other_breakpoint() {
        let r = compare_stationary_pair(0.25, 0.5).unwrap();
        assert!((r.value_el_closed_form - 8.0 / 27.0).abs() < 1e-15);
        assert!((r.value_el_quadrature - log_pair_value(0.5)).abs() < 1e-6);
    }

    #[test]
    fn stationary_pair_csv() {
        let mut buf = vec![];
        write_stationary_pair_csv(X1, X2, 11, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("y,h1,h2,G\n"));
        assert_eq!(s.lines().count(), 12);
    }

    proptest! {
        #[test]
        fn decoupling_identity(
            x1 in 0.05f64..0.45, gap in 0.05f64..0.45,
            y in 0.01f64..1.0, h1 in -1.0f64..1.0, h2 in -1.0f64..1.0,
            d1 in -2.0f64..2.0, d2 in -2.0f64..2.0,
        ) {
            let x2 = x1 + gap;
            let s = SlopeState { y, h: [h1, h2], hp: [d1, d2] };
            let c = coupled_forms(x1, x2, &s);
            let [e1, e2] = decoupled_forms(x1, x2, &s);
            let [r1, r2] = reduced_residuals(x1, x2, &s);
            let scale = 1.0 + (h1.abs() + h2.abs()) / y + d1.abs() + d2.abs();
            let tol = 1e-12 * scale / x1;
            prop_assert!((e1 - (c[0] + c[1]) * (1.0 - x2) / y).abs() < tol);
            prop_assert!((e2 - c[0] * (x2 - x1) / y).abs() < tol);
            prop_assert!((e1 + e2 - r1 / x1).abs() < tol);
            prop_assert!((e1 - r2 - (1.0 - x2) / x1 * r1).abs() < tol);
        }
    }
}
