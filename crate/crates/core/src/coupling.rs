//! Optimal couplings for costs `F(x, y) = φ(x + y)` with `φ` concave on
//! `[0, k)` and convex on `(k, 2]`: the breakpoint equation
//! `φ(2β) − φ(β) = βφ′(β)`, the map `Γ`, a potential-based optimality
//! certificate, and the one-parameter value function `H(α)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copulas::{MapBranch, TransportMap};
use crate::costs::{PhiKind, PhiProfile};
use crate::error::{Error, Result};
use crate::oracle::sine_h_closed_form;

const SCAN_CELLS: usize = 1000;
const ROOT_TOL: f64 = 1e-13;

/// `r(b) = φ(2b) − φ(b) − bφ′(b)`.
pub fn beta_residual(p: &PhiProfile, b: f64) -> f64 {
    p.phi(2.0 * b) - p.phi(b) - b * p.phi_d1(b)
}

fn beta_residual_d1(p: &PhiProfile, b: f64) -> f64 {
    2.0 * p.phi_d1(2.0 * b) - 2.0 * p.phi_d1(b) - b * p.phi_d2(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaRoot {
    pub beta: f64,
    /// `r(β)` at the returned root.
    pub residual: f64,
    /// Scan cell on whose endpoints `r` changes sign.
    pub bracket: (f64, f64),
    /// Point of `(k, 2β)` with `φ′(τ) = φ′(β)`, when one exists.
    pub tau: Option<f64>,
    /// Whether `β < k < τ < 2β`.
    pub ordering_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BetaSolution {
    Found(BetaRoot),
    /// `r` keeps one sign on `(0, 1]`: the concave part dominates and the
    /// antitone coupling is optimal.
    NoneInUnitInterval,
}

impl BetaSolution {
    pub fn root(&self) -> Option<&BetaRoot> {
        match self {
            BetaSolution::Found(r) => Some(r),
            BetaSolution::NoneInUnitInterval => None,
        }
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Scans `r` on 1000 cells of `(0, 1]`, bisects the single sign change and
/// polishes with Newton steps that stay inside the bracket.
pub fn solve_beta(p: &PhiProfile) -> Result<BetaSolution> {
    let nodes: Vec<f64> = (1..=SCAN_CELLS).map(|i| i as f64 / SCAN_CELLS as f64).collect();
    let values: Vec<f64> = nodes.iter().map(|&b| beta_residual(p, b)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("phi residual not finite at {}", nodes[i])));
    }
    let mut brackets = vec![];
    for i in 0..nodes.len() {
        if values[i] == 0.0 {
            brackets.push((nodes[i], nodes[i]));
        } else if i + 1 < nodes.len() && values[i + 1] != 0.0 && (values[i] > 0.0) != (values[i + 1] > 0.0) {
            brackets.push((nodes[i], nodes[i + 1]));
        }
    }
    match brackets.len() {
        0 => return Ok(BetaSolution::NoneInUnitInterval),
        1 => {}
        _ => return Err(Error::AmbiguousRoot { brackets }),
    }
    let (lo, hi) = brackets[0];
    let mut beta = bisect(|b| beta_residual(p, b), lo, hi);
    for _ in 0..3 {
        let (r, d) = (beta_residual(p, beta), beta_residual_d1(p, beta));
        if r == 0.0 || d == 0.0 || !d.is_finite() {
            break;
        }
        let next = beta - r / d;
        if !(lo..=hi).contains(&next) || beta_residual(p, next).abs() >= r.abs() {
            break;
        }
        beta = next;
    }
    let k = p.k();
    let target = p.phi_d1(beta);
    let g = |t: f64| p.phi_d1(t) - target;
    let tau = (k < 2.0 * beta && g(k) * g(2.0 * beta) <= 0.0).then(|| bisect(g, k, 2.0 * beta));
    let ordering_ok = tau.is_some_and(|t| beta < k && k < t && t < 2.0 * beta);
    Ok(BetaSolution::Found(BetaRoot { beta, residual: beta_residual(p, beta), bracket: (lo, hi), tau, ordering_ok }))
}

/// `Γ(x) = β − x` on `[0, β)`, `Γ(x) = x` on `[β, 1]`.
pub fn gamma_map(beta: f64) -> Result<TransportMap> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!("beta = {beta} not in (0, 1]")));
    }
    TransportMap::new(vec![MapBranch::affine(0.0, beta, -1.0, beta), MapBranch::affine(beta, 1.0, 1.0, 0.0)])
}

/// `Γ(x) = 1 − x`, the coupling `(U, 1 − U)`.
pub fn antitone_fallback() -> TransportMap {
    TransportMap::reversal()
}

/// The potential `f` and the supporting functions `ψ` attached to a
/// candidate breakpoint.
#[derive(Debug, Clone)]
pub struct Potentials<'a> {
    p: &'a PhiProfile,
    beta: f64,
    phi_beta: f64,
    d1_beta: f64,
    phi_2beta: f64,
}

impl<'a> Potentials<'a> {
    pub fn new(p: &'a PhiProfile, beta: f64) -> Self {
        Self { p, beta, phi_beta: p.phi(beta), d1_beta: p.phi_d1(beta), phi_2beta: p.phi(2.0 * beta) }
    }

    /// `f₁(x) = xφ′(β)` on `[0, β)`, `f₂(x) = ½(φ(2x) − φ(2β)) + βφ′(β)` on `[β, 1]`.
    pub fn f(&self, x: f64) -> f64 {
        if x < self.beta {
            x * self.d1_beta
        } else {
            0.5 * (self.p.phi(2.0 * x) - self.phi_2beta) + self.beta * self.d1_beta
        }
    }

    /// `ψ_{Γ(x)}(ξ)`: `φ(β − x + ξ) + xφ′(β) − φ(β)` for `x < β`,
    /// `φ(x + ξ) − ½φ(2x) − ½φ(2β) + βφ′(β)` otherwise.
    pub fn psi(&self, x: f64, xi: f64) -> f64 {
        if x < self.beta {
            self.p.phi(self.beta - x + xi) + x * self.d1_beta - self.phi_beta
        } else {
            self.p.phi(x + xi) - 0.5 * self.p.phi(2.0 * x) - 0.5 * self.phi_2beta + self.beta * self.d1_beta
        }
    }

    pub fn gap(&self, x: f64, xi: f64) -> f64 {
        self.f(xi) - self.psi(x, xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Refuted { x: f64, xi: f64, gap: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub beta: f64,
    /// `min f(ξ) − ψ_{Γ(x)}(ξ)` over the grid.
    pub worst_gap: f64,
    /// Grid point `(x, ξ)` attaining `worst_gap`.
    pub witness: (f64, f64),
    /// Minimum gap on `x < β` / `x ≥ β` crossed with `ξ < β` / `ξ ≥ β`,
    /// ordered `[(<,<), (<,≥), (≥,<), (≥,≥)]`.
    pub quadrant_mins: [f64; 4],
    /// `max |ψ_{Γ(x)}(x) − f(x)|`.
    pub diagonal_error: f64,
    /// Points per axis.
    pub grid: usize,
    pub tol: f64,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

/// `grid_n` uniform points on `[0, 1]` plus `β` and `k` when they fall
/// inside.
pub fn certificate_grid(beta: f64, k: f64, grid_n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..grid_n).map(|i| i as f64 / (grid_n - 1) as f64).collect();
    g.extend([beta, k].into_iter().filter(|t| (0.0..=1.0).contains(t)));
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Checks `f(ξ) ≥ ψ_{Γ(x)}(ξ)` on the grid for the breakpoint `beta`, which
/// must solve the breakpoint equation to within `tol`.
pub fn certify(p: &PhiProfile, beta: f64, grid_n: usize, tol: f64) -> Result<Certificate> {
    let r = beta_residual(p, beta);
    if !(r.abs() <= tol) {
        return Err(Error::Precondition(format!("beta = {beta} leaves residual {r:e} above {tol:e}")));
    }
    certify_candidate(p, beta, grid_n, tol)
}

/// As [`certify`], for an arbitrary candidate breakpoint; a wrong one is
/// expected to be refuted.
pub fn certify_candidate(p: &PhiProfile, beta: f64, grid_n: usize, tol: f64) -> Result<Certificate> {
    if grid_n < 2 {
        return Err(Error::InvalidParameter("certificate grid needs at least 2 points".into()));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!("beta = {beta} not in (0, 1]")));
    }
    let pot = Potentials::new(p, beta);
    let grid = certificate_grid(beta, p.k(), grid_n);
    // Per row: (min gap, ξ at min, quadrant minima, diagonal error).
    let rows: Vec<(f64, f64, [f64; 4], f64)> = grid
        .par_iter()
        .map(|&x| {
            let mut best = (f64::INFINITY, f64::NAN);
            let mut quad = [f64::INFINITY; 4];
            let qx = if x < beta { 0 } else { 2 };
            for &xi in &grid {
                let g = pot.gap(x, xi);
                if g < best.0 {
                    best = (g, xi);
                }
                let q = qx + usize::from(xi >= beta);
                quad[q] = quad[q].min(g);
            }
            (best.0, best.1, quad, (pot.psi(x, x) - pot.f(x)).abs())
        })
        .collect();
    let mut worst = (f64::INFINITY, (f64::NAN, f64::NAN));
    let mut quadrant_mins = [f64::INFINITY; 4];
    let mut diagonal_error = 0.0_f64;
    for (&x, (g, xi, quad, diag)) in grid.iter().zip(&rows) {
        if *g < worst.0 {
            worst = (*g, (x, *xi));
        }
        for (m, q) in quadrant_mins.iter_mut().zip(quad) {
            *m = m.min(*q);
        }
        diagonal_error = diagonal_error.max(*diag);
    }
    let verdict = if worst.0 >= -tol && diagonal_error <= tol {
        Verdict::Certified
    } else {
        Verdict::Refuted { x: worst.1 .0, xi: worst.1 .1, gap: worst.0 }
    };
    Ok(Certificate {
        beta,
        worst_gap: worst.0,
        witness: worst.1,
        quadrant_mins,
        diagonal_error,
        grid: grid_n,
        tol,
        verdict,
    })
}

/// Writes the gap field as CSV `x,xi,gap` on a `grid_n²` grid.
pub fn write_gap_field<W: std::io::Write>(p: &PhiProfile, beta: f64, grid_n: usize, w: W) -> Result<()> {
    let pot = Potentials::new(p, beta);
    let grid = certificate_grid(beta, p.k(), grid_n);
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["x", "xi", "gap"])?;
    for &x in &grid {
        for &xi in &grid {
            wr.write_record([crate::fmt17(x), crate::fmt17(xi), crate::fmt17(pot.gap(x, xi))])?;
        }
    }
    wr.flush()?;
    Ok(())
}

/// `H(α) = αφ(α) + ∫_α^1 φ(2x) dx`: the value of the coupling that is
/// antitone on `[0, α)` and comonotone after. The integral uses composite
/// Simpson with `n` cells.
pub fn h_alpha(p: &PhiProfile, alpha: f64, n: usize) -> f64 {
    let n = n.max(1);
    let len = 1.0 - alpha;
    let h = len / n as f64;
    let f = |x: f64| p.phi(2.0 * x);
    let mut tail = 0.0;
    for i in 0..n {
        let a = alpha + i as f64 * h;
        let b = if i + 1 == n { 1.0 } else { a + h };
        tail += (b - a) * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b)) / 6.0;
    }
    let value = alpha * p.phi(alpha) + tail;
    if p.kind() == PhiKind::Sine && n >= 64 {
        debug_assert!((value - sine_h_closed_form(alpha)).abs() < 1e-8, "quadrature drifted from closed form");
    }
    value
}

/// `H′(α) = φ(α) + αφ′(α) − φ(2α)`.
pub fn h_alpha_derivative(p: &PhiProfile, alpha: f64) -> f64 {
    p.phi(alpha) + alpha * p.phi_d1(alpha) - p.phi(2.0 * alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HMaximum {
    pub alpha_star: f64,
    pub value: f64,
    /// `Some(ok)` when the profile meets the concave–convex hypotheses and
    /// a breakpoint exists: whether `α*` equals it within `1e-8`. `None`
    /// when the check was skipped.
    pub consistent_with_beta: Option<bool>,
}

const H_CELLS: usize = 4000;

/// Coarse scan on 101 points, golden-section refinement to `1e-10` around
/// the best one, then a root of `H′` near the golden-section result when the
/// derivative changes sign there.
pub fn maximize_h(p: &PhiProfile) -> HMaximum {
    let h = |a: f64| h_alpha(p, a, H_CELLS);
    let (i_best, _): (usize, f64) = (0..=100usize)
        .map(|i| (i, h(i as f64 / 100.0)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let mut a = (i_best.saturating_sub(1)) as f64 / 100.0;
    let mut b = ((i_best + 1).min(100)) as f64 / 100.0;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut hc, mut hd) = (h(c), h(d));
    while b - a > 1e-10 {
        if hc >= hd {
            b = d;
            d = c;
            hd = hc;
            c = b - inv_phi * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + inv_phi * (b - a);
            hd = h(d);
        }
    }
    let mut alpha: f64 = 0.5 * (a + b);
    // Near a smooth interior maximum H is flat to O(δ²); its derivative
    // pins the location far more sharply.
    let (lo, hi) = ((alpha - 1e-4).max(0.0), (alpha + 1e-4).min(1.0));
    let d = |t: f64| h_alpha_derivative(p, t);
    if d(lo) > 0.0 && d(hi) < 0.0 {
        alpha = bisect(d, lo, hi);
    }
    // The golden section only creeps towards an endpoint maximum; snap to
    // the endpoint when it is at least as good up to rounding.
    let mut best = (alpha, h(alpha));
    for e in [0.0, 1.0] {
        let v = h(e);
        if v >= best.1 - 1e-12 * (1.0 + best.1.abs()) {
            best = (e, v);
        }
    }
    let hypotheses = p.k() > 0.0 && p.k() < 2.0 && p.check_inflection(1000, 1e-3).is_ok();
    let consistent_with_beta = if hypotheses {
        match solve_beta(p) {
            Ok(BetaSolution::Found(r)) => Some((r.beta - best.0).abs() <= 1e-8),
            _ => None,
        }
    } else {
        None
    };
    HMaximum { alpha_star: best.0, value: best.1, consistent_with_beta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copulas::{map_copula, ClosedForm, Copula};
    use crate::costs::CostField;
    use crate::discrete_ot::{build_cost_matrix, solve_max_assignment};
    use crate::oracle::{bisect as oracle_bisect, brute_force_max_assignment, sine_h_derivative};
    use std::f64::consts::PI;
    use std::sync::Arc;

    const BETA: f64 = 0.7541996008265638;

    fn profile(phi: fn(f64) -> f64, d1: fn(f64) -> f64, d2: fn(f64) -> f64, k: f64) -> PhiProfile {
        PhiProfile::custom(k, Arc::new(phi), Arc::new(d1), Arc::new(d2))
    }

    fn root(p: &PhiProfile) -> BetaRoot {
        *solve_beta(p).unwrap().root().expect("root")
    }

    #[test]
    fn sine_beta() {
        let r = root(&PhiProfile::sine());
        assert!((r.beta - BETA).abs() < 1e-9, "{}", r.beta);
        assert!(r.residual.abs() < 1e-12);
        assert!(r.ordering_ok);
        let tau = r.tau.unwrap();
        assert!(r.beta < 1.0 && 1.0 < tau && tau < 2.0 * r.beta);
        // φ′(τ) = φ′(β) has τ = 2 − β for the sine.
        assert!((tau - (2.0 - r.beta)).abs() < 1e-10);
        let (lo, hi) = r.bracket;
        let p = PhiProfile::sine();
        assert!(beta_residual(&p, lo) * beta_residual(&p, hi) < 0.0);
    }

    #[test]
    fn sine_beta_matches_independent_bisection() {
        // First-order condition sin(2πβ) − sin(πβ) = βπ cos(πβ).
        let b = oracle_bisect(|b| (2.0 * PI * b).sin() - (PI * b).sin() - b * PI * (PI * b).cos(), 0.5, 0.9, 1e-15);
        assert!((root(&PhiProfile::sine()).beta - b).abs() < 1e-12);
    }

    #[test]
    fn concave_dominated_has_no_root() {
        let p = profile(
            |z| (PI * z / 1.9).sin(),
            |z| PI / 1.9 * (PI * z / 1.9).cos(),
            |z| -(PI / 1.9).powi(2) * (PI * z / 1.9).sin(),
            1.9,
        );
        assert_eq!(solve_beta(&p).unwrap(), BetaSolution::NoneInUnitInterval);
    }

    #[test]
    fn multiple_roots_are_ambiguous() {
        // A fast oscillation makes r change sign several times in (0, 1).
        let p = profile(
            |z| (3.0 * PI * z).sin(),
            |z| 3.0 * PI * (3.0 * PI * z).cos(),
            |z| -9.0 * PI * PI * (3.0 * PI * z).sin(),
            1.0,
        );
        match solve_beta(&p) {
            Err(Error::AmbiguousRoot { brackets }) => assert!(brackets.len() > 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gamma_map_examples() {
        let g = gamma_map(0.7542).unwrap();
        assert!((g.apply(0.0) - 0.7542).abs() < 1e-15);
        assert!((g.apply(0.7542) - 0.7542).abs() < 1e-15);
        g.check_measure_preserving().unwrap();
        let one = gamma_map(1.0).unwrap();
        assert_eq!(one.branches().len(), 1);
        assert!((one.apply(0.25) - 0.75).abs() < 1e-15);
        assert!(gamma_map(0.0).is_err());
        assert!(gamma_map(1.2).is_err());
    }

    #[test]
    fn antitone_fallback_is_w() {
        let t = antitone_fallback();
        assert!((t.apply(0.3) - 0.7).abs() < 1e-15);
        let c = map_copula(t).unwrap();
        let w = Copula::closed(ClosedForm::W);
        for i in 0..=20 {
            for j in 0..=20 {
                let (x, y) = (i as f64 / 20.0, j as f64 / 20.0);
                assert!((c.eval(x, y).unwrap() - w.eval(x, y).unwrap()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn diagonal_identity_below_beta() {
        let p = PhiProfile::sine();
        let pot = Potentials::new(&p, BETA);
        assert!((pot.psi(0.3, 0.3) - 0.3 * p.phi_d1(BETA)).abs() < 1e-15);
        assert!((pot.psi(0.3, 0.3) - pot.f(0.3)).abs() < 1e-15);
    }

    #[test]
    fn certificate_for_sine() {
        let p = PhiProfile::sine();
        let beta = root(&p).beta;
        let c = certify(&p, beta, 401, 1e-9).unwrap();
        assert!(c.is_certified(), "{c:?}");
        assert!(c.worst_gap >= -1e-9);
        assert!(c.quadrant_mins.iter().all(|m| m.is_finite()));
        assert!(c.diagonal_error < 1e-12);
    }

    #[test]
    fn perturbed_beta_is_refuted() {
        let p = PhiProfile::sine();
        let c = certify_candidate(&p, root(&p).beta + 0.05, 401, 1e-9).unwrap();
        match c.verdict {
            Verdict::Refuted { x, xi, gap } => {
                assert!(gap < -1e-9);
                let pot = Potentials::new(&p, c.beta);
                assert_eq!(pot.gap(x, xi), gap);
            }
            Verdict::Certified => panic!("perturbed map certified"),
        }
    }

    #[test]
    fn certify_requires_root() {
        let p = PhiProfile::sine();
        assert!(matches!(certify(&p, 0.8, 11, 1e-9), Err(Error::Precondition(_))));
    }

    #[test]
    fn grid_contains_beta_and_k() {
        let g = certificate_grid(0.7541996, 1.0, 11);
        assert!(g.contains(&0.7541996) && g.contains(&1.0) && g.contains(&0.0));
        assert_eq!(g.len(), 12);
    }

    #[test]
    fn gap_field_csv_header() {
        let mut buf = vec![];
        write_gap_field(&PhiProfile::sine(), BETA, 3, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("x,xi,gap\n"));
        assert_eq!(s.lines().count(), 1 + 16);
    }

    #[test]
    fn h_alpha_values() {
        let p = PhiProfile::sine();
        assert!(h_alpha(&p, 0.0, 1000).abs() < 1e-12);
        let hb = h_alpha(&p, BETA, 1000);
        assert!((hb - sine_h_closed_form(BETA)).abs() < 1e-12);
        assert!((hb - 0.3712).abs() < 1e-4);
        let gap = hb - h_alpha(&p, 0.75, 1000);
        let expected = sine_h_closed_form(BETA) - sine_h_closed_form(0.75);
        assert!(gap > 0.0 && (gap - expected).abs() < 1e-12, "{gap}");
    }

    #[test]
    fn h_derivative_matches_first_order_condition() {
        let p = PhiProfile::sine();
        for &a in &[0.1, 0.5, BETA, 0.9] {
            assert!((h_alpha_derivative(&p, a) - sine_h_derivative(a)).abs() < 1e-12);
        }
    }

    #[test]
    fn maximize_sine() {
        let m = maximize_h(&PhiProfile::sine());
        assert!((m.alpha_star - BETA).abs() < 1e-8, "{}", m.alpha_star);
        assert!((m.value - 0.3712).abs() < 1e-4);
        assert_eq!(m.consistent_with_beta, Some(true));
    }

    #[test]
    fn maximize_concave_only_skips_consistency() {
        let p = profile(|z| -(z - 1.0).powi(2), |z| -2.0 * (z - 1.0), |_| -2.0, 1.0);
        let m = maximize_h(&p);
        assert_eq!(m.consistent_with_beta, None);
        let brute = (0..=10_000).map(|i| h_alpha(&p, i as f64 / 1e4, 4000)).fold(f64::NEG_INFINITY, f64::max);
        assert!(m.value >= brute - 1e-9);
    }

    #[test]
    fn maximizer_invariant_under_constant_shift() {
        let p = PhiProfile::sine();
        let a = maximize_h(&p);
        let b = maximize_h(&p.shifted(3.5));
        assert!((a.alpha_star - b.alpha_star).abs() < 1e-9);
        assert!((b.value - a.value - 3.5).abs() < 1e-9);
    }

    #[test]
    fn convex_profile_is_comonotone() {
        let p = profile(|z| z * z, |z| 2.0 * z, |_| 2.0, 0.0);
        let m = maximize_h(&p);
        assert_eq!(m.alpha_star, 0.0);
        let cost = CostField::separable(p);
        for n in 2..=8 {
            let mat = build_cost_matrix(&cost, n).unwrap();
            let id: Vec<usize> = (0..n).collect();
            assert_eq!(brute_force_max_assignment(&mat).perm, id);
            assert_eq!(solve_max_assignment(&mat).unwrap().perm, id);
        }
    }
}
