//! The end-to-end acceptance suite: nine checks tying every route to a
//! reference value. Shared by the `acceptance` test target and the CLI's
//! `reproduce` command.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::copulas::{
    check_axioms, density_slices, map_copula, piecewise_copula, transport_map_from_hpair, ClosedForm, Copula,
    HFunction, HPair, TransportMap,
};
use crate::costs::{make_piecewise_linear_cost, make_sine_cost, CostField, PhiProfile};
use crate::coupling::{certify, certify_candidate, gamma_map, h_alpha, solve_beta, BetaSolution, Verdict};
use crate::discrete_ot::{assignment_value, build_cost_matrix, solve_max_assignment, CostMatrix};
use crate::oracle::{brute_force_max_assignment, sine_h_closed_form};
use crate::quadrature::{cesaro_mean, integrate_g, rs_integral, GridSpec, Scheme, SequenceGen};
use crate::variational::{compare_stationary_pair, StationaryVerdict};

/// Breakpoint of the sine profile, reference value.
pub const SINE_BETA: f64 = 0.7541996008265638;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub key: &'static str,
    pub title: &'static str,
}

pub const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, key: "beta", title: "breakpoint of the sine profile" },
    Criterion { id: 2, key: "stationary_pair", title: "stationary pair versus linear pair" },
    Criterion { id: 3, key: "cross_route", title: "sine optimum across four routes" },
    Criterion { id: 4, key: "certificate", title: "optimality certificate and refutation" },
    Criterion { id: 5, key: "frechet", title: "Frechet bounds from the assignment solver" },
    Criterion { id: 6, key: "copula_suite", title: "copula axioms and density slices" },
    Criterion { id: 7, key: "g_equality", title: "grid integral equals integral of G" },
    Criterion { id: 8, key: "first_order", title: "first-order condition for H" },
    Criterion { id: 9, key: "equidistribution", title: "uniform distribution sanity" },
];

/// Finds a criterion by key or by number.
pub fn lookup(item: &str) -> Option<Criterion> {
    CRITERIA.iter().copied().find(|c| c.key == item || c.id.to_string() == item)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub key: &'static str,
    pub passed: bool,
    pub detail: String,
    pub runtime_ms: f64,
    pub runtime_limit_ms: Option<f64>,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let limit = self.runtime_limit_ms.map(|l| format!(" / limit {l} ms")).unwrap_or_default();
        write!(
            f,
            "[{}] {}. {}: {} ({:.1} ms{limit})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.key,
            self.detail,
            self.runtime_ms
        )
    }
}

struct Check {
    ok: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self { ok: true, notes: vec![] }
    }

    fn expect(&mut self, cond: bool, note: String) {
        if !cond {
            self.ok = false;
            self.notes.push(format!("FAILED {note}"));
        } else {
            self.notes.push(note);
        }
    }
}

pub fn run(c: Criterion) -> Outcome {
    let start = Instant::now();
    let (check, limit) = match c.id {
        1 => (beta(), Some(10.0)),
        2 => (stationary_pair(), Some(1_000.0)),
        3 => (cross_route(), Some(60_000.0)),
        4 => (certificate(), Some(30_000.0)),
        5 => (frechet(), None),
        6 => (copula_suite(), None),
        7 => (g_equality(), None),
        8 => (first_order(), None),
        9 => (equidistribution(), None),
        _ => unreachable!("criteria are numbered 1 to 9"),
    };
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let in_time = limit.is_none_or(|l| runtime_ms < l);
    let mut detail = check.notes.join("; ");
    if !in_time {
        detail.push_str("; FAILED runtime limit exceeded");
    }
    Outcome { id: c.id, key: c.key, passed: check.ok && in_time, detail, runtime_ms, runtime_limit_ms: limit }
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(|&c| run(c)).collect()
}

fn sine_beta() -> Option<f64> {
    match solve_beta(&PhiProfile::sine()) {
        Ok(BetaSolution::Found(r)) => Some(r.beta),
        _ => None,
    }
}

fn beta() -> Check {
    let mut ck = Check::new();
    match solve_beta(&PhiProfile::sine()) {
        Ok(BetaSolution::Found(r)) => {
            ck.expect((r.beta - SINE_BETA).abs() < 1e-9, format!("beta = {:.16}", r.beta));
            ck.expect(r.residual.abs() < 1e-12, format!("residual = {:.3e}", r.residual));
        }
        other => ck.expect(false, format!("no root: {other:?}")),
    }
    ck
}

fn stationary_pair() -> Check {
    let mut ck = Check::new();
    match compare_stationary_pair(1.0 / 3.0, 2.0 / 3.0) {
        Ok(r) => {
            ck.expect(
                (r.value_el_closed_form - 7.0 / 27.0).abs() < 1e-15,
                format!("closed form {:.16}", r.value_el_closed_form),
            );
            ck.expect(
                (r.value_el_quadrature - 7.0 / 27.0).abs() < 1e-6,
                format!("stationary value {:.12}", r.value_el_quadrature),
            );
            ck.expect(
                (r.value_linear_quadrature - 1.0 / 3.0).abs() < 1e-9,
                format!("linear value {:.12}", r.value_linear_quadrature),
            );
            ck.expect(r.verdict == StationaryVerdict::ElNotMaximal, format!("verdict \"{}\"", r.verdict));
            let w = r.condition_v.witness.as_ref();
            ck.expect(
                !r.condition_v.passed && w.is_some(),
                format!(
                    "(v) violated below y = {:.4}, h2'(0.1) = {:.4}",
                    r.slope_violation_below, r.slope_witness.slope
                ),
            );
        }
        Err(e) => ck.expect(false, e.to_string()),
    }
    ck
}

/// Values of the sine optimum along the four routes: `H(β)`, the
/// assignment at `n`, the grid integral over `Γ`'s copula at `grid_n`, and
/// the Cesàro mean at `samples`.
pub fn sine_route_values(n: usize, grid_n: usize, samples: usize) -> crate::Result<[(&'static str, f64); 4]> {
    let p = PhiProfile::sine();
    let cost = make_sine_cost();
    let beta = match solve_beta(&p)? {
        BetaSolution::Found(r) => r.beta,
        BetaSolution::NoneInUnitInterval => {
            return Err(crate::Error::Precondition("sine profile lost its breakpoint".into()))
        }
    };
    let analytic = h_alpha(&p, beta, 10_000);
    let assignment = solve_max_assignment(&build_cost_matrix(&cost, n)?)?;
    let discrete = assignment_value(&assignment, &cost);
    let gamma = gamma_map(beta)?;
    let grid = rs_integral(&cost, &map_copula(gamma.clone())?, GridSpec::new(grid_n)?);
    let cesaro = cesaro_mean(&cost, &gamma, &mut SequenceGen::van_der_corput(2), samples);
    Ok([("analytic", analytic), ("discrete", discrete), ("grid", grid), ("cesaro", cesaro)])
}

fn cross_route() -> Check {
    let mut ck = Check::new();
    match sine_route_values(200, 1000, 100_000) {
        Ok(vals) => {
            let oracle = sine_h_closed_form(SINE_BETA);
            ck.expect(
                (vals[0].1 - oracle).abs() < 1e-9,
                format!("H(beta) = {:.10} (closed form {oracle:.10})", vals[0].1),
            );
            let spread = vals.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max)
                - vals.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
            let list: Vec<String> = vals.iter().map(|(k, v)| format!("{k} {v:.6}")).collect();
            ck.expect(spread < 5e-3, format!("{}; spread {spread:.2e}", list.join(", ")));
        }
        Err(e) => ck.expect(false, e.to_string()),
    }
    ck
}

fn certificate() -> Check {
    let mut ck = Check::new();
    let p = PhiProfile::sine();
    let Some(beta) = sine_beta() else {
        ck.expect(false, "no breakpoint".into());
        return ck;
    };
    match certify(&p, beta, 1001, 1e-9) {
        Ok(c) => {
            ck.expect(c.is_certified() && c.worst_gap >= -1e-9, format!("worst gap {:.3e} on 1001^2", c.worst_gap))
        }
        Err(e) => ck.expect(false, e.to_string()),
    }
    match certify_candidate(&p, beta + 0.05, 1001, 1e-9) {
        Ok(c) => match c.verdict {
            Verdict::Refuted { x, xi, gap } => {
                ck.expect(gap < -1e-9, format!("beta + 0.05 refuted at (x, xi) = ({x:.4}, {xi:.4}), gap {gap:.3e}"))
            }
            Verdict::Certified => ck.expect(false, "perturbed breakpoint certified".into()),
        },
        Err(e) => ck.expect(false, e.to_string()),
    }
    ck
}

fn frechet() -> Check {
    let mut ck = Check::new();
    let xy = CostField::generic(|x, y| x * y);
    let n = 2000;
    let run = |cost: &CostField| build_cost_matrix(cost, n).and_then(|m| solve_max_assignment(&m));
    match (run(&xy), run(&xy.negated())) {
        (Ok(up), Ok(down)) => {
            let id: Vec<usize> = (0..n).collect();
            let rev: Vec<usize> = (0..n).rev().collect();
            let (vu, vd) = (assignment_value(&up, &xy), assignment_value(&down, &xy));
            ck.expect(up.perm == id && (vu - 1.0 / 3.0).abs() < 1e-3, format!("x*y: identity, {vu:.6}"));
            ck.expect(down.perm == rev && (vd - 1.0 / 6.0).abs() < 1e-3, format!("-x*y: antitone, {vd:.6}"));
        }
        (a, b) => ck.expect(false, format!("solver failed: {:?} {:?}", a.err(), b.err())),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases = 0;
    let mut mismatches = 0;
    let sine = make_sine_cost();
    for n in 1..=8 {
        let mut mats = vec![];
        for cost in [&xy, &xy.negated(), &sine] {
            mats.push(build_cost_matrix(cost, n).expect("n >= 1"));
        }
        for _ in 0..5 {
            let rows = (0..n).map(|_| (0..n).map(|_| rng.random_range(0..4) as f64).collect()).collect();
            mats.push(CostMatrix::from_rows(rows).expect("square"));
            let rows = (0..n).map(|_| (0..n).map(|_| rng.random::<f64>()).collect()).collect();
            mats.push(CostMatrix::from_rows(rows).expect("square"));
        }
        for m in &mats {
            cases += 1;
            let a = solve_max_assignment(m).expect("finite");
            let b = brute_force_max_assignment(m);
            if a.perm != b.perm || (a.sum - b.sum).abs() > 1e-12 {
                mismatches += 1;
            }
        }
    }
    ck.expect(mismatches == 0, format!("brute force agrees on {}/{cases} matrices with n <= 8", cases - mismatches));
    ck
}

/// A random valid boundary pair made of piecewise-linear tables: slopes
/// `0 ≤ h₁′ ≤ h₂′ ≤ 1` per cell, scaled to hit `h₁(1) = x₁`, `h₂(1) = x₂`.
pub fn random_table_pair(rng: &mut impl Rng) -> HPair {
    loop {
        let cells = rng.random_range(2..=6);
        let mut knots: Vec<f64> = (0..cells - 1).map(|_| rng.random_range(0.05..0.95)).collect();
        knots.extend([0.0, 1.0]);
        knots.sort_by(f64::total_cmp);
        knots.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        let widths: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let s2: Vec<f64> = widths.iter().map(|_| rng.random_range(0.05..1.0)).collect();
        let ratio: Vec<f64> = widths.iter().map(|_| rng.random_range(0.05..1.0)).collect();
        let x2 = rng.random_range(0.2..0.9);
        let total2: f64 = s2.iter().zip(&widths).map(|(s, w)| s * w).sum();
        let s2: Vec<f64> = s2.iter().map(|s| s * x2 / total2).collect();
        let x1 = x2 * rng.random_range(0.1..0.9);
        let total1: f64 = s2.iter().zip(&ratio).zip(&widths).map(|((s, r), w)| s * r * w).sum();
        let s1: Vec<f64> = s2.iter().zip(&ratio).map(|(s, r)| s * r * x1 / total1).collect();
        if s2.iter().any(|&s| s > 1.0) || s1.iter().zip(&s2).any(|(a, b)| a > b) {
            continue;
        }
        let integrate = |s: &[f64]| {
            let mut acc = vec![0.0];
            for (v, w) in s.iter().zip(&widths) {
                acc.push(acc.last().expect("seeded") + v * w);
            }
            acc
        };
        let (mut v1, mut v2) = (integrate(&s1), integrate(&s2));
        // Pin the end values exactly.
        *v1.last_mut().expect("non-empty") = x1;
        *v2.last_mut().expect("non-empty") = x2;
        let pair = HPair::new(
            HFunction::table(knots.clone(), v1).expect("valid table"),
            HFunction::table(knots, v2).expect("valid table"),
            x1,
            x2,
        )
        .expect("ordered breakpoints");
        if pair.validate().is_valid() {
            return pair;
        }
    }
}

fn copula_suite() -> Check {
    let mut ck = Check::new();
    let (x1, x2) = (1.0 / 3.0, 2.0 / 3.0);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pairs = vec![
        ("linear pair", HPair::linear(x1, x2).expect("ordered")),
        ("upper-bound pair", HPair::upper_bounds(x1, x2).expect("ordered")),
        ("lower-bound pair", HPair::lower_bounds(x1, x2).expect("ordered")),
    ];
    for i in 0..3 {
        pairs.push((["random pair a", "random pair b", "random pair c"][i], random_table_pair(&mut rng)));
    }
    let mut copulas: Vec<(&str, Copula)> = vec![
        ("M", Copula::closed(ClosedForm::M)),
        ("W", Copula::closed(ClosedForm::W)),
        ("Pi", Copula::closed(ClosedForm::Pi)),
    ];
    for (name, p) in &pairs {
        copulas.push((name, piecewise_copula(p).expect("valid pair")));
    }
    let beta = sine_beta().unwrap_or(SINE_BETA);
    let maps: Vec<(&str, crate::Result<TransportMap>)> = vec![
        ("identity map", Ok(TransportMap::identity())),
        ("reversal map", Ok(TransportMap::reversal())),
        ("gamma map", gamma_map(beta)),
        ("linear-pair map", transport_map_from_hpair(&pairs[0].1)),
    ];
    for (name, t) in maps {
        match t.and_then(map_copula) {
            Ok(c) => copulas.push((name, c)),
            Err(e) => ck.expect(false, format!("{name}: {e}")),
        }
    }
    match build_cost_matrix(&make_sine_cost(), 40).and_then(|m| solve_max_assignment(&m)).and_then(|a| a.to_grid()) {
        Ok(g) => copulas.push(("sine checkerboard", Copula::Discrete(g))),
        Err(e) => ck.expect(false, format!("checkerboard: {e}")),
    }
    let mut failing = vec![];
    let mut worst = (0.0_f64, f64::INFINITY, 0.0_f64);
    for (i, (name, c)) in copulas.iter().enumerate() {
        let r = check_axioms(c, 10_000, 100 + i as u64);
        worst = (worst.0.max(r.boundary_error), worst.1.min(r.min_volume), worst.2.max(r.frechet_excess));
        if !r.passes() {
            failing.push(format!("{name}: {r:?}"));
        }
    }
    ck.expect(
        failing.is_empty(),
        format!(
            "{} copulas; boundary {:.1e}, min volume {:.1e}, Frechet excess {:.1e}{}",
            copulas.len(),
            worst.0,
            worst.1,
            worst.2,
            if failing.is_empty() { String::new() } else { format!("; {}", failing.join(", ")) }
        ),
    );
    let mut slice_err = 0.0_f64;
    for (_, p) in &pairs {
        let w = density_slices(p).integrate(2000);
        let target = [p.x1, p.x2 - p.x1, 1.0 - p.x2];
        slice_err = w.iter().zip(target).fold(slice_err, |a, (w, t)| a.max((w - t).abs()));
    }
    ck.expect(slice_err < 1e-9, format!("slice weights within {slice_err:.1e}"));
    ck
}

fn g_equality() -> Check {
    let mut ck = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    let grid = GridSpec::new(1000).expect("n >= 2");
    for _ in 0..10 {
        let pair = random_table_pair(&mut rng);
        let result = make_piecewise_linear_cost(pair.x1, pair.x2).and_then(|cost| {
            let a = rs_integral(&cost, &piecewise_copula(&pair)?, grid);
            let b = integrate_g(&cost, &pair, Scheme::Simpson, 1000)?;
            Ok((a - b).abs())
        });
        match result {
            Ok(d) => worst = worst.max(d),
            Err(e) => ck.expect(false, e.to_string()),
        }
    }
    ck.expect(worst < 5e-3, format!("10 random pairs, max difference {worst:.2e}"));
    ck
}

fn first_order() -> Check {
    let mut ck = Check::new();
    let p = PhiProfile::sine();
    let Some(beta) = sine_beta() else {
        ck.expect(false, "no breakpoint".into());
        return ck;
    };
    let h = 1e-6;
    let n = 10_000;
    let d = (h_alpha(&p, beta + h, n) - h_alpha(&p, beta - h, n)) / (2.0 * h);
    ck.expect(d.abs() < 1e-5, format!("H'(beta) = {d:.2e}"));
    let (hb, h34) = (h_alpha(&p, beta, n), h_alpha(&p, 0.75, n));
    ck.expect(hb > h34, format!("H(beta) - H(3/4) = {:.3e}", hb - h34));
    ck
}

fn equidistribution() -> Check {
    let mut ck = Check::new();
    let mean = SequenceGen::van_der_corput(2).take(10_000).sum::<f64>() / 1e4;
    ck.expect((mean - 0.5).abs() < 1e-3, format!("van der Corput mean {mean:.6}"));
    let xy = CostField::generic(|x, y| x * y);
    let m = cesaro_mean(&xy, &TransportMap::identity(), &mut SequenceGen::van_der_corput(2), 100_000);
    ck.expect((m - 1.0 / 3.0).abs() < 1e-3, format!("Cesaro mean of x*y {m:.6}"));
    ck
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_by_key_and_number() {
        assert_eq!(lookup("beta").unwrap().id, 1);
        assert_eq!(lookup("9").unwrap().key, "equidistribution");
        assert!(lookup("nope").is_none());
    }

    #[test]
    fn random_pairs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(random_table_pair(&mut rng).validate().is_valid());
        }
    }

    #[test]
    fn fast_items_pass() {
        for key in ["beta", "stationary_pair", "first_order", "equidistribution"] {
            let o = run(lookup(key).unwrap());
            assert!(o.passed, "{o}");
        }
    }
}
