use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use extremal_copula::acceptance;
use extremal_copula::copulas::{map_copula, transport_map_from_hpair, HPair, TransportMap};
use extremal_copula::costs::{CostField, CostSpec, PhiProfile};
use extremal_copula::coupling::{
    antitone_fallback, certify, certify_candidate, gamma_map, h_alpha, maximize_h, solve_beta, write_gap_field,
    BetaSolution, Verdict,
};
use extremal_copula::discrete_ot::{build_cost_matrix, empirical_map, solve_max_assignment, transposition_distance};
use extremal_copula::quadrature::{cesaro_mean, cesaro_trace, rs_integral, GridSpec, Scheme, SequenceGen};
use extremal_copula::variational::{compare_stationary_pair_with, write_stationary_pair_csv, COMPARISON_CELLS};
use extremal_copula::Error;
use serde_json::{json, Value};

use crate::config::{parse_cost, CostArg, Route};
use crate::{Settings, Status, UsageError};

const DEFAULT_N: usize = 200;
const DEFAULT_SAMPLES: usize = 100_000;
const DEFAULT_GRID: usize = 1000;
const DEFAULT_CERT_GRID: usize = 1001;
const DEFAULT_CERT_TOL: f64 = 1e-9;
const DEFAULT_AGREEMENT_TOL: f64 = 5e-3;
/// Gap-field CSVs are capped at this many points per axis.
const GAP_FIELD_GRID: usize = 201;
/// Abscissae written to the stationary-pair CSV.
const PAIR_CSV_POINTS: usize = 501;
/// Simpson cells for `H(β)`.
const H_CELLS: usize = 10_000;

const FALLBACK_MESSAGE: &str = "no breakpoint in (0, 1]: antitone fallback (U, 1 - U)";

pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::Domain { .. } | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

pub struct Output {
    pub result: Value,
    pub status: Status,
    /// Printed to stderr after the JSON.
    pub message: Option<String>,
    /// Non-deterministic extras (timings) for the sidecar.
    pub sidecar: Option<Value>,
}

impl Output {
    fn ok(result: Value) -> Self {
        Self { result, status: Status::Ok, message: None, sidecar: None }
    }
}

type CmdResult = Result<Output, Failure>;

fn cost_spec(s: &Settings) -> Result<CostSpec, Failure> {
    let c = &s.config;
    let spec = match &c.cost {
        None => return Err(Failure::Usage("--cost is required".into())),
        Some(CostArg::Text(t)) => parse_cost(t, c.x1, c.x2)?,
        Some(CostArg::Spec(CostSpec::PiecewiseLinear { x1, x2 })) => {
            CostSpec::PiecewiseLinear { x1: c.x1.unwrap_or(*x1), x2: c.x2.unwrap_or(*x2) }
        }
        Some(CostArg::Spec(spec)) => spec.clone(),
    };
    Ok(spec)
}

fn cost_label(spec: &CostSpec) -> Value {
    match spec {
        CostSpec::PhiTable { samples, k } => json!({ "kind": "phi_table", "points": samples.len(), "k": k }),
        other => serde_json::to_value(other).unwrap_or(Value::Null),
    }
}

fn build(s: &Settings) -> Result<(CostSpec, CostField), Failure> {
    let spec = cost_spec(s)?;
    let field = spec.build()?;
    Ok((spec, field))
}

fn require_profile<'a>(field: &'a CostField, what: &str) -> Result<&'a PhiProfile, Failure> {
    field
        .phi_profile()
        .ok_or_else(|| Failure::Usage(format!("{what} needs a cost of the form phi(x + y) (sine or phi_table)")))
}

/// Writes `name` under `--out` if one was given and returns its path.
fn write_out(
    s: &Settings,
    name: &str,
    write: impl FnOnce(BufWriter<File>) -> extremal_copula::Result<()>,
) -> Result<Option<PathBuf>, Failure> {
    let Some(dir) = &s.config.out else { return Ok(None) };
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    write(BufWriter::new(file))?;
    Ok(Some(path))
}

fn files(paths: &[Option<PathBuf>]) -> Value {
    paths.iter().flatten().map(|p| Value::String(p.display().to_string())).collect()
}

pub fn beta(s: &Settings) -> CmdResult {
    let (spec, field) = build(s)?;
    let p = require_profile(&field, "beta")?;
    match solve_beta(p) {
        Ok(BetaSolution::Found(r)) => Ok(Output::ok(json!({
            "cost": cost_label(&spec),
            "status": "found",
            "beta": r.beta,
            "tau": r.tau,
            "residual": r.residual,
            "bracket": [r.bracket.0, r.bracket.1],
            "ordering_ok": r.ordering_ok,
        }))),
        Ok(BetaSolution::NoneInUnitInterval) => Ok(Output {
            result: json!({
                "cost": cost_label(&spec),
                "status": "none_in_unit_interval",
                "fallback": "antitone",
                "value": p.phi(1.0),
            }),
            status: Status::Fallback,
            message: Some(FALLBACK_MESSAGE.into()),
            sidecar: None,
        }),
        Err(Error::AmbiguousRoot { brackets }) => Ok(Output {
            result: json!({
                "cost": cost_label(&spec),
                "status": "ambiguous",
                "brackets": brackets.iter().map(|b| [b.0, b.1]).collect::<Vec<_>>(),
            }),
            status: Status::Failure,
            message: Some(format!("{} sign changes of the breakpoint residual; refusing to pick one", brackets.len())),
            sidecar: None,
        }),
        Err(e) => Err(e.into()),
    }
}

/// The coupling a cost is solved by, with its exact value when known.
struct Plan {
    map: TransportMap,
    name: &'static str,
    analytic: Option<f64>,
    fallback: bool,
}

fn plan(spec: &CostSpec, field: &CostField) -> Result<Plan, Failure> {
    if let Some(p) = field.phi_profile() {
        return Ok(match solve_beta(p)? {
            BetaSolution::Found(r) => Plan {
                map: gamma_map(r.beta)?,
                name: "gamma",
                analytic: Some(h_alpha(p, r.beta, H_CELLS)),
                fallback: false,
            },
            BetaSolution::NoneInUnitInterval => {
                Plan { map: antitone_fallback(), name: "antitone", analytic: Some(p.phi(1.0)), fallback: true }
            }
        });
    }
    match spec {
        CostSpec::Bilinear => {
            Ok(Plan { map: TransportMap::identity(), name: "comonotone", analytic: Some(1.0 / 3.0), fallback: false })
        }
        CostSpec::PiecewiseLinear { x1, x2 } => Ok(Plan {
            map: transport_map_from_hpair(&HPair::linear(*x1, *x2)?)?,
            name: "linear_pair",
            analytic: None,
            fallback: false,
        }),
        CostSpec::Sine | CostSpec::PhiTable { .. } => unreachable!("separable costs handled above"),
    }
}

fn finish(mut out: Output, fallback: bool) -> Output {
    if fallback && out.status == Status::Ok {
        out.status = Status::Fallback;
        out.message = Some(FALLBACK_MESSAGE.into());
    }
    out
}

pub fn solve(s: &Settings) -> CmdResult {
    match s.config.route.unwrap_or(Route::All) {
        Route::Analytic => route_analytic(s),
        Route::Variational => route_variational(s),
        Route::Discrete => route_discrete(s),
        Route::Cesaro => route_cesaro(s),
        Route::Certify => certify_cmd(s),
        Route::All => route_all(s),
    }
}

fn route_analytic(s: &Settings) -> CmdResult {
    let (spec, field) = build(s)?;
    if matches!(spec, CostSpec::PiecewiseLinear { .. }) {
        return Err(Failure::Usage(
            "the analytic route has no closed form for this cost; use --route variational".into(),
        ));
    }
    let plan = plan(&spec, &field)?;
    let mut result = json!({
        "cost": cost_label(&spec),
        "route": "analytic",
        "coupling": plan.name,
        "value": plan.analytic,
    });
    if let Some(p) = field.phi_profile() {
        let h = maximize_h(p);
        result["beta"] = json!(solve_beta(p)?.root().map(|r| r.beta));
        result["h_maximum"] = serde_json::to_value(h).unwrap_or(Value::Null);
    }
    Ok(finish(Output::ok(result), plan.fallback))
}

fn route_variational(s: &Settings) -> CmdResult {
    let spec = cost_spec(s)?;
    let CostSpec::PiecewiseLinear { x1, x2 } = spec else {
        return Err(Failure::Usage("the variational route needs the piecewise_linear cost".into()));
    };
    let scheme = s.config.scheme.unwrap_or(Scheme::Simpson);
    let n = s.config.n.unwrap_or(COMPARISON_CELLS);
    let report = compare_stationary_pair_with(x1, x2, scheme, n)?;
    let csv = write_out(s, "stationary_pair.csv", |w| write_stationary_pair_csv(x1, x2, PAIR_CSV_POINTS, w))?;
    Ok(Output {
        result: json!({
            "cost": cost_label(&spec),
            "route": "variational",
            "report": serde_json::to_value(&report).unwrap_or(Value::Null),
            "verdict_text": report.verdict.to_string(),
            "files": files(&[csv]),
        }),
        status: Status::Ok,
        message: Some(format!("{}", report.verdict)),
        sidecar: None,
    })
}

fn route_discrete(s: &Settings) -> CmdResult {
    let (spec, field) = build(s)?;
    let n = s.config.n.unwrap_or(DEFAULT_N);
    let a = solve_max_assignment(&build_cost_matrix(&field, n)?)?;
    let emp = empirical_map(&a)?;
    let identity: Vec<usize> = (0..n).collect();
    let reversal: Vec<usize> = (0..n).rev().collect();
    let segments: Vec<Value> = emp
        .segments
        .iter()
        .map(|seg| {
            let (lo, hi) = seg.x_range(n);
            json!({ "start": seg.start, "end": seg.end, "x_lo": lo, "x_hi": hi, "direction": seg.direction })
        })
        .collect();
    let csv = write_out(s, "assignment.csv", |w| a.write_csv(w))?;
    Ok(Output::ok(json!({
        "cost": cost_label(&spec),
        "route": "discrete",
        "n": n,
        "value": a.value,
        "sum": a.sum,
        "segments": segments,
        "transpositions_from_identity": transposition_distance(&a.perm, &identity)?,
        "transpositions_from_reversal": transposition_distance(&a.perm, &reversal)?,
        "files": files(&[csv]),
    })))
}

/// `1, 2, 4, …` below `n`, then `n`.
fn checkpoints(n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = std::iter::successors(Some(1usize), |k| k.checked_mul(2)).take_while(|&k| k < n).collect();
    v.push(n);
    v
}

fn route_cesaro(s: &Settings) -> CmdResult {
    let (spec, field) = build(s)?;
    let plan = plan(&spec, &field)?;
    let samples = s.config.samples.unwrap_or(DEFAULT_SAMPLES);
    let trace = cesaro_trace(&field, &plan.map, &mut SequenceGen::van_der_corput(2), &checkpoints(samples));
    let value = trace.last().map(|t| t.1).unwrap_or(f64::NAN);
    let csv = write_out(s, "cesaro_trace.csv", |w| {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["N", "mean"])?;
        for (k, m) in &trace {
            wr.write_record([k.to_string(), extremal_copula::fmt17(*m)])?;
        }
        wr.flush()?;
        Ok(())
    })?;
    let out = Output::ok(json!({
        "cost": cost_label(&spec),
        "route": "cesaro",
        "coupling": plan.name,
        "sequence": "van_der_corput_2",
        "N": samples,
        "value": value,
        "analytic": plan.analytic,
        "abs_error": plan.analytic.map(|a| (a - value).abs()),
        "files": files(&[csv]),
    }));
    Ok(finish(out, plan.fallback))
}

fn route_all(s: &Settings) -> CmdResult {
    let (spec, field) = build(s)?;
    if matches!(spec, CostSpec::PiecewiseLinear { .. }) {
        return Err(Failure::Usage(
            "route all needs a cost with a known optimum; use --route variational or --route discrete".into(),
        ));
    }
    let plan = plan(&spec, &field)?;
    let analytic = plan.analytic.expect("separable and bilinear plans carry a value");
    let n = s.config.n.unwrap_or(DEFAULT_N);
    let grid_n = s.config.grid_n.unwrap_or(DEFAULT_GRID);
    let samples = s.config.samples.unwrap_or(DEFAULT_SAMPLES);
    let tol = s.config.tol.unwrap_or(DEFAULT_AGREEMENT_TOL);

    let discrete = solve_max_assignment(&build_cost_matrix(&field, n)?)?.value;
    let grid = rs_integral(&field, &map_copula(plan.map.clone())?, GridSpec::new(grid_n)?);
    let cesaro = cesaro_mean(&field, &plan.map, &mut SequenceGen::van_der_corput(2), samples);
    let values = [("analytic", analytic), ("discrete", discrete), ("grid", grid), ("cesaro", cesaro)];
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let spread = max - min;
    let agree = spread <= tol;

    let table: Vec<Value> = values
        .iter()
        .map(|(route, v)| json!({ "route": route, "value": v, "diff_from_analytic": v - analytic }))
        .collect();
    let mut out = Output::ok(json!({
        "cost": cost_label(&spec),
        "route": "all",
        "coupling": plan.name,
        "n": n,
        "grid_n": grid_n,
        "N": samples,
        "routes": table,
        "spread": spread,
        "tol": tol,
        "agree": agree,
    }));
    if !agree {
        out.status = Status::Failure;
        out.message = Some(format!("routes disagree: spread {spread:e} exceeds {tol:e}"));
    }
    Ok(finish(out, plan.fallback))
}

pub fn certify_cmd(s: &Settings) -> CmdResult {
    let (spec, field) = build(s)?;
    let p = require_profile(&field, "certify")?;
    let grid_n = s.config.grid_n.unwrap_or(DEFAULT_CERT_GRID);
    let tol = s.config.tol.unwrap_or(DEFAULT_CERT_TOL);
    let (beta, cert) = match s.config.beta {
        Some(b) => (b, certify_candidate(p, b, grid_n, tol)?),
        None => match solve_beta(p)? {
            BetaSolution::Found(r) => (r.beta, certify(p, r.beta, grid_n, tol)?),
            BetaSolution::NoneInUnitInterval => {
                return Ok(Output {
                    result: json!({
                        "cost": cost_label(&spec),
                        "route": "certify",
                        "status": "none_in_unit_interval",
                        "fallback": "antitone",
                    }),
                    status: Status::Fallback,
                    message: Some(FALLBACK_MESSAGE.into()),
                    sidecar: None,
                })
            }
        },
    };
    let field_grid = grid_n.min(GAP_FIELD_GRID);
    let csv = write_out(s, "gap_field.csv", |w| write_gap_field(p, beta, field_grid, w))?;
    let refuted = matches!(cert.verdict, Verdict::Refuted { .. });
    let mut result = json!({
        "cost": cost_label(&spec),
        "route": "certify",
        "certificate": serde_json::to_value(&cert).unwrap_or(Value::Null),
    });
    if csv.is_some() {
        result["gap_field_grid"] = json!(field_grid);
    }
    result["files"] = files(&[csv]);
    Ok(Output {
        result,
        status: if refuted { Status::Failure } else { Status::Ok },
        message: refuted.then(|| format!("certificate refuted: worst gap {:e}", cert.worst_gap)),
        sidecar: None,
    })
}

pub fn reproduce(s: &Settings) -> CmdResult {
    let criteria = match &s.config.item {
        Some(item) => vec![acceptance::lookup(item).ok_or_else(|| {
            let keys: Vec<&str> = acceptance::CRITERIA.iter().map(|c| c.key).collect();
            Failure::Usage(format!("unknown item {item:?}; expected 1-9 or one of {}", keys.join(", ")))
        })?],
        None => acceptance::CRITERIA.to_vec(),
    };
    let outcomes: Vec<acceptance::Outcome> = criteria.into_iter().map(acceptance::run).collect();
    for o in &outcomes {
        eprintln!("{o}");
    }
    let all_passed = outcomes.iter().all(|o| o.passed);
    let items: Vec<Value> =
        outcomes.iter().map(|o| json!({ "id": o.id, "key": o.key, "passed": o.passed, "detail": o.detail })).collect();
    let timings: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "key": o.key, "runtime_ms": o.runtime_ms, "runtime_limit_ms": o.runtime_limit_ms }))
        .collect();
    Ok(Output {
        result: json!({ "items": items, "all_passed": all_passed }),
        status: if all_passed { Status::Ok } else { Status::Failure },
        message: None,
        sidecar: Some(Value::Array(timings)),
    })
}
