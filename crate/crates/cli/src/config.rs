use std::path::{Path, PathBuf};

use extremal_copula::costs::CostSpec;
use extremal_copula::quadrature::Scheme;
use serde::Deserialize;

use crate::UsageError;

/// Table bundled with the binary, selectable as `phi_table:concave_dominated.csv`.
const CONCAVE_DOMINATED: &str = include_str!("../data/concave_dominated.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Analytic,
    Variational,
    Discrete,
    Cesaro,
    Certify,
    All,
}

impl std::str::FromStr for Route {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Self, UsageError> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| UsageError(format!("unknown route {s:?}")))
    }
}

/// A cost either in the command-line grammar or as a structured spec.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CostArg {
    Text(String),
    Spec(CostSpec),
}

/// Settings read from a JSON file; every field is optional and command-line
/// flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub cost: Option<CostArg>,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    pub route: Option<Route>,
    pub n: Option<usize>,
    #[serde(rename = "N")]
    pub samples: Option<usize>,
    pub grid_n: Option<usize>,
    pub scheme: Option<Scheme>,
    pub tol: Option<f64>,
    pub beta: Option<f64>,
    pub out: Option<PathBuf>,
    pub item: Option<String>,
    /// Omit the wall-clock sidecar so repeated runs are byte-identical.
    pub deterministic: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| UsageError(format!("bad config {}: {e}", path.display())))
    }
}

pub const DEFAULT_X1: f64 = 1.0 / 3.0;
pub const DEFAULT_X2: f64 = 2.0 / 3.0;

/// Parses `sine`, `bilinear`, `piecewise_linear[:x1,x2]` or
/// `phi_table:<csv>`; `x1`/`x2` fill in piecewise breakpoints.
pub fn parse_cost(text: &str, x1: Option<f64>, x2: Option<f64>) -> Result<CostSpec, UsageError> {
    let (kind, arg) = match text.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (text, None),
    };
    match (kind, arg) {
        ("sine", None) => Ok(CostSpec::Sine),
        ("bilinear", None) => Ok(CostSpec::Bilinear),
        ("piecewise_linear", None) => {
            Ok(CostSpec::PiecewiseLinear { x1: x1.unwrap_or(DEFAULT_X1), x2: x2.unwrap_or(DEFAULT_X2) })
        }
        ("piecewise_linear", Some(a)) => {
            let parts: Vec<&str> = a.split(',').collect();
            let [p1, p2] = parts.as_slice() else {
                return Err(UsageError(format!("expected piecewise_linear:x1,x2, got {text:?}")));
            };
            let num = |s: &str| s.trim().parse::<f64>().map_err(|e| UsageError(format!("bad breakpoint {s:?}: {e}")));
            Ok(CostSpec::PiecewiseLinear { x1: num(p1)?, x2: num(p2)? })
        }
        ("phi_table", Some(path)) => Ok(CostSpec::PhiTable { samples: read_phi_table(path)?, k: None }),
        _ => Err(UsageError(format!(
            "unknown cost {text:?}; expected sine, bilinear, piecewise_linear[:x1,x2] or phi_table:<csv>"
        ))),
    }
}

fn read_phi_table(path: &str) -> Result<Vec<(f64, f64)>, UsageError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(_) if Path::new(path).file_name().is_some_and(|f| f == "concave_dominated.csv") => {
            CONCAVE_DOMINATED.to_string()
        }
        Err(e) => return Err(UsageError(format!("cannot read phi table {path}: {e}"))),
    };
    parse_phi_table(&text).map_err(|e| UsageError(format!("bad phi table {path}: {e}")))
}

/// CSV with header `z,phi`.
pub fn parse_phi_table(text: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut rows = vec![];
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let (z, v) = line.split_once(',').ok_or_else(|| format!("line {} has no comma", i + 1))?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("line {}: {e}", i + 1));
        rows.push((parse(z)?, parse(v)?));
    }
    Ok(rows)
}
