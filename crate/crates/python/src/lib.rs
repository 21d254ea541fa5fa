//! Python bindings: costs, boundary pairs, copulas, transport maps and the
//! main solvers. Structured results come back as plain dicts.

use extremal_copula::copulas::{self, ClosedForm};
use extremal_copula::costs::{self, CostSpec};
use extremal_copula::coupling::{self, BetaSolution};
use extremal_copula::discrete_ot;
use extremal_copula::quadrature::{self, GridSpec, Scheme, SequenceGen};
use extremal_copula::variational;
use extremal_copula::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_) | Error::Domain { .. } | Error::Unsupported(_) | Error::InvalidHPair(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Round-trips through `json.loads` so Python sees ordinary dicts.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A cost `F(x, y)` on the unit square.
#[pyclass(name = "Cost", frozen)]
struct PyCost(costs::CostField);

#[pymethods]
impl PyCost {
    #[staticmethod]
    fn sine() -> Self {
        Self(costs::make_sine_cost())
    }

    #[staticmethod]
    fn bilinear() -> PyResult<Self> {
        CostSpec::Bilinear.build().map(Self).map_err(err)
    }

    #[staticmethod]
    fn piecewise_linear(x1: f64, x2: f64) -> PyResult<Self> {
        costs::make_piecewise_linear_cost(x1, x2).map(Self).map_err(err)
    }

    /// `φ(x + y)` from `(z, φ(z))` samples on `[0, 2]`.
    #[staticmethod]
    #[pyo3(signature = (samples, k=None))]
    fn phi_table(samples: Vec<(f64, f64)>, k: Option<f64>) -> PyResult<Self> {
        CostSpec::PhiTable { samples, k }.build().map(Self).map_err(err)
    }

    fn __call__(&self, x: f64, y: f64) -> PyResult<f64> {
        self.0.eval_checked(x, y).map_err(err)
    }

    fn is_separable(&self) -> bool {
        self.0.phi_profile().is_some()
    }

    fn __repr__(&self) -> String {
        match self.0.spec() {
            Some(CostSpec::PhiTable { samples, .. }) => format!("Cost(phi_table, {} points)", samples.len()),
            Some(spec) => format!("Cost({})", serde_json::to_string(spec).unwrap_or_default()),
            None => "Cost(custom)".into(),
        }
    }
}

impl PyCost {
    fn profile(&self) -> PyResult<&costs::PhiProfile> {
        self.0.phi_profile().ok_or_else(|| PyValueError::new_err("cost is not of the form phi(x + y)"))
    }
}

/// Boundary functions `(h₁, h₂)` with breakpoints `x₁ ≤ x₂`.
#[pyclass(name = "HPair", frozen)]
struct PyHPair(copulas::HPair);

#[pymethods]
impl PyHPair {
    /// `h_i(y) = x_i·y`.
    #[staticmethod]
    fn linear(x1: f64, x2: f64) -> PyResult<Self> {
        copulas::HPair::linear(x1, x2).map(Self).map_err(err)
    }

    /// Piecewise-linear tables on shared knots.
    #[staticmethod]
    fn from_tables(knots: Vec<f64>, h1: Vec<f64>, h2: Vec<f64>, x1: f64, x2: f64) -> PyResult<Self> {
        let a = copulas::HFunction::table(knots.clone(), h1).map_err(err)?;
        let b = copulas::HFunction::table(knots, h2).map_err(err)?;
        copulas::HPair::new(a, b, x1, x2).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        copulas::HPair::read_csv(text.as_bytes()).map(Self).map_err(err)
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.0.write_csv(&mut buf).map_err(err)?;
        String::from_utf8(buf).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn h1(&self, y: f64) -> f64 {
        self.0.h1.eval(y)
    }

    fn h2(&self, y: f64) -> f64 {
        self.0.h2.eval(y)
    }

    #[getter]
    fn x1(&self) -> f64 {
        self.0.x1
    }

    #[getter]
    fn x2(&self) -> f64 {
        self.0.x2
    }

    /// Names of the violated admissibility conditions (empty when valid).
    fn violated(&self) -> Vec<String> {
        self.0.validate().violated().iter().map(|c| format!("{c:?}").to_lowercase()).collect()
    }

    fn is_valid(&self) -> bool {
        self.0.validate().is_valid()
    }
}

/// A measure-preserving map `[0, 1] → [0, 1]`.
#[pyclass(name = "TransportMap", frozen)]
struct PyTransportMap(copulas::TransportMap);

#[pymethods]
impl PyTransportMap {
    #[staticmethod]
    fn identity() -> Self {
        Self(copulas::TransportMap::identity())
    }

    /// `x ↦ 1 − x`.
    #[staticmethod]
    fn antitone() -> Self {
        Self(coupling::antitone_fallback())
    }

    /// The optimal map for a breakpoint `β`.
    #[staticmethod]
    fn gamma(beta: f64) -> PyResult<Self> {
        coupling::gamma_map(beta).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_hpair(pair: &PyHPair) -> PyResult<Self> {
        copulas::transport_map_from_hpair(&pair.0).map(Self).map_err(err)
    }

    fn __call__(&self, x: f64) -> f64 {
        self.0.apply(x)
    }

    fn is_measure_preserving(&self) -> bool {
        self.0.check_measure_preserving().is_ok()
    }
}

#[pyclass(name = "Copula", frozen)]
struct PyCopula(copulas::Copula);

#[pymethods]
impl PyCopula {
    #[staticmethod]
    #[pyo3(name = "M")]
    fn upper() -> Self {
        Self(copulas::Copula::closed(ClosedForm::M))
    }

    #[staticmethod]
    #[pyo3(name = "W")]
    fn lower() -> Self {
        Self(copulas::Copula::closed(ClosedForm::W))
    }

    #[staticmethod]
    #[pyo3(name = "Pi")]
    fn independence() -> Self {
        Self(copulas::Copula::closed(ClosedForm::Pi))
    }

    #[staticmethod]
    fn from_hpair(pair: &PyHPair) -> PyResult<Self> {
        copulas::piecewise_copula(&pair.0).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_map(map: &PyTransportMap) -> PyResult<Self> {
        copulas::map_copula(map.0.clone()).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_permutation(perm: Vec<usize>) -> PyResult<Self> {
        copulas::DoublyStochasticGrid::from_permutation(&perm).map(|g| Self(copulas::Copula::Discrete(g))).map_err(err)
    }

    fn __call__(&self, x: f64, y: f64) -> PyResult<f64> {
        self.0.eval(x, y).map_err(err)
    }

    fn volume(&self, x1: f64, x2: f64, y1: f64, y2: f64) -> PyResult<f64> {
        self.0.c_volume(x1, x2, y1, y2).map_err(err)
    }

    /// Boundary, 2-increasing and Fréchet checks; returns a dict.
    #[pyo3(signature = (rectangles=500, seed=0))]
    fn check_axioms<'py>(&self, py: Python<'py>, rectangles: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &copulas::check_axioms(&self.0, rectangles, seed))
    }
}

/// The breakpoint `β` for a cost `φ(x + y)`, or `None` when the antitone
/// coupling is optimal. Raises `RuntimeError` when the root is ambiguous.
#[pyfunction]
fn solve_beta(cost: &PyCost) -> PyResult<Option<f64>> {
    match coupling::solve_beta(cost.profile()?).map_err(err)? {
        BetaSolution::Found(r) => Ok(Some(r.beta)),
        BetaSolution::NoneInUnitInterval => Ok(None),
    }
}

#[pyfunction]
#[pyo3(signature = (cost, beta=None, grid_n=1001, tol=1e-9))]
fn certify<'py>(
    py: Python<'py>,
    cost: &PyCost,
    beta: Option<f64>,
    grid_n: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let p = cost.profile()?;
    let cert = match beta {
        Some(b) => coupling::certify_candidate(p, b, grid_n, tol),
        None => match coupling::solve_beta(p).map_err(err)? {
            BetaSolution::Found(r) => coupling::certify(p, r.beta, grid_n, tol),
            BetaSolution::NoneInUnitInterval => {
                return Err(PyValueError::new_err("no breakpoint in (0, 1]; nothing to certify"))
            }
        },
    }
    .map_err(err)?;
    to_py(py, &cert)
}

/// `H(α)`: value of the coupling antitone on `[0, α)`, comonotone after.
#[pyfunction]
#[pyo3(signature = (cost, alpha, n=10_000))]
fn h_alpha(cost: &PyCost, alpha: f64, n: usize) -> PyResult<f64> {
    Ok(coupling::h_alpha(cost.profile()?, alpha, n))
}

/// `(α*, H(α*))`.
#[pyfunction]
fn maximize_h(cost: &PyCost) -> PyResult<(f64, f64)> {
    let m = coupling::maximize_h(cost.profile()?);
    Ok((m.alpha_star, m.value))
}

/// `∫ F dC` as a grid sum at cell midpoints.
#[pyfunction]
#[pyo3(signature = (cost, copula, n=1000))]
fn rs_integral(cost: &PyCost, copula: &PyCopula, n: usize) -> PyResult<f64> {
    Ok(quadrature::rs_integral(&cost.0, &copula.0, GridSpec::new(n).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (cost, pair, scheme="simpson", n=1000))]
fn integrate_g(cost: &PyCost, pair: &PyHPair, scheme: &str, n: usize) -> PyResult<f64> {
    let scheme: Scheme = scheme.parse().map_err(|_| PyValueError::new_err(format!("unknown scheme {scheme:?}")))?;
    quadrature::integrate_g(&cost.0, &pair.0, scheme, n).map_err(err)
}

/// Cesàro mean of `F(x, T(x))` along base-2 van der Corput points.
#[pyfunction]
fn cesaro_mean(cost: &PyCost, map: &PyTransportMap, n: usize) -> f64 {
    quadrature::cesaro_mean(&cost.0, &map.0, &mut SequenceGen::van_der_corput(2), n)
}

/// Maximising assignment on the `n × n` midpoint grid: `(perm, value)`.
#[pyfunction]
fn solve_assignment(cost: &PyCost, n: usize) -> PyResult<(Vec<usize>, f64)> {
    let a =
        discrete_ot::solve_max_assignment(&discrete_ot::build_cost_matrix(&cost.0, n).map_err(err)?).map_err(err)?;
    Ok((a.perm, a.value))
}

/// Stationary versus linear boundary pair for the piecewise-linear cost.
#[pyfunction]
#[pyo3(signature = (x1=1.0 / 3.0, x2=2.0 / 3.0))]
fn compare_stationary_pair<'py>(py: Python<'py>, x1: f64, x2: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &variational::compare_stationary_pair(x1, x2).map_err(err)?)
}

#[pymodule]
fn extremal_copula_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCost>()?;
    m.add_class::<PyHPair>()?;
    m.add_class::<PyTransportMap>()?;
    m.add_class::<PyCopula>()?;
    m.add_function(wrap_pyfunction!(solve_beta, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(h_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_h, m)?)?;
    m.add_function(wrap_pyfunction!(rs_integral, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_g, m)?)?;
    m.add_function(wrap_pyfunction!(cesaro_mean, m)?)?;
    m.add_function(wrap_pyfunction!(solve_assignment, m)?)?;
    m.add_function(wrap_pyfunction!(compare_stationary_pair, m)?)?;
    Ok(())
}
