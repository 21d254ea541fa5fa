//! Bivariate copulas: the Fréchet–Hoeffding bounds and independence, the
//! three-strip construction from a boundary pair, copulas induced by
//! measure-preserving maps, and checkerboard copulas of doubly stochastic
//! grids.

mod discrete;
mod hpair;
mod refine;
mod transport;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use discrete::DoublyStochasticGrid;
pub use hpair::{
    density_slices, Condition, ConditionCheck, ConditionReport, DensitySlices, HFunction, HFunctionSpec, HPair,
    HPairSpec, HTable, SliceWeights, Which, Witness,
};
pub use refine::{refine_region, EdgeFunctions, Rect, Refinement};
pub use transport::{transport_map_from_hpair, AffinePiece, BranchMap, Direction, HBranch, MapBranch, TransportMap};

use crate::error::{check_unit, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedForm {
    /// `min(x, y)`.
    M,
    /// `max(x + y − 1, 0)`.
    W,
    /// `x·y`.
    Pi,
}

#[derive(Debug, Clone)]
pub struct PiecewiseH {
    pair: Arc<HPair>,
    report: ConditionReport,
}

impl PiecewiseH {
    pub fn pair(&self) -> &HPair {
        &self.pair
    }

    pub fn report(&self) -> &ConditionReport {
        &self.report
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        let p = &*self.pair;
        let (h1, h2) = (p.h1.eval(y), p.h2.eval(y));
        if x <= p.x1 {
            x.min(h1)
        } else if x <= p.x2 {
            (x + h2 - p.x2).max(h1)
        } else {
            (x - p.x2 + h2).min(y)
        }
    }
}

#[derive(Debug, Clone)]
pub enum Copula {
    ClosedForm(ClosedForm),
    PiecewiseH(PiecewiseH),
    MapInduced(TransportMap),
    Discrete(DoublyStochasticGrid),
}

impl Copula {
    pub fn closed(c: ClosedForm) -> Self {
        Copula::ClosedForm(c)
    }

    pub fn repr_name(&self) -> &'static str {
        match self {
            Copula::ClosedForm(_) => "closed_form",
            Copula::PiecewiseH(_) => "piecewise_h",
            Copula::MapInduced(_) => "map_induced",
            Copula::Discrete(_) => "discrete",
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_unit(x, y)?;
        Ok(self.eval_unchecked(x, y))
    }

    pub fn eval_unchecked(&self, x: f64, y: f64) -> f64 {
        match self {
            Copula::ClosedForm(ClosedForm::M) => x.min(y),
            Copula::ClosedForm(ClosedForm::W) => (x + y - 1.0).max(0.0),
            Copula::ClosedForm(ClosedForm::Pi) => x * y,
            Copula::PiecewiseH(p) => p.eval(x, y),
            Copula::MapInduced(t) => t.joint_cdf(x, y),
            Copula::Discrete(g) => g.eval(x, y),
        }
    }

    /// Measure of `[x1, x2] × [y1, y2]`.
    pub fn c_volume(&self, x1: f64, x2: f64, y1: f64, y2: f64) -> Result<f64> {
        if !(x1 <= x2 && y1 <= y2) {
            return Err(Error::InvalidParameter(format!("unordered corners [{x1}, {x2}] × [{y1}, {y2}]")));
        }
        check_unit(x1, y1)?;
        check_unit(x2, y2)?;
        Ok(self.eval_unchecked(x2, y2) - self.eval_unchecked(x2, y1) - self.eval_unchecked(x1, y2)
            + self.eval_unchecked(x1, y1))
    }

    pub fn to_record(&self) -> Result<CopulaRecord> {
        let (parameters, table) = match self {
            Copula::ClosedForm(c) => (serde_json::json!({ "form": c }), None),
            Copula::PiecewiseH(p) => (serde_json::to_value(p.pair.to_spec()?)?, None),
            Copula::MapInduced(t) => (serde_json::json!({ "branches": t.to_spec()? }), None),
            Copula::Discrete(g) => (
                serde_json::json!({ "n": g.n() }),
                Some((0..g.n()).map(|i| (0..g.n()).map(|j| g.mass(i, j)).collect()).collect()),
            ),
        };
        Ok(CopulaRecord { repr: self.repr_name().to_string(), parameters, table })
    }

    pub fn from_record(r: &CopulaRecord) -> Result<Self> {
        match r.repr.as_str() {
            "closed_form" => {
                let form: ClosedForm = serde_json::from_value(r.parameters["form"].clone())?;
                Ok(Copula::ClosedForm(form))
            }
            "piecewise_h" => {
                let spec: HPairSpec = serde_json::from_value(r.parameters.clone())?;
                piecewise_copula(&HPair::from_spec(&spec)?)
            }
            "map_induced" => {
                let pieces: Vec<AffinePiece> = serde_json::from_value(r.parameters["branches"].clone())?;
                map_copula(TransportMap::from_spec(&pieces)?)
            }
            "discrete" => {
                let table =
                    r.table.as_ref().ok_or_else(|| Error::InvalidParameter("discrete copula needs a table".into()))?;
                let n = table.len();
                Ok(Copula::Discrete(DoublyStochasticGrid::new(n, table.iter().flatten().copied().collect())?))
            }
            other => Err(Error::InvalidParameter(format!("unknown copula repr {other:?}"))),
        }
    }
}

/// JSON form `{repr, parameters, table?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopulaRecord {
    pub repr: String,
    pub parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Vec<Vec<f64>>>,
}

/// Builds the three-strip copula
/// `min(x, h₁)` on `[0, x₁]`, `max(x + h₂ − x₂, h₁)` on `[x₁, x₂]`,
/// `min(x − x₂ + h₂, y)` on `[x₂, 1]`,
/// rejecting pairs that fail any of the five conditions.
pub fn piecewise_copula(h: &HPair) -> Result<Copula> {
    let report = h.validate();
    if !report.is_valid() {
        return Err(Error::InvalidHPair(Box::new(report)));
    }
    Ok(Copula::PiecewiseH(PiecewiseH { pair: Arc::new(h.clone()), report }))
}

/// The copula of `(U, Γ(U))`.
pub fn map_copula(t: TransportMap) -> Result<Copula> {
    t.check_measure_preserving()?;
    Ok(Copula::MapInduced(t))
}

/// Outcome of the sampled copula-axiom checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    /// Largest deviation from `C(x,0)=C(0,y)=0`, `C(x,1)=x`, `C(1,y)=y`.
    pub boundary_error: f64,
    /// Smallest rectangle volume seen.
    pub min_volume: f64,
    /// Largest violation of `W ≤ C ≤ M`.
    pub frechet_excess: f64,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.boundary_error <= 1e-9 && self.min_volume >= -1e-12 && self.frechet_excess <= 1e-12
    }
}

/// Boundary conditions on a 1001-point edge sample, 2-increasingness on
/// `rectangles` random rectangles (seeded), Fréchet sandwich on a 101² grid.
pub fn check_axioms(c: &Copula, rectangles: usize, seed: u64) -> AxiomReport {
    let mut boundary_error: f64 = 0.0;
    for i in 0..=1000 {
        let t = i as f64 / 1000.0;
        boundary_error = boundary_error
            .max(c.eval_unchecked(t, 0.0).abs())
            .max(c.eval_unchecked(0.0, t).abs())
            .max((c.eval_unchecked(t, 1.0) - t).abs())
            .max((c.eval_unchecked(1.0, t) - t).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_volume = f64::INFINITY;
    for _ in 0..rectangles {
        let (a, b): (f64, f64) = (rng.random(), rng.random());
        let (p, q): (f64, f64) = (rng.random(), rng.random());
        let v = c.c_volume(a.min(b), a.max(b), p.min(q), p.max(q)).expect("ordered corners inside the unit square");
        min_volume = min_volume.min(v);
    }
    let mut frechet_excess: f64 = 0.0;
    for i in 0..=100 {
        for j in 0..=100 {
            let (x, y) = (i as f64 / 100.0, j as f64 / 100.0);
            let v = c.eval_unchecked(x, y);
            frechet_excess = frechet_excess.max((x + y - 1.0).max(0.0) - v).max(v - x.min(y));
        }
    }
    AxiomReport { boundary_error, min_volume, frechet_excess }
}
