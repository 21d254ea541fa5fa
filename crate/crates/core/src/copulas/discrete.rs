use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt17;

const MARGIN_TOL: f64 = 1e-12;

/// Nonnegative `n × n` cell masses with every row and column summing to
/// `1/n`. The induced copula spreads each cell's mass uniformly over it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRecord", into = "GridRecord")]
pub struct DoublyStochasticGrid {
    n: usize,
    mass: Vec<f64>,
    // (n+1)² table of Σ mass over [0, i) × [0, j).
    prefix: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridRecord {
    n: usize,
    mass: Vec<Vec<f64>>,
}

impl TryFrom<GridRecord> for DoublyStochasticGrid {
    type Error = Error;
    fn try_from(r: GridRecord) -> Result<Self> {
        if r.mass.len() != r.n || r.mass.iter().any(|row| row.len() != r.n) {
            return Err(Error::InvalidParameter("grid rows must have length n".into()));
        }
        Self::new(r.n, r.mass.into_iter().flatten().collect())
    }
}

impl From<DoublyStochasticGrid> for GridRecord {
    fn from(g: DoublyStochasticGrid) -> Self {
        let mass = g.mass.chunks(g.n).map(|c| c.to_vec()).collect();
        GridRecord { n: g.n, mass }
    }
}

impl DoublyStochasticGrid {
    /// `mass` is row-major; row index is the `x` cell.
    pub fn new(n: usize, mass: Vec<f64>) -> Result<Self> {
        if n == 0 || mass.len() != n * n {
            return Err(Error::InvalidParameter(format!("expected {} masses for n = {n}", n * n)));
        }
        if let Some(i) = mass.iter().position(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass[{i}] = {} is not a nonnegative number", mass[i])));
        }
        let target = 1.0 / n as f64;
        for i in 0..n {
            let row: f64 = mass[i * n..(i + 1) * n].iter().sum();
            if (row - target).abs() > MARGIN_TOL {
                return Err(Error::InvalidParameter(format!("row {i} sums to {row}, expected {target}")));
            }
            let col: f64 = (0..n).map(|r| mass[r * n + i]).sum();
            if (col - target).abs() > MARGIN_TOL {
                return Err(Error::InvalidParameter(format!("column {i} sums to {col}, expected {target}")));
            }
        }
        let w = n + 1;
        let mut prefix = vec![0.0; w * w];
        for i in 0..n {
            for j in 0..n {
                prefix[(i + 1) * w + j + 1] =
                    mass[i * n + j] + prefix[i * w + j + 1] + prefix[(i + 1) * w + j] - prefix[i * w + j];
            }
        }
        Ok(Self { n, mass, prefix })
    }

    /// The permutation matrix of `perm`, scaled by `1/n`.
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut mass = vec![0.0; n * n];
        for (i, &j) in perm.iter().enumerate() {
            if j >= n {
                return Err(Error::InvalidParameter(format!("perm[{i}] = {j} out of range")));
            }
            mass[i * n + j] = 1.0 / n as f64;
        }
        Self::new(n, mass)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.n + j]
    }

    fn prefix(&self, i: usize, j: usize) -> f64 {
        self.prefix[i * (self.n + 1) + j]
    }

    /// Exact on grid nodes; between nodes the partial row and column are
    /// taken in proportion to the covered fraction of the cell.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let n = self.n;
        let split = |t: f64| -> (usize, f64) {
            let s = t * n as f64;
            let i = (s.floor() as usize).min(n);
            if i == n {
                (n, 0.0)
            } else {
                (i, s - i as f64)
            }
        };
        let (i, fx) = split(x);
        let (j, fy) = split(y);
        let mut c = self.prefix(i, j);
        if fx > 0.0 {
            let row_part = self.prefix(i + 1, j) - self.prefix(i, j);
            c += fx * row_part;
        }
        if fy > 0.0 {
            let col_part = self.prefix(i, j + 1) - self.prefix(i, j);
            c += fy * col_part;
        }
        if fx > 0.0 && fy > 0.0 {
            c += fx * fy * self.mass(i, j);
        }
        c
    }

    /// CSV: first line `n`, then `n` rows of `n` masses.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().flexible(true).has_headers(false).from_writer(w);
        wr.write_record([self.n.to_string()])?;
        for row in self.mass.chunks(self.n) {
            wr.write_record(row.iter().map(|m| fmt17(*m)))?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().flexible(true).has_headers(false).from_reader(r);
        let mut records = rd.records();
        let n: usize = match records.next() {
            Some(rec) => rec?
                .get(0)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidParameter("first line must hold n".into()))?,
            None => return Err(Error::InvalidParameter("empty grid file".into())),
        };
        let mut mass = Vec::with_capacity(n * n);
        for rec in records {
            for field in rec?.iter() {
                mass.push(field.trim().parse::<f64>().map_err(|e| Error::InvalidParameter(e.to_string()))?);
            }
        }
        Self::new(n, mass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_margins() {
        assert!(DoublyStochasticGrid::new(2, vec![0.5, 0.0, 0.0, 0.4]).is_err());
        assert!(DoublyStochasticGrid::new(2, vec![0.5, -0.0001, 0.0001, 0.5]).is_err());
    }

    #[test]
    fn permutation_grid_margins() {
        let g = DoublyStochasticGrid::from_permutation(&[2, 0, 1]).unwrap();
        for k in 0..=3 {
            let t = k as f64 / 3.0;
            assert!((g.eval(t, 1.0) - t).abs() < 1e-15);
            assert!((g.eval(1.0, t) - t).abs() < 1e-15);
        }
        // Off-node boundary values stay exact.
        assert!((g.eval(0.5, 1.0) - 0.5).abs() < 1e-15);
        assert!((g.eval(1.0, 0.123) - 0.123).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip() {
        let g = DoublyStochasticGrid::new(2, vec![0.3, 0.2, 0.2, 0.3]).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let h = DoublyStochasticGrid::read_csv(buf.as_slice()).unwrap();
        assert_eq!(g, h);
        for &(x, y) in &[(0.1, 0.9), (0.5, 0.5), (0.77, 0.3)] {
            assert!((g.eval(x, y) - h.eval(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = DoublyStochasticGrid::from_permutation(&[1, 0]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let h: DoublyStochasticGrid = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
    }
}
