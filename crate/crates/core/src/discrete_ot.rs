//! The extremal problem on an `n × n` grid as an assignment problem:
//! permutation matrices are the extreme points of the doubly stochastic
//! set, so a maximal assignment solves the discretised problem.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copulas::{Direction, DoublyStochasticGrid, MapBranch, TransportMap};
use crate::costs::CostField;
use crate::error::{Error, Result};

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("matrix must be square and non-empty".into()));
        }
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

pub fn midpoint(i: usize, n: usize) -> f64 {
    (i as f64 + 0.5) / n as f64
}

/// Entry `(i, j)` is `F((i + ½)/n, (j + ½)/n)`.
pub fn build_cost_matrix(cost: &CostField, n: usize) -> Result<CostMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("matrix size must be positive".into()));
    }
    let data: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let x = midpoint(i, n);
            (0..n).map(move |j| cost.eval(x, midpoint(j, n)))
        })
        .collect();
    Ok(CostMatrix { n, data })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub n: usize,
    pub perm: Vec<usize>,
    /// `Σᵢ m[i, perm(i)]`.
    pub sum: f64,
    /// `sum / n`, the discretised objective.
    pub value: f64,
}

impl Assignment {
    pub fn to_grid(&self) -> Result<DoublyStochasticGrid> {
        DoublyStochasticGrid::from_permutation(&self.perm)
    }

    /// CSV with header `i,perm_i`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["i", "perm_i"])?;
        for (i, p) in self.perm.iter().enumerate() {
            wr.write_record([i.to_string(), p.to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Maximum-weight perfect matching. Among optimal permutations the
/// lexicographically smallest is returned.
pub fn solve_max_assignment(m: &CostMatrix) -> Result<Assignment> {
    let n = m.n;
    if let Some(k) = m.data.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("entry ({}, {}) is not finite", k / n, k % n)));
    }
    let neg: Vec<f64> = m.data.iter().map(|v| -v).collect();
    let (mut perm, u, v) = hungarian_min(n, &neg);
    let scale = m.data.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    let tol = 1e-12 * (1.0 + scale) * n as f64;
    let tight = |i: usize, j: usize| -m.get(i, j) - u[i] - v[j] <= tol;
    lexicographic_min_matching(n, &mut perm, tight);
    let sum: f64 = perm.iter().enumerate().map(|(i, &j)| m.get(i, j)).sum();
    Ok(Assignment { n, perm, sum, value: sum / n as f64 })
}

/// Kuhn–Munkres with potentials for a minimisation problem. Returns the
/// row→column matching and dual potentials `u`, `v` with
/// `a(i, j) − u[i] − v[j] ≥ 0`, tight on the matching.
fn hungarian_min(n: usize, a: &[f64]) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    // 1-indexed arrays; index 0 is the virtual column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        minv.iter_mut().for_each(|x| *x = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let ui = u[i0];
            let row = &a[(i0 - 1) * n..i0 * n];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = row[j - 1] - ui - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[p[j] - 1] = j - 1;
    }
    (perm, u[1..].to_vec(), v[1..].to_vec())
}

/// Every optimal assignment lives on the tight edges of an optimal dual, so
/// the lexicographically smallest optimum is the lexicographically smallest
/// perfect matching of that equality graph. Rows are fixed in order; row `i`
/// may switch to column `j` when the row currently holding `j` can reach the
/// column `i` gives up through an alternating path among later rows.
fn lexicographic_min_matching(n: usize, perm: &mut [usize], tight: impl Fn(usize, usize) -> bool) {
    let mut owner = vec![0usize; n];
    for (i, &j) in perm.iter().enumerate() {
        owner[j] = i;
    }
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        let freed = perm[i];
        // next[r] = Some(s): row r takes column perm[s] (or `freed` if s == i).
        let mut next: Vec<Option<usize>> = vec![None; n];
        let mut queue = Vec::new();
        for r in i + 1..n {
            if tight(r, freed) {
                next[r] = Some(i);
                queue.push(r);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let s = queue[head];
            head += 1;
            let c = perm[s];
            for r in i + 1..n {
                if next[r].is_none() && tight(r, c) {
                    next[r] = Some(s);
                    queue.push(r);
                }
            }
        }
        let choice = (0..freed).find(|&j| {
            let r = owner[j];
            r > i && next[r].is_some() && tight(i, j)
        });
        let Some(j) = choice else { continue };
        // Rotate along the recorded path, reading old columns first.
        let mut chain = vec![];
        let mut r = owner[j];
        loop {
            let s = next[r].expect("row on path");
            chain.push((r, if s == i { freed } else { perm[s] }));
            if s == i {
                break;
            }
            r = s;
        }
        perm[i] = j;
        owner[j] = i;
        for (r, c) in chain {
            perm[r] = c;
            owner[c] = r;
        }
    }
}

/// `(1/n) Σᵢ F(midᵢ, mid_{perm(i)})`.
pub fn assignment_value(a: &Assignment, cost: &CostField) -> f64 {
    let n = a.n;
    a.perm.iter().enumerate().map(|(i, &j)| cost.eval(midpoint(i, n), midpoint(j, n))).sum::<f64>() / n as f64
}

/// A maximal run of cells on which the permutation is monotone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// First cell index.
    pub start: usize,
    /// One past the last cell index.
    pub end: usize,
    pub direction: Direction,
}

impl Segment {
    pub fn x_range(&self, n: usize) -> (f64, f64) {
        (self.start as f64 / n as f64, self.end as f64 / n as f64)
    }
}

#[derive(Debug, Clone)]
pub struct EmpiricalMap {
    pub map: TransportMap,
    pub segments: Vec<Segment>,
}

/// Greedy decomposition into longest monotone runs. At each start the
/// longer of the increasing and decreasing runs is taken (increasing on a
/// tie).
pub fn monotone_segments(perm: &[usize]) -> Vec<Segment> {
    let n = perm.len();
    let mut out = vec![];
    let mut i = 0;
    while i < n {
        let run = |up: bool| {
            let mut e = i + 1;
            while e < n && ((perm[e] > perm[e - 1]) == up) {
                e += 1;
            }
            e
        };
        let (inc, dec) = (run(true), run(false));
        let (end, direction) = if dec > inc { (dec, Direction::Decreasing) } else { (inc, Direction::Increasing) };
        out.push(Segment { start: i, end, direction });
        i = end;
    }
    out
}

/// Sends cell `i` affinely onto cell `perm(i)`, oriented like its monotone
/// segment, so the map is measure preserving and its copula is the
/// permutation copula. Collinear neighbouring cells are merged.
pub fn empirical_map(a: &Assignment) -> Result<EmpiricalMap> {
    let n = a.n;
    let segments = monotone_segments(&a.perm);
    let h = 1.0 / n as f64;
    let mut branches: Vec<MapBranch> = vec![];
    // (slope sign, intercept in cell units) of the last piece for merging.
    let mut last: Option<(bool, i64)> = None;
    for seg in &segments {
        let up = seg.direction == Direction::Increasing;
        for i in seg.start..seg.end {
            let j = a.perm[i] as i64;
            let key = if up { (true, j - i as i64) } else { (false, j + i as i64 + 1) };
            let lo = i as f64 * h;
            let hi = if i + 1 == n { 1.0 } else { (i + 1) as f64 * h };
            if last == Some(key) {
                branches.last_mut().expect("previous piece").hi = hi;
                continue;
            }
            let (slope, intercept) = if up { (1.0, key.1 as f64 * h) } else { (-1.0, key.1 as f64 * h) };
            branches.push(MapBranch::affine(lo, hi, slope, intercept));
            last = Some(key);
        }
    }
    Ok(EmpiricalMap { map: TransportMap::new(branches)?, segments })
}

/// Minimum number of transpositions turning `p` into `q`.
pub fn transposition_distance(p: &[usize], q: &[usize]) -> Result<usize> {
    let n = p.len();
    if q.len() != n {
        return Err(Error::InvalidParameter("permutations differ in length".into()));
    }
    let mut q_inv = vec![usize::MAX; n];
    for (i, &j) in q.iter().enumerate() {
        if j >= n || q_inv[j] != usize::MAX {
            return Err(Error::InvalidParameter("q is not a permutation".into()));
        }
        q_inv[j] = i;
    }
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        cycles += 1;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            let j = p[k];
            if j >= n {
                return Err(Error::InvalidParameter("p is not a permutation".into()));
            }
            k = q_inv[j];
        }
    }
    Ok(n - cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::make_sine_cost;
    use crate::oracle::brute_force_max_assignment;
    use proptest::prelude::*;

    fn xy() -> CostField {
        CostField::generic(|x, y| x * y)
    }

    #[test]
    fn cost_matrix_examples() {
        let m = build_cost_matrix(&xy(), 2).unwrap();
        assert_eq!(m.to_rows(), vec![vec![1.0 / 16.0, 3.0 / 16.0], vec![3.0 / 16.0, 9.0 / 16.0]]);
        let one = build_cost_matrix(&CostField::generic(|_, _| 1.0), 5).unwrap();
        assert!(one.data.iter().all(|&v| v == 1.0));
        let s = build_cost_matrix(&make_sine_cost(), 2).unwrap();
        assert!((s.get(0, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn small_examples() {
        let a = solve_max_assignment(&CostMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()).unwrap();
        assert_eq!((a.perm.clone(), a.sum), (vec![0, 1], 2.0));
        let b = solve_max_assignment(&CostMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()).unwrap();
        assert_eq!((b.perm.clone(), b.sum), (vec![1, 0], 2.0));
    }

    #[test]
    fn rejects_non_finite() {
        let m = CostMatrix::from_rows(vec![vec![1.0, f64::NAN], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(solve_max_assignment(&m), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn all_ties_give_identity() {
        let m = CostMatrix::from_rows(vec![vec![1.0; 6]; 6]).unwrap();
        assert_eq!(solve_max_assignment(&m).unwrap().perm, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn ties_resolved_lexicographically() {
        // Two derangements reach 6; the smaller one must win.
        let m = CostMatrix::from_rows(vec![vec![0.0, 2.0, 2.0], vec![2.0, 0.0, 2.0], vec![2.0, 2.0, 0.0]]).unwrap();
        let a = solve_max_assignment(&m).unwrap();
        assert_eq!(a.perm, vec![1, 2, 0]);
        assert_eq!(a.perm, brute_force_max_assignment(&m).perm);
    }

    #[test]
    fn xy_gives_identity_and_value_report() {
        for n in 2..=8 {
            let m = build_cost_matrix(&xy(), n).unwrap();
            let a = solve_max_assignment(&m).unwrap();
            assert_eq!(a.perm, (0..n).collect::<Vec<_>>());
            assert_eq!(a, brute_force_max_assignment(&m));
            assert!((assignment_value(&a, &xy()) - a.value).abs() < 1e-12);
        }
    }

    #[test]
    fn single_cell() {
        let a = solve_max_assignment(&build_cost_matrix(&make_sine_cost(), 1).unwrap()).unwrap();
        assert_eq!(a.perm, vec![0]);
        assert!(assignment_value(&a, &make_sine_cost()).abs() < 1e-15);
    }

    #[test]
    fn permutation_grid_is_doubly_stochastic() {
        let a = solve_max_assignment(&build_cost_matrix(&make_sine_cost(), 20).unwrap()).unwrap();
        let g = a.to_grid().unwrap();
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            assert!((g.eval(t, 1.0) - t).abs() < 1e-14);
        }
    }

    #[test]
    fn empirical_maps_of_identity_and_reversal() {
        let id = Assignment { n: 10, perm: (0..10).collect(), sum: 0.0, value: 0.0 };
        let e = empirical_map(&id).unwrap();
        assert_eq!(e.map.branches().len(), 1);
        assert_eq!(e.segments.len(), 1);
        assert!((e.map.apply(0.37) - 0.37).abs() < 1e-15);
        let rev = Assignment { n: 10, perm: (0..10).rev().collect(), sum: 0.0, value: 0.0 };
        let e = empirical_map(&rev).unwrap();
        assert_eq!(e.map.branches().len(), 1);
        assert_eq!(e.segments[0].direction, Direction::Decreasing);
        assert!((e.map.apply(0.3) - 0.7).abs() < 1e-15);
        e.map.check_measure_preserving().unwrap();
    }

    #[test]
    fn empirical_map_preserves_measure_for_scrambled_perm() {
        let a = Assignment { n: 7, perm: vec![3, 0, 6, 2, 1, 5, 4], sum: 0.0, value: 0.0 };
        empirical_map(&a).unwrap().map.check_measure_preserving().unwrap();
    }

    #[test]
    fn transposition_distance_examples() {
        let id: Vec<usize> = (0..5).collect();
        assert_eq!(transposition_distance(&id, &id).unwrap(), 0);
        assert_eq!(transposition_distance(&[1, 0, 2, 3, 4], &id).unwrap(), 1);
        assert_eq!(transposition_distance(&[4, 3, 2, 1, 0], &id).unwrap(), 2);
        assert_eq!(transposition_distance(&[1, 2, 0], &[0, 1, 2]).unwrap(), 2);
    }

    #[test]
    fn csv_export() {
        let a = Assignment { n: 2, perm: vec![1, 0], sum: 0.0, value: 0.0 };
        let mut buf = vec![];
        a.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "i,perm_i\n0,1\n1,0\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_brute_force_on_small_integer_matrices(
            n in 1usize..=6,
            seed in prop::collection::vec(0i32..4, 36),
        ) {
            // Small integer entries force many ties.
            let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| seed[i * 6 + j] as f64).collect()).collect();
            let m = CostMatrix::from_rows(rows).unwrap();
            let a = solve_max_assignment(&m).unwrap();
            let b = brute_force_max_assignment(&m);
            prop_assert_eq!(a.perm, b.perm);
            prop_assert!((a.sum - b.sum).abs() < 1e-12);
        }

        #[test]
        fn matches_brute_force_on_real_matrices(
            n in 1usize..=7,
            seed in prop::collection::vec(-1.0f64..1.0, 49),
        ) {
            let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| seed[i * 7 + j]).collect()).collect();
            let m = CostMatrix::from_rows(rows).unwrap();
            let a = solve_max_assignment(&m).unwrap();
            let b = brute_force_max_assignment(&m);
            prop_assert!((a.sum - b.sum).abs() < 1e-12);
            prop_assert_eq!(a.perm, b.perm);
        }

        #[test]
        fn supermodular_costs_give_identity(n in 2usize..=8, a in 0.1f64..3.0, b in -1.0f64..1.0) {
            // D₂ = a > 0 everywhere.
            let cost = CostField::generic(move |x, y| a * x * y + b * (x * x - y));
            let m = build_cost_matrix(&cost, n).unwrap();
            let s = solve_max_assignment(&m).unwrap();
            prop_assert_eq!(&s.perm, &(0..n).collect::<Vec<_>>());
            prop_assert_eq!(s.perm, brute_force_max_assignment(&m).perm);
        }
    }
}
