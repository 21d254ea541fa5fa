//! Independent reference computations used to cross-check the solvers:
//! exhaustive search and closed forms that share no code with the routes
//! they check.

use crate::discrete_ot::{Assignment, CostMatrix};
use std::f64::consts::PI;

/// Exhaustive search over all `n!` permutations in lexicographic order.
/// The first permutation within `1e-12` of the best sum is returned.
pub fn brute_force_max_assignment(m: &CostMatrix) -> Assignment {
    let n = m.n();
    assert!(n <= 9, "exhaustive search is limited to n <= 9");
    let sum_of = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| m.get(i, j)).sum::<f64>();
    let mut p: Vec<usize> = (0..n).collect();
    let mut all = vec![];
    loop {
        all.push((p.clone(), sum_of(&p)));
        if !next_permutation(&mut p) {
            break;
        }
    }
    let best = all.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
    let (perm, sum) = all.into_iter().find(|(_, s)| *s >= best - 1e-12).expect("non-empty");
    Assignment { n, perm, sum, value: sum / n as f64 }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `H(α) = α·sin(πα) + (cos(2πα) − 1)/(2π)` for `φ(z) = sin(πz)`.
pub fn sine_h_closed_form(alpha: f64) -> f64 {
    alpha * (PI * alpha).sin() + ((2.0 * PI * alpha).cos() - 1.0) / (2.0 * PI)
}

/// `H'(α) = sin(πα) + απ·cos(πα) − sin(2πα)` for the sine profile.
pub fn sine_h_derivative(alpha: f64) -> f64 {
    (PI * alpha).sin() + alpha * PI * (PI * alpha).cos() - (2.0 * PI * alpha).sin()
}

/// `∫₀¹ G dy` for the piecewise-linear cost and the logarithmic boundary
/// pair `h = x·y(1 − ln y)`: `x₂/(1 − x₂)·(−1/27) + 1/3`.
pub fn log_pair_value(x2: f64) -> f64 {
    x2 / (1.0 - x2) * (-1.0 / 27.0) + 1.0 / 3.0
}

/// Plain bisection for a sign change of `f` on `[a, b]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let fa = f(a);
    assert!(fa * f(b) <= 0.0, "no sign change on [{a}, {b}]");
    while b - a > tol {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_enumerate_in_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }

    #[test]
    fn sine_closed_form_matches_quadrature() {
        for &a in &[0.0, 0.3, 0.75, 1.0] {
            let n = 200_000;
            let tail: f64 =
                (0..n).map(|i| a + (1.0 - a) * (i as f64 + 0.5) / n as f64).map(|x| (2.0 * PI * x).sin()).sum::<f64>()
                    * (1.0 - a)
                    / n as f64;
            let h = a * (PI * a).sin() + tail;
            assert!((h - sine_h_closed_form(a)).abs() < 1e-9);
        }
    }

    #[test]
    fn log_pair_values() {
        assert!((log_pair_value(2.0 / 3.0) - 7.0 / 27.0).abs() < 1e-15);
        assert!((log_pair_value(0.5) - 8.0 / 27.0).abs() < 1e-15);
    }
}
