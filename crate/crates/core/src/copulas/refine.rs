//! Interior values of a maximizing copula on a rectangle where the mixed
//! derivative of the cost keeps one sign, given the copula on the edges.

use super::Copula;
use crate::costs::Sign;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
}

impl Rect {
    pub fn new(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<Self> {
        if !(x1 <= x2 && y1 <= y2) {
            return Err(Error::InvalidParameter(format!("unordered corners [{x1}, {x2}] × [{y1}, {y2}]")));
        }
        Ok(Self { x1, x2, y1, y2 })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x1..=self.x2).contains(&x) && (self.y1..=self.y2).contains(&y)
    }
}

/// Restrictions of `C` to the four edges of a rectangle.
pub struct EdgeFunctions<'a> {
    /// `x ↦ C(x, Y₁)`.
    pub bottom: Box<dyn Fn(f64) -> f64 + 'a>,
    /// `x ↦ C(x, Y₂)`.
    pub top: Box<dyn Fn(f64) -> f64 + 'a>,
    /// `y ↦ C(X₁, y)`.
    pub left: Box<dyn Fn(f64) -> f64 + 'a>,
    /// `y ↦ C(X₂, y)`.
    pub right: Box<dyn Fn(f64) -> f64 + 'a>,
}

impl<'a> EdgeFunctions<'a> {
    pub fn from_copula(c: &'a Copula, r: Rect) -> Self {
        Self {
            bottom: Box::new(move |x| c.eval_unchecked(x, r.y1)),
            top: Box::new(move |x| c.eval_unchecked(x, r.y2)),
            left: Box::new(move |y| c.eval_unchecked(r.x1, y)),
            right: Box::new(move |y| c.eval_unchecked(r.x2, y)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Refinement {
    Applied(Vec<f64>),
    /// The rectangle carries no mass (or is degenerate); boundary values
    /// stand as given.
    NoOp,
}

/// For `D₂ > 0`:
/// `C(x,y) = min(C(x,Y₂) + C(X₁,y) − C(X₁,Y₂), C(x,Y₁) + C(X₂,y) − C(X₂,Y₁))`;
/// for `D₂ < 0`:
/// `C(x,y) = max(C(x,Y₂) + C(X₂,y) − C(X₂,Y₂), C(x,Y₁) + C(X₁,y) − C(X₁,Y₁))`.
pub fn refine_region(
    edges: &EdgeFunctions<'_>,
    region: Rect,
    d2_sign: Sign,
    points: &[(f64, f64)],
) -> Result<Refinement> {
    if d2_sign == Sign::Zero {
        return Err(Error::InvalidParameter("region sign must be + or -".into()));
    }
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| !region.contains(x, y)) {
        return Err(Error::InvalidParameter(format!("point ({x}, {y}) outside the region")));
    }
    let c11 = (edges.left)(region.y1);
    let c12 = (edges.left)(region.y2);
    let c21 = (edges.right)(region.y1);
    let c22 = (edges.right)(region.y2);
    let volume = c22 - c21 - c12 + c11;
    if region.x1 == region.x2 || region.y1 == region.y2 || volume <= 0.0 {
        return Ok(Refinement::NoOp);
    }
    let values = points
        .iter()
        .map(|&(x, y)| {
            let (top, bottom) = ((edges.top)(x), (edges.bottom)(x));
            let (left, right) = ((edges.left)(y), (edges.right)(y));
            match d2_sign {
                Sign::Positive => (top + left - c12).min(bottom + right - c21),
                _ => (top + right - c22).max(bottom + left - c11),
            }
        })
        .collect();
    Ok(Refinement::Applied(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copulas::ClosedForm;

    fn grid() -> Vec<(f64, f64)> {
        let mut p = vec![];
        for i in 0..=10 {
            for j in 0..=10 {
                p.push((i as f64 / 10.0, j as f64 / 10.0));
            }
        }
        p
    }

    #[test]
    fn unit_square_positive_gives_upper_bound() {
        let r = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        for c in [Copula::closed(ClosedForm::Pi), Copula::closed(ClosedForm::W)] {
            let e = EdgeFunctions::from_copula(&c, r);
            let pts = grid();
            let Refinement::Applied(v) = refine_region(&e, r, Sign::Positive, &pts).unwrap() else {
                panic!("expected values");
            };
            for ((x, y), v) in pts.iter().zip(v) {
                assert!((v - x.min(*y)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn unit_square_negative_gives_lower_bound() {
        let r = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let c = Copula::closed(ClosedForm::M);
        let e = EdgeFunctions::from_copula(&c, r);
        let pts = grid();
        let Refinement::Applied(v) = refine_region(&e, r, Sign::Negative, &pts).unwrap() else {
            panic!("expected values");
        };
        for ((x, y), v) in pts.iter().zip(v) {
            assert!((v - (x + y - 1.0).max(0.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_region_is_noop() {
        let r = Rect::new(0.4, 0.4, 0.0, 1.0).unwrap();
        let c = Copula::closed(ClosedForm::Pi);
        let e = EdgeFunctions::from_copula(&c, r);
        assert_eq!(refine_region(&e, r, Sign::Positive, &[(0.4, 0.5)]).unwrap(), Refinement::NoOp);
    }

    #[test]
    fn massless_region_is_noop() {
        // W puts no mass below the anti-diagonal.
        let r = Rect::new(0.0, 0.4, 0.0, 0.4).unwrap();
        let c = Copula::closed(ClosedForm::W);
        let e = EdgeFunctions::from_copula(&c, r);
        assert_eq!(refine_region(&e, r, Sign::Negative, &[(0.2, 0.2)]).unwrap(), Refinement::NoOp);
    }

    #[test]
    fn rejects_outside_points_and_zero_sign() {
        let r = Rect::new(0.0, 0.5, 0.0, 0.5).unwrap();
        let c = Copula::closed(ClosedForm::Pi);
        let e = EdgeFunctions::from_copula(&c, r);
        assert!(refine_region(&e, r, Sign::Positive, &[(0.7, 0.2)]).is_err());
        assert!(refine_region(&e, r, Sign::Zero, &[(0.2, 0.2)]).is_err());
        assert!(Rect::new(0.5, 0.2, 0.0, 1.0).is_err());
    }
}
