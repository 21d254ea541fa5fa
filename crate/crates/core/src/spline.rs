//! Shape-preserving piecewise cubic Hermite interpolation (Fritsch–Carlson
//! slopes with the Fritsch–Butland harmonic mean at interior knots).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 3 {
            return Err(Error::InvalidParameter("spline needs at least three (x, y) samples".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("spline abscissae must be strictly increasing".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("spline samples must be finite".into()));
        }
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut m = vec![0.0; n];
        for k in 1..n - 1 {
            if d[k - 1] * d[k] > 0.0 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
            }
        }
        m[0] = end_slope(h[0], h[1], d[0], d[1]);
        m[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        Ok(Self { xs, ys, slopes: m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    fn locate(&self, x: f64) -> (usize, f64, f64) {
        let n = self.xs.len();
        let k = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.xs[k + 1] - self.xs[k];
        (k, (x - self.xs[k]) / h, h)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (k, t, h) = self.locate(x);
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[k] + h10 * h * self.slopes[k] + h01 * self.ys[k + 1] + h11 * h * self.slopes[k + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (k, t, h) = self.locate(x);
        let t2 = t * t;
        let d00 = 6.0 * t2 - 6.0 * t;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = -6.0 * t2 + 6.0 * t;
        let d11 = 3.0 * t2 - 2.0 * t;
        (d00 * self.ys[k] + d01 * self.ys[k + 1]) / h + d10 * self.slopes[k] + d11 * self.slopes[k + 1]
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let (k, t, h) = self.locate(x);
        let d00 = 12.0 * t - 6.0;
        let d10 = 6.0 * t - 4.0;
        let d01 = -12.0 * t + 6.0;
        let d11 = 6.0 * t - 2.0;
        (d00 * self.ys[k] + d01 * self.ys[k + 1]) / (h * h) + (d10 * self.slopes[k] + d11 * self.slopes[k + 1]) / h
    }
}

// Three-point end slope, clipped so the end interval stays shape preserving.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
