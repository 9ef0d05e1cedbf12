//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Carlson slopes when
//! derivatives are not supplied) with monotone inversion.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    /// Fits a monotonicity-preserving cubic through strictly increasing `xs`.
    pub fn fit(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        check_grid(&xs, &ys)?;
        let n = xs.len();
        let mut delta = vec![0.0; n - 1];
        for i in 0..n - 1 {
            delta[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut ds = vec![0.0; n];
        ds[0] = end_slope(xs[1] - xs[0], xs[2] - xs[1], delta[0], delta[1]);
        ds[n - 1] = end_slope(
            xs[n - 1] - xs[n - 2],
            xs[n - 2] - xs[n - 3],
            delta[n - 2],
            delta[n - 3],
        );
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                ds[i] = 0.0;
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                ds[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        Ok(Self { xs, ys, ds })
    }

    /// Hermite interpolant with caller-supplied node derivatives (assumed
    /// consistent with monotone data; no slope limiting applied).
    pub fn with_derivatives(xs: Vec<f64>, ys: Vec<f64>, ds: Vec<f64>) -> Result<Self> {
        check_grid(&xs, &ys)?;
        if ds.len() != xs.len() {
            return Err(Error::InvalidParams(
                "derivative list length mismatch".into(),
            ));
        }
        Ok(Self { xs, ys, ds })
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    fn cell(&self, x: f64) -> usize {
        match self.xs.partition_point(|&t| t <= x) {
            0 => 0,
            k if k >= self.xs.len() => self.xs.len() - 2,
            k => k - 1,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let s2 = s * s;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s2 * (3.0 - 2.0 * s);
        let h11 = s2 * (s - 1.0);
        h00 * self.ys[i] + h10 * h * self.ds[i] + h01 * self.ys[i + 1] + h11 * h * self.ds[i + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let d00 = 6.0 * s * (s - 1.0) / h;
        let d10 = (1.0 - s) * (1.0 - 3.0 * s);
        let d01 = -d00;
        let d11 = s * (3.0 * s - 2.0);
        d00 * self.ys[i] + d10 * self.ds[i] + d01 * self.ys[i + 1] + d11 * self.ds[i + 1]
    }

    /// Second derivative of the piecewise cubic (linear per cell, may jump at
    /// the knots).
    pub fn second_derivative(&self, x: f64) -> f64 {
        let i = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let c2 = (-6.0 * (self.ys[i + 1] - self.ys[i]) / h + 3.0 * self.ds[i] + 3.0 * self.ds[i + 1])
            / h;
        let c1 =
            (6.0 * (self.ys[i + 1] - self.ys[i]) / h - 4.0 * self.ds[i] - 2.0 * self.ds[i + 1]) / h;
        c1 + 2.0 * c2 * s
    }

    /// Solves `eval(x) = y` on the node range for strictly monotone data.
    pub fn invert(&self, y: f64, tol: f64) -> Result<f64> {
        let increasing = self.ys.last().unwrap() > &self.ys[0];
        let (y_lo, y_hi) = if increasing {
            (self.ys[0], *self.ys.last().unwrap())
        } else {
            (*self.ys.last().unwrap(), self.ys[0])
        };
        if y < y_lo - tol || y > y_hi + tol {
            return Err(Error::OutOfDomain(format!(
                "value {y} outside interpolated range [{y_lo}, {y_hi}]"
            )));
        }
        let y = y.clamp(y_lo, y_hi);
        // Bracket by node, then safeguarded Newton inside the cell.
        let idx = if increasing {
            self.ys.partition_point(|&v| v <= y)
        } else {
            self.ys.partition_point(|&v| v >= y)
        };
        let i = idx.clamp(1, self.xs.len() - 1) - 1;
        let (mut a, mut b) = (self.xs[i], self.xs[i + 1]);
        let mut x = 0.5 * (a + b);
        for _ in 0..100 {
            let fx = self.eval(x) - y;
            if fx == 0.0 || (b - a) < tol {
                return Ok(x);
            }
            let rising = (self.eval(b) - y) > 0.0;
            if (fx > 0.0) == rising {
                b = x;
            } else {
                a = x;
            }
            let d = self.derivative(x);
            let mut next = if d != 0.0 { x - fx / d } else { f64::NAN };
            if !next.is_finite() || next <= a || next >= b {
                next = 0.5 * (a + b);
            }
            x = next;
        }
        Ok(x)
    }
}

fn check_grid(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InvalidParams(format!(
            "need at least 3 matching nodes, got {} x {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams(
            "interpolation abscissae must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    // Three-point estimate, limited to preserve monotonicity at the boundary.
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
