//! Embedded Dormand–Prince 5(4) integrator with step-size control and cubic
//! Hermite dense output on accepted steps.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: Option<f64>,
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            h_init: None,
            h_max: None,
            max_steps: 2_000_000,
        }
    }
}

/// One accepted step with endpoint derivatives, enough for a cubic Hermite
/// reconstruction of the solution inside [x0, x1].
#[derive(Debug, Clone, Copy)]
pub struct DenseStep<const N: usize> {
    pub x0: f64,
    pub x1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub f0: [f64; N],
    pub f1: [f64; N],
}

impl<const N: usize> DenseStep<N> {
    /// Hermite evaluation of component `i` at `x` in [x0, x1].
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        let h = self.x1 - self.x0;
        let s = (x - self.x0) / h;
        let s2 = s * s;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s2 * (3.0 - 2.0 * s);
        let h11 = s2 * (s - 1.0);
        h00 * self.y0[i] + h10 * h * self.f0[i] + h01 * self.y1[i] + h11 * h * self.f1[i]
    }

    /// Derivative of the Hermite reconstruction of component `i` at `x`.
    pub fn eval_derivative(&self, i: usize, x: f64) -> f64 {
        let h = self.x1 - self.x0;
        let s = (x - self.x0) / h;
        let d00 = 6.0 * s * (s - 1.0) / h;
        let d10 = (1.0 - s) * (1.0 - 3.0 * s);
        let d01 = -d00;
        let d11 = s * (3.0 * s - 2.0);
        d00 * self.y0[i] + d10 * self.f0[i] + d01 * self.y1[i] + d11 * self.f1[i]
    }
}

/// What the per-step callback wants the driver to do next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepControl {
    Continue,
    Stop,
}

#[derive(Debug, Clone)]
pub enum OdeOutcome<const N: usize> {
    ReachedEnd { x: f64, y: [f64; N] },
    StoppedByCallback { x: f64, y: [f64; N] },
    StepUnderflow { x: f64, y: [f64; N] },
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 + 92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `dy/dx = f(x, y)` from `x0` to `x_end` (forward or backward).
/// `on_step` sees every accepted step and may stop the integration early;
/// step-size underflow is reported in the outcome, not as an error.
pub fn integrate_adaptive<const N: usize, F, C>(
    mut f: F,
    x0: f64,
    x_end: f64,
    y0: [f64; N],
    opts: &OdeOptions,
    mut on_step: C,
) -> Result<OdeOutcome<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    C: FnMut(&DenseStep<N>) -> StepControl,
{
    if x0 == x_end {
        return Ok(OdeOutcome::ReachedEnd { x: x0, y: y0 });
    }
    let dir = (x_end - x0).signum();
    let span = (x_end - x0).abs();
    let h_max = opts.h_max.unwrap_or(span);
    let mut h = opts.h_init.unwrap_or(span * 1e-4).min(h_max).max(1e-300);
    // No-progress floor, scaled to the current position so that windows
    // spanning many orders of magnitude still take small early steps.
    let h_floor = |x: f64| 1e-14 * x.abs();

    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);

    for _ in 0..opts.max_steps {
        if dir * (x_end - x) <= 0.0 {
            return Ok(OdeOutcome::ReachedEnd { x, y });
        }
        if h > (x_end - x).abs() {
            h = (x_end - x).abs();
        }
        let hs = dir * h;

        let mut yt = [0.0; N];

        for i in 0..N {
            yt[i] = y[i] + hs * A21 * k1[i];
        }
        let k2 = f(x + 0.2 * hs, &yt);
        for i in 0..N {
            yt[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = f(x + 0.3 * hs, &yt);
        for i in 0..N {
            yt[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = f(x + 0.8 * hs, &yt);
        for i in 0..N {
            yt[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = f(x + 8.0 / 9.0 * hs, &yt);
        for i in 0..N {
            yt[i] = y[i]
                + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = f(x + hs, &yt);
        let mut y_new = [0.0; N];
        for i in 0..N {
            y_new[i] =
                y[i] + hs * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let k7 = f(x + hs, &y_new);

        let mut err_sq = 0.0;
        for i in 0..N {
            let e = hs
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            let step = DenseStep {
                x0: x,
                x1: x + hs,
                y0: y,
                y1: y_new,
                f0: k1,
                f1: k7,
            };
            x += hs;
            y = y_new;
            k1 = k7; // FSAL
            if on_step(&step) == StepControl::Stop {
                return Ok(OdeOutcome::StoppedByCallback { x, y });
            }
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).min(h_max);
        if h < h_floor(x) || x + dir * h == x {
            return Ok(OdeOutcome::StepUnderflow { x, y });
        }
    }

    Err(Error::Numerical(format!(
        "integrator exceeded {} steps at x = {x}",
        opts.max_steps
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let out = integrate_adaptive(
            |_, y: &[f64; 1]| [y[0]],
            0.0,
            1.0,
            [1.0],
            &OdeOptions::default(),
            |_| StepControl::Continue,
        )
        .unwrap();
        match out {
            OdeOutcome::ReachedEnd { y, .. } => {
                assert!((y[0] - 1.0f64.exp()).abs() < 1e-8);
            }
            other => panic!("unexpected outcome: {other:?}"),
        }
    }

    #[test]
    fn harmonic_oscillator_phase() {
        let out = integrate_adaptive(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            10.0,
            [1.0, 0.0],
            &OdeOptions {
                rel_tol: 1e-11,
                abs_tol: 1e-13,
                ..OdeOptions::default()
            },
            |_| StepControl::Continue,
        )
        .unwrap();
        match out {
            OdeOutcome::ReachedEnd { y, .. } => {
                assert!((y[0] - 10.0f64.cos()).abs() < 1e-9);
                assert!((y[1] + 10.0f64.sin()).abs() < 1e-9);
            }
            other => panic!("unexpected outcome: {other:?}"),
        }
    }

    #[test]
    fn dense_output_matches_solution() {
        // Cubic Hermite between accepted nodes is only O(h⁴); bound the step
        // to keep the reconstruction tight.
        let mut worst: f64 = 0.0;
        integrate_adaptive(
            |x, _y: &[f64; 1]| [x.cos()],
            0.0,
            6.0,
            [0.0],
            &OdeOptions {
                h_max: Some(0.05),
                ..OdeOptions::default()
            },
            |step| {
                let mid = 0.5 * (step.x0 + step.x1);
                worst = worst.max((step.eval(0, mid) - mid.sin()).abs());
                StepControl::Continue
            },
        )
        .unwrap();
        assert!(worst < 1e-7, "dense output error {worst}");
    }

    #[test]
    fn callback_stop() {
        let out = integrate_adaptive(
            |_, y: &[f64; 1]| [y[0]],
            0.0,
            50.0,
            [1.0],
            &OdeOptions::default(),
            |step| {
                if step.y1[0] > 10.0 {
                    StepControl::Stop
                } else {
                    StepControl::Continue
                }
            },
        )
        .unwrap();
        assert!(matches!(out, OdeOutcome::StoppedByCallback { .. }));
    }
}
