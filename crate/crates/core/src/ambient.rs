//! Warped-product ambient spaces `I ×_h P` and their coordinate machinery.
//!
//! Analytic kinds (hyperbolic foliations, space-form cones, products) carry
//! closed-form warping data. The Schwarzschild family is realized through the
//! change of variables `t(r) = ∫_{r0}^r dσ/√V(σ)`, `h(t) = r(t)`, with the
//! inverse-square-root endpoint singularity at the horizon removed by the
//! substitution `σ = r0 + τ²` before quadrature.

use crate::error::{Error, Result};
use crate::num::interp::MonotoneCubic;
use crate::num::{quad, roots};

/// Open interval, endpoints possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }
}

/// Which black-hole potential the Schwarzschild-type space uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchwarzschildFamily {
    /// V(r) = 1 - 2 mass r^{1-m}
    Plain,
    /// V(r) = kbar + r² - 2 mass r^{1-m}, kbar ∈ {-1, 0, 1}
    AntiDeSitter { kbar: i8 },
    /// V(r) = 1 - 2 mass r^{1-m} + charge² r^{2-2m}
    ReissnerNordstrom { charge: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzschildParams {
    /// Fiber dimension m ≥ 2.
    pub m: u32,
    /// Mass parameter, positive.
    pub mass: f64,
    pub family: SchwarzschildFamily,
}

impl SchwarzschildParams {
    pub fn plain(m: u32, mass: f64) -> Self {
        Self {
            m,
            mass,
            family: SchwarzschildFamily::Plain,
        }
    }

    pub fn ads(m: u32, mass: f64, kbar: i8) -> Self {
        Self {
            m,
            mass,
            family: SchwarzschildFamily::AntiDeSitter { kbar },
        }
    }

    pub fn reissner_nordstrom(m: u32, mass: f64, charge: f64) -> Self {
        Self {
            m,
            mass,
            family: SchwarzschildFamily::ReissnerNordstrom { charge },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::InvalidParams(format!(
                "fiber dimension must be at least 2, got {}",
                self.m
            )));
        }
        if !(self.mass > 0.0) {
            return Err(Error::InvalidParams("mass must be positive".into()));
        }
        match self.family {
            SchwarzschildFamily::AntiDeSitter { kbar } if !(-1..=1).contains(&kbar) => {
                return Err(Error::InvalidParams(format!(
                    "kbar must be -1, 0 or 1, got {kbar}"
                )));
            }
            SchwarzschildFamily::ReissnerNordstrom { charge } if charge.abs() > self.mass => {
                return Err(Error::InvalidParams(format!(
                    "|charge| = {} exceeds mass = {}",
                    charge.abs(),
                    self.mass
                )));
            }
            _ => {}
        }
        Ok(())
    }

    /// V(r) for the selected family.
    pub fn potential(&self, r: f64) -> f64 {
        let m = self.m as f64;
        let base = 1.0 - 2.0 * self.mass * r.powf(1.0 - m);
        match self.family {
            SchwarzschildFamily::Plain => base,
            SchwarzschildFamily::AntiDeSitter { kbar } => kbar as f64 + r * r - 1.0 + base,
            SchwarzschildFamily::ReissnerNordstrom { charge } => {
                base + charge * charge * r.powf(2.0 - 2.0 * m)
            }
        }
    }

    /// dV/dr.
    pub fn potential_d1(&self, r: f64) -> f64 {
        let m = self.m as f64;
        let core = 2.0 * self.mass * (m - 1.0) * r.powf(-m);
        match self.family {
            SchwarzschildFamily::Plain => core,
            SchwarzschildFamily::AntiDeSitter { .. } => 2.0 * r + core,
            SchwarzschildFamily::ReissnerNordstrom { charge } => {
                core - 2.0 * (m - 1.0) * charge * charge * r.powf(1.0 - 2.0 * m)
            }
        }
    }

    /// d²V/dr².
    pub fn potential_d2(&self, r: f64) -> f64 {
        let m = self.m as f64;
        let core = -2.0 * self.mass * m * (m - 1.0) * r.powf(-m - 1.0);
        match self.family {
            SchwarzschildFamily::Plain => core,
            SchwarzschildFamily::AntiDeSitter { .. } => 2.0 + core,
            SchwarzschildFamily::ReissnerNordstrom { charge } => {
                core + 2.0 * (m - 1.0) * (2.0 * m - 1.0) * charge * charge * r.powf(-2.0 * m)
            }
        }
    }

    /// d³V/dr³.
    pub fn potential_d3(&self, r: f64) -> f64 {
        let m = self.m as f64;
        let core = 2.0 * self.mass * m * (m - 1.0) * (m + 1.0) * r.powf(-m - 2.0);
        match self.family {
            SchwarzschildFamily::Plain | SchwarzschildFamily::AntiDeSitter { .. } => core,
            SchwarzschildFamily::ReissnerNordstrom { charge } => {
                core - 4.0 * m * (m - 1.0) * (2.0 * m - 1.0) * charge * charge
                    * r.powf(-2.0 * m - 1.0)
            }
        }
    }

    /// V(r0 + w) without the catastrophic cancellation of the direct formula
    /// near a root r0: switches to the Taylor expansion for small w.
    pub fn potential_offset(&self, r0: f64, w: f64) -> f64 {
        if w.abs() < 1e-5 * r0.max(1.0) {
            w * (self.potential_d1(r0)
                + w * (0.5 * self.potential_d2(r0) + w * self.potential_d3(r0) / 6.0))
        } else {
            self.potential(r0 + w)
        }
    }

    /// Largest positive root of V, where a closed form exists (plain and
    /// Reissner–Nordström reduce to a quadratic in r^{m-1}).
    pub fn horizon_closed_form(&self) -> Option<f64> {
        let m = self.m as f64;
        match self.family {
            SchwarzschildFamily::Plain => Some((2.0 * self.mass).powf(1.0 / (m - 1.0))),
            SchwarzschildFamily::ReissnerNordstrom { charge } => {
                let disc = self.mass * self.mass - charge * charge;
                if disc < 0.0 {
                    None
                } else {
                    Some((self.mass + disc.sqrt()).powf(1.0 / (m - 1.0)))
                }
            }
            SchwarzschildFamily::AntiDeSitter { .. } => None,
        }
    }

    /// Fiber Einstein sign: Ric_P = (m-1) kbar ⟨,⟩_P.
    pub fn fiber_sign(&self) -> i8 {
        match self.family {
            SchwarzschildFamily::Plain | SchwarzschildFamily::ReissnerNordstrom { .. } => 1,
            SchwarzschildFamily::AntiDeSitter { kbar } => kbar,
        }
    }
}

/// Horizon radius: bracketed bisection then Newton refinement, with the
/// simple-root check V'(r0) > 0.
fn solve_horizon(params: &SchwarzschildParams) -> Result<f64> {
    params.validate()?;
    let scale = (2.0 * params.mass).powf(1.0 / (params.m as f64 - 1.0));

    // Start the bracket where V is negative. For the charged family V → +∞ at
    // the origin, so start from the interior minimum of V instead.
    let lo = match params.family {
        SchwarzschildFamily::ReissnerNordstrom { charge } => {
            let rmin = (charge * charge / params.mass).powf(1.0 / (params.m as f64 - 1.0));
            if params.potential(rmin) >= -1e-12 {
                return Err(Error::DegenerateHorizon(
                    "V has no simple positive root (extremal charge)".into(),
                ));
            }
            rmin
        }
        _ => 1e-6 * scale,
    };

    let (a, b) = roots::expand_bracket(|r| params.potential(r), lo, 0.05 * scale, 1.6, 200)?;
    let rough = roots::bisect(|r| params.potential(r), a, b, 1e-6 * scale)?;
    let r0 = roots::newton_bracketed(
        |r| params.potential(r),
        |r| params.potential_d1(r),
        rough,
        a,
        b,
        1e-15 * scale,
    )?;

    let slope = params.potential_d1(r0);
    if slope <= 1e-8 / scale {
        return Err(Error::DegenerateHorizon(format!(
            "V'(r0) = {slope:.3e} at r0 = {r0:.6}: horizon root is not simple"
        )));
    }
    Ok(r0)
}

/// Precomputed coordinate tables for a Schwarzschild-family space.
#[derive(Debug, Clone)]
struct SchwarzschildData {
    params: SchwarzschildParams,
    r0: f64,
    r_max: f64,
    t_max: f64,
    /// r as a function of t on [0, t_max].
    r_of_t: MonotoneCubic,
    /// Flow parameter s(t), anchored at the base point.
    s_of_t: MonotoneCubic,
    /// η̄(t) = ∫_{t0}^t h, anchored at the base point.
    eta_of_t: MonotoneCubic,
}

const SCH_TABLE_NODES: usize = 3000;

impl SchwarzschildData {
    fn build(params: SchwarzschildParams, r_max: f64, t0_request: Option<f64>) -> Result<Self> {
        let r0 = solve_horizon(&params)?;
        if r_max <= 2.0 * r0 {
            return Err(Error::InvalidParams(format!(
                "working window r_max = {r_max} too small (horizon at {r0})"
            )));
        }

        let tau_max = (r_max - r0).sqrt();
        let n = SCH_TABLE_NODES;
        let dtau = tau_max / n as f64;

        // Integrands after σ = r0 + τ²: dt = 2τ dτ/√V, ds = dt/r, dη = r dt.
        let v_at = |tau: f64| params.potential_offset(r0, tau * tau).max(f64::MIN_POSITIVE);
        let g_t = |tau: f64| 2.0 * tau / v_at(tau).sqrt();
        let g_s = |tau: f64| 2.0 * tau / (v_at(tau).sqrt() * (r0 + tau * tau));
        let g_eta = |tau: f64| 2.0 * tau * (r0 + tau * tau) / v_at(tau).sqrt();

        let mut ts = Vec::with_capacity(n + 1);
        let mut rs = Vec::with_capacity(n + 1);
        let mut ss = Vec::with_capacity(n + 1);
        let mut etas = Vec::with_capacity(n + 1);
        ts.push(0.0);
        rs.push(r0);
        ss.push(0.0);
        etas.push(0.0);

        let (mut t_acc, mut s_acc, mut eta_acc) = (0.0, 0.0, 0.0);
        for j in 1..=n {
            let a = (j - 1) as f64 * dtau;
            let b = j as f64 * dtau;
            t_acc += quad::integrate(g_t, a, b, 1e-13, 1e-12)?;
            s_acc += quad::integrate(g_s, a, b, 1e-13, 1e-12)?;
            eta_acc += quad::integrate(g_eta, a, b, 1e-13, 1e-12)?;
            ts.push(t_acc);
            rs.push(r0 + b * b);
            ss.push(s_acc);
            etas.push(eta_acc);
        }
        let t_max = t_acc;

        let dr_dt: Vec<f64> = rs
            .iter()
            .map(|&r| params.potential(r).max(0.0).sqrt())
            .collect();
        let ds_dt: Vec<f64> = rs.iter().map(|&r| 1.0 / r).collect();
        let deta_dt: Vec<f64> = rs.clone();

        let r_of_t = MonotoneCubic::with_derivatives(ts.clone(), rs, dr_dt)?;
        let mut s_of_t = MonotoneCubic::with_derivatives(ts.clone(), ss, ds_dt)?;
        let mut eta_of_t = MonotoneCubic::with_derivatives(ts, etas, deta_dt)?;

        let t0 = t0_request.unwrap_or(0.5 * t_max);
        if !(t0 > 0.0 && t0 < t_max) {
            return Err(Error::OutOfDomain(format!(
                "base point t0 = {t0} outside working window (0, {t_max})"
            )));
        }
        shift_to_zero(&mut s_of_t, t0);
        shift_to_zero(&mut eta_of_t, t0);

        Ok(Self {
            params,
            r0,
            r_max,
            t_max,
            r_of_t,
            s_of_t,
            eta_of_t,
        })
    }
}

fn shift_to_zero(curve: &mut MonotoneCubic, t0: f64) {
    let offset = curve.eval(t0);
    let xs = curve.nodes().to_vec();
    let ys: Vec<f64> = xs.iter().map(|&x| curve.eval(x) - offset).collect();
    let ds: Vec<f64> = xs.iter().map(|&x| curve.derivative(x)).collect();
    *curve = MonotoneCubic::with_derivatives(xs, ys, ds).expect("shifted table stays valid");
}

/// Custom tabulated warping function.
#[derive(Debug, Clone)]
struct TableData {
    h: MonotoneCubic,
    s_of_t: MonotoneCubic,
    eta_of_t: MonotoneCubic,
}

impl TableData {
    fn build(samples: &[(f64, f64)], t0_request: Option<f64>) -> Result<(Self, f64)> {
        if samples.len() < 4 {
            return Err(Error::InvalidParams(
                "warping table needs at least 4 samples".into(),
            ));
        }
        if samples.iter().any(|&(_, h)| !(h > 0.0)) {
            return Err(Error::InvalidParams(
                "warping function must be positive on all samples".into(),
            ));
        }
        let ts: Vec<f64> = samples.iter().map(|p| p.0).collect();
        let hs: Vec<f64> = samples.iter().map(|p| p.1).collect();
        let h = MonotoneCubic::fit(ts.clone(), hs)?;

        let mut ss = vec![0.0];
        let mut etas = vec![0.0];
        let (mut s_acc, mut eta_acc) = (0.0, 0.0);
        for w in ts.windows(2) {
            s_acc += quad::integrate(|t| 1.0 / h.eval(t), w[0], w[1], 1e-13, 1e-12)?;
            eta_acc += quad::integrate(|t| h.eval(t), w[0], w[1], 1e-13, 1e-12)?;
            ss.push(s_acc);
            etas.push(eta_acc);
        }
        let ds: Vec<f64> = ts.iter().map(|&t| 1.0 / h.eval(t)).collect();
        let de: Vec<f64> = ts.iter().map(|&t| h.eval(t)).collect();
        let mut s_of_t = MonotoneCubic::with_derivatives(ts.clone(), ss, ds)?;
        let mut eta_of_t = MonotoneCubic::with_derivatives(ts.clone(), etas, de)?;

        let t0 = t0_request.unwrap_or(0.5 * (ts[0] + ts[ts.len() - 1]));
        if t0 < ts[0] || t0 > ts[ts.len() - 1] {
            return Err(Error::OutOfDomain(format!(
                "base point t0 = {t0} outside table range"
            )));
        }
        shift_to_zero(&mut s_of_t, t0);
        shift_to_zero(&mut eta_of_t, t0);

        Ok((
            Self {
                h,
                s_of_t,
                eta_of_t,
            },
            t0,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientKind {
    /// h(t) = t on (0, ∞) over the unit sphere: Euclidean space minus a point.
    EuclideanCone,
    /// h(t) = sin t on (0, π) over the unit sphere: the round sphere minus two points.
    SphereCone,
    /// h(t) = e^t on ℝ over flat fibers: hyperbolic space foliated by horospheres.
    HyperbolicHorosphere,
    /// h(t) = cosh t on ℝ over hyperbolic fibers: hyperbolic space foliated by hyperspheres.
    HyperbolicHypersphere,
    /// h ≡ const on ℝ: Riemannian product.
    Product,
    /// Schwarzschild / ADS-Schwarzschild / Reissner–Nordström–Tangherlini.
    Schwarzschild,
    /// Warping function supplied as a sample table.
    CustomTable,
}

/// A warped product `I ×_h P` with its coordinate changes.
///
/// Instances are immutable after construction and safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct AmbientSpace {
    kind: AmbientKind,
    t0: f64,
    interval: Interval,
    window: Interval,
    fiber_curvature: Option<f64>,
    product_h: f64,
    sch: Option<SchwarzschildData>,
    table: Option<TableData>,
}

impl AmbientSpace {
    pub fn euclidean_cone() -> Self {
        Self {
            kind: AmbientKind::EuclideanCone,
            t0: 1.0,
            interval: Interval::new(0.0, f64::INFINITY),
            window: Interval::new(1e-8, 1e6),
            fiber_curvature: Some(1.0),
            product_h: 1.0,
            sch: None,
            table: None,
        }
    }

    pub fn sphere_cone() -> Self {
        Self {
            kind: AmbientKind::SphereCone,
            t0: std::f64::consts::FRAC_PI_2,
            interval: Interval::new(0.0, std::f64::consts::PI),
            window: Interval::new(1e-8, std::f64::consts::PI - 1e-8),
            fiber_curvature: Some(1.0),
            product_h: 1.0,
            sch: None,
            table: None,
        }
    }

    pub fn hyperbolic_horospheres() -> Self {
        Self {
            kind: AmbientKind::HyperbolicHorosphere,
            t0: 0.0,
            interval: Interval::new(f64::NEG_INFINITY, f64::INFINITY),
            window: Interval::new(-25.0, 25.0),
            fiber_curvature: Some(0.0),
            product_h: 1.0,
            sch: None,
            table: None,
        }
    }

    pub fn hyperbolic_hyperspheres() -> Self {
        Self {
            kind: AmbientKind::HyperbolicHypersphere,
            t0: 0.0,
            interval: Interval::new(f64::NEG_INFINITY, f64::INFINITY),
            window: Interval::new(-25.0, 25.0),
            fiber_curvature: Some(-1.0),
            product_h: 1.0,
            sch: None,
            table: None,
        }
    }

    pub fn product(h0: f64) -> Result<Self> {
        if !(h0 > 0.0) {
            return Err(Error::InvalidParams(format!(
                "product warping constant must be positive, got {h0}"
            )));
        }
        Ok(Self {
            kind: AmbientKind::Product,
            t0: 0.0,
            interval: Interval::new(f64::NEG_INFINITY, f64::INFINITY),
            window: Interval::new(-1e6, 1e6),
            fiber_curvature: Some(0.0),
            product_h: h0,
            sch: None,
            table: None,
        })
    }

    /// Schwarzschild-family space with the default working window r ≤ 200.
    pub fn schwarzschild(params: SchwarzschildParams) -> Result<Self> {
        Self::schwarzschild_with_window(params, 200.0)
    }

    pub fn schwarzschild_with_window(params: SchwarzschildParams, r_max: f64) -> Result<Self> {
        let data = SchwarzschildData::build(params, r_max, None)?;
        let t_max = data.t_max;
        Ok(Self {
            kind: AmbientKind::Schwarzschild,
            t0: 0.5 * t_max,
            interval: Interval::new(0.0, f64::INFINITY),
            window: Interval::new(0.0, t_max),
            fiber_curvature: None,
            product_h: 1.0,
            sch: Some(data),
            table: None,
        })
    }

    /// Warping function from (t, h) samples, interpolated by a monotone cubic.
    pub fn from_warping_table(samples: &[(f64, f64)]) -> Result<Self> {
        let (data, t0) = TableData::build(samples, None)?;
        let lo = data.h.x_min();
        let hi = data.h.x_max();
        Ok(Self {
            kind: AmbientKind::CustomTable,
            t0,
            interval: Interval::new(lo, hi),
            window: Interval::new(lo, hi),
            fiber_curvature: None,
            product_h: 1.0,
            sch: None,
            table: Some(data),
        })
    }

    /// Rebuilds the space with a different base point for `s` and `η̄`.
    pub fn with_base_point(mut self, t0: f64) -> Result<Self> {
        let admissible = match self.kind {
            // The cone vertex is an admissible anchor for η̄ (the integral
            // converges there) even though it sits on the boundary.
            AmbientKind::EuclideanCone | AmbientKind::SphereCone => {
                t0 >= self.interval.lo && t0 < self.interval.hi
            }
            AmbientKind::Schwarzschild | AmbientKind::CustomTable => self.window.contains(t0),
            _ => self.interval.contains(t0),
        };
        if !admissible {
            return Err(Error::OutOfDomain(format!(
                "base point {t0} outside the admissible range"
            )));
        }
        if let Some(data) = &mut self.sch {
            shift_to_zero(&mut data.s_of_t, t0);
            shift_to_zero(&mut data.eta_of_t, t0);
        }
        if let Some(data) = &mut self.table {
            shift_to_zero(&mut data.s_of_t, t0);
            shift_to_zero(&mut data.eta_of_t, t0);
        }
        self.t0 = t0;
        Ok(self)
    }

    pub fn kind(&self) -> AmbientKind {
        self.kind
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Finite window on which sampling-based operations run.
    pub fn working_window(&self) -> Interval {
        self.window
    }

    pub fn base_point(&self) -> f64 {
        self.t0
    }

    /// Declared constant curvature of the fiber, when the kind fixes one.
    pub fn fiber_curvature(&self) -> Option<f64> {
        self.fiber_curvature
    }

    pub fn schwarzschild_params(&self) -> Option<&SchwarzschildParams> {
        self.sch.as_ref().map(|d| &d.params)
    }

    /// Fiber dimension, when the space pins one (Schwarzschild family).
    pub fn fiber_dim(&self) -> Option<u32> {
        self.sch.as_ref().map(|d| d.params.m)
    }

    /// Describes the anchor convention used for `s` and `η̄`.
    pub fn anchor_note(&self) -> String {
        match self.kind {
            AmbientKind::HyperbolicHorosphere => format!(
                "s = -exp(-t) (anchored at t0 -> +inf); eta_bar anchored at t0 = {}",
                self.t0
            ),
            _ => format!("s and eta_bar anchored at t0 = {}", self.t0),
        }
    }

    fn domain(&self) -> Interval {
        match self.kind {
            AmbientKind::Schwarzschild | AmbientKind::CustomTable => self.window,
            _ => self.interval,
        }
    }

    fn guard_t(&self, t: f64) -> Result<()> {
        let dom = self.domain();
        if dom.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain(format!(
                "t = {t} outside ({}, {})",
                dom.lo, dom.hi
            )))
        }
    }

    /// Warping function h(t). Caller keeps `t` inside the working domain;
    /// use [`AmbientSpace::warping`] for the checked variant.
    pub fn h(&self, t: f64) -> f64 {
        match self.kind {
            AmbientKind::EuclideanCone => t,
            AmbientKind::SphereCone => t.sin(),
            AmbientKind::HyperbolicHorosphere => t.exp(),
            AmbientKind::HyperbolicHypersphere => t.cosh(),
            AmbientKind::Product => self.product_h,
            AmbientKind::Schwarzschild => self.sch.as_ref().unwrap().r_of_t.eval(t),
            AmbientKind::CustomTable => self.table.as_ref().unwrap().h.eval(t),
        }
    }

    /// h'(t).
    pub fn h_prime(&self, t: f64) -> f64 {
        match self.kind {
            AmbientKind::EuclideanCone => 1.0,
            AmbientKind::SphereCone => t.cos(),
            AmbientKind::HyperbolicHorosphere => t.exp(),
            AmbientKind::HyperbolicHypersphere => t.sinh(),
            AmbientKind::Product => 0.0,
            AmbientKind::Schwarzschild => {
                let d = self.sch.as_ref().unwrap();
                d.params.potential(d.r_of_t.eval(t)).max(0.0).sqrt()
            }
            AmbientKind::CustomTable => self.table.as_ref().unwrap().h.derivative(t),
        }
    }

    /// h''(t).
    pub fn h_second(&self, t: f64) -> f64 {
        match self.kind {
            AmbientKind::EuclideanCone => 0.0,
            AmbientKind::SphereCone => -t.sin(),
            AmbientKind::HyperbolicHorosphere => t.exp(),
            AmbientKind::HyperbolicHypersphere => t.cosh(),
            AmbientKind::Product => 0.0,
            AmbientKind::Schwarzschild => {
                let d = self.sch.as_ref().unwrap();
                0.5 * d.params.potential_d1(d.r_of_t.eval(t))
            }
            AmbientKind::CustomTable => self.table.as_ref().unwrap().h.second_derivative(t),
        }
    }

    /// Checked warping data (h, h', h'').
    pub fn warping(&self, t: f64) -> Result<(f64, f64, f64)> {
        self.guard_t(t)?;
        Ok((self.h(t), self.h_prime(t), self.h_second(t)))
    }

    fn sch_data(&self) -> Result<&SchwarzschildData> {
        self.sch.as_ref().ok_or(Error::WrongKind)
    }

    /// Schwarzschild potential V(r).
    pub fn potential(&self, r: f64) -> Result<f64> {
        let d = self.sch_data()?;
        if !(r > 0.0) {
            return Err(Error::OutOfDomain(format!("r = {r} must be positive")));
        }
        Ok(d.params.potential(r))
    }

    /// Horizon radius r0, the simple positive root of V.
    pub fn horizon_radius(&self) -> Result<f64> {
        Ok(self.sch_data()?.r0)
    }

    /// t(r) = ∫_{r0}^r dσ/√V(σ) via the substitution σ = r0 + τ².
    pub fn t_of_r(&self, r: f64) -> Result<f64> {
        let d = self.sch_data()?;
        if r <= d.r0 {
            return Err(Error::OutOfDomain(format!(
                "r = {r} at or below the horizon r0 = {}",
                d.r0
            )));
        }
        let params = d.params;
        let r0 = d.r0;
        let tau_end = (r - r0).sqrt();
        quad::integrate(
            |tau| {
                let v = params.potential_offset(r0, tau * tau).max(f64::MIN_POSITIVE);
                2.0 * tau / v.sqrt()
            },
            0.0,
            tau_end,
            1e-12,
            1e-11,
        )
    }

    /// r(t) = h(t), the monotone inverse of `t_of_r`.
    pub fn r_of_t(&self, t: f64) -> Result<f64> {
        let d = self.sch_data()?;
        if !(t > 0.0) {
            return Err(Error::OutOfDomain(format!("t = {t} must be positive")));
        }
        if t > d.t_max {
            return Err(Error::OutOfDomain(format!(
                "t = {t} beyond working window t_max = {} (r_max = {})",
                d.t_max, d.r_max
            )));
        }
        Ok(d.r_of_t.eval(t))
    }

    /// Flow parameter s(t) = ∫_{t0}^t dσ/h(σ).
    ///
    /// Horospheres use the closed form s = -e^{-t}, anchored at t0 → +∞.
    pub fn flow_param(&self, t: f64) -> Result<f64> {
        self.guard_t(t)?;
        match self.kind {
            AmbientKind::EuclideanCone => {
                if self.t0 <= 0.0 {
                    return Err(Error::InvalidParams(
                        "flow parameter needs a base point inside (0, ∞)".into(),
                    ));
                }
                Ok((t / self.t0).ln())
            }
            AmbientKind::SphereCone => {
                if self.t0 <= 0.0 || self.t0 >= std::f64::consts::PI {
                    return Err(Error::InvalidParams(
                        "flow parameter needs a base point inside (0, π)".into(),
                    ));
                }
                Ok(((t / 2.0).tan() / (self.t0 / 2.0).tan()).ln())
            }
            AmbientKind::HyperbolicHorosphere => Ok(-(-t).exp()),
            AmbientKind::HyperbolicHypersphere => Ok(gd(t) - gd(self.t0)),
            AmbientKind::Product => Ok((t - self.t0) / self.product_h),
            AmbientKind::Schwarzschild => Ok(self.sch.as_ref().unwrap().s_of_t.eval(t)),
            AmbientKind::CustomTable => Ok(self.table.as_ref().unwrap().s_of_t.eval(t)),
        }
    }

    /// Inverse of the flow parameter.
    pub fn t_of_flow_param(&self, s: f64) -> Result<f64> {
        match self.kind {
            AmbientKind::EuclideanCone => {
                if self.t0 <= 0.0 {
                    return Err(Error::InvalidParams(
                        "flow parameter needs a base point inside (0, ∞)".into(),
                    ));
                }
                Ok(self.t0 * s.exp())
            }
            AmbientKind::SphereCone => Ok(2.0 * ((self.t0 / 2.0).tan() * s.exp()).atan()),
            AmbientKind::HyperbolicHorosphere => {
                if s >= 0.0 {
                    return Err(Error::OutOfDomain(format!(
                        "flow parameter s = {s} must be negative for horospheres"
                    )));
                }
                Ok(-(-s).ln())
            }
            AmbientKind::HyperbolicHypersphere => {
                let angle = s + gd(self.t0);
                if angle.abs() >= std::f64::consts::FRAC_PI_2 {
                    return Err(Error::OutOfDomain(format!(
                        "flow parameter s = {s} outside the hypersphere range"
                    )));
                }
                Ok(angle.tan().asinh())
            }
            AmbientKind::Product => Ok(self.t0 + self.product_h * s),
            AmbientKind::Schwarzschild => {
                let d = self.sch.as_ref().unwrap();
                d.s_of_t.invert(s, 1e-13)
            }
            AmbientKind::CustomTable => {
                let d = self.table.as_ref().unwrap();
                d.s_of_t.invert(s, 1e-13)
            }
        }
    }

    /// Range of the flow parameter over the working domain.
    pub fn s_range(&self) -> (f64, f64) {
        match self.kind {
            AmbientKind::EuclideanCone | AmbientKind::SphereCone | AmbientKind::Product => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            AmbientKind::HyperbolicHorosphere => (f64::NEG_INFINITY, 0.0),
            AmbientKind::HyperbolicHypersphere => {
                let g0 = gd(self.t0);
                (
                    -std::f64::consts::FRAC_PI_2 - g0,
                    std::f64::consts::FRAC_PI_2 - g0,
                )
            }
            AmbientKind::Schwarzschild => {
                let d = self.sch.as_ref().unwrap();
                (d.s_of_t.eval(0.0), d.s_of_t.eval(d.t_max))
            }
            AmbientKind::CustomTable => {
                let d = self.table.as_ref().unwrap();
                (d.s_of_t.eval(d.h.x_min()), d.s_of_t.eval(d.h.x_max()))
            }
        }
    }

    /// η̄(t) = ∫_{t0}^t h(σ) dσ.
    pub fn eta_bar(&self, t: f64) -> Result<f64> {
        self.guard_t(t)?;
        match self.kind {
            AmbientKind::EuclideanCone => Ok(0.5 * (t * t - self.t0 * self.t0)),
            AmbientKind::SphereCone => Ok(self.t0.cos() - t.cos()),
            AmbientKind::HyperbolicHorosphere => Ok(t.exp() - self.t0.exp()),
            AmbientKind::HyperbolicHypersphere => Ok(t.sinh() - self.t0.sinh()),
            AmbientKind::Product => Ok(self.product_h * (t - self.t0)),
            AmbientKind::Schwarzschild => Ok(self.sch.as_ref().unwrap().eta_of_t.eval(t)),
            AmbientKind::CustomTable => Ok(self.table.as_ref().unwrap().eta_of_t.eval(t)),
        }
    }
}

/// Gudermannian function: antiderivative of sech.
fn gd(t: f64) -> f64 {
    t.sinh().atan()
}
