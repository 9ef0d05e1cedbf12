//! Soliton function ζ_c, soliton slices, the closed-form slice analysis for
//! Schwarzschild-type spaces, and a catalog of exact solitons with a residual
//! verifier.
//!
//! A slice {t = t̄} of `I ×_h P` is a soliton for `h ∂_t` with constant `c`
//! exactly when `ζ_c(t̄) = m h'(t̄) + c h(t̄)² = 0`. Mean curvature is
//! normalized as the trace of the second fundamental form divided by m, and
//! residuals are measured against the outward/upward unit normal.

use crate::ambient::{AmbientKind, AmbientSpace, SchwarzschildFamily, SchwarzschildParams};
use crate::error::{Error, Result};
use crate::num::roots;
use crate::shooting::{FiberBase, RadialModel};

/// An ambient space together with a soliton constant and dimension.
#[derive(Debug, Clone)]
pub struct SolitonProblem {
    pub space: AmbientSpace,
    pub c: f64,
    pub m: u32,
}

impl SolitonProblem {
    pub fn new(space: AmbientSpace, c: f64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("dimension m must be positive".into()));
        }
        if let Some(fiber_m) = space.fiber_dim() {
            if fiber_m != m {
                return Err(Error::InvalidParams(format!(
                    "m = {m} does not match the fiber dimension {fiber_m}"
                )));
            }
        }
        Ok(Self { space, c, m })
    }

    /// ζ_c(t) = m h'(t) + c h(t)².
    pub fn zeta(&self, t: f64) -> Result<f64> {
        self.space.warping(t)?;
        Ok(self.zeta_raw(t))
    }

    /// Unchecked ζ_c for scan loops; `t` must be inside the working domain.
    pub fn zeta_raw(&self, t: f64) -> f64 {
        let h = self.space.h(t);
        self.m as f64 * self.space.h_prime(t) + self.c * h * h
    }

    /// dζ_c/dt = m h'' + 2 c h h'.
    pub fn zeta_prime_raw(&self, t: f64) -> f64 {
        self.m as f64 * self.space.h_second(t)
            + 2.0 * self.c * self.space.h(t) * self.space.h_prime(t)
    }

    /// Size of the two competing terms of ζ_c, for relative root tolerances.
    pub fn zeta_scale(&self, t: f64) -> f64 {
        let h = self.space.h(t);
        1.0 + (self.m as f64 * self.space.h_prime(t)).abs() + (self.c * h * h).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceRoot {
    pub t: f64,
    /// h(t) at the root; the area radius for Schwarzschild-type spaces.
    pub r: f64,
    /// 1 for a sign-change root, 2 for a tangential dip.
    pub multiplicity: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceExistence {
    None,
    OneTangential,
    Two,
}

/// Closed-form slice analysis record for the Schwarzschild family.
#[derive(Debug, Clone)]
pub struct SliceClosedForm {
    pub existence: SliceExistence,
    /// Separator radius: the two roots straddle it when they exist.
    pub r_separator: Option<f64>,
    /// Lower critical radius (hyperbolic-topology ADS only).
    pub r_star_minus: Option<f64>,
    /// Discriminant of the critical-radius quadratic (ADS families).
    pub discriminant: Option<f64>,
    /// Signed distance from the tangential case; ~0 flags a borderline cell.
    pub margin: f64,
    pub note: String,
}

#[derive(Debug, Clone, Copy)]
pub struct SliceScanOptions {
    pub grid_n: usize,
    /// Absolute bisection tolerance on t.
    pub refine_tol: f64,
    /// |ζ| dip threshold (relative to the local ζ scale) flagging a
    /// tangential root without sign change.
    pub dip_tol: f64,
}

impl Default for SliceScanOptions {
    fn default() -> Self {
        Self {
            grid_n: 4096,
            refine_tol: 1e-12,
            dip_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SliceReport {
    pub roots: Vec<SliceRoot>,
    pub closed_form: Option<SliceClosedForm>,
    pub window: (f64, f64),
}

/// All roots of ζ_c on `window`, located on a scan grid and refined by
/// bisection; tangential (even-multiplicity) dips are flagged separately.
pub fn find_slices(
    problem: &SolitonProblem,
    window: (f64, f64),
    opts: &SliceScanOptions,
) -> Result<SliceReport> {
    let dom = problem.space.working_window();
    let lo = window.0.max(dom.lo);
    let hi = window.1.min(dom.hi);
    if !(hi > lo) {
        return Err(Error::OutOfDomain(format!(
            "scan window ({}, {}) does not intersect the working domain",
            window.0, window.1
        )));
    }
    let n = opts.grid_n.max(16);
    let step = (hi - lo) / n as f64;
    // Keep strictly inside the open domain.
    let ts: Vec<f64> = (0..=n)
        .map(|i| (lo + i as f64 * step).clamp(lo + 1e-12 * step, hi - 1e-12 * step))
        .collect();
    let zs: Vec<f64> = ts.iter().map(|&t| problem.zeta_raw(t)).collect();

    let mut roots_found = Vec::new();
    for i in 0..n {
        let (za, zb) = (zs[i], zs[i + 1]);
        if za == 0.0 {
            push_root(&mut roots_found, problem, ts[i], 1);
            continue;
        }
        if za.signum() != zb.signum() && zb != 0.0 {
            let t_root =
                roots::bisect(|t| problem.zeta_raw(t), ts[i], ts[i + 1], opts.refine_tol)?;
            push_root(&mut roots_found, problem, t_root, 1);
        }
    }
    if zs[n] == 0.0 {
        push_root(&mut roots_found, problem, ts[n], 1);
    }

    // Tangential dips: interior local minima of |ζ| below the dip tolerance
    // with equal signs on both sides.
    for i in 1..n {
        if zs[i].abs() < zs[i - 1].abs()
            && zs[i].abs() <= zs[i + 1].abs()
            && zs[i - 1].signum() == zs[i + 1].signum()
            && zs[i].signum() == zs[i - 1].signum()
        {
            let t_min = refine_minimum(problem, ts[i - 1], ts[i + 1]);
            let depth = problem.zeta_raw(t_min).abs();
            if depth < opts.dip_tol * problem.zeta_scale(t_min)
                && !near_existing(&roots_found, t_min, 4.0 * step)
            {
                push_root(&mut roots_found, problem, t_min, 2);
            }
        }
    }

    roots_found.sort_by(|a, b| a.t.total_cmp(&b.t));

    let closed_form = problem
        .space
        .schwarzschild_params()
        .and_then(|p| match p.family {
            SchwarzschildFamily::ReissnerNordstrom { .. } => None,
            _ => schwarzschild_slice_analysis(p, problem.c).ok(),
        });

    Ok(SliceReport {
        roots: roots_found,
        closed_form,
        window: (lo, hi),
    })
}

fn push_root(roots: &mut Vec<SliceRoot>, problem: &SolitonProblem, t: f64, multiplicity: u8) {
    roots.push(SliceRoot {
        t,
        r: problem.space.h(t),
        multiplicity,
    });
}

fn near_existing(roots: &[SliceRoot], t: f64, tol: f64) -> bool {
    roots.iter().any(|r| (r.t - t).abs() < tol)
}

/// Ternary search for the minimum of |ζ| on [a, b].
fn refine_minimum(problem: &SolitonProblem, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 * (1.0 + a.abs()) {
            break;
        }
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if problem.zeta_raw(m1).abs() < problem.zeta_raw(m2).abs() {
            b = m2;
        } else {
            a = m1;
        }
    }
    0.5 * (a + b)
}

/// Closed-form count of soliton slices of the Schwarzschild family: slices
/// with constant c < 0 correspond to roots of V(r) = c² r⁴ / m², which exist
/// exactly when the critical radius clears the family-specific threshold.
pub fn schwarzschild_slice_analysis(
    params: &SchwarzschildParams,
    c: f64,
) -> Result<SliceClosedForm> {
    params.validate()?;
    let m = params.m as f64;
    let mass = params.mass;

    if c >= 0.0 {
        return Ok(SliceClosedForm {
            existence: SliceExistence::None,
            r_separator: None,
            r_star_minus: None,
            discriminant: None,
            margin: f64::NEG_INFINITY,
            note: "soliton function is positive for c >= 0".into(),
        });
    }
    let c2 = c * c;
    const TANGENT_TOL: f64 = 1e-9;

    match params.family {
        SchwarzschildFamily::Plain => {
            let r_star = (mass * (m - 1.0) * m * m / (2.0 * c2)).powf(1.0 / (m + 3.0));
            let threshold = (mass * (m + 3.0) / 2.0).powf(1.0 / (m - 1.0));
            let margin = r_star / threshold - 1.0;
            let existence = if margin.abs() <= TANGENT_TOL {
                SliceExistence::OneTangential
            } else if margin > 0.0 {
                SliceExistence::Two
            } else {
                SliceExistence::None
            };
            Ok(SliceClosedForm {
                existence,
                r_separator: Some(r_star),
                r_star_minus: None,
                discriminant: None,
                margin,
                note: format!("plain family: r_* vs threshold {threshold:.12e}"),
            })
        }
        SchwarzschildFamily::AntiDeSitter { kbar } => {
            let disc =
                (m + 1.0) * (m + 1.0) + 4.0 * kbar as f64 * (m - 1.0) * (c2 / (m * m)) * (m + 3.0);
            if disc < 0.0 {
                return Ok(SliceClosedForm {
                    existence: SliceExistence::None,
                    r_separator: None,
                    r_star_minus: None,
                    discriminant: Some(disc),
                    margin: f64::NEG_INFINITY,
                    note: "negative discriminant: no critical radius".into(),
                });
            }
            let sq = disc.sqrt();
            let x_plus = (m * m / c2) * (m + 1.0 + sq) / (2.0 * (m + 3.0));
            let r_plus = x_plus.sqrt();
            // Existence reads m(m-1)/r^{m+1} <= (2c²/m²)r² - 1 at r_{*,+}.
            let gap_plus =
                (2.0 * c2 / (m * m)) * x_plus - 1.0 - mass * (m - 1.0) / r_plus.powf(m + 1.0);

            if kbar >= 0 {
                let margin = gap_plus;
                let existence = if margin.abs() <= TANGENT_TOL {
                    SliceExistence::OneTangential
                } else if margin > 0.0 {
                    SliceExistence::Two
                } else {
                    SliceExistence::None
                };
                Ok(SliceClosedForm {
                    existence,
                    r_separator: Some(r_plus),
                    r_star_minus: None,
                    discriminant: Some(disc),
                    margin,
                    note: format!("ADS family, kbar = {kbar}"),
                })
            } else {
                let x_minus = (m * m / c2) * (m + 1.0 - sq) / (2.0 * (m + 3.0));
                let r_minus = x_minus.sqrt();
                let gap_minus = mass * (m - 1.0) / r_minus.powf(m + 1.0)
                    - ((2.0 * c2 / (m * m)) * x_minus - 1.0);
                let margin = gap_plus.min(gap_minus);
                let existence = if margin < -TANGENT_TOL {
                    SliceExistence::None
                } else if margin.abs() <= TANGENT_TOL {
                    SliceExistence::OneTangential
                } else {
                    SliceExistence::Two
                };
                Ok(SliceClosedForm {
                    existence,
                    r_separator: Some(r_plus),
                    r_star_minus: Some(r_minus),
                    discriminant: Some(disc),
                    margin,
                    note: "ADS family, hyperbolic topology".into(),
                })
            }
        }
        SchwarzschildFamily::ReissnerNordstrom { .. } => Err(Error::InvalidParams(
            "closed-form slice analysis covers the plain and ADS families".into(),
        )),
    }
}

/// Exact solitons: closed-form solutions used as verification anchors.
#[derive(Debug, Clone)]
pub enum ExactSoliton {
    /// Planar translator x = -(1/k) log cos(k y), sampled with derivatives.
    GrimReaper {
        k: f64,
        taus: Vec<f64>,
        xs: Vec<f64>,
        dx_dtau: Vec<f64>,
    },
    /// Round sphere shrinking under the position field: m/R = |c| R.
    ShrinkerSphere { m: u32, c: f64, radius: f64 },
    /// Cylinder over S^k: k/R = |c| R.
    ShrinkerCylinder {
        k_sphere: u32,
        m: u32,
        c: f64,
        radius: f64,
    },
    /// Horosphere slice {t = log(-m/c)} of the e^t foliation.
    HorosphereSlice { m: u32, c: f64, t: f64 },
    /// Hypersphere slices of the cosh t foliation (roots of c sinh² + m sinh + c).
    HypersphereSlice { m: u32, c: f64, ts: Vec<f64> },
    /// Local series of the rotationally symmetric graph soliton at the pole:
    /// u(ρ) = u0 + f(u0) ρ²/(2m) + O(ρ⁴).
    BowlSeries {
        m: u32,
        u0: f64,
        rhos: Vec<f64>,
        us: Vec<f64>,
        dus: Vec<f64>,
        fs: Vec<f64>,
    },
}

impl ExactSoliton {
    /// Grim reaper curve with constant `k`, sampled on |τ| ≤ (π/2 - 0.05)/|k|.
    pub fn grim_reaper(k: f64, samples: usize) -> Result<Self> {
        let tau_max = (std::f64::consts::FRAC_PI_2 - 0.05) / k.abs();
        Self::grim_reaper_with_window(k, tau_max, samples)
    }

    pub fn grim_reaper_with_window(k: f64, tau_max: f64, samples: usize) -> Result<Self> {
        if k == 0.0 {
            return Err(Error::InvalidParams("grim reaper needs k != 0".into()));
        }
        if k.abs() * tau_max >= std::f64::consts::FRAC_PI_2 - 1e-3 {
            return Err(Error::WindowTooWide(format!(
                "|k| tau_max = {} reaches the asymptote",
                k.abs() * tau_max
            )));
        }
        let n = samples.max(5);
        let mut taus = Vec::with_capacity(n);
        let mut xs = Vec::with_capacity(n);
        let mut dx = Vec::with_capacity(n);
        for i in 0..n {
            let tau = -tau_max + 2.0 * tau_max * i as f64 / (n - 1) as f64;
            taus.push(tau);
            xs.push(-(k * tau).cos().ln() / k);
            dx.push((k * tau).tan());
        }
        Ok(Self::GrimReaper {
            k,
            taus,
            xs,
            dx_dtau: dx,
        })
    }

    pub fn shrinker_sphere(m: u32, c: f64) -> Result<Self> {
        if c >= 0.0 {
            return Err(Error::InvalidParams("shrinkers need c < 0".into()));
        }
        Ok(Self::ShrinkerSphere {
            m,
            c,
            radius: (m as f64 / -c).sqrt(),
        })
    }

    pub fn shrinker_cylinder(k_sphere: u32, m: u32, c: f64) -> Result<Self> {
        if c >= 0.0 {
            return Err(Error::InvalidParams("shrinkers need c < 0".into()));
        }
        if k_sphere == 0 || k_sphere >= m {
            return Err(Error::InvalidParams(format!(
                "cylinder sphere dimension must satisfy 1 <= k < m, got k = {k_sphere}, m = {m}"
            )));
        }
        Ok(Self::ShrinkerCylinder {
            k_sphere,
            m,
            c,
            radius: (k_sphere as f64 / -c).sqrt(),
        })
    }

    pub fn horosphere_slice(m: u32, c: f64) -> Result<Self> {
        if c >= 0.0 {
            return Err(Error::InvalidParams(
                "horosphere slices are solitons only for c < 0".into(),
            ));
        }
        Ok(Self::HorosphereSlice {
            m,
            c,
            t: (m as f64 / -c).ln(),
        })
    }

    /// Soliton slices of the hypersphere foliation; empty when |c| > m/2.
    pub fn hypersphere_slices(m: u32, c: f64) -> Self {
        let mf = m as f64;
        let ts = if c == 0.0 {
            vec![0.0]
        } else {
            let disc = mf * mf - 4.0 * c * c;
            if disc < 0.0 {
                Vec::new()
            } else if disc == 0.0 {
                vec![(-mf / (2.0 * c)).asinh()]
            } else {
                let mut v = vec![
                    ((-mf - disc.sqrt()) / (2.0 * c)).asinh(),
                    ((-mf + disc.sqrt()) / (2.0 * c)).asinh(),
                ];
                v.sort_by(f64::total_cmp);
                v
            }
        };
        Self::HypersphereSlice { m, c, ts }
    }

    /// Fourth-order pole expansion of the radial graph equation around u0.
    pub fn bowl_series(
        problem: &SolitonProblem,
        u0: f64,
        rho_max: f64,
        samples: usize,
    ) -> Result<Self> {
        let m = problem.m;
        let t = problem.space.t_of_flow_param(u0)?;
        let f0 = problem.zeta_raw(t);
        // df/ds = ζ'(t) h(t).
        let f1 = problem.zeta_prime_raw(t) * problem.space.h(t);
        let mf = m as f64;
        let a = f0 / (2.0 * mf);
        let b = (a * (f1 + 4.0 * a * f0) - 8.0 * (mf - 1.0) * a * a * a) / (4.0 * (mf + 2.0));

        let n = samples.max(5);
        let mut rhos = Vec::with_capacity(n);
        let mut us = Vec::with_capacity(n);
        let mut dus = Vec::with_capacity(n);
        let mut fs = Vec::with_capacity(n);
        for i in 0..n {
            let rho = rho_max * i as f64 / (n - 1) as f64;
            let u = u0 + rho * rho * (a + b * rho * rho);
            rhos.push(rho);
            us.push(u);
            dus.push(2.0 * a * rho + 4.0 * b * rho * rho * rho);
            let tt = problem.space.t_of_flow_param(u)?;
            fs.push(problem.zeta_raw(tt));
        }
        Ok(Self::BowlSeries {
            m,
            u0,
            rhos,
            us,
            dus,
            fs,
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::GrimReaper { .. } => "grim-reaper",
            Self::ShrinkerSphere { .. } => "shrinker-sphere",
            Self::ShrinkerCylinder { .. } => "shrinker-cylinder",
            Self::HorosphereSlice { .. } => "horosphere-slice",
            Self::HypersphereSlice { .. } => "hypersphere-slice",
            Self::BowlSeries { .. } => "bowl-series",
        }
    }

    /// Maximum residual of the defining soliton identity over the samples.
    pub fn residual(&self) -> Result<f64> {
        match self {
            Self::GrimReaper {
                k, taus, dx_dtau, ..
            } => plane_curve_residual(*k, taus, dx_dtau),
            Self::ShrinkerSphere { m, c, radius } => Ok((*m as f64 / radius + c * radius).abs()),
            Self::ShrinkerCylinder {
                k_sphere, c, radius, ..
            } => Ok((*k_sphere as f64 / radius + c * radius).abs()),
            Self::HorosphereSlice { m, c, t } => {
                let problem =
                    SolitonProblem::new(AmbientSpace::hyperbolic_horospheres(), *c, *m)?;
                problem.zeta(*t).map(f64::abs)
            }
            Self::HypersphereSlice { m, c, ts } => {
                let problem =
                    SolitonProblem::new(AmbientSpace::hyperbolic_hyperspheres(), *c, *m)?;
                let mut worst: f64 = 0.0;
                for &t in ts {
                    worst = worst.max(problem.zeta(t)?.abs());
                }
                Ok(worst)
            }
            Self::BowlSeries {
                m,
                rhos,
                us,
                dus,
                fs,
                ..
            } => {
                let model = RadialModel::new(FiberBase::Euclidean, *m);
                radial_residual_values(&model, rhos, us, dus, fs)
            }
        }
    }
}

/// Residual of the plane translator identity (arctan x')' = k for a curve
/// given as x(τ) with derivative samples; centered differences on the
/// interior.
pub fn plane_curve_residual(k: f64, taus: &[f64], dx_dtau: &[f64]) -> Result<f64> {
    if taus.len() < 3 || taus.len() != dx_dtau.len() {
        return Err(Error::InsufficientSamples(format!(
            "need >= 3 matched samples, got {} and {}",
            taus.len(),
            dx_dtau.len()
        )));
    }
    let mut worst: f64 = 0.0;
    for i in 1..taus.len() - 1 {
        let dphi = dx_dtau[i + 1].atan() - dx_dtau[i - 1].atan();
        let dt = taus[i + 1] - taus[i - 1];
        worst = worst.max((dphi / dt - k).abs());
    }
    Ok(worst)
}

/// Residual of the radial graph equation
/// u'' = (1 + u'²) f(u) - snn(ρ) (1 + u'²) u'
/// with f already evaluated along the samples.
pub fn radial_residual_values(
    model: &RadialModel,
    rhos: &[f64],
    us: &[f64],
    dus: &[f64],
    fs: &[f64],
) -> Result<f64> {
    let n = rhos.len();
    if n < 3 || us.len() != n || dus.len() != n || fs.len() != n {
        return Err(Error::InsufficientSamples(
            "radial residual needs >= 3 matched samples".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for i in 1..n - 1 {
        if rhos[i] <= 0.0 {
            continue;
        }
        let upp = (dus[i + 1] - dus[i - 1]) / (rhos[i + 1] - rhos[i - 1]);
        let grad = 1.0 + dus[i] * dus[i];
        let rhs = grad * fs[i] - model.snn(rhos[i]) * grad * dus[i];
        worst = worst.max((upp - rhs).abs());
    }
    Ok(worst)
}

/// Residual of an exact soliton against the problem it claims to solve.
pub fn soliton_residual(problem: &SolitonProblem, solution: &ExactSoliton) -> Result<f64> {
    match solution {
        ExactSoliton::HorosphereSlice { t, .. } => {
            if problem.space.kind() != AmbientKind::HyperbolicHorosphere {
                return Err(Error::InvalidParams(
                    "horosphere slice checked against a different ambient space".into(),
                ));
            }
            problem.zeta(*t).map(f64::abs)
        }
        ExactSoliton::HypersphereSlice { ts, .. } => {
            if problem.space.kind() != AmbientKind::HyperbolicHypersphere {
                return Err(Error::InvalidParams(
                    "hypersphere slice checked against a different ambient space".into(),
                ));
            }
            let mut worst: f64 = 0.0;
            for &t in ts {
                worst = worst.max(problem.zeta(t)?.abs());
            }
            Ok(worst)
        }
        other => other.residual(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        // Horospheres: ζ_c(t) = m e^t + c e^{2t}; root at log(-m/c).
        let p = SolitonProblem::new(AmbientSpace::hyperbolic_horospheres(), -2.0, 2).unwrap();
        assert!(p.zeta(0.0).unwrap().abs() < 1e-14);
        // Hyperspheres: ζ_0(0) = m sinh 0 = 0.
        let p = SolitonProblem::new(AmbientSpace::hyperbolic_hyperspheres(), 0.0, 3).unwrap();
        assert!(p.zeta(0.0).unwrap().abs() < 1e-14);
        // Product h ≡ 1: ζ_c ≡ c.
        let p = SolitonProblem::new(AmbientSpace::product(1.0).unwrap(), 0.7, 2).unwrap();
        assert!((p.zeta(3.0).unwrap() - 0.7).abs() < 1e-14);
    }

    #[test]
    fn zeta_affine_in_c() {
        let space = AmbientSpace::hyperbolic_hyperspheres();
        for &t in &[-1.0, 0.3, 2.0] {
            let z0 = SolitonProblem::new(space.clone(), 0.0, 3)
                .unwrap()
                .zeta(t)
                .unwrap();
            for &c in &[-2.0, -0.5, 1.5] {
                let zc = SolitonProblem::new(space.clone(), c, 3)
                    .unwrap()
                    .zeta(t)
                    .unwrap();
                let h = space.h(t);
                assert!((zc - (z0 + c * h * h)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn horosphere_slice_roots() {
        for &(m, c) in &[(2u32, -1.0f64), (2, -2.0), (2, -5.0)] {
            let p = SolitonProblem::new(AmbientSpace::hyperbolic_horospheres(), c, m).unwrap();
            let report = find_slices(&p, (-10.0, 10.0), &SliceScanOptions::default()).unwrap();
            assert_eq!(report.roots.len(), 1, "c = {c}");
            let expected = (m as f64 / -c).ln();
            assert!(
                (report.roots[0].t - expected).abs() < 1e-10,
                "c = {c}: got {}, expected {expected}",
                report.roots[0].t
            );
        }
        // No roots for c >= 0.
        for &c in &[0.0, 1.0] {
            let p = SolitonProblem::new(AmbientSpace::hyperbolic_horospheres(), c, 2).unwrap();
            let report = find_slices(&p, (-10.0, 10.0), &SliceScanOptions::default()).unwrap();
            assert!(report.roots.is_empty(), "c = {c}");
        }
    }

    #[test]
    fn hypersphere_trichotomy() {
        // c = 0: unique root t = 0.
        let p = SolitonProblem::new(AmbientSpace::hyperbolic_hyperspheres(), 0.0, 2).unwrap();
        let report = find_slices(&p, (-10.0, 10.0), &SliceScanOptions::default()).unwrap();
        assert_eq!(report.roots.len(), 1);
        assert!(report.roots[0].t.abs() < 1e-10);
        // |c| > m/2: no roots at all.
        for &c in &[1.1, -1.1] {
            let p = SolitonProblem::new(AmbientSpace::hyperbolic_hyperspheres(), c, 2).unwrap();
            let report = find_slices(&p, (-10.0, 10.0), &SliceScanOptions::default()).unwrap();
            assert!(report.roots.is_empty(), "c = {c}: {:?}", report.roots);
        }
        // 0 < |c| < m/2 with c < 0: two roots, matching the sinh quadratic.
        let p = SolitonProblem::new(AmbientSpace::hyperbolic_hyperspheres(), -0.8, 2).unwrap();
        let report = find_slices(&p, (-10.0, 10.0), &SliceScanOptions::default()).unwrap();
        let exact = ExactSoliton::hypersphere_slices(2, -0.8);
        let ExactSoliton::HypersphereSlice { ts, .. } = &exact else {
            unreachable!()
        };
        assert_eq!(report.roots.len(), ts.len());
        for (root, t_exact) in report.roots.iter().zip(ts) {
            assert!((root.t - t_exact).abs() < 1e-9);
        }
    }

    #[test]
    fn schwarzschild_two_root_instance() {
        // m = 3, mass = 1/2, c = -1: ζ_c = 0 reduces to x³ - 9x + 9 = 0 in
        // x = r². Bisection on the cubic is the oracle.
        let cubic = |x: f64| x * x * x - 9.0 * x + 9.0;
        let x1 = roots::bisect(cubic, 1.0, 1.3, 1e-13).unwrap();
        let x2 = roots::bisect(cubic, 2.0, 2.4, 1e-13).unwrap();
        let (r1, r2) = (x1.sqrt(), x2.sqrt());

        let space = AmbientSpace::schwarzschild(SchwarzschildParams::plain(3, 0.5)).unwrap();
        let p = SolitonProblem::new(space, -1.0, 3).unwrap();
        let hi = p.space.working_window().hi.min(10.0);
        let report = find_slices(&p, (1e-4, hi), &SliceScanOptions::default()).unwrap();
        assert_eq!(report.roots.len(), 2, "{:?}", report.roots);
        assert!(
            (report.roots[0].r - r1).abs() < 1e-3,
            "r1 = {r1} vs {}",
            report.roots[0].r
        );
        assert!(
            (report.roots[1].r - r2).abs() < 1e-3,
            "r2 = {r2} vs {}",
            report.roots[1].r
        );

        // Closed form: two roots straddling r_* = 4.5^{1/6}.
        let cf = report.closed_form.unwrap();
        assert_eq!(cf.existence, SliceExistence::Two);
        let r_star = cf.r_separator.unwrap();
        assert!((r_star - 4.5f64.powf(1.0 / 6.0)).abs() < 1e-12);
        assert!(report.roots[0].r < r_star && r_star < report.roots[1].r);
    }

    #[test]
    fn schwarzschild_sign_structure() {
        // For c < 0 the soliton function starts at ζ(0⁺) = c r0² < 0, rises
        // through the first root, and falls below zero again after the
        // second (ζ → -|c| r² for large r).
        let space = AmbientSpace::schwarzschild(SchwarzschildParams::plain(3, 0.5)).unwrap();
        let p = SolitonProblem::new(space, -1.0, 3).unwrap();
        let report = find_slices(&p, (1e-4, 10.0), &SliceScanOptions::default()).unwrap();
        let (t1, t2) = (report.roots[0].t, report.roots[1].t);
        assert!(p.zeta_raw(0.5 * t1) < 0.0);
        assert!(p.zeta_raw(0.5 * (t1 + t2)) > 0.0);
        assert!(p.zeta_raw(t2 + 1.0) < 0.0);
    }

    #[test]
    fn schwarzschild_closed_form_cases() {
        // Two roots for c = -1.
        let cf = schwarzschild_slice_analysis(&SchwarzschildParams::plain(3, 0.5), -1.0).unwrap();
        assert_eq!(cf.existence, SliceExistence::Two);
        assert!((cf.r_separator.unwrap() - 1.2849).abs() < 1e-4);

        // Tangential case c = -2/√3: r_* equals the threshold √1.5.
        let c_eq = -2.0 / 3.0f64.sqrt();
        let cf = schwarzschild_slice_analysis(&SchwarzschildParams::plain(3, 0.5), c_eq).unwrap();
        assert_eq!(cf.existence, SliceExistence::OneTangential);
        assert!((cf.r_separator.unwrap() - 1.5f64.sqrt()).abs() < 1e-9);

        // No slices for c >= 0.
        let cf = schwarzschild_slice_analysis(&SchwarzschildParams::plain(3, 0.5), 1.0).unwrap();
        assert_eq!(cf.existence, SliceExistence::None);
    }

    #[test]
    fn tangential_slice_detected_as_dip() {
        // Equality case c = -2/√3 for m = 3, mass = 1/2: ζ_c grazes zero at
        // r = √1.5 without a sign change; the scan must flag one
        // multiplicity-2 root there.
        let c = -2.0 / 3.0f64.sqrt();
        let space = AmbientSpace::schwarzschild(SchwarzschildParams::plain(3, 0.5)).unwrap();
        let p = SolitonProblem::new(space, c, 3).unwrap();
        let t_hi = p.space.t_of_r(4.0).unwrap();
        let report = find_slices(&p, (1e-5, t_hi), &SliceScanOptions::default()).unwrap();
        assert_eq!(report.roots.len(), 1, "{:?}", report.roots);
        assert_eq!(report.roots[0].multiplicity, 2);
        assert!((report.roots[0].r - 1.5f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn closed_form_matches_scan_on_grid() {
        // Root counts agree with the closed-form verdict over a parameter
        // grid, skipping borderline cells.
        for m in [3u32, 4] {
            for i in 0..5 {
                let mass = 0.1 + 1.9 * i as f64 / 4.0;
                for j in 0..5 {
                    let c = -3.0 + 2.95 * j as f64 / 4.0;
                    let cf = schwarzschild_slice_analysis(&SchwarzschildParams::plain(m, mass), c)
                        .unwrap();
                    if cf.margin.abs() < 1e-3 {
                        continue;
                    }
                    let space =
                        AmbientSpace::schwarzschild(SchwarzschildParams::plain(m, mass)).unwrap();
                    let p = SolitonProblem::new(space, c, m).unwrap();
                    let r_hi = (m as f64 / c.abs()).sqrt() * 1.5 + 2.0;
                    let t_hi = p
                        .space
                        .t_of_r(r_hi)
                        .unwrap()
                        .min(p.space.working_window().hi);
                    let report =
                        find_slices(&p, (1e-5, t_hi), &SliceScanOptions::default()).unwrap();
                    let expected = match cf.existence {
                        SliceExistence::None => 0,
                        SliceExistence::OneTangential => 1,
                        SliceExistence::Two => 2,
                    };
                    assert_eq!(
                        report.roots.len(),
                        expected,
                        "m={m}, mass={mass}, c={c}, margin={}",
                        cf.margin
                    );
                }
            }
        }
    }

    #[test]
    fn ads_closed_form_matches_scan() {
        for kbar in [-1i8, 0, 1] {
            for i in 0..4 {
                let mass = 0.2 + 1.2 * i as f64 / 3.0;
                for j in 0..6 {
                    let c = -2.5 + 2.3 * j as f64 / 5.0;
                    let params = SchwarzschildParams::ads(3, mass, kbar);
                    let cf = schwarzschild_slice_analysis(&params, c).unwrap();
                    if cf.margin.abs() < 1e-3 {
                        continue;
                    }
                    let space = AmbientSpace::schwarzschild(params).unwrap();
                    let p = SolitonProblem::new(space, c, 3).unwrap();
                    // Roots satisfy c²r⁴/m² = V ≤ kbar + r², so r stays below
                    // about m/|c| for the ADS families.
                    let r_hi = 3.0 / c.abs().max(0.05) + 3.0;
                    let t_hi = p
                        .space
                        .t_of_r(r_hi.min(150.0))
                        .unwrap()
                        .min(p.space.working_window().hi);
                    let report =
                        find_slices(&p, (1e-5, t_hi), &SliceScanOptions::default()).unwrap();
                    let expected = match cf.existence {
                        SliceExistence::None => 0,
                        SliceExistence::OneTangential => 1,
                        SliceExistence::Two => 2,
                    };
                    assert_eq!(
                        report.roots.len(),
                        expected,
                        "kbar={kbar}, mass={mass}, c={c}, margin={}",
                        cf.margin
                    );
                }
            }
        }
    }

    #[test]
    fn reported_roots_satisfy_zeta_bound() {
        // |ζ_c(t̄)| < 1e-9 · (1 + |m h'| + |c| h²) at every reported root.
        let cases: Vec<SolitonProblem> = vec![
            SolitonProblem::new(AmbientSpace::hyperbolic_horospheres(), -2.0, 2).unwrap(),
            SolitonProblem::new(AmbientSpace::hyperbolic_hyperspheres(), -0.7, 3).unwrap(),
            SolitonProblem::new(
                AmbientSpace::schwarzschild(SchwarzschildParams::plain(3, 0.5)).unwrap(),
                -1.0,
                3,
            )
            .unwrap(),
        ];
        for p in &cases {
            let w = p.space.working_window();
            let report = find_slices(
                &p,
                (w.lo.max(-12.0), w.hi.min(12.0)),
                &SliceScanOptions::default(),
            )
            .unwrap();
            assert!(!report.roots.is_empty());
            for root in &report.roots {
                let z = p.zeta_raw(root.t).abs();
                assert!(
                    z < 1e-9 * p.zeta_scale(root.t),
                    "t = {}: |zeta| = {z:.3e}",
                    root.t
                );
            }
        }
    }

    #[test]
    fn grim_reaper_samples() {
        let gr = ExactSoliton::grim_reaper(1.0, 2001).unwrap();
        let ExactSoliton::GrimReaper { taus, xs, .. } = &gr else {
            unreachable!()
        };
        // Vertex at the middle sample.
        let mid = taus.len() / 2;
        assert!(taus[mid].abs() < 1e-12 && xs[mid].abs() < 1e-12);
        // Closed form at τ = π/4: x = (1/2) log 2.
        let idx = taus
            .iter()
            .position(|&t| (t - std::f64::consts::FRAC_PI_4).abs() < 2e-3)
            .unwrap();
        assert!((xs[idx] - 0.5 * 2.0f64.ln()).abs() < 5e-3);
        assert!(gr.residual().unwrap() < 1e-8);
    }

    #[test]
    fn grim_reaper_rejects_wide_window() {
        assert!(matches!(
            ExactSoliton::grim_reaper_with_window(1.0, std::f64::consts::FRAC_PI_2, 100),
            Err(Error::WindowTooWide(_))
        ));
        assert!(ExactSoliton::grim_reaper(0.0, 100).is_err());
    }

    #[test]
    fn shrinker_identities() {
        let s = ExactSoliton::shrinker_sphere(2, -1.0).unwrap();
        let ExactSoliton::ShrinkerSphere { radius, .. } = s else {
            unreachable!()
        };
        assert!((radius - 2.0f64.sqrt()).abs() < 1e-14);
        assert!(s.residual().unwrap() < 1e-10);

        let cyl = ExactSoliton::shrinker_cylinder(1, 2, -1.0).unwrap();
        assert!(cyl.residual().unwrap() < 1e-10);

        assert!(ExactSoliton::shrinker_sphere(2, 0.5).is_err());
        assert!(ExactSoliton::shrinker_cylinder(2, 2, -1.0).is_err());
    }

    #[test]
    fn straight_line_is_minimal() {
        // x(τ) = 3τ + 1: (arctan x')' = 0 = k for c = 0.
        let taus: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let dxs: Vec<f64> = taus.iter().map(|_| 3.0).collect();
        assert!(plane_curve_residual(0.0, &taus, &dxs).unwrap() < 1e-14);
    }

    #[test]
    fn bowl_series_residual() {
        let p = SolitonProblem::new(AmbientSpace::product(1.0).unwrap(), 1.0, 2).unwrap();
        let bowl = ExactSoliton::bowl_series(&p, 0.0, 0.01, 201).unwrap();
        assert!(bowl.residual().unwrap() < 1e-8);
        // Leading coefficient: u(ρ) ≈ ρ²/4 for f ≡ 1, m = 2.
        let ExactSoliton::BowlSeries { rhos, us, .. } = &bowl else {
            unreachable!()
        };
        let last = rhos.len() - 1;
        let coeff = us[last] / (rhos[last] * rhos[last]);
        assert!((coeff - 0.25).abs() < 1e-4);
    }

    #[test]
    fn residual_rejects_mismatched_space() {
        let horo = ExactSoliton::horosphere_slice(2, -2.0).unwrap();
        let wrong = SolitonProblem::new(AmbientSpace::product(1.0).unwrap(), -2.0, 2).unwrap();
        assert!(soliton_residual(&wrong, &horo).is_err());
        let right = SolitonProblem::new(AmbientSpace::hyperbolic_horospheres(), -2.0, 2).unwrap();
        assert!(soliton_residual(&right, &horo).unwrap() < 1e-12);
    }

    #[test]
    fn problem_validates_dimension() {
        let space = AmbientSpace::schwarzschild(SchwarzschildParams::plain(3, 0.5)).unwrap();
        assert!(SolitonProblem::new(space.clone(), 1.0, 4).is_err());
        assert!(SolitonProblem::new(space, 1.0, 3).is_ok());
    }
}
