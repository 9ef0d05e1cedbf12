//! Bottom of the spectrum of the soliton stability operator on 1D reductions,
//! plus volume-growth classifiers for parabolicity arguments.
//!
//! Sign convention: the stability operator is L = Δ_f + q and the soliton is
//! stable when λ₁(L) ≥ 0. The discrete operator is -(v z')'/v - q assembled
//! from its quadratic form, so constant potentials are reproduced exactly in
//! the Neumann/closed class and Rayleigh quotients of returned eigenfunctions
//! match λ₁ to rounding.

use crate::error::{Error, Result};
use crate::num::tridiag;
use crate::soliton::SolitonProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Dirichlet,
    Neumann,
    /// Compact-fiber model: Neumann conditions, constant mode retained.
    Closed,
}

/// Weighted Sturm–Liouville data: -(v z')'/v - q on [a, b].
pub struct SLProblem {
    v: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    q: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub a: f64,
    pub b: f64,
    pub boundary: Boundary,
}

impl std::fmt::Debug for SLProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SLProblem")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("boundary", &self.boundary)
            .finish()
    }
}

impl SLProblem {
    pub fn new(
        v: impl Fn(f64) -> f64 + Send + Sync + 'static,
        q: impl Fn(f64) -> f64 + Send + Sync + 'static,
        a: f64,
        b: f64,
        boundary: Boundary,
    ) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidParams(format!("empty interval [{a}, {b}]")));
        }
        Ok(Self {
            v: Box::new(v),
            q: Box::new(q),
            a,
            b,
            boundary,
        })
    }

    pub fn weight(&self, x: f64) -> f64 {
        (self.v)(x)
    }

    pub fn potential_fn(&self, x: f64) -> f64 {
        (self.q)(x)
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumEstimate {
    /// Smallest eigenvalue of the discrete operator at the finer grid.
    pub lambda1: f64,
    /// Richardson-extrapolated value across the two grids.
    pub lambda1_extrapolated: f64,
    /// |λ(2n) - λ(n)| / 3: second-order error estimate.
    pub richardson_error: f64,
    /// Ground state on the finer grid, positive in the interior.
    pub eigenfunction: Vec<(f64, f64)>,
    pub grid_n: usize,
}

/// Discrete quadratic form pieces on a uniform grid of n cells.
struct Discretization {
    xs: Vec<f64>,
    /// Lumped masses w_i v_i.
    mass: Vec<f64>,
    diag: Vec<f64>,
    off: Vec<f64>,
}

fn discretize(problem: &SLProblem, n: usize) -> Result<Discretization> {
    let h = (problem.b - problem.a) / n as f64;
    let (xs, first): (Vec<f64>, usize) = match problem.boundary {
        Boundary::Dirichlet => ((1..n).map(|i| problem.a + i as f64 * h).collect(), 1),
        _ => ((0..=n).map(|i| problem.a + i as f64 * h).collect(), 0),
    };
    let sz = xs.len();

    // Midpoint fluxes v_{i+1/2} across the whole interval.
    let flux: Vec<f64> = (0..n)
        .map(|i| problem.weight(problem.a + (i as f64 + 0.5) * h))
        .collect();
    for (i, &f) in flux.iter().enumerate() {
        if !(f > 0.0) {
            return Err(Error::NonPositiveWeight(format!(
                "v({}) = {f}",
                problem.a + (i as f64 + 0.5) * h
            )));
        }
    }

    let mut mass = vec![0.0; sz];
    let mut diag = vec![0.0; sz];
    let mut off = vec![0.0; sz - 1];

    for (j, &x) in xs.iter().enumerate() {
        let v_node = problem.weight(x);
        if !(v_node > 0.0) {
            return Err(Error::NonPositiveWeight(format!("v({x}) = {v_node}")));
        }
        let is_edge_cell = matches!(problem.boundary, Boundary::Neumann | Boundary::Closed)
            && (j == 0 || j == sz - 1);
        let w = if is_edge_cell { 0.5 * h } else { h };
        mass[j] = w * v_node;

        // Flux stiffness: cell j couples through interfaces j-1+first and j+first.
        let i_global = j + first;
        let mut k = 0.0;
        if i_global >= 1 {
            k += flux[i_global - 1] / h;
        }
        if i_global < flux.len() {
            k += flux[i_global] / h;
        }
        // Dirichlet keeps the full stiffness of both interfaces; Neumann edge
        // cells only see one.
        if matches!(problem.boundary, Boundary::Dirichlet) {
            k = flux[i_global - 1] / h + flux[i_global] / h;
        } else if j == 0 {
            k = flux[0] / h;
        } else if j == sz - 1 {
            k = flux[n - 1] / h;
        }
        diag[j] = k - mass[j] * problem.potential_fn(x);
    }
    for (j, entry) in off.iter_mut().enumerate() {
        // Interface between nodes j and j+1.
        *entry = -flux[j + first] / h;
    }

    Ok(Discretization {
        xs,
        mass,
        diag,
        off,
    })
}

/// Symmetrized tridiagonal (M^{-1/2} A M^{-1/2}) of the discretization.
fn symmetric_reduction(d: &Discretization) -> (Vec<f64>, Vec<f64>) {
    let n = d.xs.len();
    let diag: Vec<f64> = (0..n).map(|i| d.diag[i] / d.mass[i]).collect();
    let off: Vec<f64> = (0..n - 1)
        .map(|i| d.off[i] / (d.mass[i] * d.mass[i + 1]).sqrt())
        .collect();
    (diag, off)
}

fn lambda1_single(problem: &SLProblem, n: usize) -> Result<(f64, Discretization, Vec<f64>)> {
    let d = discretize(problem, n)?;
    let (diag, off) = symmetric_reduction(&d);
    let lam = tridiag::smallest_eigenvalue(&diag, &off);
    let v_sym = tridiag::eigenvector(&diag, &off, lam);
    // Undo the mass scaling: z = M^{-1/2} ẑ.
    let z: Vec<f64> = v_sym
        .iter()
        .zip(&d.mass)
        .map(|(y, m)| y / m.sqrt())
        .collect();
    Ok((lam, d, z))
}

/// λ₁ of the weighted problem by second-order finite differences, with a
/// Richardson error estimate from grids n and 2n (solved concurrently).
pub fn lambda1(problem: &SLProblem, grid_n: usize) -> Result<SpectrumEstimate> {
    if grid_n < 16 {
        return Err(Error::InvalidParams(format!(
            "grid_n must be at least 16, got {grid_n}"
        )));
    }
    let (coarse, fine) = std::thread::scope(|scope| {
        let coarse = scope.spawn(|| lambda1_single(problem, grid_n));
        let fine = lambda1_single(problem, 2 * grid_n);
        (coarse.join().expect("coarse eigensolve panicked"), fine)
    });
    let (lam_coarse, _, _) = coarse?;
    let (lam_fine, d, z) = fine?;
    let richardson_error = (lam_fine - lam_coarse).abs() / 3.0;
    let lambda1_extrapolated = lam_fine + (lam_fine - lam_coarse) / 3.0;

    // Normalize: positive interior, unit max.
    let z_max = z.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let sign = if z.iter().sum::<f64>() >= 0.0 { 1.0 } else { -1.0 };
    let mut eigenfunction: Vec<(f64, f64)> = d
        .xs
        .iter()
        .zip(&z)
        .map(|(&x, &val)| (x, sign * val / z_max))
        .collect();
    // Dirichlet unknowns are interior-only; return the full grid with the
    // boundary zeros so the vector feeds straight into rayleigh_quotient.
    if matches!(problem.boundary, Boundary::Dirichlet) {
        eigenfunction.insert(0, (problem.a, 0.0));
        eigenfunction.push((problem.b, 0.0));
    }

    Ok(SpectrumEstimate {
        lambda1: lam_fine,
        lambda1_extrapolated,
        richardson_error,
        eigenfunction,
        grid_n: 2 * grid_n,
    })
}

/// Number of negative eigenvalues of the discrete operator ("discrete
/// index"; the continuum Morse index identification is out of scope here).
pub fn discrete_index(problem: &SLProblem, grid_n: usize) -> Result<usize> {
    let d = discretize(problem, grid_n)?;
    let (diag, off) = symmetric_reduction(&d);
    Ok(tridiag::negative_count(&diag, &off))
}

/// Rayleigh quotient Q(φ)/∫φ²v for a test function sampled on the uniform
/// grid of the discretization (n+1 values including both endpoints).
///
/// Uses midpoint fluxes for the gradient term and trapezoid-lumped masses,
/// matching the discrete operator, so eigenfunctions reproduce λ₁ exactly.
pub fn rayleigh_quotient(problem: &SLProblem, phi: &[f64]) -> Result<f64> {
    let n = phi.len().checked_sub(1).filter(|&n| n >= 2).ok_or_else(|| {
        Error::InsufficientSamples("need at least 3 test function samples".into())
    })?;
    let h = (problem.b - problem.a) / n as f64;
    if matches!(problem.boundary, Boundary::Dirichlet)
        && (phi[0].abs() > 1e-14 || phi[n].abs() > 1e-14)
    {
        return Err(Error::InvalidParams(
            "Dirichlet test functions must vanish at the endpoints".into(),
        ));
    }

    let mut energy = 0.0;
    for i in 0..n {
        let xm = problem.a + (i as f64 + 0.5) * h;
        let v_mid = problem.weight(xm);
        if !(v_mid > 0.0) {
            return Err(Error::NonPositiveWeight(format!("v({xm}) = {v_mid}")));
        }
        let dphi = (phi[i + 1] - phi[i]) / h;
        energy += v_mid * dphi * dphi * h;
    }
    let mut potential_term = 0.0;
    let mut norm = 0.0;
    for (i, &p) in phi.iter().enumerate() {
        let x = problem.a + i as f64 * h;
        let w = if i == 0 || i == n { 0.5 * h } else { h };
        let v_node = problem.weight(x);
        potential_term += w * v_node * problem.potential_fn(x) * p * p;
        norm += w * v_node * p * p;
    }
    if norm <= 0.0 || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    Ok((energy - potential_term) / norm)
}

/// Target immersion for the stability potential.
#[derive(Debug, Clone, Copy)]
pub enum StabilityTarget {
    /// A slice {t = t0} of the warped product.
    Slice { t0: f64 },
    /// Constant-curvature ambient data with prescribed |II|².
    ConstantCurvature {
        ambient_curvature: f64,
        second_fundamental_sq: f64,
        t0: f64,
    },
}

/// Zeroth-order coefficient q = |II|² + Ric̄(ν,ν) - c h' of the stability
/// operator, constant for the supported targets.
///
/// For a slice: |II|² = m (h'/h)², Ric̄(ν,ν) = -m h''/h. For a soliton slice
/// in a constant-curvature ambient this reduces to m (κ + h'(t0)²)/h(t0)².
pub fn stability_potential(problem: &SolitonProblem, target: StabilityTarget) -> Result<f64> {
    let m = problem.m as f64;
    match target {
        StabilityTarget::Slice { t0 } => {
            let (h, hp, hpp) = problem.space.warping(t0)?;
            Ok(m * (hp / h) * (hp / h) - m * hpp / h - problem.c * hp)
        }
        StabilityTarget::ConstantCurvature {
            ambient_curvature,
            second_fundamental_sq,
            t0,
        } => {
            let (_, hp, _) = problem.space.warping(t0)?;
            Ok(second_fundamental_sq + m * ambient_curvature - problem.c * hp)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthKind {
    BallVolume,
    SphereArea,
}

/// Ball-volume or sphere-area profile of radius, for growth classification.
pub struct GrowthProfile {
    pub kind: GrowthKind,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub r_min: f64,
    pub r_max: f64,
}

impl GrowthProfile {
    pub fn new(
        kind: GrowthKind,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        r_min: f64,
        r_max: f64,
    ) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::InvalidParams(format!(
                "bad radius window [{r_min}, {r_max}]"
            )));
        }
        let profile = Self {
            kind,
            f: Box::new(f),
            r_min,
            r_max,
        };
        if kind == GrowthKind::BallVolume {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=64 {
                let r = profile.radius_at(i, 64);
                let val = profile.eval(r);
                if val < prev - 1e-12 * prev.abs() {
                    return Err(Error::InvalidParams(
                        "ball volume profile must be nondecreasing".into(),
                    ));
                }
                prev = val;
            }
        }
        Ok(profile)
    }

    fn radius_at(&self, i: usize, n: usize) -> f64 {
        self.r_min * (self.r_max / self.r_min).powf(i as f64 / n as f64)
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthFit {
    /// f(r) ≈ C r^degree
    Polynomial { degree: f64 },
    /// f(r) ≈ C e^{rate r}
    Exponential { rate: f64 },
}

#[derive(Debug, Clone)]
pub struct GrowthClassification {
    pub fit: GrowthFit,
    /// o(r²) on the fitted tail.
    pub subquadratic: bool,
    /// O(r²) (weighted-volume parabolicity criterion).
    pub quadratic_bound: bool,
    /// 1/v ∉ L¹(∞) for sphere-area profiles.
    pub sphere_reciprocal_nonintegrable: Option<bool>,
    /// α²/4 upper bound on λ₁ from the exponential rate α.
    pub brooks_bound: f64,
    pub subexponential: bool,
    /// Max absolute deviation of log f from the chosen fit.
    pub fit_residual: f64,
}

/// Least-squares slope of ys against xs, plus the max absolute residual.
fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let resid = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    (slope, resid)
}

/// Fits the tail of the profile (last two decades) against polynomial and
/// exponential growth and derives the parabolicity/growth flags.
pub fn growth_classify(profile: &GrowthProfile) -> Result<GrowthClassification> {
    if profile.r_max / profile.r_min < 1e3 {
        return Err(Error::InsufficientTail(format!(
            "window [{}, {}] spans fewer than 3 decades",
            profile.r_min, profile.r_max
        )));
    }
    let tail_lo = profile.r_max / 100.0;
    let n = 64;
    let mut rs = Vec::with_capacity(n + 1);
    let mut logf = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let r = tail_lo * (profile.r_max / tail_lo).powf(i as f64 / n as f64);
        let val = profile.eval(r);
        if !(val > 0.0) || !val.is_finite() {
            return Err(Error::InvalidParams(format!(
                "profile must be positive and finite on the tail, got {val} at r = {r}"
            )));
        }
        rs.push(r);
        logf.push(val.ln());
    }
    let logr: Vec<f64> = rs.iter().map(|r| r.ln()).collect();

    let (degree, resid_poly) = fit_line(&logr, &logf);
    let (rate, resid_exp) = fit_line(&rs, &logf);

    const MARGIN: f64 = 0.01;
    let (fit, fit_residual, alpha) = if resid_poly <= resid_exp {
        (GrowthFit::Polynomial { degree }, resid_poly, 0.0)
    } else {
        (GrowthFit::Exponential { rate }, resid_exp, rate.max(0.0))
    };
    let polynomial = matches!(fit, GrowthFit::Polynomial { .. });

    Ok(GrowthClassification {
        fit,
        subquadratic: polynomial && degree < 2.0 - MARGIN,
        quadratic_bound: polynomial && degree <= 2.0 + MARGIN,
        sphere_reciprocal_nonintegrable: (profile.kind == GrowthKind::SphereArea)
            .then_some(polynomial && degree <= 1.0 + MARGIN),
        brooks_bound: alpha * alpha / 4.0,
        subexponential: polynomial || alpha < MARGIN,
        fit_residual,
    })
}
