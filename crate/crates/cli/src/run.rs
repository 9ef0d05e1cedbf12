//! Command dispatch: builds the problem from the config, runs the module
//! operation, and persists the report.

use serde::Serialize;
use warpsol::oscillation::{self, EndProfile, OscillationCondition, ProfileSpec};
use warpsol::shooting::{self, ProbeOptions, RadialModel, ShootOptions};
use warpsol::soliton::{self, SliceExistence, SliceScanOptions};
use warpsol::spectral::{self, GrowthKind, GrowthProfile, SLProblem, StabilityTarget};

use crate::config::RunConfig;
use crate::report::{Meta, OutputSink};
use crate::verify::run_verify;
use crate::{runtime_error, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Slices,
    Shoot,
    Curve,
    ProbeEntire,
    Spectrum,
    Oscillate,
    ClassifyGrowth,
    Verify,
}

#[derive(Debug, Clone)]
pub struct GlobalOpts {
    pub tol: Option<f64>,
    pub jobs: usize,
}

/// Runs one command against the parsed configuration. Returns false when a
/// verification-style command found failures.
pub fn run(
    command: Command,
    config: Option<&RunConfig>,
    sink: &OutputSink,
    opts: &GlobalOpts,
) -> Result<bool, CliError> {
    match command {
        Command::Verify => {
            let report = run_verify(sink, opts.tol)?;
            Ok(report.all_pass)
        }
        other => {
            let config = config.ok_or_else(|| {
                CliError::Usage("this command requires --config <path>".into())
            })?;
            match other {
                Command::Slices => run_slices(config, sink),
                Command::Shoot => run_shoot(config, sink),
                Command::Curve => run_curve(config, sink),
                Command::ProbeEntire => run_probe(config, sink, opts.jobs),
                Command::Spectrum => run_spectrum(config, sink),
                Command::Oscillate => run_oscillate(config, sink),
                Command::ClassifyGrowth => run_growth(config, sink),
                Command::Verify => unreachable!(),
            }
        }
    }
}

#[derive(Serialize)]
struct SliceRootOut {
    t: f64,
    r: f64,
    multiplicity: u8,
}

#[derive(Serialize)]
struct ClosedFormOut {
    existence: &'static str,
    r_separator: Option<f64>,
    r_star_minus: Option<f64>,
    discriminant: Option<f64>,
    margin: f64,
    note: String,
}

#[derive(Serialize)]
struct SlicesReport {
    meta: Meta,
    c: f64,
    m: u32,
    window: [f64; 2],
    anchor: String,
    roots: Vec<SliceRootOut>,
    closed_form: Option<ClosedFormOut>,
    tolerances: Tolerances,
}

#[derive(Serialize)]
struct Tolerances {
    refine_tol: f64,
    dip_tol: f64,
}

fn run_slices(config: &RunConfig, sink: &OutputSink) -> Result<bool, CliError> {
    let problem = config.build_problem()?;
    let block = config.slices.clone().unwrap_or(crate::config::SlicesConfig {
        window: None,
        grid_n: None,
    });
    let dom = problem.space.working_window();
    let window = block.window.map(|w| (w[0], w[1])).unwrap_or((dom.lo, dom.hi));
    let scan = SliceScanOptions {
        grid_n: block.grid_n.unwrap_or(4096),
        ..SliceScanOptions::default()
    };
    let report = soliton::find_slices(&problem, window, &scan).map_err(runtime_error)?;

    let out = SlicesReport {
        meta: Meta::new(),
        c: problem.c,
        m: problem.m,
        window: [report.window.0, report.window.1],
        anchor: problem.space.anchor_note(),
        roots: report
            .roots
            .iter()
            .map(|r| SliceRootOut {
                t: r.t,
                r: r.r,
                multiplicity: r.multiplicity,
            })
            .collect(),
        closed_form: report.closed_form.as_ref().map(|cf| ClosedFormOut {
            existence: match cf.existence {
                SliceExistence::None => "none",
                SliceExistence::OneTangential => "one-tangential",
                SliceExistence::Two => "two",
            },
            r_separator: cf.r_separator,
            r_star_minus: cf.r_star_minus,
            discriminant: cf.discriminant,
            margin: cf.margin,
            note: cf.note.clone(),
        }),
        tolerances: Tolerances {
            refine_tol: scan.refine_tol,
            dip_tol: scan.dip_tol,
        },
    };
    sink.write_json("slices.json", &out)?;

    // Curve dump (t, h, h', ζ_c) across the scan window.
    let n = 1024;
    let (lo, hi) = report.window;
    sink.write_csv(
        "slices_curve.csv",
        &["t", "h", "h_prime", "zeta"],
        (0..=n).map(|i| {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            let t = t.clamp(lo + 1e-12 * (hi - lo), hi - 1e-12 * (hi - lo));
            vec![
                t,
                problem.space.h(t),
                problem.space.h_prime(t),
                problem.zeta_raw(t),
            ]
        }),
    )?;
    println!(
        "slices: {} root(s) on [{:.6}, {:.6}]",
        out.roots.len(),
        out.window[0],
        out.window[1]
    );
    Ok(true)
}

#[derive(Serialize)]
struct ShootReport {
    meta: Meta,
    u0: f64,
    c: f64,
    m: u32,
    rho_max: f64,
    verdict: String,
    u_min: f64,
    u_max: f64,
    samples: usize,
    fitted_quadratic_coeff: Option<f64>,
    tolerances: ShootTolerances,
}

#[derive(Serialize)]
struct ShootTolerances {
    rel_tol: f64,
    abs_tol: f64,
    blowup_threshold: f64,
    start_eps: f64,
}

fn run_shoot(config: &RunConfig, sink: &OutputSink) -> Result<bool, CliError> {
    let problem = config.build_problem()?;
    let block = config
        .shoot
        .as_ref()
        .ok_or_else(|| CliError::Usage("missing `[shoot]` block".into()))?;
    let model = RadialModel::new(RunConfig::fiber_base(block.fiber.as_deref())?, problem.m);
    let opts = ShootOptions::default();
    let sol = shooting::shoot_radial(&problem, &model, block.u0, block.rho_max, &opts)
        .map_err(runtime_error)?;
    let (u_min, u_max) = sol.u_extremes();
    let eps = opts.start_eps;

    let out = ShootReport {
        meta: Meta::new(),
        u0: sol.u0,
        c: sol.c,
        m: problem.m,
        rho_max: sol.rho_max,
        verdict: sol.verdict.label().into(),
        u_min,
        u_max,
        samples: sol.rho.len(),
        fitted_quadratic_coeff: sol.fitted_quadratic_coeff(eps, 10.0 * eps),
        tolerances: ShootTolerances {
            rel_tol: opts.rel_tol,
            abs_tol: opts.abs_tol,
            blowup_threshold: opts.blowup_threshold,
            start_eps: opts.start_eps,
        },
    };
    sink.write_json("shoot.json", &out)?;
    sink.write_csv(
        "shoot.csv",
        &["rho", "u", "du"],
        (0..sol.rho.len()).map(|i| vec![sol.rho[i], sol.u[i], sol.du[i]]),
    )?;
    println!("shoot: verdict {} after {} samples", out.verdict, out.samples);
    Ok(true)
}

#[derive(Serialize)]
struct CurveReport {
    meta: Meta,
    k: f64,
    tau_max: f64,
    samples: usize,
    max_deviation: f64,
    agreement_tol: f64,
}

fn run_curve(config: &RunConfig, sink: &OutputSink) -> Result<bool, CliError> {
    let block = config
        .curve
        .as_ref()
        .ok_or_else(|| CliError::Usage("missing `[curve]` block".into()))?;
    let ct = shooting::curve_translator(block.k, block.tau_max, block.samples.unwrap_or(1001))
        .map_err(runtime_error)?;
    let out = CurveReport {
        meta: Meta::new(),
        k: ct.k,
        tau_max: block.tau_max,
        samples: ct.taus.len(),
        max_deviation: ct.max_deviation,
        agreement_tol: 1e-7,
    };
    sink.write_json("curve.json", &out)?;
    sink.write_csv(
        "curve.csv",
        &["tau", "x_numeric", "x_closed", "dx_closed"],
        (0..ct.taus.len())
            .map(|i| vec![ct.taus[i], ct.x_numeric[i], ct.x_closed[i], ct.dx_closed[i]]),
    )?;
    println!(
        "curve: max |numeric - closed form| = {:.3e}",
        out.max_deviation
    );
    Ok(out.max_deviation < out.agreement_tol)
}

#[derive(Serialize)]
struct ShotOut {
    u0: f64,
    verdict: String,
    u_min: f64,
    u_max: f64,
    is_slice: bool,
    bounded: bool,
    blowup_sensitivity: Option<f64>,
}

#[derive(Serialize)]
struct ProbeReportOut {
    meta: Meta,
    c: f64,
    m: u32,
    rho_max: f64,
    shots: Vec<ShotOut>,
    slice_solutions: Vec<f64>,
    no_bounded_entire: bool,
    summary: String,
}

fn run_probe(config: &RunConfig, sink: &OutputSink, jobs: usize) -> Result<bool, CliError> {
    let problem = config.build_problem()?;
    let block = config
        .probe
        .as_ref()
        .ok_or_else(|| CliError::Usage("missing `[probe]` block".into()))?;
    if block.shots < 2 {
        return Err(CliError::Usage("probe needs at least 2 shots".into()));
    }
    let model = RadialModel::new(RunConfig::fiber_base(block.fiber.as_deref())?, problem.m);
    let grid: Vec<f64> = (0..block.shots)
        .map(|i| {
            block.u0_min + (block.u0_max - block.u0_min) * i as f64 / (block.shots - 1) as f64
        })
        .collect();
    let opts = ProbeOptions {
        rho_max: block.rho_max.unwrap_or(1e3),
        jobs,
        ..ProbeOptions::default()
    };
    let report =
        shooting::entire_graph_probe(&problem, &model, &grid, &opts).map_err(runtime_error)?;

    let out = ProbeReportOut {
        meta: Meta::new(),
        c: problem.c,
        m: problem.m,
        rho_max: opts.rho_max,
        shots: report
            .shots
            .iter()
            .map(|s| ShotOut {
                u0: s.u0,
                verdict: s.verdict.label().into(),
                u_min: s.u_min,
                u_max: s.u_max,
                is_slice: s.is_slice,
                bounded: s.bounded,
                blowup_sensitivity: s.blowup_sensitivity,
            })
            .collect(),
        slice_solutions: report.slice_solutions.clone(),
        no_bounded_entire: report.no_bounded_entire,
        summary: report.summary.clone(),
    };
    sink.write_json("probe.json", &out)?;
    println!("probe-entire: {}", out.summary);
    Ok(true)
}

#[derive(Serialize)]
struct SpectrumReport {
    meta: Meta,
    lambda1: f64,
    lambda1_extrapolated: f64,
    richardson_error: f64,
    boundary: String,
    grid_n: usize,
    /// Count of negative eigenvalues of the discrete operator.
    discrete_index: usize,
    q_constant: Option<f64>,
    interval: [f64; 2],
}

fn run_spectrum(config: &RunConfig, sink: &OutputSink) -> Result<bool, CliError> {
    let block = config
        .spectrum
        .as_ref()
        .ok_or_else(|| CliError::Usage("missing `[spectrum]` block".into()))?;
    let boundary = RunConfig::boundary(&block.boundary)?;
    let [a, b] = block.interval;
    let grid_n = block.grid_n.unwrap_or(512);

    let v_spec = ProfileSpec::parse(block.v.as_deref().unwrap_or("const:1"))
        .map_err(runtime_error)?;

    let mut q_constant = None;
    let q_spec: ProfileSpec = match (&block.target, &block.q) {
        (Some(target), None) if target == "slice" => {
            let problem = config.build_problem()?;
            let t0 = block
                .t0
                .ok_or_else(|| CliError::Usage("spectrum target 'slice' requires `t0`".into()))?;
            let q = spectral::stability_potential(&problem, StabilityTarget::Slice { t0 })
                .map_err(runtime_error)?;
            q_constant = Some(q);
            ProfileSpec::constant(q)
        }
        (Some(other), None) => {
            return Err(CliError::Usage(format!(
                "unknown spectrum target '{other}' (expected 'slice')"
            )))
        }
        (None, Some(q)) => ProfileSpec::parse(q).map_err(runtime_error)?,
        (None, None) => ProfileSpec::constant(0.0),
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "spectrum takes either `target` or `q`, not both".into(),
            ))
        }
    };
    if let ProfileSpec::Constant { value } = q_spec {
        q_constant = Some(value);
    }

    let problem = SLProblem::new(
        move |x| v_spec.eval(x),
        move |x| q_spec.eval(x),
        a,
        b,
        boundary,
    )
    .map_err(runtime_error)?;
    let est = spectral::lambda1(&problem, grid_n).map_err(runtime_error)?;
    let discrete_index = spectral::discrete_index(&problem, grid_n).map_err(runtime_error)?;

    let out = SpectrumReport {
        meta: Meta::new(),
        lambda1: est.lambda1,
        lambda1_extrapolated: est.lambda1_extrapolated,
        richardson_error: est.richardson_error,
        boundary: block.boundary.clone(),
        grid_n: est.grid_n,
        discrete_index,
        q_constant,
        interval: block.interval,
    };
    sink.write_json("spectrum.json", &out)?;
    sink.write_csv(
        "eigenfunction.csv",
        &["r", "z"],
        est.eigenfunction.iter().map(|&(x, z)| vec![x, z]),
    )?;
    println!(
        "spectrum: lambda1 = {:.9} (± {:.2e})",
        out.lambda1, out.richardson_error
    );
    Ok(true)
}

#[derive(Serialize)]
struct OscillateReport {
    meta: Meta,
    zeros: Vec<f64>,
    oscillatory: bool,
    condition: &'static str,
    min_zeros: usize,
    r_max: f64,
    inv_v_integrable: Option<bool>,
    av_integral_slope: Option<f64>,
    gap_integral_slope: Option<f64>,
    note: String,
}

fn run_oscillate(config: &RunConfig, sink: &OutputSink) -> Result<bool, CliError> {
    let block = config
        .oscillate
        .as_ref()
        .ok_or_else(|| CliError::Usage("missing `[oscillate]` block".into()))?;
    let v = ProfileSpec::parse(&block.v).map_err(runtime_error)?;
    let a = ProfileSpec::parse(&block.a).map_err(runtime_error)?;
    let profile = EndProfile::new(v, a, block.base_r).map_err(runtime_error)?;
    let min_zeros = block.min_zeros.unwrap_or(3);
    let report =
        oscillation::is_oscillatory(&profile, block.r_max, min_zeros).map_err(runtime_error)?;

    let out = OscillateReport {
        meta: Meta::new(),
        zeros: report.zeros.clone(),
        oscillatory: report.oscillatory,
        condition: match report.condition {
            OscillationCondition::NonIntegrableWeight => "nonintegrable-weight",
            OscillationCondition::CriticalCurveExceeded => "critical-curve-exceeded",
            OscillationCondition::Neither => "neither",
        },
        min_zeros,
        r_max: block.r_max,
        inv_v_integrable: report.diagnostics.inv_v_integrable,
        av_integral_slope: report.diagnostics.av_integral_slope,
        gap_integral_slope: report.diagnostics.gap_integral_slope,
        note: report.diagnostics.note.clone(),
    };
    sink.write_json("oscillate.json", &out)?;

    if sink.write_curves {
        // Curve dump (r, z, v z', χ), thinned to at most ~4096 rows.
        let solution =
            oscillation::integrate_cauchy(&profile, block.r_max).map_err(runtime_error)?;
        let stride = (solution.rs.len() / 4096).max(1);
        sink.write_csv(
            "oscillate.csv",
            &["r", "z", "v_zprime", "chi"],
            solution.rs.iter().enumerate().step_by(stride).map(|(i, &r)| {
                let chi = oscillation::critical_curve(&profile, r).unwrap_or(f64::NAN);
                vec![r, solution.zs[i], solution.ws[i], chi]
            }),
        )?;
    }
    println!(
        "oscillate: {} zero(s), oscillatory = {}, condition = {}",
        out.zeros.len(),
        out.oscillatory,
        out.condition
    );
    Ok(true)
}

#[derive(Serialize)]
struct GrowthReport {
    meta: Meta,
    fit: GrowthFitOut,
    subquadratic: bool,
    quadratic_bound: bool,
    sphere_reciprocal_nonintegrable: Option<bool>,
    brooks_bound: f64,
    subexponential: bool,
    fit_residual: f64,
}

#[derive(Serialize)]
#[serde(tag = "kind")]
enum GrowthFitOut {
    #[serde(rename = "polynomial")]
    Polynomial { degree: f64 },
    #[serde(rename = "exponential")]
    Exponential { rate: f64 },
}

fn run_growth(config: &RunConfig, sink: &OutputSink) -> Result<bool, CliError> {
    let block = config
        .growth
        .as_ref()
        .ok_or_else(|| CliError::Usage("missing `[growth]` block".into()))?;
    let kind = match block.kind.as_str() {
        "ball" => GrowthKind::BallVolume,
        "sphere" => GrowthKind::SphereArea,
        other => {
            return Err(CliError::Usage(format!(
                "unknown growth kind '{other}' (expected ball|sphere)"
            )))
        }
    };
    let spec = ProfileSpec::parse(&block.profile).map_err(runtime_error)?;
    let profile = GrowthProfile::new(kind, move |r| spec.eval(r), block.window[0], block.window[1])
        .map_err(runtime_error)?;
    let result = spectral::growth_classify(&profile).map_err(runtime_error)?;

    let out = GrowthReport {
        meta: Meta::new(),
        fit: match result.fit {
            spectral::GrowthFit::Polynomial { degree } => GrowthFitOut::Polynomial { degree },
            spectral::GrowthFit::Exponential { rate } => GrowthFitOut::Exponential { rate },
        },
        subquadratic: result.subquadratic,
        quadratic_bound: result.quadratic_bound,
        sphere_reciprocal_nonintegrable: result.sphere_reciprocal_nonintegrable,
        brooks_bound: result.brooks_bound,
        subexponential: result.subexponential,
        fit_residual: result.fit_residual,
    };
    sink.write_json("growth.json", &out)?;
    println!(
        "classify-growth: {:?} (residual {:.2e})",
        result.fit, result.fit_residual
    );
    Ok(true)
}
