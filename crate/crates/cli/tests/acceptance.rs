//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Expected values tagged as derived in the statements are computed here from
//! independent oracles (closed forms, bisection on reduced polynomials,
//! indicial analysis) rather than hard-coded from the implementation.

use std::process::Command;
use std::time::{Duration, Instant};

use warpsol::ambient::{AmbientSpace, SchwarzschildParams};
use warpsol::num::roots::bisect;
use warpsol::oscillation::{
    critical_curve, integrate_cauchy_with, is_oscillatory, EndProfile, ProfileSpec,
};
use warpsol::shooting::{entire_graph_probe, FiberBase, ProbeOptions, RadialModel, ShootOptions};
use warpsol::soliton::{
    find_slices, schwarzschild_slice_analysis, ExactSoliton, SliceExistence, SliceScanOptions,
};
use warpsol::spectral::{
    growth_classify, lambda1, rayleigh_quotient, Boundary, GrowthFit, GrowthKind, GrowthProfile,
    SLProblem,
};
use warpsol::SolitonProblem;

fn criterion(n: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {n:02} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n:02} {name}: {detail}");
}

fn within(elapsed: Duration, budget_s: f64) -> bool {
    elapsed.as_secs_f64() < budget_s
}

#[test]
fn criterion_01_hardy_critical_curve() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for m in [3u32, 4, 5, 6] {
        let profile = EndProfile::new(
            ProfileSpec::power((m - 1) as f64),
            ProfileSpec::constant(0.0),
            1.0,
        )
        .unwrap();
        for i in 0..=200 {
            let r = 2.0 + 48.0 * i as f64 / 200.0;
            let chi = critical_curve(&profile, r).unwrap();
            let hardy = ((m - 2) * (m - 2)) as f64 / (4.0 * r * r);
            worst = worst.max((chi / hardy - 1.0).abs());
        }
    }
    let elapsed = start.elapsed();
    criterion(
        1,
        "Hardy identity",
        worst < 1e-6 && within(elapsed, 1.0),
        &format!("max rel deviation {worst:.3e} over m in 3..6, r in [2,50] ({elapsed:?})"),
    );
}

#[test]
fn criterion_02_schwarzschild_coordinates() {
    let start = Instant::now();
    let space = AmbientSpace::schwarzschild(SchwarzschildParams::plain(3, 0.5)).unwrap();
    // Antiderivative oracle for m = 3, mass = 1/2: t(r) = sqrt(r² - 1).
    let t2_err = (space.t_of_r(2.0).unwrap() - 3.0f64.sqrt()).abs();

    let mut sup_err: f64 = 0.0;
    for i in 0..=400 {
        let r = 1.001 + (50.0 - 1.001) * i as f64 / 400.0;
        let t = space.t_of_r(r).unwrap();
        let hp = space.h_prime(t);
        let v_sqrt = space.potential(r).unwrap().max(0.0).sqrt();
        sup_err = sup_err.max((hp - v_sqrt).abs());
    }
    let elapsed = start.elapsed();
    criterion(
        2,
        "Schwarzschild coordinates",
        t2_err < 1e-8 && sup_err < 1e-6 && within(elapsed, 1.0),
        &format!("|t(2)-sqrt(3)| = {t2_err:.3e}, sup |h' - sqrt V| = {sup_err:.3e} ({elapsed:?})"),
    );
}

#[test]
fn criterion_03_slice_closed_form_cross_check() {
    let start = Instant::now();

    // Anchor instance: roots of x³ - 9x + 9 (x = r²) by bisection.
    let cubic = |x: f64| x * x * x - 9.0 * x + 9.0;
    let r1 = bisect(cubic, 1.0, 1.3, 1e-13).unwrap().sqrt();
    let r2 = bisect(cubic, 2.0, 2.4, 1e-13).unwrap().sqrt();
    let space = AmbientSpace::schwarzschild(SchwarzschildParams::plain(3, 0.5)).unwrap();
    let problem = SolitonProblem::new(space, -1.0, 3).unwrap();
    let t_hi = problem.space.t_of_r(6.0).unwrap();
    let report = find_slices(&problem, (1e-5, t_hi), &SliceScanOptions::default()).unwrap();
    let r_star = 4.5f64.powf(1.0 / 6.0);
    let instance_ok = report.roots.len() == 2
        && (report.roots[0].r - r1).abs() < 1e-3
        && (report.roots[1].r - r2).abs() < 1e-3
        && report.roots[0].r < r_star
        && r_star < report.roots[1].r;

    // 10 x 10 grid of (mass, c) for m in {3, 4}.
    let mut checked = 0usize;
    let mut agreed = 0usize;
    let mut borderline = 0usize;
    for m in [3u32, 4] {
        for i in 0..10 {
            let mass = 0.1 + 1.9 * i as f64 / 9.0;
            let space =
                AmbientSpace::schwarzschild(SchwarzschildParams::plain(m, mass)).unwrap();
            for j in 0..10 {
                let c = -3.0 + 2.95 * j as f64 / 9.0;
                let cf =
                    schwarzschild_slice_analysis(&SchwarzschildParams::plain(m, mass), c).unwrap();
                if cf.margin.abs() < 1e-3 {
                    borderline += 1;
                    continue;
                }
                let problem = SolitonProblem::new(space.clone(), c, m).unwrap();
                let r_hi = (m as f64 / c.abs()).sqrt() + 2.0;
                let t_hi = problem.space.t_of_r(r_hi).unwrap();
                let scan =
                    find_slices(&problem, (1e-5, t_hi), &SliceScanOptions::default()).unwrap();
                let expected = match cf.existence {
                    SliceExistence::None => 0,
                    SliceExistence::OneTangential => 1,
                    SliceExistence::Two => 2,
                };
                checked += 1;
                if scan.roots.len() == expected {
                    agreed += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    criterion(
        3,
        "slice closed-form cross-check",
        instance_ok && agreed == checked && within(elapsed, 5.0),
        &format!(
            "anchor roots ({:.4}, {:.4}) vs oracle ({r1:.4}, {r2:.4}); grid {agreed}/{checked} \
             agreed, {borderline} borderline skipped ({elapsed:?})",
            report.roots.first().map(|r| r.r).unwrap_or(f64::NAN),
            report.roots.last().map(|r| r.r).unwrap_or(f64::NAN),
        ),
    );
}

#[test]
fn criterion_04_no_entire_graphs_for_nonnegative_c() {
    let start = Instant::now();
    let spaces = [
        AmbientSpace::schwarzschild(SchwarzschildParams::plain(3, 0.5)).unwrap(),
        AmbientSpace::schwarzschild(SchwarzschildParams::ads(3, 0.5, 1)).unwrap(),
    ];
    let model = RadialModel::new(FiberBase::Euclidean, 3);
    let mut all_ok = true;
    let mut detail = String::new();
    for (name, space) in ["plain", "ads"].iter().zip(spaces) {
        for &c in &[0.0, 0.5, 1.0] {
            let problem = SolitonProblem::new(space.clone(), c, 3).unwrap();
            // ζ_c > 0 across the sampled working window.
            let w = problem.space.working_window();
            let zeta_positive = (1..400).all(|i| {
                let t = w.lo + (w.hi - w.lo) * i as f64 / 400.0;
                problem.zeta_raw(t) > 0.0
            });
            let (s_lo, s_hi) = problem.space.s_range();
            let grid: Vec<f64> = (0..21)
                .map(|i| s_lo + (s_hi - s_lo) * (0.05 + 0.9 * i as f64 / 20.0))
                .collect();
            let report = entire_graph_probe(
                &problem,
                &model,
                &grid,
                &ProbeOptions {
                    rho_max: 1e3,
                    shoot: ShootOptions {
                        rel_tol: 1e-8,
                        ..ShootOptions::default()
                    },
                    ..ProbeOptions::default()
                },
            )
            .unwrap();
            let ok = zeta_positive && report.no_bounded_entire && report.slice_solutions.is_empty();
            if !ok {
                all_ok = false;
                detail.push_str(&format!(
                    "[{name} c={c}: zeta>0 {zeta_positive}, {}] ",
                    report.summary
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    if detail.is_empty() {
        detail = format!(
            "zeta > 0 and 21/21 shots failed entirety for c in {{0, 0.5, 1}}, plain and ADS ({elapsed:?})"
        );
    }
    criterion(
        4,
        "Schwarzschild nonexistence corroboration",
        all_ok && within(elapsed, 30.0),
        &detail,
    );
}

#[test]
fn criterion_05_exact_soliton_residuals() {
    let mut worst_curve: f64 = 0.0;
    for &k in &[0.5, 1.0, 2.0] {
        // Interior 95% of the allowed window.
        let tau_max = 0.95 * (std::f64::consts::FRAC_PI_2 - 0.05) / k;
        let gr = ExactSoliton::grim_reaper_with_window(k, tau_max, 2001).unwrap();
        worst_curve = worst_curve.max(gr.residual().unwrap());
    }
    let mut worst_algebraic: f64 = 0.0;
    for &m in &[2u32, 3] {
        worst_algebraic = worst_algebraic.max(
            ExactSoliton::shrinker_sphere(m, -1.0)
                .unwrap()
                .residual()
                .unwrap(),
        );
    }
    worst_algebraic = worst_algebraic.max(
        ExactSoliton::shrinker_cylinder(1, 2, -1.0)
            .unwrap()
            .residual()
            .unwrap(),
    );
    criterion(
        5,
        "exact-soliton residuals",
        worst_curve < 1e-8 && worst_algebraic < 1e-10,
        &format!("grim reaper max {worst_curve:.3e}, shrinker identities max {worst_algebraic:.3e}"),
    );
}

#[test]
fn criterion_06_equator_instability() {
    let mut ok = true;
    let mut detail = String::new();
    for m in [2u32, 3] {
        let q = m as f64;
        let problem =
            SLProblem::new(move |_| 1.0, move |_| q, 0.0, 1.0, Boundary::Closed).unwrap();
        let est = lambda1(&problem, 256).unwrap();
        let rel = (est.lambda1 + q).abs() / q;
        detail.push_str(&format!("m={m}: lambda1={:.6} ", est.lambda1));
        ok &= rel < 0.02;
    }
    criterion(6, "equator instability", ok, detail.trim());
}

#[test]
fn criterion_07_horosphere_instability() {
    // Bump test function on [0,10] against q ≡ m = 2 (c = -2).
    let problem = SLProblem::new(|_| 1.0, |_| 2.0, 0.0, 10.0, Boundary::Dirichlet).unwrap();
    let n = 500;
    let phi: Vec<f64> = (0..=n)
        .map(|i| {
            let x = i as f64 / n as f64;
            (std::f64::consts::PI * x).sin().powi(2)
        })
        .collect();
    let rq = rayleigh_quotient(&problem, &phi).unwrap();
    criterion(
        7,
        "horosphere instability",
        rq < 0.0,
        &format!("Rayleigh quotient of the bump = {rq:.6}"),
    );
}

#[test]
fn criterion_08_euler_oscillation_threshold() {
    // The stated [2, 1e4] window cannot contain three zeros at γ = 0.26: the
    // exact solution z = (2/r)^{1/2}[cos(ω ln(r/2)) + sin(ω ln(r/2))/(2ω)],
    // ω = sqrt(4γ-1)/2 = 0.1, has its first zero at ω ln(r/2) = π - atan(2ω),
    // i.e. r ≈ 1.2e13. The run below uses a window sized by that oracle and
    // additionally pins the first-zero location against the closed form.
    let start = Instant::now();

    let make = |gamma: f64| {
        EndProfile::new(
            ProfileSpec::power(2.0),
            ProfileSpec::scaled_power(gamma, -2.0),
            1.0,
        )
        .unwrap()
    };

    // γ = 0.26: at least three zeros on the oracle-sized window, with the
    // first zero matching the closed form to 1e-6 relative.
    let omega = (4.0f64 * 0.26 - 1.0).sqrt() / 2.0;
    let x1 = (std::f64::consts::PI - (2.0 * omega).atan()) / omega;
    let r1_oracle = 2.0 * x1.exp();
    let r_window = 2.0 * ((x1 + 2.0 * std::f64::consts::PI / omega) * 1.05).exp();
    let report_hi = is_oscillatory(&make(0.26), r_window, 3).unwrap();
    let zero_count_hi = report_hi.zeros.len();
    let first_zero_ok = report_hi
        .zeros
        .first()
        .map(|z| (z / r1_oracle - 1.0).abs() < 1e-6)
        .unwrap_or(false);

    // γ = 0.24: zero count must stay 0 on the same window (the solution is a
    // positive combination of r^{-0.4} and r^{-0.6}).
    let report_lo = is_oscillatory(&make(0.24), r_window, 3).unwrap();

    // On the literal stated window both gammas show no zeros; recorded here
    // so the deviation is visible in the output line.
    let stated_hi = is_oscillatory(&make(0.26), 1e4, 3).unwrap().zeros.len();

    // Sturm interlacing for γ = 1.
    let p1 = make(1.0);
    let za = integrate_cauchy_with(&p1, 1e6, 1.0, 0.0).unwrap().zeros;
    let zb = integrate_cauchy_with(&p1, 1e6, 0.0, 1.0).unwrap().zeros;
    let interlaced = za.len() >= 2
        && za.windows(2).all(|w| {
            zb.iter().filter(|&&z| z > w[0] && z < w[1]).count() == 1
        });

    let elapsed = start.elapsed();
    criterion(
        8,
        "Euler oscillation threshold",
        zero_count_hi >= 3
            && first_zero_ok
            && report_lo.zeros.is_empty()
            && report_hi.oscillatory
            && !report_lo.oscillatory
            && interlaced
            && within(elapsed, 5.0),
        &format!(
            "gamma=0.26: {zero_count_hi} zeros on oracle window (first at {:.6e}, closed form \
             {r1_oracle:.6e}; stated 1e4 window shows {stated_hi}), gamma=0.24: {} zeros, \
             interlacing {} ({elapsed:?})",
            report_hi.zeros.first().copied().unwrap_or(f64::NAN),
            report_lo.zeros.len(),
            interlaced,
        ),
    );
}

#[test]
fn criterion_09_graph_dichotomies() {
    // Horosphere roots at t = log(-m/c) for negative c, none for c >= 0.
    let mut ok = true;
    let mut detail = String::new();
    for &c in &[-1.0, -2.0, -5.0] {
        let p = SolitonProblem::new(AmbientSpace::hyperbolic_horospheres(), c, 2).unwrap();
        let report = find_slices(&p, (-12.0, 12.0), &SliceScanOptions::default()).unwrap();
        let expected = (2.0 / -c).ln();
        let err = report
            .roots
            .first()
            .map(|r| (r.t - expected).abs())
            .unwrap_or(f64::INFINITY);
        ok &= report.roots.len() == 1 && err < 1e-10;
        detail.push_str(&format!("c={c}: |dt|={err:.1e} "));
    }
    for &c in &[0.0, 1.0] {
        let p = SolitonProblem::new(AmbientSpace::hyperbolic_horospheres(), c, 2).unwrap();
        let report = find_slices(&p, (-12.0, 12.0), &SliceScanOptions::default()).unwrap();
        ok &= report.roots.is_empty();
    }
    // Hypersphere trichotomy: unique root t = 0 for c = 0, none past m/2.
    let p = SolitonProblem::new(AmbientSpace::hyperbolic_hyperspheres(), 0.0, 2).unwrap();
    let report = find_slices(&p, (-12.0, 12.0), &SliceScanOptions::default()).unwrap();
    ok &= report.roots.len() == 1 && report.roots[0].t.abs() < 1e-10;
    for &c in &[1.1, -1.1] {
        let p = SolitonProblem::new(AmbientSpace::hyperbolic_hyperspheres(), c, 2).unwrap();
        let report = find_slices(&p, (-12.0, 12.0), &SliceScanOptions::default()).unwrap();
        ok &= report.roots.is_empty();
    }
    criterion(
        9,
        "horosphere/hypersphere dichotomies",
        ok,
        &format!("{} hypersphere c=0 root at t=0", detail.trim()),
    );
}

#[test]
fn criterion_10_growth_classifiers() {
    let plane = GrowthProfile::new(
        GrowthKind::SphereArea,
        |r| 2.0 * std::f64::consts::PI * r,
        1.0,
        1e4,
    )
    .unwrap();
    let plane_c = growth_classify(&plane).unwrap();

    let space3 = GrowthProfile::new(
        GrowthKind::SphereArea,
        |r| 4.0 * std::f64::consts::PI * r * r,
        1.0,
        1e4,
    )
    .unwrap();
    let space3_c = growth_classify(&space3).unwrap();

    let exp_vol =
        GrowthProfile::new(GrowthKind::BallVolume, |r| (2.0 * r).exp(), 0.1, 300.0).unwrap();
    let exp_c = growth_classify(&exp_vol).unwrap();
    let alpha = match exp_c.fit {
        GrowthFit::Exponential { rate } => rate,
        GrowthFit::Polynomial { .. } => f64::NAN,
    };

    let ok = plane_c.sphere_reciprocal_nonintegrable == Some(true)
        && space3_c.sphere_reciprocal_nonintegrable == Some(false)
        && (alpha - 2.0).abs() < 1e-6
        && (exp_c.brooks_bound - 1.0).abs() < 1e-6;
    criterion(
        10,
        "growth classifiers",
        ok,
        &format!(
            "plane nonintegrable {:?}, 3-space {:?}, alpha = {alpha:.8}, Brooks bound = {:.8}",
            plane_c.sphere_reciprocal_nonintegrable,
            space3_c.sphere_reciprocal_nonintegrable,
            exp_c.brooks_bound
        ),
    );
}

#[test]
fn criterion_11_bowl_series_fit() {
    let mut ok = true;
    let mut detail = String::new();
    for &m in &[2u32, 3] {
        let problem = SolitonProblem::new(AmbientSpace::product(1.0).unwrap(), 1.0, m).unwrap();
        let model = RadialModel::new(FiberBase::Euclidean, m);
        let opts = ShootOptions::default();
        let sol =
            warpsol::shooting::shoot_radial(&problem, &model, 0.0, 1.0, &opts).unwrap();
        let expected = 1.0 / (2.0 * m as f64); // f(u0)/(2m) with f ≡ 1
        let fitted = sol
            .fitted_quadratic_coeff(opts.start_eps, 10.0 * opts.start_eps)
            .unwrap();
        let rel = (fitted / expected - 1.0).abs();
        detail.push_str(&format!("m={m}: rel err {rel:.2e} "));
        ok &= rel < 1e-4;
    }
    criterion(11, "translator bowl series", ok, detail.trim());
}

#[test]
fn criterion_12_verify_determinism() {
    let bin = env!("CARGO_BIN_EXE_warpsol");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let status = Command::new(bin)
            .arg("verify")
            .arg("--out")
            .arg(dir.path())
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success(), "verify run failed");
    }
    let a = std::fs::read(dirs[0].path().join("verify.json")).unwrap();
    let b = std::fs::read(dirs[1].path().join("verify.json")).unwrap();
    criterion(
        12,
        "verify determinism",
        a == b,
        &format!("verify.json bodies: {} vs {} bytes, byte-identical: {}", a.len(), b.len(), a == b),
    );
}
