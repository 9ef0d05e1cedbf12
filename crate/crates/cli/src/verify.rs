//! The `verify` command: replays the exact-soliton catalog through the
//! residual verifier and prints one pass/fail row per entry.

use serde::Serialize;
use warpsol::ambient::AmbientSpace;
use warpsol::soliton::ExactSoliton;
use warpsol::SolitonProblem;

use crate::report::{Meta, OutputSink};
use crate::{runtime_error, CliError};

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRow {
    pub name: String,
    pub details: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub meta: Meta,
    pub rows: Vec<VerifyRow>,
    pub all_pass: bool,
}

const CURVE_TOL: f64 = 1e-8;
const ALGEBRAIC_TOL: f64 = 1e-10;

/// Runs the default catalog; `tol_override` replaces every row tolerance.
pub fn run_verify(sink: &OutputSink, tol_override: Option<f64>) -> Result<VerifyReport, CliError> {
    let mut rows = Vec::new();
    let mut push = |name: &str,
                    details: String,
                    solution: Result<ExactSoliton, warpsol::Error>,
                    tol: f64|
     -> Result<(), CliError> {
        let solution = solution.map_err(runtime_error)?;
        let residual = solution.residual().map_err(runtime_error)?;
        let tolerance = tol_override.unwrap_or(tol);
        rows.push(VerifyRow {
            name: name.into(),
            details,
            residual,
            tolerance,
            pass: residual < tolerance,
        });
        Ok(())
    };

    for &k in &[0.5, 1.0, 2.0] {
        push(
            "grim-reaper",
            format!("k = {k}, 2001 samples"),
            ExactSoliton::grim_reaper(k, 2001),
            CURVE_TOL,
        )?;
    }
    for &m in &[2u32, 3] {
        push(
            "shrinker-sphere",
            format!("m = {m}, c = -1"),
            ExactSoliton::shrinker_sphere(m, -1.0),
            ALGEBRAIC_TOL,
        )?;
    }
    push(
        "shrinker-cylinder",
        "k = 1, m = 2, c = -1".into(),
        ExactSoliton::shrinker_cylinder(1, 2, -1.0),
        ALGEBRAIC_TOL,
    )?;
    push(
        "horosphere-slice",
        "m = 2, c = -2".into(),
        ExactSoliton::horosphere_slice(2, -2.0),
        ALGEBRAIC_TOL,
    )?;
    push(
        "hypersphere-slice",
        "m = 2, c = -0.8".into(),
        Ok(ExactSoliton::hypersphere_slices(2, -0.8)),
        ALGEBRAIC_TOL,
    )?;
    for &m in &[2u32, 3] {
        let problem = SolitonProblem::new(AmbientSpace::product(1.0).unwrap(), 1.0, m)
            .map_err(runtime_error)?;
        push(
            "bowl-series",
            format!("product, c = 1, m = {m}"),
            ExactSoliton::bowl_series(&problem, 0.0, 0.01, 201),
            CURVE_TOL,
        )?;
    }

    let all_pass = rows.iter().all(|r| r.pass);
    let report = VerifyReport {
        meta: Meta::new(),
        rows,
        all_pass,
    };
    sink.write_json("verify.json", &report)?;

    println!("{:<20} {:<28} {:>12} {:>10}  result", "solution", "parameters", "residual", "tol");
    for row in &report.rows {
        println!(
            "{:<20} {:<28} {:>12.3e} {:>10.1e}  {}",
            row.name,
            row.details,
            row.residual,
            row.tolerance,
            if row.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(report)
}
