//! TOML run configuration: space and soliton blocks plus per-command blocks.
//! Unknown keys are rejected and diagnostics carry the offending key and
//! line from the TOML parser.

use serde::{Deserialize, Serialize};
use warpsol::ambient::{AmbientSpace, SchwarzschildParams};
use warpsol::shooting::FiberBase;
use warpsol::spectral::Boundary;
use warpsol::SolitonProblem;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: SpaceConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub soliton: Option<SolitonConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slices: Option<SlicesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shoot: Option<ShootConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oscillate: Option<OscillateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kbar: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    /// Two-column CSV (t, h) for kind = "table".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonConfig {
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlicesConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShootConfig {
    pub u0: f64,
    pub rho_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub k: f64,
    pub tau_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub u0_min: f64,
    pub u0_max: f64,
    pub shots: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub interval: [f64; 2],
    pub boundary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    /// Weight profile spec (default const:1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    /// Potential profile spec; alternative to `target`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    /// "slice" computes the stability potential at `t0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillateConfig {
    pub v: String,
    pub a: String,
    pub base_r: f64,
    pub r_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_zeros: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthConfig {
    pub kind: String,
    pub profile: String,
    pub window: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

/// Parses and structurally validates a TOML run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let config: RunConfig =
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config error: {e}")))?;
    Ok(config)
}

impl RunConfig {
    /// Builds the ambient space described by the `[space]` block.
    pub fn build_space(&self) -> Result<AmbientSpace, CliError> {
        let s = &self.space;
        let need = |field: &str, v: Option<f64>| {
            v.ok_or_else(|| {
                CliError::Usage(format!("space kind '{}' requires `{field}`", s.kind))
            })
        };
        let space = match s.kind.as_str() {
            "schwarzschild" => {
                let m = s
                    .dim_m
                    .ok_or_else(|| CliError::Usage("schwarzschild requires `dim_m`".into()))?;
                let params = SchwarzschildParams::plain(m, need("mass", s.mass)?);
                build_schwarzschild(params, s.r_max)?
            }
            "ads" => {
                let m = s
                    .dim_m
                    .ok_or_else(|| CliError::Usage("ads requires `dim_m`".into()))?;
                let kbar = s
                    .kbar
                    .ok_or_else(|| CliError::Usage("ads requires `kbar`".into()))?;
                let params = SchwarzschildParams::ads(m, need("mass", s.mass)?, kbar);
                build_schwarzschild(params, s.r_max)?
            }
            "rn" => {
                let m = s
                    .dim_m
                    .ok_or_else(|| CliError::Usage("rn requires `dim_m`".into()))?;
                let params = SchwarzschildParams::reissner_nordstrom(
                    m,
                    need("mass", s.mass)?,
                    need("charge", s.charge)?,
                );
                build_schwarzschild(params, s.r_max)?
            }
            "hyperbolic-horo" => AmbientSpace::hyperbolic_horospheres(),
            "hyperbolic-hyper" => AmbientSpace::hyperbolic_hyperspheres(),
            "sphere-cone" => AmbientSpace::sphere_cone(),
            "euclidean-cone" => AmbientSpace::euclidean_cone(),
            "product" => AmbientSpace::product(s.h0.unwrap_or(1.0))
                .map_err(|e| CliError::Usage(e.to_string()))?,
            "table" => {
                let path = s.table_path.as_ref().ok_or_else(|| {
                    CliError::Usage("table kind requires `table_path`".into())
                })?;
                let samples = read_table(path)?;
                AmbientSpace::from_warping_table(&samples)
                    .map_err(|e| CliError::Usage(e.to_string()))?
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown space kind '{other}' (expected schwarzschild|ads|rn|hyperbolic-horo|\
                     hyperbolic-hyper|sphere-cone|euclidean-cone|product|table)"
                )))
            }
        };
        match s.t0 {
            Some(t0) => space
                .with_base_point(t0)
                .map_err(|e| CliError::Usage(e.to_string())),
            None => Ok(space),
        }
    }

    /// Builds the soliton problem (space + c + m).
    pub fn build_problem(&self) -> Result<SolitonProblem, CliError> {
        let space = self.build_space()?;
        let soliton = self
            .soliton
            .as_ref()
            .ok_or_else(|| CliError::Usage("missing `[soliton]` block".into()))?;
        let m = soliton
            .m
            .or(self.space.dim_m)
            .ok_or_else(|| CliError::Usage("soliton dimension `m` (or space `dim_m`) required".into()))?;
        SolitonProblem::new(space, soliton.c, m).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn fiber_base(spec: Option<&str>) -> Result<FiberBase, CliError> {
        match spec.unwrap_or("euclidean") {
            "euclidean" => Ok(FiberBase::Euclidean),
            "hyperbolic" => Ok(FiberBase::Hyperbolic),
            "spherical" => Ok(FiberBase::Spherical),
            other => Err(CliError::Usage(format!(
                "unknown fiber '{other}' (expected euclidean|hyperbolic|spherical)"
            ))),
        }
    }

    pub fn boundary(spec: &str) -> Result<Boundary, CliError> {
        match spec {
            "dirichlet" => Ok(Boundary::Dirichlet),
            "neumann" => Ok(Boundary::Neumann),
            "closed" => Ok(Boundary::Closed),
            other => Err(CliError::Usage(format!(
                "unknown boundary '{other}' (expected dirichlet|neumann|closed)"
            ))),
        }
    }
}

fn build_schwarzschild(
    params: SchwarzschildParams,
    r_max: Option<f64>,
) -> Result<AmbientSpace, CliError> {
    let result = match r_max {
        Some(r) => AmbientSpace::schwarzschild_with_window(params, r),
        None => AmbientSpace::schwarzschild(params),
    };
    result.map_err(|e| CliError::Usage(e.to_string()))
}

/// Reads a two-column CSV of (t, h) samples; `#` lines and a `t,h` header are
/// skipped.
pub fn read_table(path: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read table '{path}': {e}")))?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',');
        let parse = |s: Option<&str>| s.and_then(|x| x.trim().parse::<f64>().ok());
        match (parse(cols.next()), parse(cols.next())) {
            (Some(t), Some(h)) => samples.push((t, h)),
            _ if lineno == 0 => continue, // header row
            _ => {
                return Err(CliError::Usage(format!(
                    "bad table row at line {}: '{line}'",
                    lineno + 1
                )))
            }
        }
    }
    Ok(samples)
}
