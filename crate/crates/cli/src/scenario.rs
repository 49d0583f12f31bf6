//! Scenario documents (JSON, `schema: 1`).
//!
//! A scenario names the bodies, the incident wave and, where a task needs
//! them, task parameters and solver options. The subcommand picks the task;
//! a `task` object in the document only carries its parameters and must agree
//! with the subcommand.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use foldylax_core::foldy::PlaneWave;
use foldylax_core::geometry::{BodyShape, Cluster, DEFAULT_REGIME_THRESHOLD};
use foldylax_core::greens::Wavenumber;
use foldylax_core::simulation::{SolverChoice, SolverOptions};
use foldylax_core::{Complex64, Vec3};

use crate::{off, CliError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub bodies: Vec<BodySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_diameter: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave: Option<WaveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<TaskSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime_threshold: Option<f64>,
    /// Output file; `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Provenance written by `gen`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Sphere {
        center: Vec3,
        radius: f64,
    },
    /// OFF surface in local coordinates around `center`, optionally scaled.
    /// Relative paths resolve against the scenario's directory.
    Mesh {
        center: Vec3,
        mesh_path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSpec {
    pub k_re: f64,
    #[serde(default)]
    pub k_im: f64,
    pub theta: Vec3,
    pub p: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum TaskSpec {
    Tensor,
    Solve,
    Farfield {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        directions: Option<Vec<Vec3>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<AngularGrid>,
    },
    Nearfield {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<Vec3>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        line: Option<LineSampling>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sphere: Option<SphereSampling>,
    },
    Budget,
    Validate,
}

impl TaskSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TaskSpec::Tensor => "tensor",
            TaskSpec::Solve => "solve",
            TaskSpec::Farfield { .. } => "farfield",
            TaskSpec::Nearfield { .. } => "nearfield",
            TaskSpec::Budget => "budget",
            TaskSpec::Validate => "validate",
        }
    }
}

/// Polar angles `pi i / (n_theta - 1)` crossed with azimuths `2 pi j / n_phi`;
/// each pole appears once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngularGrid {
    pub n_theta: usize,
    pub n_phi: usize,
}

pub const DEFAULT_FARFIELD_GRID: AngularGrid = AngularGrid { n_theta: 19, n_phi: 36 };

impl AngularGrid {
    pub fn directions(&self) -> Result<Vec<Vec3>, CliError> {
        if self.n_theta < 2 || self.n_phi < 1 {
            return Err(CliError::invalid("task.grid: need n_theta >= 2 and n_phi >= 1"));
        }
        let mut out = Vec::new();
        for i in 0..self.n_theta {
            let polar = std::f64::consts::PI * i as f64 / (self.n_theta - 1) as f64;
            let azimuths = if i == 0 || i == self.n_theta - 1 { 1 } else { self.n_phi };
            for j in 0..azimuths {
                let az = 2.0 * std::f64::consts::PI * j as f64 / self.n_phi as f64;
                let (s, c) = polar.sin_cos();
                out.push([s * az.cos(), s * az.sin(), c]);
            }
        }
        Ok(out)
    }
}

/// `n` evenly spaced points from `start` to `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSampling {
    pub start: Vec3,
    pub end: Vec3,
    pub n: usize,
}

/// Points on a sphere, laid out like [`AngularGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSampling {
    pub center: Vec3,
    pub radius: f64,
    pub n_theta: usize,
    pub n_phi: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodSpec {
    Auto,
    Direct,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_method")]
    pub method: MethodSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct_cap: Option<usize>,
}

fn default_method() -> MethodSpec {
    MethodSpec::Auto
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorInfo {
    pub kind: String,
    pub seed: u64,
}

/// A parsed scenario together with the directory its relative paths refer to.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub base_dir: PathBuf,
}

pub fn load(path: &Path) -> Result<LoadedScenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read scenario {}: {e}", path.display())))?;
    let scenario = parse(&text)?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(LoadedScenario { scenario, base_dir })
}

pub fn parse(text: &str) -> Result<Scenario, CliError> {
    let scenario: Scenario = serde_json::from_str(text)
        .map_err(|e| CliError::invalid(format!("scenario does not parse: {e}")))?;
    if scenario.schema != SCHEMA_VERSION {
        return Err(CliError::invalid(format!(
            "schema: unsupported version {}, expected {SCHEMA_VERSION}",
            scenario.schema
        )));
    }
    Ok(scenario)
}

impl LoadedScenario {
    pub fn bodies(&self) -> Result<Vec<BodyShape>, CliError> {
        let mut meshes: Vec<(PathBuf, Option<f64>, Arc<foldylax_core::mesh::SurfaceMesh>)> = Vec::new();
        let mut out = Vec::with_capacity(self.scenario.bodies.len());
        for (i, spec) in self.scenario.bodies.iter().enumerate() {
            match spec {
                BodySpec::Sphere { center, radius } => out.push(BodyShape::sphere(*center, *radius)),
                BodySpec::Mesh { center, mesh_path, scale } => {
                    let path = self.base_dir.join(mesh_path);
                    let shared = meshes
                        .iter()
                        .find(|(p, s, _)| *p == path && s == scale)
                        .map(|(_, _, m)| m.clone());
                    let mesh = match shared {
                        Some(m) => m,
                        None => {
                            let mut mesh = off::read_off(&path)?;
                            if let Some(s) = scale {
                                mesh = mesh.scaled(*s).map_err(|e| {
                                    CliError::invalid(format!("bodies[{i}].scale: {e}"))
                                })?;
                            }
                            let mesh = Arc::new(mesh);
                            meshes.push((path, *scale, mesh.clone()));
                            mesh
                        }
                    };
                    out.push(BodyShape::mesh(*center, mesh));
                }
            }
        }
        Ok(out)
    }

    pub fn cluster(&self) -> Result<Cluster, CliError> {
        let bodies = self.bodies()?;
        let cluster = match self.scenario.domain_diameter {
            Some(d) => Cluster::new(bodies, d),
            None => Cluster::with_enclosing_domain(bodies),
        };
        cluster.map_err(|e| CliError::from_core("bodies", e))
    }

    pub fn wave(&self) -> Result<PlaneWave, CliError> {
        let w = self
            .scenario
            .wave
            .as_ref()
            .ok_or_else(|| CliError::invalid("wave: this task needs an incident wave"))?;
        let k = Wavenumber::new(Complex64::new(w.k_re, w.k_im))
            .map_err(|e| CliError::from_core("wave.k_im", e))?;
        PlaneWave::new(k, w.theta, w.p).map_err(|e| CliError::from_core("wave", e))
    }

    pub fn regime_threshold(&self) -> f64 {
        self.scenario.regime_threshold.unwrap_or(DEFAULT_REGIME_THRESHOLD)
    }

    pub fn solver_options(&self) -> Result<SolverOptions, CliError> {
        let mut options = SolverOptions::default();
        if let Some(spec) = &self.scenario.solver {
            options.method = match spec.method {
                MethodSpec::Auto => SolverChoice::Auto,
                MethodSpec::Direct => SolverChoice::Direct,
                MethodSpec::Neumann => SolverChoice::Neumann,
            };
            if let Some(tol) = spec.tol {
                if !(tol > 0.0) {
                    return Err(CliError::invalid(format!("solver.tol: must be positive, got {tol}")));
                }
                options.tol = tol;
            }
            if let Some(n) = spec.max_iter {
                options.max_iter = n;
            }
            if let Some(n) = spec.direct_cap {
                options.direct_cap = n;
            }
        }
        Ok(options)
    }

    /// Task parameters, checked against the subcommand.
    pub fn task_for(&self, command: &str) -> Result<Option<&TaskSpec>, CliError> {
        match &self.scenario.task {
            Some(t) if t.name() != command => Err(CliError::invalid(format!(
                "task.type: scenario declares `{}` but the subcommand is `{command}`",
                t.name()
            ))),
            other => Ok(other.as_ref()),
        }
    }
}

pub fn nearfield_points(task: Option<&TaskSpec>) -> Result<Vec<Vec3>, CliError> {
    let Some(TaskSpec::Nearfield { points, line, sphere }) = task else {
        return Err(CliError::invalid(
            "task: nearfield needs `points`, `line` or `sphere` sampling",
        ));
    };
    let given = [points.is_some(), line.is_some(), sphere.is_some()]
        .iter()
        .filter(|b| **b)
        .count();
    if given != 1 {
        return Err(CliError::invalid(
            "task: give exactly one of `points`, `line` or `sphere`",
        ));
    }
    if let Some(p) = points {
        return Ok(p.clone());
    }
    if let Some(l) = line {
        if l.n < 2 {
            return Err(CliError::invalid("task.line.n: need at least 2 points"));
        }
        return Ok((0..l.n)
            .map(|i| {
                let t = i as f64 / (l.n - 1) as f64;
                std::array::from_fn(|c| l.start[c] + t * (l.end[c] - l.start[c]))
            })
            .collect());
    }
    let s = sphere.expect("one sampling is present");
    if !(s.radius > 0.0) {
        return Err(CliError::invalid("task.sphere.radius: must be positive"));
    }
    let grid = AngularGrid { n_theta: s.n_theta, n_phi: s.n_phi };
    Ok(grid
        .directions()?
        .into_iter()
        .map(|d| std::array::from_fn(|c| s.center[c] + s.radius * d[c]))
        .collect())
}

pub fn farfield_directions(task: Option<&TaskSpec>) -> Result<Vec<Vec3>, CliError> {
    match task {
        Some(TaskSpec::Farfield { directions: Some(_), grid: Some(_) }) => Err(CliError::invalid(
            "task: give either `directions` or `grid`, not both",
        )),
        Some(TaskSpec::Farfield { directions: Some(d), .. }) => Ok(d.clone()),
        Some(TaskSpec::Farfield { grid: Some(g), .. }) => g.directions(),
        _ => DEFAULT_FARFIELD_GRID.directions(),
    }
}
