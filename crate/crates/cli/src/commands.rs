//! One function per subcommand. Each returns the exit status or a
//! [`CliError`]; reports are written to the output destination and warnings
//! to stderr.

use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use foldylax_core::fields;
use foldylax_core::foldy::{InvertibilityConstants, PlaneWave, SolveMethod};
use foldylax_core::geometry::{Cluster, RegimeReport};
use foldylax_core::layerops::ClusterSpectra;
use foldylax_core::simulation::{self, Prepared, SolveOutcome, TensorSource};
use foldylax_core::vector::{self, Mat3, Vec3};
use foldylax_core::{Error, Warning};

use crate::output::{self, complex, complex3};
use crate::scenario::{self, LoadedScenario, TaskSpec};
use crate::{generate, Cli, CliError, Command, GenLayout, EXIT_OK, EXIT_VALIDATION};

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub task: &'static str,
    pub seed: Option<u64>,
}

fn metadata(cli: &Cli) -> Metadata {
    Metadata {
        tool: "foldylax",
        version: env!("CARGO_PKG_VERSION"),
        task: cli.command.name(),
        seed: cli.seed,
    }
}

pub fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Validate => validate(cli),
        Command::Gen(args) => gen(cli, &args.layout),
        command => {
            let path = cli
                .scenario
                .as_ref()
                .ok_or_else(|| CliError::invalid(format!("--scenario: `{}` needs a scenario file", command.name())))?;
            let loaded = scenario::load(path)?;
            let task = loaded.task_for(command.name())?.cloned();
            match command {
                Command::Tensor => tensor(cli, &loaded),
                Command::Solve => solve(cli, &loaded),
                Command::Farfield => farfield(cli, &loaded, task.as_ref()),
                Command::Nearfield => nearfield(cli, &loaded, task.as_ref()),
                Command::Budget => budget(cli, &loaded),
                Command::Validate | Command::Gen(_) => unreachable!("handled above"),
            }
        }
    }
}

fn destination(cli: &Cli, loaded: Option<&LoadedScenario>) -> Option<PathBuf> {
    cli.out.clone().or_else(|| {
        let l = loaded?;
        l.scenario.output.as_ref().map(|p| l.base_dir.join(p))
    })
}

fn emit(cli: &Cli, loaded: Option<&LoadedScenario>, text: &str) -> Result<(), CliError> {
    match destination(cli, loaded) {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::io(format!("--out: cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::io(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn report_warnings(warnings: &[Warning]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn prepare(loaded: &LoadedScenario, wave: &PlaneWave) -> Result<Prepared, CliError> {
    let cluster = loaded.cluster()?;
    let prepared = simulation::prepare(cluster, wave.k(), loaded.regime_threshold())
        .map_err(|e| CliError::from_core("bodies", e))?;
    report_warnings(&prepared.warnings);
    Ok(prepared)
}

fn solve_prepared(loaded: &LoadedScenario, prepared: &Prepared, wave: &PlaneWave) -> Result<SolveOutcome, CliError> {
    let options = loaded.solver_options()?;
    let outcome = simulation::solve(prepared, wave, &options).map_err(|e| CliError::from_core("solver", e))?;
    report_warnings(&outcome.warnings);
    Ok(outcome)
}

#[derive(Serialize)]
struct ClusterSummary {
    m: usize,
    epsilon: f64,
    delta: f64,
    domain_diameter: f64,
}

impl From<&Cluster> for ClusterSummary {
    fn from(c: &Cluster) -> Self {
        Self { m: c.len(), epsilon: c.epsilon(), delta: c.delta(), domain_diameter: c.domain_diameter() }
    }
}

#[derive(Serialize)]
struct ConstantsReport {
    c_ls: f64,
    c_li: f64,
    c_li2: f64,
    contraction_estimate: f64,
    heuristic: bool,
}

impl From<&InvertibilityConstants> for ConstantsReport {
    fn from(c: &InvertibilityConstants) -> Self {
        Self {
            c_ls: c.c_ls,
            c_li: c.c_li,
            c_li2: c.c_li2,
            contraction_estimate: c.contraction_estimate,
            heuristic: c.heuristic,
        }
    }
}

#[derive(Serialize)]
struct SpectraReport {
    mu_plus: f64,
    mu_minus: f64,
}

impl From<&ClusterSpectra> for SpectraReport {
    fn from(s: &ClusterSpectra) -> Self {
        Self { mu_plus: s.mu_plus, mu_minus: s.mu_minus }
    }
}

#[derive(Serialize)]
struct RegimeSummary {
    size_term: f64,
    tensor_term: f64,
    interaction_term: f64,
    value: f64,
    threshold: f64,
    within_threshold: bool,
}

impl From<&RegimeReport> for RegimeSummary {
    fn from(r: &RegimeReport) -> Self {
        Self {
            size_term: r.size_term,
            tensor_term: r.tensor_term,
            interaction_term: r.interaction_term,
            value: r.value,
            threshold: r.threshold,
            within_threshold: r.within_threshold,
        }
    }
}

#[derive(Serialize)]
struct WaveSummary {
    k: [f64; 2],
    theta: Vec3,
    p: Vec3,
}

impl From<&PlaneWave> for WaveSummary {
    fn from(w: &PlaneWave) -> Self {
        Self { k: complex(w.k().value()), theta: w.theta(), p: w.p() }
    }
}

#[derive(Serialize)]
struct TensorEntry {
    index: usize,
    source: &'static str,
    panels: Option<usize>,
    gmres_iterations: Option<usize>,
    p_tensor: Mat3,
    t_tensor: Mat3,
    asymmetry: f64,
    eigenvalues: TensorEigenvalues,
}

#[derive(Serialize)]
struct TensorEigenvalues {
    p: [f64; 3],
    t: [f64; 3],
}

#[derive(Serialize)]
struct TensorReport {
    metadata: Metadata,
    bodies: Vec<TensorEntry>,
}

fn tensor(cli: &Cli, loaded: &LoadedScenario) -> Result<i32, CliError> {
    let cluster = loaded.cluster()?;
    let (tensors, sources) = simulation::body_tensors(&cluster).map_err(|e| CliError::from_core("bodies", e))?;
    let bodies = tensors
        .iter()
        .zip(&sources)
        .enumerate()
        .map(|(index, (t, s))| {
            let (source, panels, gmres_iterations, asymmetry) = match s {
                TensorSource::Analytic => ("analytic", None, None, 0.0),
                TensorSource::BoundaryElement { panels, asymmetry, gmres_iterations } => {
                    ("boundary_element", Some(*panels), Some(*gmres_iterations), *asymmetry)
                }
            };
            TensorEntry {
                index,
                source,
                panels,
                gmres_iterations,
                p_tensor: t.p_tensor,
                t_tensor: t.t_tensor,
                asymmetry,
                eigenvalues: TensorEigenvalues {
                    p: vector::symmetric_eigenvalues(&t.p_tensor),
                    t: vector::symmetric_eigenvalues(&t.t_tensor),
                },
            }
        })
        .collect();
    emit(cli, Some(loaded), &output::to_json(&TensorReport { metadata: metadata(cli), bodies }))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct NormBoundReport {
    lhs: f64,
    rhs: f64,
    holds: bool,
}

#[derive(Serialize)]
struct SolveReport {
    metadata: Metadata,
    cluster: ClusterSummary,
    wave: WaveSummary,
    method: &'static str,
    iterations: usize,
    residual: f64,
    a_coeffs: Vec<[[f64; 2]; 3]>,
    b_coeffs: Vec<[[f64; 2]; 3]>,
    constants: ConstantsReport,
    spectra: SpectraReport,
    regime_report: RegimeSummary,
    norm_bound: Option<NormBoundReport>,
    warnings: Vec<String>,
}

fn solve(cli: &Cli, loaded: &LoadedScenario) -> Result<i32, CliError> {
    let wave = loaded.wave()?;
    let prepared = prepare(loaded, &wave)?;
    let outcome = solve_prepared(loaded, &prepared, &wave)?;
    let sol = &outcome.solution;
    let report = SolveReport {
        metadata: metadata(cli),
        cluster: (&prepared.cluster).into(),
        wave: (&wave).into(),
        method: match sol.method {
            SolveMethod::Direct => "direct",
            SolveMethod::NeumannSeries => "neumann_series",
        },
        iterations: sol.iterations,
        residual: sol.residual_norm,
        a_coeffs: sol.a_coeffs.iter().map(|v| complex3(*v)).collect(),
        b_coeffs: sol.b_coeffs.iter().map(|v| complex3(*v)).collect(),
        constants: (&prepared.constants).into(),
        spectra: (&prepared.spectra).into(),
        regime_report: (&prepared.regime).into(),
        norm_bound: outcome.norm_bound.map(|n| NormBoundReport { lhs: n.lhs, rhs: n.rhs, holds: n.holds }),
        warnings: prepared.warnings.iter().chain(&outcome.warnings).map(|w| w.to_string()).collect(),
    };
    emit(cli, Some(loaded), &output::to_json(&report))?;
    Ok(EXIT_OK)
}

fn farfield(cli: &Cli, loaded: &LoadedScenario, task: Option<&TaskSpec>) -> Result<i32, CliError> {
    let wave = loaded.wave()?;
    let im_k = wave.k().value().im;
    if im_k != 0.0 {
        return Err(CliError::from_core("wave.k_im", Error::ComplexWavenumberFarField(im_k)));
    }
    let taus = scenario::farfield_directions(task)?;
    let prepared = prepare(loaded, &wave)?;
    let outcome = solve_prepared(loaded, &prepared, &wave)?;
    let samples = fields::far_field(&outcome.solution, &prepared.cluster, &wave, &taus)
        .map_err(|e| CliError::from_core("task.directions", e))?;
    let table = output::field_table(["tau_x", "tau_y", "tau_z"], samples.iter().map(|s| (s.tau, s.e_inf)));
    emit(cli, Some(loaded), &table)?;
    Ok(EXIT_OK)
}

fn nearfield(cli: &Cli, loaded: &LoadedScenario, task: Option<&TaskSpec>) -> Result<i32, CliError> {
    let wave = loaded.wave()?;
    let points = scenario::nearfield_points(task)?;
    let prepared = prepare(loaded, &wave)?;
    let outcome = solve_prepared(loaded, &prepared, &wave)?;
    let field = fields::near_field(&outcome.solution, &prepared.cluster, &wave, &points)
        .map_err(|e| CliError::from_core("task", e))?;
    report_warnings(&field.warnings);
    let table = output::field_table(["x", "y", "z"], points.iter().copied().zip(field.values.iter().copied()));
    emit(cli, Some(loaded), &table)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TermReport {
    label: &'static str,
    value: f64,
    eps_power: i32,
    delta_power: i32,
    m_thirds: i32,
    log_m: bool,
}

#[derive(Serialize)]
struct GroupReport {
    name: &'static str,
    prefactor: f64,
    raw: f64,
    total: f64,
    terms: Vec<TermReport>,
}

#[derive(Serialize)]
struct BudgetReport {
    metadata: Metadata,
    cluster: ClusterSummary,
    k: [f64; 2],
    varepsilon_kdm: f64,
    valid: bool,
    unnormalized: bool,
    near_field_total: f64,
    far_field_total: f64,
    groups: Vec<GroupReport>,
    constants: ConstantsReport,
    spectra: SpectraReport,
    warnings: Vec<String>,
}

fn budget(cli: &Cli, loaded: &LoadedScenario) -> Result<i32, CliError> {
    let wave = loaded.wave()?;
    let prepared = prepare(loaded, &wave)?;
    let b = fields::theorem1_budgets(&prepared.cluster, &prepared.spectra, prepared.k, &prepared.constants);
    let groups = b
        .groups()
        .iter()
        .map(|(name, g)| GroupReport {
            name,
            prefactor: g.prefactor,
            raw: g.raw(),
            total: g.total(),
            terms: g
                .terms
                .iter()
                .map(|t| TermReport {
                    label: t.label,
                    value: t.value,
                    eps_power: t.eps_power,
                    delta_power: t.delta_power,
                    m_thirds: t.m_thirds,
                    log_m: t.log_m,
                })
                .collect(),
        })
        .collect();
    let report = BudgetReport {
        metadata: metadata(cli),
        cluster: (&prepared.cluster).into(),
        k: complex(prepared.k.value()),
        varepsilon_kdm: b.varepsilon_kdm,
        valid: b.valid,
        unnormalized: b.unnormalized,
        near_field_total: b.near_field_total(),
        far_field_total: b.far_field_total(),
        groups,
        constants: (&prepared.constants).into(),
        spectra: (&prepared.spectra).into(),
        warnings: prepared.warnings.iter().map(|w| w.to_string()).collect(),
    };
    emit(cli, Some(loaded), &output::to_json(&report))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CheckReport {
    name: String,
    observed: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct ValidationOutput {
    metadata: Metadata,
    all_passed: bool,
    checks: Vec<CheckReport>,
}

fn validate(cli: &Cli) -> Result<i32, CliError> {
    let report = simulation::run_validation_suite();
    let all_passed = report.all_passed();
    let checks = report
        .checks
        .into_iter()
        .map(|c| CheckReport { name: c.name, observed: c.observed, tolerance: c.tolerance, passed: c.passed })
        .collect::<Vec<_>>();
    for c in checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} observed {:e} > tolerance {:e}", c.name, c.observed, c.tolerance);
    }
    emit(cli, None, &output::to_json(&ValidationOutput { metadata: metadata(cli), all_passed, checks }))?;
    Ok(if all_passed { EXIT_OK } else { EXIT_VALIDATION })
}

fn gen(cli: &Cli, layout: &GenLayout) -> Result<i32, CliError> {
    let seed = cli.seed.unwrap_or(0);
    let scenario = match *layout {
        GenLayout::Lattice { n, spacing, radius } => generate::lattice(n, spacing, radius, seed)?,
        GenLayout::Random { count, radius, extent, min_gap } => generate::random(count, radius, extent, min_gap, seed)?,
    };
    emit(cli, None, &output::to_json(&scenario))?;
    Ok(EXIT_OK)
}
