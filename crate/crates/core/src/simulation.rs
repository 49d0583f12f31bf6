//! End-to-end pipeline: tensors per body, cluster spectra, constants and the
//! regime check, then the solve with its diagnostics. Also hosts the built-in
//! validation suite that compares the pipeline against the oracles.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::fields;
use crate::foldy::{
    self, FoldySolution, FoldySystem, InvertibilityConstants, NormBoundCheck, PlaneWave,
};
use crate::geometry::{self, BodyKind, BodyShape, Cluster, RegimeReport};
use crate::greens::Wavenumber;
use crate::layerops::{self, BodyTensors, ClusterSpectra};
use crate::mesh::SurfaceMesh;
use crate::oracles;
use crate::vector::{self, Vec3};
use crate::warning::Warning;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    /// Direct up to the cap, Neumann beyond it.
    Auto,
    Direct,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub method: SolverChoice,
    pub tol: f64,
    pub max_iter: usize,
    pub direct_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: SolverChoice::Auto,
            tol: foldy::DEFAULT_NEUMANN_TOL,
            max_iter: foldy::DEFAULT_NEUMANN_MAX_ITER,
            direct_cap: foldy::DEFAULT_DIRECT_CAP,
        }
    }
}

/// Where a body's tensors came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TensorSource {
    Analytic,
    BoundaryElement {
        panels: usize,
        asymmetry: f64,
        gmres_iterations: usize,
    },
}

/// Everything that depends on the cluster and `k` but not on the incident
/// direction or polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared {
    pub cluster: Cluster,
    pub k: Wavenumber,
    pub tensors: Vec<BodyTensors>,
    pub sources: Vec<TensorSource>,
    pub spectra: ClusterSpectra,
    pub constants: InvertibilityConstants,
    pub regime: RegimeReport,
    pub warnings: Vec<Warning>,
}

/// Tensors for every body. Bodies sharing one mesh share one boundary-element
/// solve.
pub fn body_tensors(cluster: &Cluster) -> Result<(Vec<BodyTensors>, Vec<TensorSource>)> {
    let mut cache: Vec<(*const SurfaceMesh, BodyTensors, TensorSource)> = Vec::new();
    let mut tensors = Vec::with_capacity(cluster.len());
    let mut sources = Vec::with_capacity(cluster.len());
    for body in cluster.bodies() {
        let (t, s) = match &body.kind {
            BodyKind::AnalyticSphere { radius } => {
                (layerops::analytic_sphere_tensors(*radius), TensorSource::Analytic)
            }
            BodyKind::Mesh(mesh) => {
                let key = alloc::sync::Arc::as_ptr(mesh);
                if let Some((_, t, s)) = cache.iter().find(|(p, _, _)| *p == key) {
                    (*t, *s)
                } else {
                    let report = layerops::mesh_tensors(mesh)?;
                    let s = TensorSource::BoundaryElement {
                        panels: mesh.panel_count(),
                        asymmetry: report.asymmetry(),
                        gmres_iterations: report.gmres_iterations,
                    };
                    cache.push((key, report.tensors, s));
                    (report.tensors, s)
                }
            }
        };
        tensors.push(t);
        sources.push(s);
    }
    Ok((tensors, sources))
}

pub fn prepare(cluster: Cluster, k: Wavenumber, regime_threshold: f64) -> Result<Prepared> {
    let (tensors, sources) = body_tensors(&cluster)?;
    let spectra = layerops::cluster_spectra(&tensors, cluster.epsilon())?;
    let constants = foldy::invertibility_constants(&cluster, &spectra, k);
    let regime = geometry::validate_regime(&cluster, k, spectra.mu_plus, regime_threshold);

    let mut warnings = Vec::new();
    for (body, s) in sources.iter().enumerate() {
        if let TensorSource::BoundaryElement { asymmetry, .. } = s {
            if *asymmetry > layerops::ASYMMETRY_REPORT_LEVEL {
                warnings.push(Warning::TensorAsymmetry {
                    body,
                    asymmetry: *asymmetry,
                });
            }
        }
    }
    if constants.heuristic {
        warnings.push(Warning::HeuristicConstants { im_k: k.value().im });
    }
    if !regime.within_threshold {
        warnings.push(Warning::RegimeThreshold {
            value: regime.value,
            threshold: regime.threshold,
        });
    }
    if !constants.c_li_positive() {
        warnings.push(Warning::InvertibilityCondition { c_li: constants.c_li });
    }
    if !constants.c_li2_positive() {
        warnings.push(Warning::ContractionEstimate {
            estimate: constants.contraction_estimate,
        });
    }
    Ok(Prepared {
        cluster,
        k,
        tensors,
        sources,
        spectra,
        constants,
        regime,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub system: FoldySystem,
    pub solution: FoldySolution,
    pub norm_bound: Option<NormBoundCheck>,
    pub warnings: Vec<Warning>,
}

/// Assemble and solve for one incident wave. `wave.k()` must match the
/// wavenumber the cluster was prepared with.
pub fn solve(prepared: &Prepared, wave: &PlaneWave, options: &SolverOptions) -> Result<SolveOutcome> {
    if wave.k() != prepared.k {
        return Err(crate::Error::InvalidParameter(format!(
            "wave has k = {}, cluster was prepared with k = {}",
            wave.k().value(),
            prepared.k.value()
        )));
    }
    let system = foldy::assemble(&prepared.cluster, &prepared.tensors, wave)?;
    let use_direct = match options.method {
        SolverChoice::Direct => true,
        SolverChoice::Neumann => false,
        SolverChoice::Auto => system.len() <= options.direct_cap,
    };
    let solution = if use_direct {
        foldy::solve_direct(&system, options.direct_cap)?
    } else {
        foldy::solve_neumann(&system, options.tol, options.max_iter)?
    };
    let norm_bound = foldy::norm_bound_check(
        &solution,
        &system,
        prepared.cluster.epsilon(),
        &prepared.constants,
        prepared.spectra.mu_minus,
    );
    let mut warnings = Vec::new();
    if let Some(check) = norm_bound {
        if !check.holds {
            warnings.push(Warning::NormBound {
                lhs: check.lhs,
                rhs: check.rhs,
            });
        }
    }
    Ok(SolveOutcome {
        system,
        solution,
        norm_bound,
        warnings,
    })
}

/// One pass/fail line of the validation suite.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationCheck {
    pub name: String,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, observed: f64, tolerance: f64) {
        self.checks.push(ValidationCheck {
            name: name.into(),
            observed,
            tolerance,
            passed: observed <= tolerance,
        });
    }

    fn push_result(&mut self, name: &str, observed: Result<f64>, tolerance: f64) {
        self.push(name, observed.unwrap_or(f64::INFINITY), tolerance);
    }
}

fn relative_difference(a: &FoldySolution, b: &FoldySolution) -> f64 {
    let (x, y) = (a.unknowns(), b.unknowns());
    let num: f64 = x.iter().zip(&y).map(|(u, v)| (u - v).norm_sqr()).sum();
    let den: f64 = y.iter().map(|v| v.norm_sqr()).sum();
    crate::math::sqrt(num / den)
}

fn sphere_wave(k: f64) -> Result<PlaneWave> {
    PlaneWave::new(Wavenumber::real(k), [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
}

/// Run the built-in checks: boundary-element tensors and spectrum on a unit
/// sphere, the single-body closed form, the Mie comparison, brute force and
/// Neumann against the direct solve, and the `C_Ls` reference value.
pub fn run_validation_suite() -> ValidationReport {
    let mut report = ValidationReport { checks: Vec::new() };

    let mesh = SurfaceMesh::icosphere(1.0, 3);
    report.push_result(
        "bem_unit_sphere_tensors_1280",
        mesh.clone().and_then(|m| {
            let t = layerops::mesh_tensors(&m)?.tensors;
            let ep = vector::mat_norm(&vector::mat_sub(
                &t.p_tensor,
                &vector::mat_scale(&vector::IDENTITY, -4.0 * PI),
            )) / vector::mat_norm(&vector::mat_scale(&vector::IDENTITY, 4.0 * PI));
            let et = vector::mat_norm(&vector::mat_sub(
                &t.t_tensor,
                &vector::mat_scale(&vector::IDENTITY, 2.0 * PI),
            )) / vector::mat_norm(&vector::mat_scale(&vector::IDENTITY, 2.0 * PI));
            Ok(ep.max(et))
        }),
        0.02,
    );
    match &mesh {
        Ok(m) => {
            let s = oracles::np_sphere_spectrum_check(m);
            report.push("np_degree1_eigenvalue", s.degree1.relative_error, 0.03);
            report.push("np_degree2_eigenvalue", s.degree2.relative_error, 0.06);
            report.push("np_constant_identity", s.constant_deviation, 1e-12);
        }
        Err(_) => report.push("np_sphere_mesh", f64::INFINITY, 0.0),
    }

    report.push_result("single_sphere_closed_form", closed_form_error(), 1e-12);
    report.push_result("mie_ka_0.1", mie_error(0.1), 0.015);
    report.push_result("mie_ka_0.05", mie_error(0.05), 0.005);
    report.push_result("brute_force_vs_direct", brute_force_error(), 1e-10);
    report.push_result("neumann_vs_direct_lattice", neumann_error(), 1e-9);
    report.push(
        "c_ls_zero_frequency",
        (foldy::c_ls(0.0, 1.0) - 152.0 / PI).abs(),
        1e-12,
    );
    report
}

fn closed_form_error() -> Result<f64> {
    let cluster = Cluster::new(vec![BodyShape::sphere(vector::ZERO, 0.1)], 0.2)?;
    let sys = foldy::assemble(&cluster, &[layerops::analytic_sphere_tensors(0.1)], &sphere_wave(1.0)?)?;
    let sol = foldy::solve_direct(&sys, foldy::DEFAULT_DIRECT_CAP)?;
    let a = Complex64::new(0.0, 4.0 * PI * 1e-3);
    let b = Complex64::new(-2.0 * PI * 1e-3, 0.0);
    let ea = vector::cnorm(vector::csub(sol.a_coeffs[0], [Complex64::new(0.0, 0.0), a, Complex64::new(0.0, 0.0)])) / a.norm();
    let eb = vector::cnorm(vector::csub(sol.b_coeffs[0], [b, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)])) / b.norm();
    Ok(ea.max(eb))
}

/// Largest relative magnitude error of the forward and back far field against
/// the Mie reference for a sphere of radius `ka` at `k = 1`.
pub fn mie_error(ka: f64) -> Result<f64> {
    let wave = sphere_wave(1.0)?;
    let cluster = Cluster::new(vec![BodyShape::sphere(vector::ZERO, ka)], 2.0 * ka)?;
    let sys = foldy::assemble(&cluster, &[layerops::analytic_sphere_tensors(ka)], &wave)?;
    let sol = foldy::solve_direct(&sys, foldy::DEFAULT_DIRECT_CAP)?;
    let ff = fields::far_field(&sol, &cluster, &wave, &[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])?;
    let mie = oracles::mie_pec_dipole(ka, &wave)?;
    let ef = (vector::cnorm(ff[0].e_inf) - mie.forward_magnitude()).abs() / mie.forward_magnitude();
    let eb = (vector::cnorm(ff[1].e_inf) - mie.back_magnitude()).abs() / mie.back_magnitude();
    Ok(ef.max(eb))
}

fn brute_force_error() -> Result<f64> {
    let wave = PlaneWave::new(
        Wavenumber::real(1.3),
        [0.0, 0.6, 0.8],
        [1.0, 0.0, 0.0],
    )?;
    let configs: [&[Vec3]; 3] = [
        &[[0.0, 0.0, 0.0]],
        &[[0.0, 0.0, 0.0], [0.7, 0.2, -0.1]],
        &[[0.0, 0.0, 0.0], [0.6, 0.0, 0.0], [0.1, 0.5, 0.3]],
    ];
    let mut worst: f64 = 0.0;
    for centers in configs {
        let bodies: Vec<BodyShape> = centers
            .iter()
            .enumerate()
            .map(|(i, c)| BodyShape::sphere(*c, 0.1 + 0.02 * i as f64))
            .collect();
        let cluster = Cluster::with_enclosing_domain(bodies)?;
        let (tensors, _) = body_tensors(&cluster)?;
        let sys = foldy::assemble(&cluster, &tensors, &wave)?;
        let direct = foldy::solve_direct(&sys, foldy::DEFAULT_DIRECT_CAP)?;
        let brute = oracles::brute_force_small_system(&cluster, &tensors, &wave)?;
        worst = worst.max(relative_difference(&brute, &direct));
    }
    Ok(worst)
}

fn neumann_error() -> Result<f64> {
    let cluster = Cluster::with_enclosing_domain(geometry::cubic_lattice(2, 0.21, 0.005))?;
    let wave = sphere_wave(0.5)?;
    let (tensors, _) = body_tensors(&cluster)?;
    let sys = foldy::assemble(&cluster, &tensors, &wave)?;
    let direct = foldy::solve_direct(&sys, foldy::DEFAULT_DIRECT_CAP)?;
    let neumann = foldy::solve_neumann(&sys, 1e-12, foldy::DEFAULT_NEUMANN_MAX_ITER)?;
    Ok(relative_difference(&neumann, &direct))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prepare_single_sphere() {
        let cluster = Cluster::new(vec![BodyShape::sphere(vector::ZERO, 0.1)], 0.2).unwrap();
        let p = prepare(cluster, Wavenumber::real(1.0), geometry::DEFAULT_REGIME_THRESHOLD).unwrap();
        assert!((p.spectra.mu_plus - PI / 2.0).abs() < 1e-14);
        assert!((p.spectra.mu_minus - PI / 4.0).abs() < 1e-14);
        assert_eq!(p.constants.c_li, 1.0);
        assert!(p.warnings.is_empty());
        let out = solve(&p, &sphere_wave(1.0).unwrap(), &SolverOptions::default()).unwrap();
        assert!(out.norm_bound.unwrap().holds);
    }

    #[test]
    fn shared_mesh_is_solved_once() {
        let mesh = alloc::sync::Arc::new(SurfaceMesh::icosphere(0.1, 1).unwrap());
        let cluster = Cluster::with_enclosing_domain(vec![
            BodyShape::mesh(vector::ZERO, mesh.clone()),
            BodyShape::mesh([1.0, 0.0, 0.0], mesh),
        ])
        .unwrap();
        let (t, s) = body_tensors(&cluster).unwrap();
        assert_eq!(t[0], t[1]);
        assert_eq!(s[0], s[1]);
    }
}
