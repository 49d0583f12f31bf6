//! Scattered near field, far-field pattern and the error budgets that go with
//! the point-interaction approximation.
//!
//! ```text
//! E_s(x)     = sum_i grad Phi_k(x, z_i) x A_i + Pi_k(x, z_i) B_i
//! E_inf(tau) = (ik / 4 pi) sum_i e^{-ik tau . z_i} tau x (A_i + ik tau x B_i)
//! ```
//!
//! The far-field formula is the `|x| -> inf` limit of the near-field one:
//! `Pi_k(x, z) b ~ -k^2 Phi tau x (tau x b)`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::foldy::{FoldySolution, InvertibilityConstants, PlaneWave};
use crate::geometry::Cluster;
use crate::greens::{Kernel, Wavenumber};
use crate::layerops::ClusterSpectra;
use crate::linalg;
use crate::math;
use crate::vector::{self, CVec3, Vec3};
use crate::warning::Warning;

const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldSample {
    pub tau: Vec3,
    pub e_inf: CVec3,
}

/// Far-field pattern at each direction in `taus`. Needs a real wavenumber.
pub fn far_field(
    solution: &FoldySolution,
    cluster: &Cluster,
    wave: &PlaneWave,
    taus: &[Vec3],
) -> Result<Vec<FarFieldSample>> {
    far_field_at(solution, &cluster.centers(), wave.k(), taus)
}

/// [`far_field`] with explicit dipole positions.
pub fn far_field_at(
    solution: &FoldySolution,
    positions: &[Vec3],
    k: Wavenumber,
    taus: &[Vec3],
) -> Result<Vec<FarFieldSample>> {
    if !k.is_real() {
        return Err(Error::ComplexWavenumberFarField(k.value().im));
    }
    check_len(solution, positions)?;
    if let Some(t) = taus
        .iter()
        .find(|t| !((vector::norm(**t) - 1.0).abs() <= UNIT_TOLERANCE))
    {
        return Err(Error::InvalidParameter(format!(
            "far-field direction {t:?} is not a unit vector"
        )));
    }
    let k = k.value();
    let ik = Complex64::i() * k;
    let front = ik / (4.0 * PI);
    Ok(linalg::par_map(taus.len(), |n| {
        let tau = taus[n];
        let mut sum = vector::CZERO;
        for ((z, a), b) in positions.iter().zip(&solution.a_coeffs).zip(&solution.b_coeffs) {
            let phase = (-ik * vector::dot(tau, *z)).exp();
            let inner = vector::cadd(*a, vector::cscale(vector::rcross(tau, *b), ik));
            sum = vector::cadd(sum, vector::cscale(vector::rcross(tau, inner), phase));
        }
        FarFieldSample {
            tau,
            e_inf: vector::cscale(sum, front),
        }
    }))
}

/// Near-field values plus the points that sit closer to the cluster than `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct NearField {
    pub values: Vec<CVec3>,
    pub warnings: Vec<Warning>,
}

/// Scattered field at `points`. Complex wavenumbers are allowed.
pub fn near_field(
    solution: &FoldySolution,
    cluster: &Cluster,
    wave: &PlaneWave,
    points: &[Vec3],
) -> Result<NearField> {
    let centers = cluster.centers();
    let mut out = near_field_at(solution, &centers, wave.k(), points)?;
    let delta = cluster.delta();
    if delta.is_finite() {
        for (n, x) in points.iter().enumerate() {
            let distance = cluster.distance_to_point(*x);
            if distance < delta {
                out.warnings.push(Warning::NearFieldTooClose {
                    point: n,
                    distance,
                    delta,
                });
            }
        }
    }
    Ok(out)
}

/// [`near_field`] with explicit dipole positions and no distance warnings.
pub fn near_field_at(
    solution: &FoldySolution,
    positions: &[Vec3],
    k: Wavenumber,
    points: &[Vec3],
) -> Result<NearField> {
    check_len(solution, positions)?;
    let kernel = Kernel::new(k);
    let values = linalg::par_map(points.len(), |n| {
        let x = points[n];
        let mut sum = vector::CZERO;
        for (i, ((z, a), b)) in positions
            .iter()
            .zip(&solution.a_coeffs)
            .zip(&solution.b_coeffs)
            .enumerate()
        {
            let (g, pi) = kernel
                .pair(x, *z)
                .map_err(|_| Error::CoincidentWithCenter { point: n, body: i })?;
            sum = vector::cadd(sum, vector::cadd(vector::ccross(g, *a), pi.apply(*b)));
        }
        Ok(sum)
    });
    Ok(NearField {
        values: values.into_iter().collect::<Result<Vec<_>>>()?,
        warnings: Vec::new(),
    })
}

fn check_len(solution: &FoldySolution, positions: &[Vec3]) -> Result<()> {
    if solution.a_coeffs.len() != positions.len() || solution.b_coeffs.len() != positions.len() {
        return Err(Error::InvalidParameter(format!(
            "solution has {} coefficient pairs for {} positions",
            solution.a_coeffs.len(),
            positions.len()
        )));
    }
    Ok(())
}

/// `(|k|+1) ln(m^{1/3})/delta^3 + (|k|+1)^2 m^{1/3}/delta^2 + (|k|+1)^3 m^{2/3}/delta`
pub fn varepsilon_kdm(k_abs: f64, delta: f64, m: usize) -> f64 {
    varepsilon_parts(k_abs, delta, m).iter().sum()
}

fn varepsilon_parts(k_abs: f64, delta: f64, m: usize) -> [f64; 3] {
    let kp = k_abs + 1.0;
    let m13 = math::cbrt(m as f64);
    [
        kp * math::ln(m13) / (delta * delta * delta),
        kp * kp * m13 / (delta * delta),
        kp * kp * kp * m13 * m13 / delta,
    ]
}

/// One monomial of a budget: `value = c * eps^eps_power * delta^delta_power *
/// m^(m_thirds/3)`, times `ln(m^{1/3})` when `log_m` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetTerm {
    pub label: &'static str,
    pub value: f64,
    pub eps_power: i32,
    pub delta_power: i32,
    pub m_thirds: i32,
    pub log_m: bool,
}

/// Monomials sharing one prefactor. The group's magnitude is
/// `prefactor * sum(values)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetGroup {
    pub prefactor: f64,
    pub terms: Vec<BudgetTerm>,
}

impl BudgetGroup {
    pub fn raw(&self) -> f64 {
        self.terms.iter().map(|t| t.value).sum()
    }

    pub fn total(&self) -> f64 {
        self.prefactor * self.raw()
    }
}

/// Order-of-magnitude error indicators with every `O(.)` constant set to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBudget {
    pub varepsilon_kdm: f64,
    /// `O(eps^4/delta^4)` group of the near field, prefactor `1/(C_L2i mu- mu+)`.
    pub near_e4: BudgetGroup,
    /// `O(eps^7/delta^7)` group of the near field, prefactor `1/(C_L2i mu-)`.
    pub near_e7: BudgetGroup,
    /// `(|k|^3 + |k|^2) m eps^4`.
    pub far_dipole: BudgetGroup,
    /// `(|k|/2 pi) max(1,|k|) m eps^3` times the `eps^4/delta^4` group, prefactor `1/(C_Li mu-)`.
    pub far_interaction: BudgetGroup,
    /// False when `C_Li <= 0` or `C_L2i <= 0`; the prefactors are then meaningless.
    pub valid: bool,
    /// Always true: the `O(.)` constants are unknown and set to one.
    pub unnormalized: bool,
}

impl ErrorBudget {
    pub fn near_field_total(&self) -> f64 {
        self.near_e4.total() + self.near_e7.total()
    }

    pub fn far_field_total(&self) -> f64 {
        self.far_dipole.total() + self.far_interaction.total()
    }

    pub fn groups(&self) -> [(&'static str, &BudgetGroup); 4] {
        [
            ("near_e4", &self.near_e4),
            ("near_e7", &self.near_e7),
            ("far_dipole", &self.far_dipole),
            ("far_interaction", &self.far_interaction),
        ]
    }
}

pub fn theorem1_budgets(
    cluster: &Cluster,
    spectra: &ClusterSpectra,
    k: Wavenumber,
    constants: &InvertibilityConstants,
) -> ErrorBudget {
    budgets_from_parameters(
        cluster.len(),
        cluster.epsilon(),
        cluster.delta(),
        k.abs(),
        spectra,
        constants,
    )
}

/// Budgets from raw parameters; `delta = inf` stands for a single body and
/// zeroes every term with a negative power of `delta`.
pub fn budgets_from_parameters(
    m: usize,
    epsilon: f64,
    delta: f64,
    k_abs: f64,
    spectra: &ClusterSpectra,
    constants: &InvertibilityConstants,
) -> ErrorBudget {
    let mf = m as f64;
    let e = |p: i32| math::powi(epsilon, p);
    let d = |p: i32| if delta.is_finite() { math::powi(delta, p) } else { 0.0 };
    let k2 = k_abs * k_abs;
    let k3 = k2 * k_abs;
    let kp = 1.0 + k_abs;
    let v = if delta.is_finite() {
        varepsilon_parts(k_abs, delta, m)
    } else {
        [0.0; 3]
    };

    let term = |label, value, eps_power, delta_power, m_thirds, log_m| BudgetTerm {
        label,
        value,
        eps_power,
        delta_power,
        m_thirds,
        log_m,
    };

    let e4_terms = alloc::vec![
        term("eps4_over_delta4", e(4) * d(-4), 4, -4, 0, false),
        term("varepsilon_log", kp * v[0] * e(4), 4, -3, 0, true),
        term("varepsilon_m13", kp * v[1] * e(4), 4, -2, 1, false),
        term("varepsilon_m23", kp * v[2] * e(4), 4, -1, 2, false),
        term("local", kp.max(k2) * epsilon, 1, 0, 0, false),
    ];
    let e7_terms = alloc::vec![
        term("eps7_over_delta7", e(7) * d(-7), 7, -7, 0, false),
        term("delta6", 1f64.max(k_abs + k2 + k3) * e(7) * d(-6), 7, -6, 0, false),
        term("delta5", 1f64.max(k2) * e(7) * d(-5), 7, -5, 0, false),
    ];
    let far_weight = k_abs / (2.0 * PI) * 1f64.max(k_abs) * mf * e(3);
    let far_terms = e4_terms
        .iter()
        .map(|t| BudgetTerm {
            value: t.value * far_weight,
            eps_power: t.eps_power + 3,
            m_thirds: t.m_thirds + 3,
            ..*t
        })
        .collect();

    let mu_minus = spectra.mu_minus;
    let mu_plus = spectra.mu_plus;
    ErrorBudget {
        varepsilon_kdm: v.iter().sum(),
        near_e4: BudgetGroup {
            prefactor: 1.0 / (constants.c_li2 * mu_minus * mu_plus),
            terms: e4_terms,
        },
        near_e7: BudgetGroup {
            prefactor: 1.0 / (constants.c_li2 * mu_minus),
            terms: e7_terms,
        },
        far_dipole: BudgetGroup {
            prefactor: 1.0,
            terms: alloc::vec![term("dipole", (k3 + k2) * mf * e(4), 4, 0, 3, false)],
        },
        far_interaction: BudgetGroup {
            prefactor: 1.0 / (constants.c_li * mu_minus),
            terms: far_terms,
        },
        valid: constants.c_li_positive() && constants.c_li2_positive(),
        unnormalized: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foldy::SolveMethod;

    fn single(a: CVec3, b: CVec3) -> FoldySolution {
        FoldySolution {
            a_coeffs: alloc::vec![a],
            b_coeffs: alloc::vec![b],
            residual_norm: 0.0,
            method: SolveMethod::Direct,
            iterations: 1,
            final_increment: 0.0,
        }
    }

    #[test]
    fn single_sphere_forward_and_back() {
        let a = [0.0, 4.0 * PI * 1e-3, 0.0].map(|v| Complex64::new(0.0, v));
        let b = vector::to_complex([-2.0 * PI * 1e-3, 0.0, 0.0]);
        let sol = single(a, b);
        let s = far_field_at(
            &sol,
            &[vector::ZERO],
            Wavenumber::real(1.0),
            &[[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]],
        )
        .unwrap();
        assert!((s[0].e_inf[0] - Complex64::new(-1.5e-3, 0.0)).norm() < 1e-15);
        assert!((s[1].e_inf[0] - Complex64::new(5e-4, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn far_field_rejects_complex_k() {
        let sol = single(vector::CZERO, vector::CZERO);
        let k = Wavenumber::new(Complex64::new(1.0, 0.5)).unwrap();
        assert!(matches!(
            far_field_at(&sol, &[vector::ZERO], k, &[[1.0, 0.0, 0.0]]),
            Err(Error::ComplexWavenumberFarField(_))
        ));
    }

    #[test]
    fn near_field_rejects_center() {
        let sol = single(vector::CZERO, vector::CZERO);
        assert!(matches!(
            near_field_at(&sol, &[vector::ZERO], Wavenumber::real(1.0), &[[1.0, 0.0, 0.0], vector::ZERO]),
            Err(Error::CoincidentWithCenter { point: 1, body: 0 })
        ));
    }

    #[test]
    fn varepsilon_examples() {
        let v = varepsilon_kdm(0.0, 0.5, 8);
        assert!((v - (core::f64::consts::LN_2 / 0.125 + 2.0 / 0.25 + 4.0 / 0.5)).abs() < 1e-12);
        assert!((v - 21.545).abs() < 1e-3);
        let k: f64 = 0.7;
        let d: f64 = 0.3;
        let one = varepsilon_kdm(k, d, 1);
        assert!((one - (math::powi(k + 1.0, 2) / (d * d) + math::powi(k + 1.0, 3) / d)).abs() < 1e-12);
    }
}
