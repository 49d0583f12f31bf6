//! Reference computations that do not share code with the modules they check.
//!
//! - [`mie_pec`]: classical Mie series for a perfectly conducting sphere,
//!   from closed-form Riccati-Bessel functions.
//! - [`brute_force_small_system`]: the coupled dipole system for `m <= 3`,
//!   assembled entry by entry from its own kernel formulas and solved by
//!   Gaussian elimination with partial pivoting.
//! - [`np_sphere_spectrum_check`]: Rayleigh quotients of the discrete adjoint
//!   Neumann-Poincare operator on low-degree spherical harmonics.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::foldy::{FoldySolution, PlaneWave, SolveMethod};
use crate::geometry::Cluster;
use crate::layerops::{self, BodyTensors};
use crate::math;
use crate::mesh::SurfaceMesh;
use crate::vector::{self, CVec3, Vec3};

/// Largest size parameter accepted by the dipole mode.
pub const DIPOLE_MAX_KA: f64 = 0.2;
pub const BRUTE_FORCE_MAX_BODIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MieMode {
    /// The `n = 1` term only, with exact coefficients.
    Dipole,
    /// All terms up to the Wiscombe truncation order plus a safety margin.
    FullSeries,
}

/// Forward (`tau = theta`) and backward (`tau = -theta`) far-field amplitudes
/// for an incident field of unit amplitude along `p`. Magnitudes are
/// convention-free; the phase follows the `S(theta)/(-ik)` convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MieReference {
    pub ka: f64,
    pub forward_amp: CVec3,
    pub back_amp: CVec3,
    pub terms: usize,
}

impl MieReference {
    pub fn forward_magnitude(&self) -> f64 {
        vector::cnorm(self.forward_amp)
    }

    pub fn back_magnitude(&self) -> f64 {
        vector::cnorm(self.back_amp)
    }
}

pub fn mie_pec_dipole(radius: f64, wave: &PlaneWave) -> Result<MieReference> {
    mie_pec(radius, wave, MieMode::Dipole)
}

pub fn mie_pec(radius: f64, wave: &PlaneWave, mode: MieMode) -> Result<MieReference> {
    let k = wave.k().value();
    if k.im != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "the Mie reference needs a real wavenumber, Im k = {}",
            k.im
        )));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sphere radius must be positive, got {radius}"
        )));
    }
    let k = k.re;
    let x = k * radius;
    if !(x > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "size parameter must be positive, got {x}"
        )));
    }
    let n_max = match mode {
        MieMode::Dipole => {
            if x > DIPOLE_MAX_KA {
                return Err(Error::SizeParameterTooLarge { ka: x });
            }
            1
        }
        MieMode::FullSeries => (x + 4.0 * math::cbrt(x) + 2.0) as usize + 4,
    };
    let (j, y) = spherical_bessel(n_max, x);
    let mut forward = Complex64::new(0.0, 0.0);
    let mut back = Complex64::new(0.0, 0.0);
    for n in 1..=n_max {
        let nf = n as f64;
        let h = Complex64::new(j[n], y[n]);
        let h_prev = Complex64::new(j[n - 1], y[n - 1]);
        let psi = x * j[n];
        let dpsi = x * j[n - 1] - nf * j[n];
        let xi = h * x;
        let dxi = h_prev * x - h * nf;
        let a = dpsi / dxi;
        let b = psi / xi;
        let w = (2.0 * nf + 1.0) / 2.0;
        forward += (a + b) * w;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        back += (a - b) * (w * sign);
    }
    let scale = Complex64::new(0.0, -k).inv();
    let p = vector::to_complex(wave.p());
    Ok(MieReference {
        ka: x,
        forward_amp: vector::cscale(p, forward * scale),
        back_amp: vector::cscale(p, back * scale),
        terms: n_max,
    })
}

/// `j_n(x)` by downward recurrence normalized with `j_0`, `y_n(x)` by upward
/// recurrence, `n = 0..=n_max`.
fn spherical_bessel(n_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let (s, c) = (math::sin(x), math::cos(x));
    let j0 = s / x;
    let start = n_max + 20 + (x as usize);
    let mut down = vec![0.0; start + 2];
    down[start] = 1e-300;
    for n in (1..=start).rev() {
        down[n - 1] = (2.0 * n as f64 + 1.0) / x * down[n] - down[n + 1];
    }
    let norm = j0 / down[0];
    let j: Vec<f64> = down[..=n_max].iter().map(|v| v * norm).collect();

    let mut y = vec![0.0; n_max + 1];
    y[0] = -c / x;
    if n_max >= 1 {
        y[1] = -c / (x * x) - s / x;
    }
    for n in 1..n_max {
        y[n + 1] = (2.0 * n as f64 + 1.0) / x * y[n] - y[n - 1];
    }
    (j, y)
}

/// The coupled dipole system for at most three bodies, solved by explicit
/// elimination.
pub fn brute_force_small_system(
    cluster: &Cluster,
    tensors: &[BodyTensors],
    wave: &PlaneWave,
) -> Result<FoldySolution> {
    brute_force_at(&cluster.centers(), tensors, wave)
}

/// [`brute_force_small_system`] with explicit positions.
pub fn brute_force_at(
    positions: &[Vec3],
    tensors: &[BodyTensors],
    wave: &PlaneWave,
) -> Result<FoldySolution> {
    let m = positions.len();
    if m == 0 {
        return Err(Error::EmptyCluster);
    }
    if m > BRUTE_FORCE_MAX_BODIES {
        return Err(Error::InvalidParameter(format!(
            "brute force handles at most {BRUTE_FORCE_MAX_BODIES} bodies, got {m}"
        )));
    }
    if tensors.len() != m {
        return Err(Error::TensorCountMismatch {
            expected: m,
            found: tensors.len(),
        });
    }
    let k = wave.k().value();
    let k2 = k * k;
    let ik = Complex64::i() * k;
    let n = 6 * m;
    let zero = Complex64::new(0.0, 0.0);
    let mut mat = vec![vec![zero; n]; n];
    let mut rhs = vec![zero; n];
    let a_idx = |i: usize, c: usize| 3 * i + c;
    let b_idx = |i: usize, c: usize| 3 * m + 3 * i + c;

    for i in 0..m {
        let p = tensors[i].p_tensor;
        let t = tensors[i].t_tensor;
        let z = positions[i];
        let phase = (ik * (z[0] * wave.theta()[0] + z[1] * wave.theta()[1] + z[2] * wave.theta()[2])).exp();
        let th = wave.theta();
        let pol = wave.p();
        let e_in = [pol[0], pol[1], pol[2]].map(|v| phase * v);
        let curl_in = [
            th[1] * pol[2] - th[2] * pol[1],
            th[2] * pol[0] - th[0] * pol[2],
            th[0] * pol[1] - th[1] * pol[0],
        ]
        .map(|v| ik * phase * v);
        for a in 0..3 {
            mat[a_idx(i, a)][a_idx(i, a)] += 1.0;
            mat[b_idx(i, a)][b_idx(i, a)] += 1.0;
            for c in 0..3 {
                rhs[a_idx(i, a)] -= curl_in[c] * p[a][c];
                rhs[b_idx(i, a)] -= e_in[c] * t[a][c];
            }
        }
        for j in 0..m {
            if j == i {
                continue;
            }
            let d = [
                z[0] - positions[j][0],
                z[1] - positions[j][1],
                z[2] - positions[j][2],
            ];
            let r = math::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            let phi = (ik * r).exp() / (4.0 * PI * r);
            let radial = ik - 1.0 / r;
            let grad: [Complex64; 3] = [0, 1, 2].map(|c| phi * radial * d[c] / r);
            let mut hess = [[zero; 3]; 3];
            for c in 0..3 {
                for b in 0..3 {
                    let delta = if c == b { 1.0 } else { 0.0 };
                    let rr = d[c] * d[b] / (r * r);
                    hess[c][b] = phi
                        * (radial / r * delta + (radial * radial + 1.0 / (r * r) - radial / r) * rr)
                        + k2 * phi * delta;
                }
            }
            // Row A_i: + P_i (Pi A_j - k^2 grad x B_j).
            // Row B_i: - T_i (-grad x A_j + Pi B_j).
            for a in 0..3 {
                for c in 0..3 {
                    for b in 0..3 {
                        mat[a_idx(i, a)][a_idx(j, b)] += hess[c][b] * p[a][c];
                        mat[b_idx(i, a)][b_idx(j, b)] -= hess[c][b] * t[a][c];
                        for e in 0..3 {
                            let eps = levi_civita(c, e, b);
                            if eps != 0.0 {
                                mat[a_idx(i, a)][b_idx(j, b)] -= k2 * grad[e] * (eps * p[a][c]);
                                mat[b_idx(i, a)][a_idx(j, b)] += grad[e] * (eps * t[a][c]);
                            }
                        }
                    }
                }
            }
        }
    }

    let x = gaussian_elimination(mat.clone(), rhs.clone())?;
    let mut res2 = 0.0;
    for (row, b) in mat.iter().zip(&rhs) {
        let ax: Complex64 = row.iter().zip(&x).map(|(u, v)| u * v).sum();
        res2 += (ax - b).norm_sqr();
    }
    let rhs2: f64 = rhs.iter().map(|v| v.norm_sqr()).sum();
    let residual = if rhs2 > 0.0 {
        math::sqrt(res2 / rhs2)
    } else {
        math::sqrt(res2)
    };
    let blocks: Vec<CVec3> = x.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
    Ok(FoldySolution {
        a_coeffs: blocks[..m].to_vec(),
        b_coeffs: blocks[m..].to_vec(),
        residual_norm: residual,
        method: SolveMethod::Direct,
        iterations: 1,
        final_increment: 0.0,
    })
}

fn levi_civita(i: usize, j: usize, l: usize) -> f64 {
    match (i, j, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn gaussian_elimination(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r][col].norm().total_cmp(&a[s][col].norm()))
            .unwrap_or(col);
        let pivot = a[pivot_row][col];
        if pivot.norm() == 0.0 || !pivot.norm().is_finite() {
            return Err(Error::SingularSystem { pivot: pivot.norm() });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= factor * v;
            }
            let v = b[col];
            b[r] -= factor * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let tail: Complex64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Ok(x)
}

/// Observed against expected eigenvalue for one harmonic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueCheck {
    pub degree: usize,
    pub observed: f64,
    pub expected: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumReport {
    pub panels: usize,
    pub degree1: EigenvalueCheck,
    pub degree2: EigenvalueCheck,
    /// `max_i |(K 1)_i - 1/2|` for the double-layer matrix `K`.
    pub constant_deviation: f64,
}

/// Rayleigh quotients `<f, K* f> / <f, f>` (area-weighted) of the discrete
/// operator on `f = x` and `f = 3 z^2 - 1` restricted to the unit sphere.
pub fn np_sphere_spectrum_check(mesh: &SurfaceMesh) -> SpectrumReport {
    let kstar = layerops::assemble_adjoint_np(mesh);
    let area = mesh.areas();
    let dirs: Vec<Vec3> = mesh.centroids().iter().map(|c| vector::normalize(*c)).collect();
    let quotient = |f: &[f64]| {
        let kf = kstar.matvec(f);
        let num: f64 = (0..f.len()).map(|i| area[i] * f[i] * kf[i]).sum();
        let den: f64 = (0..f.len()).map(|i| area[i] * f[i] * f[i]).sum();
        num / den
    };
    let check = |degree: usize, observed: f64| {
        let expected = 1.0 / (2.0 * (2.0 * degree as f64 + 1.0));
        EigenvalueCheck {
            degree,
            observed,
            expected,
            relative_error: (observed - expected).abs() / expected,
        }
    };
    let f1: Vec<f64> = dirs.iter().map(|d| d[0]).collect();
    let f2: Vec<f64> = dirs.iter().map(|d| 3.0 * d[2] * d[2] - 1.0).collect();

    // (K 1)_i = sum_j K*_ji A_j / A_i
    let n = mesh.panel_count();
    let mut k_ones = vec![0.0; n];
    for j in 0..n {
        for (i, v) in kstar.row(j).iter().enumerate() {
            k_ones[i] += v * area[j];
        }
    }
    let constant_deviation = (0..n)
        .map(|i| (k_ones[i] / area[i] - 0.5).abs())
        .fold(0.0, f64::max);

    SpectrumReport {
        panels: n,
        degree1: check(1, quotient(&f1)),
        degree2: check(2, quotient(&f2)),
        constant_deviation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::Wavenumber;

    fn wave(k: f64) -> PlaneWave {
        PlaneWave::new(Wavenumber::real(k), [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn bessel_values() {
        let (j, y) = spherical_bessel(3, 0.7);
        let (s, c) = (math::sin(0.7), math::cos(0.7));
        let x: f64 = 0.7;
        let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
        let y2 = -(3.0 / (x * x) - 1.0) * c / x - 3.0 * s / (x * x);
        assert!((j[2] - j2).abs() < 1e-14 * j2.abs().max(1.0));
        assert!((y[2] - y2).abs() < 1e-12 * y2.abs());
    }

    #[test]
    fn rayleigh_limit() {
        let r = mie_pec_dipole(0.01, &wave(1.0)).unwrap();
        let x3 = 1e-6;
        assert!((r.forward_magnitude() - x3 / 2.0).abs() < 1e-3 * x3);
        assert!((r.back_magnitude() - 1.5 * x3).abs() < 1e-3 * x3);
        assert!(matches!(
            mie_pec_dipole(1.0, &wave(1.0)),
            Err(Error::SizeParameterTooLarge { .. })
        ));
    }

    #[test]
    fn full_series_close_to_dipole_for_small_spheres() {
        let d = mie_pec(0.05, &wave(1.0), MieMode::Dipole).unwrap();
        let f = mie_pec(0.05, &wave(1.0), MieMode::FullSeries).unwrap();
        assert!(f.terms > 1);
        assert!((d.back_magnitude() - f.back_magnitude()).abs() < 1e-2 * f.back_magnitude());
    }

    #[test]
    fn single_body_brute_force() {
        let t = layerops::analytic_sphere_tensors(0.1);
        let sol = brute_force_at(&[vector::ZERO], &[t], &wave(1.0)).unwrap();
        assert!((sol.a_coeffs[0][1] - Complex64::new(0.0, 4.0 * PI * 1e-3)).norm() < 1e-16);
        assert!((sol.b_coeffs[0][0] + 2.0 * PI * 1e-3).norm() < 1e-16);
    }
}
