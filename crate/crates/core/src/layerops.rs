//! Static Neumann-Poincare operator on a triangulated surface and the two
//! shape tensors built from it:
//!
//! ```text
//! [P] = int (-1/2 I + K*)^{-1}[nu](y) (y - c)^T ds(y)     negative definite
//! [T] = int ( 1/2 I + K*)^{-1}[nu](y) (y - c)^T ds(y)     positive definite
//! ```
//!
//! `K*[phi](x) = 1/(4 pi) int (x - y).nu(x) / |x - y|^3 phi(y) ds(y)`. With this
//! sign the unit sphere has `K*` eigenvalue `1/(2(2n+1))` on degree-`n`
//! harmonics, so `[P] = -4 pi I` and `[T] = 2 pi I` there.
//!
//! Discretization is flat-panel centroid collocation. Off-diagonal entries are
//! kernel times panel area. The diagonal of the double-layer matrix `K` is
//! chosen so that `(-1/2 I + K) 1 = 0` holds row by row, and `K*` is the
//! area-weighted transpose of `K`, which gives it the same diagonal.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix, GmresOptions};
use crate::mesh::SurfaceMesh;
use crate::vector::{self, Mat3};

/// Asymmetry above which symmetrization is worth reporting.
pub const ASYMMETRY_REPORT_LEVEL: f64 = 1e-8;

const INV_4PI: f64 = 1.0 / (4.0 * PI);

/// Collocation matrix of the adjoint operator `K*` on panel centroids.
///
/// The mesh is already validated (closed, oriented, no degenerate panels), so
/// assembly cannot fail.
pub fn assemble_adjoint_np(mesh: &SurfaceMesh) -> DenseMatrix {
    let x = mesh.centroids();
    let nu = mesh.normals();
    let area = mesh.areas();
    let n = mesh.panel_count();
    DenseMatrix::from_rows(n, n, |i, row| {
        let mut double_layer_row = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = vector::sub(x[i], x[j]);
            let r2 = vector::dot(d, d);
            let inv_r3 = 1.0 / (r2 * crate::math::sqrt(r2));
            row[j] = INV_4PI * vector::dot(d, nu[i]) * inv_r3 * area[j];
            double_layer_row -= INV_4PI * vector::dot(d, nu[j]) * inv_r3 * area[j];
        }
        row[i] = 0.5 - double_layer_row;
    })
}

/// The double-layer matrix `K`, recovered from `K*` via `A K* = K^T A`.
pub fn double_layer_from_adjoint(mesh: &SurfaceMesh, adjoint: &DenseMatrix) -> DenseMatrix {
    let area = mesh.areas();
    let n = adjoint.rows();
    DenseMatrix::from_rows(n, n, |i, row| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = adjoint.get(j, i) * area[j] / area[i];
        }
    })
}

/// `[P]` and `[T]` of one body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyTensors {
    pub p_tensor: Mat3,
    pub t_tensor: Mat3,
}

impl BodyTensors {
    /// Both tensors multiplied by `s^3`, i.e. the tensors of the body scaled by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let s3 = s * s * s;
        Self {
            p_tensor: vector::mat_scale(&self.p_tensor, s3),
            t_tensor: vector::mat_scale(&self.t_tensor, s3),
        }
    }

    /// Tensors of the body rotated by `r`: `R M R^T`.
    pub fn rotated(&self, r: &Mat3) -> Self {
        let conj = |m: &Mat3| vector::mat_mul(&vector::mat_mul(r, m), &vector::transpose(r));
        Self {
            p_tensor: conj(&self.p_tensor),
            t_tensor: conj(&self.t_tensor),
        }
    }

    /// Check `[P] < 0` and `[T] > 0`.
    pub fn check_signs(&self, index: usize) -> Result<()> {
        let p = vector::symmetric_eigenvalues(&self.p_tensor);
        let t = vector::symmetric_eigenvalues(&self.t_tensor);
        if !(p[2] < 0.0) {
            return Err(Error::WrongSignTensor {
                index,
                which: "largest polarization",
                eigenvalue: p[2],
            });
        }
        if !(t[0] > 0.0) {
            return Err(Error::WrongSignTensor {
                index,
                which: "smallest virtual-mass",
                eigenvalue: t[0],
            });
        }
        Ok(())
    }
}

/// Closed-form tensors of a ball: `[P] = -4 pi r^3 I`, `[T] = 2 pi r^3 I`.
pub fn analytic_sphere_tensors(radius: f64) -> BodyTensors {
    assert!(radius > 0.0, "sphere radius must be positive");
    let r3 = radius * radius * radius;
    BodyTensors {
        p_tensor: vector::mat_scale(&vector::IDENTITY, -4.0 * PI * r3),
        t_tensor: vector::mat_scale(&vector::IDENTITY, 2.0 * PI * r3),
    }
}

/// Boundary-element tensors with discretization diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshTensorReport {
    pub tensors: BodyTensors,
    /// Relative asymmetry of `[P]` before symmetrization.
    pub p_asymmetry: f64,
    /// Relative asymmetry of `[T]` before symmetrization.
    pub t_asymmetry: f64,
    pub gmres_iterations: usize,
}

impl MeshTensorReport {
    pub fn asymmetry(&self) -> f64 {
        self.p_asymmetry.max(self.t_asymmetry)
    }
}

/// Both tensors from a single operator assembly.
pub fn mesh_tensors(mesh: &SurfaceMesh) -> Result<MeshTensorReport> {
    let kstar = assemble_adjoint_np(mesh);
    let (p_raw, p_iters) = shifted_inverse_moment(mesh, &kstar, -0.5)?;
    let (t_raw, t_iters) = shifted_inverse_moment(mesh, &kstar, 0.5)?;
    let p_asymmetry = vector::relative_asymmetry(&p_raw);
    let t_asymmetry = vector::relative_asymmetry(&t_raw);
    if p_asymmetry.max(t_asymmetry) > ASYMMETRY_REPORT_LEVEL {
        log::debug!("tensor asymmetry before symmetrization: P {p_asymmetry:e}, T {t_asymmetry:e}");
    }
    Ok(MeshTensorReport {
        tensors: BodyTensors {
            p_tensor: vector::symmetrize(&p_raw),
            t_tensor: vector::symmetrize(&t_raw),
        },
        p_asymmetry,
        t_asymmetry,
        gmres_iterations: p_iters + t_iters,
    })
}

pub fn polarization_tensor(mesh: &SurfaceMesh) -> Result<Mat3> {
    let kstar = assemble_adjoint_np(mesh);
    let (raw, _) = shifted_inverse_moment(mesh, &kstar, -0.5)?;
    Ok(vector::symmetrize(&raw))
}

pub fn virtual_mass_tensor(mesh: &SurfaceMesh) -> Result<Mat3> {
    let kstar = assemble_adjoint_np(mesh);
    let (raw, _) = shifted_inverse_moment(mesh, &kstar, 0.5)?;
    Ok(vector::symmetrize(&raw))
}

/// `int (lambda I + K*)^{-1}[nu](y) (y - c)^T ds` with the density constrained
/// to zero area-weighted mean.
///
/// The operator is augmented with `phi -> 1 * (A^T phi) / |S|`. Because
/// `A^T (lambda I + K*) phi = (lambda + 1/2) A^T phi` and `A^T nu = 0`, the
/// augmented solution has zero mean and solves the original equation there;
/// the augmentation also removes the null vector of `-1/2 I + K*`.
fn shifted_inverse_moment(
    mesh: &SurfaceMesh,
    kstar: &DenseMatrix,
    lambda: f64,
) -> Result<(Mat3, usize)> {
    let area = mesh.areas();
    let total = mesh.total_area();
    let centroid = mesh.surface_centroid();
    let n = mesh.panel_count();

    let apply = |phi: &[f64]| -> Vec<f64> {
        let mean = linalg::dot(area, phi) / total;
        let mut out = kstar.matvec(phi);
        out.iter_mut()
            .zip(phi)
            .for_each(|(o, p)| *o += lambda * p + mean);
        out
    };

    let mut moment = [[0.0; 3]; 3];
    let mut iterations = 0;
    for a in 0..3 {
        let mut rhs: Vec<f64> = mesh.normals().iter().map(|nu| nu[a]).collect();
        let mean = linalg::dot(area, &rhs) / total;
        rhs.iter_mut().for_each(|v| *v -= mean);

        let out = linalg::gmres(apply, &rhs, GmresOptions::default());
        iterations += out.iterations;
        if !out.converged || out.x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularOperator {
                residual: out.relative_residual,
            });
        }
        for i in 0..n {
            let y = vector::sub(mesh.centroids()[i], centroid);
            for b in 0..3 {
                moment[a][b] += out.x[i] * y[b] * area[i];
            }
        }
    }
    Ok((moment, iterations))
}

/// Extreme eigenvalues over the cluster of the normalized tensors
/// `[T]/eps^3` and `-[P]/eps^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterSpectra {
    pub mu_plus: f64,
    pub mu_minus: f64,
}

pub fn cluster_spectra(tensors: &[BodyTensors], epsilon: f64) -> Result<ClusterSpectra> {
    if tensors.is_empty() {
        return Err(Error::EmptyCluster);
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let eps3 = epsilon * epsilon * epsilon;
    let mut mu_plus = f64::NEG_INFINITY;
    let mut mu_minus = f64::INFINITY;
    for (i, t) in tensors.iter().enumerate() {
        t.check_signs(i)?;
        let neg_p = vector::symmetric_eigenvalues(&vector::mat_scale(&t.p_tensor, -1.0 / eps3));
        let tt = vector::symmetric_eigenvalues(&vector::mat_scale(&t.t_tensor, 1.0 / eps3));
        mu_plus = mu_plus.max(neg_p[2]).max(tt[2]);
        mu_minus = mu_minus.min(neg_p[0]).min(tt[0]);
    }
    Ok(ClusterSpectra { mu_plus, mu_minus })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_diag_error(m: &Mat3, expected: f64) -> f64 {
        let target = vector::mat_scale(&vector::IDENTITY, expected);
        vector::mat_norm(&vector::mat_sub(m, &target)) / vector::mat_norm(&target)
    }

    #[test]
    fn deflation_identity_is_exact() {
        let mesh = SurfaceMesh::icosphere(1.0, 2)
            .unwrap()
            .stretched([1.0, 0.7, 1.3])
            .unwrap();
        let kstar = assemble_adjoint_np(&mesh);
        let k = double_layer_from_adjoint(&mesh, &kstar);
        let ones = alloc::vec![1.0; mesh.panel_count()];
        for v in k.matvec(&ones) {
            assert!((v - 0.5).abs() < 1e-13, "K 1 = {v}");
        }
    }

    #[test]
    fn unit_sphere_tensors_coarse() {
        let mesh = SurfaceMesh::icosphere(1.0, 2).unwrap();
        let rep = mesh_tensors(&mesh).unwrap();
        assert!(rel_diag_error(&rep.tensors.p_tensor, -4.0 * PI) < 0.05);
        assert!(rel_diag_error(&rep.tensors.t_tensor, 2.0 * PI) < 0.05);
        rep.tensors.check_signs(0).unwrap();
    }

    #[test]
    fn analytic_sphere_values() {
        let t = analytic_sphere_tensors(1.0);
        assert_eq!(t.p_tensor[0][0], -4.0 * PI);
        assert_eq!(t.t_tensor[2][2], 2.0 * PI);
        let small = analytic_sphere_tensors(0.1);
        assert!((small.p_tensor[1][1] + 4.0 * PI * 1e-3).abs() < 1e-15);
        let big = analytic_sphere_tensors(2.0);
        assert!((big.t_tensor[0][0] - 16.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn spectra_of_unit_spheres() {
        let t = [analytic_sphere_tensors(1.0); 3];
        let s = cluster_spectra(&t, 1.0).unwrap();
        assert!((s.mu_plus - 4.0 * PI).abs() < 1e-14);
        assert!((s.mu_minus - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn spectra_reject_wrong_sign() {
        let mut t = analytic_sphere_tensors(1.0);
        t.p_tensor[0][0] = 1.0;
        assert!(matches!(
            cluster_spectra(&[analytic_sphere_tensors(1.0), t], 1.0),
            Err(Error::WrongSignTensor { index: 1, .. })
        ));
    }
}
