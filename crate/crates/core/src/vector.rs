//! Small fixed-size vector and matrix helpers.
//!
//! Points and real directions are `[f64; 3]`, complex field vectors are
//! `[Complex64; 3]`, and 3x3 tensors are row-major `[[f64; 3]; 3]`.

use num_complex::Complex64;

use crate::math;

pub type Vec3 = [f64; 3];
pub type CVec3 = [Complex64; 3];
pub type Mat3 = [[f64; 3]; 3];
pub type CMat3 = [[Complex64; 3]; 3];

pub const ZERO: Vec3 = [0.0; 3];
pub const CZERO: CVec3 = [Complex64::new(0.0, 0.0); 3];

pub const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

#[inline]
pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    math::sqrt(dot(a, a))
}

#[inline]
pub fn distance(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

pub fn normalize(a: Vec3) -> Vec3 {
    scale(a, 1.0 / norm(a))
}

#[inline]
pub fn to_complex(a: Vec3) -> CVec3 {
    [a[0].into(), a[1].into(), a[2].into()]
}

#[inline]
pub fn cadd(a: CVec3, b: CVec3) -> CVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn csub(a: CVec3, b: CVec3) -> CVec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn cscale(a: CVec3, s: Complex64) -> CVec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn ccross(a: CVec3, b: CVec3) -> CVec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Real vector crossed with a complex vector.
#[inline]
pub fn rcross(a: Vec3, b: CVec3) -> CVec3 {
    [
        b[2] * a[1] - b[1] * a[2],
        b[0] * a[2] - b[2] * a[0],
        b[1] * a[0] - b[0] * a[1],
    ]
}

/// Bilinear (non-conjugating) dot product.
#[inline]
pub fn cdot(a: CVec3, b: CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Hermitian norm `sqrt(sum |a_i|^2)`.
#[inline]
pub fn cnorm(a: CVec3) -> f64 {
    math::sqrt(cnorm_sqr(a))
}

#[inline]
pub fn cnorm_sqr(a: CVec3) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()
}

#[inline]
pub fn mat_vec(m: &Mat3, v: Vec3) -> Vec3 {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

#[inline]
pub fn mat_cvec(m: &Mat3, v: CVec3) -> CVec3 {
    let row = |r: &[f64; 3]| v[0] * r[0] + v[1] * r[1] + v[2] * r[2];
    [row(&m[0]), row(&m[1]), row(&m[2])]
}

#[inline]
pub fn cmat_cvec(m: &CMat3, v: CVec3) -> CVec3 {
    let row = |r: &[Complex64; 3]| r[0] * v[0] + r[1] * v[1] + r[2] * v[2];
    [row(&m[0]), row(&m[1]), row(&m[2])]
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    out
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[j][i] = *v;
        }
    }
    out
}

pub fn mat_scale(a: &Mat3, s: f64) -> Mat3 {
    let mut out = *a;
    out.iter_mut().flatten().for_each(|v| *v *= s);
    out
}

pub fn mat_add(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = *a;
    for (o, v) in out.iter_mut().flatten().zip(b.iter().flatten()) {
        *o += v;
    }
    out
}

pub fn mat_sub(a: &Mat3, b: &Mat3) -> Mat3 {
    mat_add(a, &mat_scale(b, -1.0))
}

/// Frobenius norm.
pub fn mat_norm(a: &Mat3) -> f64 {
    math::sqrt(a.iter().flatten().map(|v| v * v).sum())
}

/// `(M + M^T) / 2`.
pub fn symmetrize(a: &Mat3) -> Mat3 {
    mat_scale(&mat_add(a, &transpose(a)), 0.5)
}

/// `||M - M^T|| / ||M||` in the Frobenius norm; zero for the zero matrix.
pub fn relative_asymmetry(a: &Mat3) -> f64 {
    let n = mat_norm(a);
    if n == 0.0 {
        0.0
    } else {
        mat_norm(&mat_sub(a, &transpose(a))) / n
    }
}

pub fn determinant(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Inverse by cofactors. Returns `None` when `|det|` is below `1e-300`.
pub fn inverse(a: &Mat3) -> Option<Mat3> {
    let det = determinant(a);
    if det.abs() < 1e-300 {
        return None;
    }
    let c = |r0: usize, c0: usize, r1: usize, c1: usize| a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
    let cof = [
        [c(1, 1, 2, 2), -c(1, 0, 2, 2), c(1, 0, 2, 1)],
        [-c(0, 1, 2, 2), c(0, 0, 2, 2), -c(0, 0, 2, 1)],
        [c(0, 1, 1, 2), -c(0, 0, 1, 2), c(0, 0, 1, 1)],
    ];
    Some(mat_scale(&transpose(&cof), 1.0 / det))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &Mat3) -> [f64; 3] {
    let m = nalgebra::Matrix3::from_fn(|i, j| a[i][j]);
    let eig = m.symmetric_eigenvalues();
    let mut out = [eig[0], eig[1], eig[2]];
    out.sort_by(f64::total_cmp);
    out
}

/// Rotation about a unit axis by `angle` radians (Rodrigues).
pub fn rotation(axis: Vec3, angle: f64) -> Mat3 {
    let [x, y, z] = normalize(axis);
    let (s, c) = (math::sin(angle), math::cos(angle));
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        let a = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let inv = inverse(&a).unwrap();
        let id = mat_mul(&a, &inv);
        assert!(mat_norm(&mat_sub(&id, &IDENTITY)) < 1e-14);
    }

    #[test]
    fn rcross_matches_ccross() {
        let a = [0.3, -1.2, 2.0];
        let b = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.1), Complex64::new(0.0, -3.0)];
        assert_eq!(rcross(a, b), ccross(to_complex(a), b));
    }

    #[test]
    fn eigenvalues_sorted() {
        let e = symmetric_eigenvalues(&[[2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 5.0]]);
        assert_eq!(e, [-1.0, 2.0, 5.0]);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = rotation([1.0, 2.0, -0.5], 0.7);
        let id = mat_mul(&r, &transpose(&r));
        assert!(mat_norm(&mat_sub(&id, &IDENTITY)) < 1e-14);
        assert!((determinant(&r) - 1.0).abs() < 1e-14);
    }
}
