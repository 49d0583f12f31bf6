//! Free-space Helmholtz kernel `Phi_k(x, y) = e^{ik|x-y|} / (4 pi |x-y|)`,
//! its gradient in `x`, and the dyadic `Pi_k = k^2 Phi_k I + grad_x grad_x Phi_k`.
//!
//! The Hessian is written in closed form on the `I` / `r_hat r_hat` basis:
//!
//! ```text
//! Pi_k = Phi [ (k^2 + ik/r - 1/r^2) I + (3/r^2 - 3ik/r - k^2) r_hat r_hat ]
//! ```

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::vector::{self, CMat3, CVec3, Vec3};

/// Default lower bound on `|x - y|` below which kernels refuse to evaluate.
pub const DEFAULT_COINCIDENCE_FLOOR: f64 = 1e-14;

/// Complex wavenumber with `Im k >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber(Complex64);

impl Wavenumber {
    pub fn new(k: Complex64) -> Result<Self> {
        if !(k.im >= 0.0) || !k.re.is_finite() || !k.im.is_finite() {
            return Err(Error::InvalidWavenumber(k.im));
        }
        Ok(Self(k))
    }

    /// Real wavenumber. Panics on non-finite input.
    pub fn real(k: f64) -> Self {
        assert!(k.is_finite(), "wavenumber must be finite");
        Self(Complex64::new(k, 0.0))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.0.norm()
    }

    #[inline]
    pub fn is_real(self) -> bool {
        self.0.im == 0.0
    }
}

/// A 3x3 complex dyadic, symmetric by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicValue(pub CMat3);

impl DyadicValue {
    #[inline]
    pub fn apply(&self, v: CVec3) -> CVec3 {
        vector::cmat_cvec(&self.0, v)
    }

    pub fn frobenius(&self) -> f64 {
        math::sqrt(self.0.iter().flatten().map(|z| z.norm_sqr()).sum())
    }

    /// `||M - M^T|| / ||M||`.
    pub fn asymmetry(&self) -> f64 {
        let mut diff = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                diff += (self.0[i][j] - self.0[j][i]).norm_sqr();
            }
        }
        let n = self.frobenius();
        if n == 0.0 {
            0.0
        } else {
            math::sqrt(diff) / n
        }
    }
}

/// Kernel evaluator with a configurable coincidence floor.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    pub k: Wavenumber,
    pub floor: f64,
}

impl Kernel {
    pub fn new(k: Wavenumber) -> Self {
        Self {
            k,
            floor: DEFAULT_COINCIDENCE_FLOOR,
        }
    }

    pub fn with_floor(k: Wavenumber, floor: f64) -> Self {
        Self { k, floor }
    }

    fn separation(&self, x: Vec3, y: Vec3) -> Result<(Vec3, f64)> {
        let d = vector::sub(x, y);
        let r = vector::norm(d);
        if !(r >= self.floor) {
            return Err(Error::CoincidentPoints {
                distance: r,
                floor: self.floor,
            });
        }
        Ok((d, r))
    }

    pub fn phi(&self, x: Vec3, y: Vec3) -> Result<Complex64> {
        let (_, r) = self.separation(x, y)?;
        Ok(phi_at(self.k.value(), r))
    }

    pub fn grad_phi(&self, x: Vec3, y: Vec3) -> Result<CVec3> {
        let (d, r) = self.separation(x, y)?;
        Ok(grad_phi_at(self.k.value(), d, r))
    }

    pub fn dyadic_pi(&self, x: Vec3, y: Vec3) -> Result<DyadicValue> {
        let (d, r) = self.separation(x, y)?;
        Ok(pair_at(self.k.value(), d, r).1)
    }

    /// Gradient and dyadic together, sharing one exponential.
    pub fn pair(&self, x: Vec3, y: Vec3) -> Result<(CVec3, DyadicValue)> {
        let (d, r) = self.separation(x, y)?;
        Ok(pair_at(self.k.value(), d, r))
    }
}

pub fn phi(k: Wavenumber, x: Vec3, y: Vec3) -> Result<Complex64> {
    Kernel::new(k).phi(x, y)
}

/// Gradient of `Phi_k(x, y)` with respect to `x`.
pub fn grad_phi(k: Wavenumber, x: Vec3, y: Vec3) -> Result<CVec3> {
    Kernel::new(k).grad_phi(x, y)
}

pub fn dyadic_pi(k: Wavenumber, x: Vec3, y: Vec3) -> Result<DyadicValue> {
    Kernel::new(k).dyadic_pi(x, y)
}

#[inline]
fn phi_at(k: Complex64, r: f64) -> Complex64 {
    (Complex64::i() * k * r).exp() / (4.0 * PI * r)
}

#[inline]
fn grad_phi_at(k: Complex64, d: Vec3, r: f64) -> CVec3 {
    let phi = phi_at(k, r);
    let radial = phi * (Complex64::i() * k - 1.0 / r) / r;
    [radial * d[0], radial * d[1], radial * d[2]]
}

/// `(grad_x Phi, Pi)` for separation `d = x - y`, `r = |d| > 0`.
#[inline]
pub(crate) fn pair_at(k: Complex64, d: Vec3, r: f64) -> (CVec3, DyadicValue) {
    let phi = phi_at(k, r);
    let ik = Complex64::i() * k;
    let inv_r = 1.0 / r;
    let inv_r2 = inv_r * inv_r;
    let grad_coeff = phi * (ik - inv_r) * inv_r;
    let grad = [grad_coeff * d[0], grad_coeff * d[1], grad_coeff * d[2]];

    let k2 = k * k;
    let iso = phi * (k2 + ik * inv_r - inv_r2);
    let aniso = phi * (3.0 * inv_r2 - 3.0 * ik * inv_r - k2) * inv_r2;
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = aniso * (d[i] * d[j]);
            m[i][j] = v;
            m[j][i] = v;
        }
        m[i][i] += iso;
    }
    (grad, DyadicValue(m))
}
