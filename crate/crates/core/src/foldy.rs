//! The coupled dipole system and its solvers.
//!
//! Unknowns are ordered `[A_1..A_m | B_1..B_m]` (each a complex 3-vector):
//!
//! ```text
//! A_i + [P_i] sum_{j != i} ( Pi(z_i,z_j) A_j - k^2 grad Phi(z_i,z_j) x B_j ) = -[P_i] curl E_in(z_i)
//! B_i - [T_i] sum_{j != i} ( -grad Phi(z_i,z_j) x A_j + Pi(z_i,z_j) B_j )    = -[T_i] E_in(z_i)
//! ```
//!
//! The Neumann iteration works in the rescaled variables
//! `C = [T_i^{-1} B_i | -P_i^{-1} A_i]` with `Q = diag([T_1..T_m], [-P_1..-P_m])`,
//! so that `Q C = [B | A]` and the system reads `C + (Sigma + Theta) Q C = E`
//! with `E = [-E_in(z_i) | curl E_in(z_i)]`.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{self, Cluster};
use crate::greens::{self, DyadicValue, Wavenumber};
use crate::layerops::{BodyTensors, ClusterSpectra};
use crate::linalg;
use crate::math;
use crate::vector::{self, CMat3, CVec3, Mat3, Vec3};

pub const DEFAULT_DIRECT_CAP: usize = 500;
pub const DEFAULT_NEUMANN_TOL: f64 = 1e-12;
pub const DEFAULT_NEUMANN_MAX_ITER: usize = 10_000;
/// Largest relative residual accepted from the dense solve.
pub const DIRECT_RESIDUAL_LIMIT: f64 = 1e-10;
/// Consecutive increment growths that count as divergence.
pub const DIVERGENCE_STREAK: usize = 3;
/// Increment blow-up, relative to the first increment, that counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

const DIRECTION_TOLERANCE: f64 = 1e-12;
const PIVOT_RATIO_FLOOR: f64 = 1e-14;

/// `E_in(x) = p e^{i k x . theta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    k: Wavenumber,
    theta: Vec3,
    p: Vec3,
}

impl PlaneWave {
    pub fn new(k: Wavenumber, theta: Vec3, p: Vec3) -> Result<Self> {
        if theta.iter().chain(p.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPlaneWave(format!(
                "non-finite direction {theta:?} or polarization {p:?}"
            )));
        }
        let len = vector::norm(theta);
        if (len - 1.0).abs() > DIRECTION_TOLERANCE {
            return Err(Error::InvalidPlaneWave(format!(
                "direction must be a unit vector, |theta| = {len}"
            )));
        }
        let pt = vector::dot(p, theta);
        if pt.abs() > DIRECTION_TOLERANCE {
            return Err(Error::InvalidPlaneWave(format!(
                "polarization must be orthogonal to the direction, p . theta = {pt:e}"
            )));
        }
        Ok(Self { k, theta, p })
    }

    pub fn k(&self) -> Wavenumber {
        self.k
    }

    pub fn theta(&self) -> Vec3 {
        self.theta
    }

    pub fn p(&self) -> Vec3 {
        self.p
    }

    pub fn with_polarization(&self, p: Vec3) -> Result<Self> {
        Self::new(self.k, self.theta, p)
    }

    /// `(E_in(z), curl E_in(z))`.
    pub fn incident_values(&self, z: Vec3) -> (CVec3, CVec3) {
        let k = self.k.value();
        let phase = (Complex64::i() * k * vector::dot(z, self.theta)).exp();
        let e = vector::cscale(vector::to_complex(self.p), phase);
        let curl = vector::cscale(
            vector::to_complex(vector::cross(self.theta, self.p)),
            Complex64::i() * k * phase,
        );
        (e, curl)
    }
}

pub fn incident_values(wave: &PlaneWave, z: Vec3) -> (CVec3, CVec3) {
    wave.incident_values(z)
}

/// Body positions, tensors and wavenumber: everything that defines the
/// system operator. Coupling blocks are evaluated on demand, so applying the
/// operator costs `O(m^2)` time and `O(m)` memory.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemBlocks {
    k: Complex64,
    positions: Vec<Vec3>,
    tensors: Vec<BodyTensors>,
}

impl SystemBlocks {
    pub fn new(k: Wavenumber, positions: Vec<Vec3>, tensors: Vec<BodyTensors>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::EmptyCluster);
        }
        if tensors.len() != positions.len() {
            return Err(Error::TensorCountMismatch {
                expected: positions.len(),
                found: tensors.len(),
            });
        }
        Ok(Self {
            k: k.value(),
            positions,
            tensors,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn tensors(&self) -> &[BodyTensors] {
        &self.tensors
    }

    /// The `2m` diagonal blocks of `Q`: `[T_1..T_m]` then `[-P_1..-P_m]`.
    pub fn q_blocks(&self) -> Vec<Mat3> {
        self.tensors
            .iter()
            .map(|t| t.t_tensor)
            .chain(self.tensors.iter().map(|t| vector::mat_scale(&t.p_tensor, -1.0)))
            .collect()
    }

    fn pair(&self, i: usize, j: usize) -> (CVec3, DyadicValue) {
        let d = vector::sub(self.positions[i], self.positions[j]);
        greens::pair_at(self.k, d, vector::norm(d))
    }

    /// `Pi_k(z_i, z_j)`, zero on the diagonal.
    pub fn sigma_block(&self, i: usize, j: usize) -> CMat3 {
        if i == j {
            [[Complex64::new(0.0, 0.0); 3]; 3]
        } else {
            self.pair(i, j).1 .0
        }
    }

    /// `grad_x Phi_k(z_i, z_j)`, the vector whose cross product forms the
    /// `Theta` block; zero on the diagonal.
    pub fn theta_block(&self, i: usize, j: usize) -> CVec3 {
        if i == j {
            vector::CZERO
        } else {
            self.pair(i, j).0
        }
    }

    /// `(Sigma + Theta) y` for `y = [y_B | y_A]`, returned in the same layout.
    fn couplings(&self, y: &[CVec3]) -> Vec<CVec3> {
        let m = self.len();
        let k2 = self.k * self.k;
        let (yb, ya) = y.split_at(m);
        let rows = linalg::par_map(m, |i| {
            let mut out_b = vector::CZERO;
            let mut out_a = vector::CZERO;
            for j in 0..m {
                if j == i {
                    continue;
                }
                let (g, pi) = self.pair(i, j);
                out_b = vector::cadd(
                    out_b,
                    vector::csub(vector::ccross(g, ya[j]), pi.apply(yb[j])),
                );
                out_a = vector::cadd(
                    out_a,
                    vector::csub(
                        vector::cscale(vector::ccross(g, yb[j]), k2),
                        pi.apply(ya[j]),
                    ),
                );
            }
            (out_b, out_a)
        });
        let (b, a): (Vec<CVec3>, Vec<CVec3>) = rows.into_iter().unzip();
        b.into_iter().chain(a).collect()
    }

    /// `Q c` in the block layout of `c`.
    fn apply_q(&self, c: &[CVec3]) -> Vec<CVec3> {
        self.q_blocks()
            .iter()
            .zip(c)
            .map(|(q, v)| vector::mat_cvec(q, *v))
            .collect()
    }

    /// `(I + Sigma Q + Theta Q) c` without materializing the matrix.
    pub fn apply_c(&self, c: &[Complex64]) -> Vec<Complex64> {
        let cv = to_blocks(c);
        let coupled = self.couplings(&self.apply_q(&cv));
        let out: Vec<CVec3> = cv
            .iter()
            .zip(&coupled)
            .map(|(a, b)| vector::cadd(*a, *b))
            .collect();
        flatten(&out)
    }

    /// The `(A, B)` system operator applied to `x = [A | B]`.
    pub fn apply_ab(&self, x: &[Complex64]) -> Vec<Complex64> {
        let m = self.len();
        let xv = to_blocks(x);
        let (a, b) = xv.split_at(m);
        let y: Vec<CVec3> = b.iter().chain(a).copied().collect();
        let coupled = self.couplings(&y);
        let (out_b, out_a) = coupled.split_at(m);
        let mut out = Vec::with_capacity(2 * m);
        for i in 0..m {
            let t = &self.tensors[i];
            out.push(vector::csub(a[i], vector::mat_cvec(&t.p_tensor, out_a[i])));
        }
        for i in 0..m {
            let t = &self.tensors[i];
            out.push(vector::cadd(b[i], vector::mat_cvec(&t.t_tensor, out_b[i])));
        }
        flatten(&out)
    }

    /// Dense `(A, B)` system matrix, filled block by block.
    pub fn materialize_ab(&self) -> DMatrix<Complex64> {
        let m = self.len();
        let k2 = self.k * self.k;
        let mut mat = DMatrix::<Complex64>::identity(6 * m, 6 * m);
        for i in 0..m {
            let p = &self.tensors[i].p_tensor;
            let t = &self.tensors[i].t_tensor;
            for j in 0..m {
                if i == j {
                    continue;
                }
                let (g, pi) = self.pair(i, j);
                let gx = cross_matrix(g);
                put_block(&mut mat, i, j, &real_times(p, &pi.0));
                put_block(&mut mat, i, m + j, &cscale_mat(&real_times(p, &gx), -k2));
                put_block(&mut mat, m + i, j, &real_times(t, &gx));
                put_block(
                    &mut mat,
                    m + i,
                    m + j,
                    &cscale_mat(&real_times(t, &pi.0), Complex64::new(-1.0, 0.0)),
                );
            }
        }
        mat
    }

    /// Dense `I + Sigma Q + Theta Q`, filled block by block.
    pub fn materialize_c(&self) -> DMatrix<Complex64> {
        let m = self.len();
        let k2 = self.k * self.k;
        let mut mat = DMatrix::<Complex64>::identity(6 * m, 6 * m);
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let t = &self.tensors[j].t_tensor;
                let neg_p = vector::mat_scale(&self.tensors[j].p_tensor, -1.0);
                let (g, pi) = self.pair(i, j);
                let gx = cross_matrix(g);
                let minus_one = Complex64::new(-1.0, 0.0);
                put_block(&mut mat, i, j, &cscale_mat(&times_real(&pi.0, t), minus_one));
                put_block(&mut mat, i, m + j, &times_real(&gx, &neg_p));
                put_block(&mut mat, m + i, j, &cscale_mat(&times_real(&gx, t), k2));
                put_block(
                    &mut mat,
                    m + i,
                    m + j,
                    &cscale_mat(&times_real(&pi.0, &neg_p), minus_one),
                );
            }
        }
        mat
    }
}

/// System operator plus both right-hand sides.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldySystem {
    pub blocks: SystemBlocks,
    /// `[-P_i curl E_in(z_i) | -T_i E_in(z_i)]`
    pub rhs: Vec<Complex64>,
    /// `[-E_in(z_i) | curl E_in(z_i)]`
    pub excitation: Vec<Complex64>,
}

impl FoldySystem {
    pub fn new(blocks: SystemBlocks, wave: &PlaneWave) -> Self {
        let m = blocks.len();
        let incident: Vec<(CVec3, CVec3)> = blocks
            .positions()
            .iter()
            .map(|z| wave.incident_values(*z))
            .collect();
        let mut rhs = Vec::with_capacity(2 * m);
        let mut exc = Vec::with_capacity(2 * m);
        for (t, (_, curl)) in blocks.tensors().iter().zip(&incident) {
            rhs.push(vector::cscale(vector::mat_cvec(&t.p_tensor, *curl), Complex64::new(-1.0, 0.0)));
        }
        for (t, (e, _)) in blocks.tensors().iter().zip(&incident) {
            rhs.push(vector::cscale(vector::mat_cvec(&t.t_tensor, *e), Complex64::new(-1.0, 0.0)));
        }
        for (e, _) in &incident {
            exc.push(vector::cscale(*e, Complex64::new(-1.0, 0.0)));
        }
        for (_, curl) in &incident {
            exc.push(*curl);
        }
        Self {
            blocks,
            rhs: flatten(&rhs),
            excitation: flatten(&exc),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `||M x - rhs|| / ||rhs||` for `x = [A | B]`.
    pub fn relative_residual(&self, x: &[Complex64]) -> f64 {
        let mx = self.blocks.apply_ab(x);
        let num = cnorm_flat(&mx.iter().zip(&self.rhs).map(|(a, b)| a - b).collect::<Vec<_>>());
        let den = cnorm_flat(&self.rhs);
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }
}

pub fn assemble(cluster: &Cluster, tensors: &[BodyTensors], wave: &PlaneWave) -> Result<FoldySystem> {
    let blocks = SystemBlocks::new(wave.k(), cluster.centers(), tensors.to_vec())?;
    Ok(FoldySystem::new(blocks, wave))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Direct,
    NeumannSeries,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldySolution {
    pub a_coeffs: Vec<CVec3>,
    pub b_coeffs: Vec<CVec3>,
    /// Relative residual of the `(A, B)` system.
    pub residual_norm: f64,
    pub method: SolveMethod,
    pub iterations: usize,
    /// Last relative increment of the Neumann iteration, zero for direct solves.
    pub final_increment: f64,
}

impl FoldySolution {
    pub fn len(&self) -> usize {
        self.a_coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_coeffs.is_empty()
    }

    /// `[A | B]` as one flat vector.
    pub fn unknowns(&self) -> Vec<Complex64> {
        let blocks: Vec<CVec3> = self.a_coeffs.iter().chain(&self.b_coeffs).copied().collect();
        flatten(&blocks)
    }

    /// `||(A, B)||_2`
    pub fn norm(&self) -> f64 {
        cnorm_flat(&self.unknowns())
    }

    fn from_unknowns(
        x: &[Complex64],
        residual_norm: f64,
        method: SolveMethod,
        iterations: usize,
        final_increment: f64,
    ) -> Self {
        let blocks = to_blocks(x);
        let m = blocks.len() / 2;
        Self {
            a_coeffs: blocks[..m].to_vec(),
            b_coeffs: blocks[m..].to_vec(),
            residual_norm,
            method,
            iterations,
            final_increment,
        }
    }
}

/// Dense LU solve of the `(A, B)` system.
pub fn solve_direct(system: &FoldySystem, cap: usize) -> Result<FoldySolution> {
    let m = system.len();
    if m > cap {
        return Err(Error::CapExceeded { bodies: m, cap });
    }
    let mat = system.blocks.materialize_ab();
    let lu = mat.lu();
    let u = lu.u();
    let diag: Vec<f64> = (0..u.nrows()).map(|i| u[(i, i)].norm()).collect();
    let max_pivot = diag.iter().copied().fold(0.0, f64::max);
    let min_pivot = diag.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min_pivot > PIVOT_RATIO_FLOOR * max_pivot) {
        return Err(Error::SingularSystem { pivot: min_pivot });
    }
    let b = nalgebra::DVector::from_column_slice(&system.rhs);
    let x = lu
        .solve(&b)
        .ok_or(Error::SingularSystem { pivot: min_pivot })?;
    let x: Vec<Complex64> = x.iter().copied().collect();
    let residual = system.relative_residual(&x);
    if !(residual <= DIRECT_RESIDUAL_LIMIT) {
        return Err(Error::SingularSystem { pivot: min_pivot });
    }
    Ok(FoldySolution::from_unknowns(&x, residual, SolveMethod::Direct, 1, 0.0))
}

/// Fixed-point iteration `C <- E - (Sigma + Theta) Q C` starting from `C = E`.
///
/// Stops when the relative increment of `Q C` drops below `tol`. Reports
/// divergence when the increment grows on [`DIVERGENCE_STREAK`] consecutive
/// iterations or exceeds [`DIVERGENCE_FACTOR`] times the first increment.
pub fn solve_neumann(system: &FoldySystem, tol: f64, max_iter: usize) -> Result<FoldySolution> {
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidParameter(format!(
            "Neumann iteration needs tol > 0 and max_iter > 0, got {tol} and {max_iter}"
        )));
    }
    let blocks = &system.blocks;
    let m = blocks.len();
    let exc = to_blocks(&system.excitation);
    let mut qc = blocks.apply_q(&exc);
    let mut first: Option<f64> = None;
    let mut previous = f64::INFINITY;
    let mut streak = 0;
    let mut increment = f64::INFINITY;
    for iteration in 1..=max_iter {
        let coupled = blocks.couplings(&qc);
        let next: Vec<CVec3> = exc
            .iter()
            .zip(&coupled)
            .map(|(e, s)| vector::csub(*e, *s))
            .collect();
        let q_next = blocks.apply_q(&next);
        let diff: f64 = q_next
            .iter()
            .zip(&qc)
            .map(|(a, b)| vector::cnorm_sqr(vector::csub(*a, *b)))
            .sum();
        let size: f64 = q_next.iter().map(|v| vector::cnorm_sqr(*v)).sum();
        increment = if diff == 0.0 {
            0.0
        } else {
            math::sqrt(diff) / math::sqrt(size)
        };
        qc = q_next;

        if !increment.is_finite() {
            return Err(Error::Divergence {
                iterations: iteration,
                increment,
            });
        }
        if increment < tol {
            let (b, a) = qc.split_at(m);
            let x: Vec<CVec3> = a.iter().chain(b).copied().collect();
            let x = flatten(&x);
            let residual = system.relative_residual(&x);
            return Ok(FoldySolution::from_unknowns(
                &x,
                residual,
                SolveMethod::NeumannSeries,
                iteration,
                increment,
            ));
        }
        let first_increment = *first.get_or_insert(increment);
        streak = if increment > previous { streak + 1 } else { 0 };
        previous = increment;
        if streak >= DIVERGENCE_STREAK || increment > DIVERGENCE_FACTOR * first_increment {
            return Err(Error::Divergence {
                iterations: iteration,
                increment,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        increment,
    })
}

/// `C_Ls`, `C_Li`, `C_L2i` and the Neumann contraction estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvertibilityConstants {
    pub c_ls: f64,
    pub c_li: f64,
    pub c_li2: f64,
    /// `4 mu+ (ln(m^{1/3})/delta^3 + 2|k| m^{1/3}/delta^2 + m^{2/3}|k|^2/(2 delta)) eps^3`
    pub contraction_estimate: f64,
    /// Set when `Im k > 0`: the formulas are stated for real `k` and are
    /// evaluated with `|k|`.
    pub heuristic: bool,
}

impl InvertibilityConstants {
    pub fn c_li_positive(&self) -> bool {
        self.c_li > 0.0
    }

    pub fn c_li2_positive(&self) -> bool {
        self.c_li2 > 0.0
    }
}

/// `C_Ls` with `||S_{B^1}|| = 1`.
pub fn c_ls(k_abs: f64, domain_diameter: f64) -> f64 {
    let d13 = math::cbrt(domain_diameter);
    let d23 = d13 * d13;
    let k2 = k_abs * k_abs;
    (1.0 + k2) * 64.0 * ((1.0 + k_abs / 2.0) * d13 + (k_abs / 2.0) * d23)
        / (8.0 * core::f64::consts::PI)
        + 144.0 / core::f64::consts::PI
        + math::sqrt(63.0) * k2 * d23 / (4.0 * core::f64::consts::PI)
}

pub fn invertibility_constants(
    cluster: &Cluster,
    spectra: &ClusterSpectra,
    k: Wavenumber,
) -> InvertibilityConstants {
    constants_from_parameters(
        cluster.len(),
        cluster.epsilon(),
        cluster.delta(),
        cluster.domain_diameter(),
        spectra.mu_plus,
        k,
    )
}

/// The constants from raw cluster parameters. `delta = inf` stands for a
/// single body.
pub fn constants_from_parameters(
    m: usize,
    epsilon: f64,
    delta: f64,
    domain_diameter: f64,
    mu_plus: f64,
    k: Wavenumber,
) -> InvertibilityConstants {
    let k_abs = k.abs();
    let c_ls = c_ls(k_abs, domain_diameter);
    let ratio3 = if delta.is_finite() {
        math::powi(epsilon / delta, 3)
    } else {
        0.0
    };
    let contraction_estimate =
        4.0 * mu_plus * geometry::interaction_sum(m, delta, k_abs) * math::powi(epsilon, 3);
    InvertibilityConstants {
        c_ls,
        c_li: 1.0 - c_ls * mu_plus * ratio3,
        c_li2: 1.0 - contraction_estimate,
        contraction_estimate,
        heuristic: !k.is_real(),
    }
}

/// Comparison of `||(A, B)||` against `eps^3 ||E|| / (C_Li mu-)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `None` when `C_Li <= 0`, where the bound says nothing.
pub fn norm_bound_check(
    solution: &FoldySolution,
    system: &FoldySystem,
    epsilon: f64,
    constants: &InvertibilityConstants,
    mu_minus: f64,
) -> Option<NormBoundCheck> {
    if !constants.c_li_positive() {
        return None;
    }
    let lhs = solution.norm();
    let rhs = math::powi(epsilon, 3) * cnorm_flat(&system.excitation) / (constants.c_li * mu_minus);
    Some(NormBoundCheck {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

fn to_blocks(x: &[Complex64]) -> Vec<CVec3> {
    x.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()
}

fn flatten(blocks: &[CVec3]) -> Vec<Complex64> {
    blocks.iter().flat_map(|b| b.iter().copied()).collect()
}

fn cnorm_flat(x: &[Complex64]) -> f64 {
    math::sqrt(x.iter().map(|v| v.norm_sqr()).sum())
}

/// Matrix of `v -> g x v`.
fn cross_matrix(g: CVec3) -> CMat3 {
    let z = Complex64::new(0.0, 0.0);
    [[z, -g[2], g[1]], [g[2], z, -g[0]], [-g[1], g[0], z]]
}

fn real_times(a: &Mat3, b: &CMat3) -> CMat3 {
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|l| b[l][j] * a[i][l]).sum();
        }
    }
    out
}

fn times_real(a: &CMat3, b: &Mat3) -> CMat3 {
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    out
}

fn cscale_mat(a: &CMat3, s: Complex64) -> CMat3 {
    let mut out = *a;
    out.iter_mut().flatten().for_each(|v| *v *= s);
    out
}

fn put_block(mat: &mut DMatrix<Complex64>, bi: usize, bj: usize, block: &CMat3) {
    for (r, row) in block.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            mat[(3 * bi + r, 3 * bj + c)] = *v;
        }
    }
}
