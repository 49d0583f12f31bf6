//! Row-major dense real matrices and restarted GMRES.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Build row by row; `fill(i, row)` writes row `i`. Rows may be filled in
    /// parallel, each by a single worker.
    pub fn from_rows<F>(rows: usize, cols: usize, fill: F) -> Self
    where
        F: Fn(usize, &mut [f64]) + Sync + Send,
    {
        let mut m = Self::zeros(rows, cols);
        if cols == 0 {
            return m;
        }
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            m.data
                .par_chunks_mut(cols)
                .enumerate()
                .for_each(|(i, row)| fill(i, row));
        }
        #[cfg(not(feature = "parallel"))]
        {
            m.data
                .chunks_mut(cols)
                .enumerate()
                .for_each(|(i, row)| fill(i, row));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let row_dot = |row: &[f64]| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            self.data.par_chunks(self.cols).map(row_dot).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.data.chunks(self.cols).map(row_dot).collect()
        }
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

/// `(0..n).map(f)`, evaluated in parallel under the `parallel` feature. Each
/// output slot is produced by one call, so results do not depend on scheduling.
pub fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    math::sqrt(dot(a, a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            restart: 80,
            max_iter: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `||b - A x|| / ||b||` recomputed from the returned iterate.
    pub relative_residual: f64,
    pub converged: bool,
}

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations, starting
/// from zero.
pub fn gmres<A>(apply: A, b: &[f64], opts: GmresOptions) -> GmresOutcome
where
    A: Fn(&[f64]) -> Vec<f64>,
{
    let n = b.len();
    let b_norm = norm2(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return GmresOutcome {
            x,
            iterations: 0,
            relative_residual: 0.0,
            converged: true,
        };
    }
    let restart = opts.restart.max(1).min(n.max(1));
    let mut iterations = 0;

    loop {
        let ax = apply(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let beta = norm2(&r);
        if beta / b_norm <= opts.tol || iterations >= opts.max_iter {
            return GmresOutcome {
                x,
                iterations,
                relative_residual: beta / b_norm,
                converged: beta / b_norm <= opts.tol,
            };
        }

        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(restart + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        // Hessenberg columns, each of length j + 2.
        let mut h: Vec<Vec<f64>> = Vec::with_capacity(restart);
        let mut cs: Vec<f64> = Vec::with_capacity(restart);
        let mut sn: Vec<f64> = Vec::with_capacity(restart);
        let mut g = vec![0.0; restart + 1];
        g[0] = beta;

        let mut inner = 0;
        while inner < restart && iterations < opts.max_iter {
            let mut w = apply(&basis[inner]);
            let mut col = vec![0.0; inner + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(&w, v);
                col[i] = hij;
                w.iter_mut().zip(v).for_each(|(wk, vk)| *wk -= hij * vk);
            }
            let w_norm = norm2(&w);
            col[inner + 1] = w_norm;

            for i in 0..inner {
                let t = cs[i] * col[i] + sn[i] * col[i + 1];
                col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
                col[i] = t;
            }
            let denom = math::sqrt(col[inner] * col[inner] + col[inner + 1] * col[inner + 1]);
            let (c, s) = if denom == 0.0 {
                (1.0, 0.0)
            } else {
                (col[inner] / denom, col[inner + 1] / denom)
            };
            col[inner] = denom;
            col[inner + 1] = 0.0;
            g[inner + 1] = -s * g[inner];
            g[inner] *= c;
            cs.push(c);
            sn.push(s);
            h.push(col);

            iterations += 1;
            inner += 1;
            if g[inner].abs() / b_norm <= opts.tol || w_norm == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / w_norm).collect());
        }

        // Back substitution on the triangular system.
        let mut y = vec![0.0; inner];
        for i in (0..inner).rev() {
            let mut s = g[i];
            for (j, yj) in y.iter().enumerate().skip(i + 1) {
                s -= h[j][i] * yj;
            }
            y[i] = if h[i][i] != 0.0 { s / h[i][i] } else { 0.0 };
        }
        for (yi, v) in y.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(xk, vk)| *xk += yi * vk);
        }
    }
}
