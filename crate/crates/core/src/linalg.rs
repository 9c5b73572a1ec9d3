//! Dense real linear algebra used by every other module.
//!
//! The singular value decomposition is a one-sided (Hestenes) Jacobi
//! iteration. Subspaces are carried around as orthonormal column frames,
//! i.e. `n x k` matrices whose columns are orthonormal.

use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;
use thiserror::Error;

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix has {rows}x{cols} shape but {len} entries")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("frames live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("Jacobi SVD did not converge after {sweeps} sweeps (off-diagonal ratio {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix is numerically singular")]
    Singular,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense real matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(LinalgError::BadShape { rows, cols, len: data.len() });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must share one length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::ShapeMismatch(format!(
                "ragged rows: expected length {cols}, found {}",
                bad.len()
            )));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Builds an `rows x cols.len()` matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<f64>]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(LinalgError::ShapeMismatch(format!(
                    "column {j} has length {} but {rows} rows were requested",
                    c.len()
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        if m.data.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(m)
    }

    /// Uniform entries in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Keeps the listed columns, in order.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for (jn, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, jn)] = self[(i, j)];
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// Horizontal concatenation `[self other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "hstack of {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            m.data[i * m.cols..i * m.cols + self.cols].copy_from_slice(self.row(i));
            m.data[i * m.cols + self.cols..(i + 1) * m.cols].copy_from_slice(other.row(i));
        }
        Ok(m)
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Spectral norm (largest singular value).
    pub fn norm2(&self) -> Result<f64> {
        Ok(svd(self)?.sigma.first().copied().unwrap_or(0.0))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Thin singular value decomposition `m = u * diag(sigma) * v^T`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for j in 0..us.cols() {
            for i in 0..us.rows() {
                us[(i, j)] *= self.sigma[j];
            }
        }
        us.matmul(&self.v.transpose()).expect("svd factors have matching shapes")
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Result of the raw Jacobi iteration: rotated columns (`A V`) and the
/// accumulated right rotation `V`, both column-major.
struct JacobiOut {
    cols: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

fn jacobi(m: &Matrix) -> Result<JacobiOut> {
    let n = m.cols();
    let mut cols = m.columns();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    if n < 2 || m.rows() == 0 {
        return Ok(JacobiOut { cols, v });
    }
    let tol = f64::EPSILON;
    // columns below eps * ||A||_F are numerically zero; their mutual
    // correlation is rounding noise
    let fro2: f64 = cols.iter().map(|c| dot(c, c)).sum();
    let floor = fro2 * f64::EPSILON * f64::EPSILON;
    let mut worst = 0.0;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        worst = 0.0f64;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let alpha = dot(&cols[i], &cols[i]);
                let beta = dot(&cols[j], &cols[j]);
                let gamma = dot(&cols[i], &cols[j]);
                let scale = (alpha * beta).sqrt();
                if alpha <= floor || beta <= floor || !scale.is_normal() {
                    continue;
                }
                let ratio = gamma.abs() / scale;
                if ratio <= tol {
                    continue;
                }
                worst = worst.max(ratio);
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            return Ok(JacobiOut { cols, v });
        }
    }
    Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS, residual: worst })
}

fn rotate(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    let (a, b) = (&mut left[i], &mut right[0]);
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

/// Singular values with unnormalized left columns and right vectors.
type SortedJacobi = (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>);

/// Sorted (descending) singular values with the matching right vectors,
/// over all `cols` columns of the input.
fn full_right(m: &Matrix) -> Result<SortedJacobi> {
    let out = jacobi(m)?;
    let mut order: Vec<usize> = (0..out.cols.len()).collect();
    let sig: Vec<f64> = out.cols.iter().map(|c| norm(c)).collect();
    order.sort_by(|&a, &b| sig[b].total_cmp(&sig[a]).then(a.cmp(&b)));
    let sigma = order.iter().map(|&k| sig[k]).collect();
    let left = order.iter().map(|&k| out.cols[k].clone()).collect();
    let right = order.iter().map(|&k| out.v[k].clone()).collect();
    Ok((sigma, left, right))
}

/// Appends unit vectors until `basis` holds `target` orthonormal vectors.
fn complete_orthonormal(basis: &mut Vec<Vec<f64>>, dim: usize, target: usize) {
    let mut e = 0;
    while basis.len() < target && e < dim {
        let mut cand = vec![0.0; dim];
        cand[e] = 1.0;
        e += 1;
        for _ in 0..2 {
            for b in basis.iter() {
                let d = dot(&cand, b);
                cand.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let nrm = norm(&cand);
        if nrm > 0.5 {
            cand.iter_mut().for_each(|x| *x /= nrm);
            basis.push(cand);
        }
    }
}

/// Two passes of modified Gram-Schmidt over `basis`, in place.
fn reorthonormalize(basis: &mut [Vec<f64>]) {
    for k in 0..basis.len() {
        for _ in 0..2 {
            for l in 0..k {
                let d = dot(&basis[k], &basis[l]);
                let (head, tail) = basis.split_at_mut(k);
                tail[0].iter_mut().zip(&head[l]).for_each(|(x, y)| *x -= d * y);
            }
        }
        let nrm = norm(&basis[k]);
        if nrm > 0.0 {
            basis[k].iter_mut().for_each(|x| *x /= nrm);
        }
    }
}

/// Thin SVD: `u` is `rows x k`, `v` is `cols x k`, `k = min(rows, cols)`.
pub fn svd(m: &Matrix) -> Result<Svd> {
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    let (sigma_all, left, right) = full_right(m)?;
    let sigma: Vec<f64> = sigma_all[..k].to_vec();
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cutoff = smax * f64::EPSILON * (rows.max(cols) as f64) * 4.0;

    let mut ubasis: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (j, col) in left.iter().take(k).enumerate() {
        if sigma[j] > cutoff && sigma[j] > 0.0 {
            ubasis.push(col.iter().map(|x| x / sigma[j]).collect());
        } else {
            break;
        }
    }
    reorthonormalize(&mut ubasis);
    complete_orthonormal(&mut ubasis, rows, k);

    let u = Matrix::from_cols(rows, &ubasis)?;
    let v = Matrix::from_cols(cols, &right[..k])?;
    Ok(Svd { u, sigma, v })
}

/// Default relative rank tolerance `eps * max(rows, cols) * sigma_1`.
pub fn default_tol(m: &Matrix, sigma_max: f64) -> f64 {
    f64::EPSILON * (m.rows().max(m.cols()) as f64) * sigma_max
}

/// Numerical rank: number of singular values above `tol` (default
/// [`default_tol`]).
pub fn rank(m: &Matrix, tol: Option<f64>) -> Result<usize> {
    let s = svd(m)?;
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let tau = tol.unwrap_or_else(|| default_tol(m, smax));
    Ok(s.sigma.iter().filter(|&&x| x > tau).count())
}

/// Orthonormal frame for the column span of `vectors`.
pub fn orth_basis(vectors: &Matrix) -> Result<Matrix> {
    let s = svd(vectors)?;
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let tau = default_tol(vectors, smax);
    let keep: Vec<usize> = (0..s.sigma.len()).filter(|&j| s.sigma[j] > tau).collect();
    Ok(s.u.select_cols(&keep))
}

/// Orthonormal frame of the numerical null space; its dimension is
/// `cols - rank(m)`.
pub fn null_space(m: &Matrix) -> Result<Matrix> {
    null_space_tol(m, None)
}

/// Null space with an explicit absolute singular-value threshold.
pub fn null_space_tol(m: &Matrix, tol: Option<f64>) -> Result<Matrix> {
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let (sigma, _, right) = full_right(m)?;
    let smax = sigma.first().copied().unwrap_or(0.0);
    let tau = tol.unwrap_or_else(|| default_tol(m, smax));
    let k = m.rows().min(m.cols());
    // Only the first min(rows, cols) values can be nonzero; the rest belong to
    // the kernel whatever their rounding residue.
    let keep: Vec<Vec<f64>> = right
        .iter()
        .enumerate()
        .filter(|(j, _)| *j >= k || sigma[*j] <= tau)
        .map(|(_, v)| v.clone())
        .collect();
    Matrix::from_cols(m.cols(), &keep)
}

/// Frame for the orthogonal complement of the span of an orthonormal frame.
pub fn orth_complement(frame: &Matrix) -> Result<Matrix> {
    let n = frame.rows();
    if frame.cols() == 0 {
        return Ok(Matrix::identity(n));
    }
    null_space(&frame.transpose())
}

/// Frame for `span(frame) ⊖ span(sub)`, assuming `span(sub) ⊂ span(frame)`.
pub fn complement_within(frame: &Matrix, sub: &Matrix) -> Result<Matrix> {
    let target = frame.cols().saturating_sub(sub.cols());
    if target == 0 {
        return Ok(Matrix::zeros(frame.rows(), 0));
    }
    let residual = if sub.cols() == 0 {
        frame.clone()
    } else {
        frame.sub(&sub.matmul(&sub.transpose().matmul(frame)?)?)?
    };
    let s = svd(&residual)?;
    let keep: Vec<usize> = (0..target.min(s.u.cols())).collect();
    Ok(s.u.select_cols(&keep))
}

/// Orthogonal projection of the columns of `x` onto the complement of
/// `span(frame)`: `x - F (F^T x)`.
pub fn project_out(frame: &Matrix, x: &Matrix) -> Result<Matrix> {
    if frame.cols() == 0 {
        return Ok(x.clone());
    }
    x.sub(&frame.matmul(&frame.transpose().matmul(x)?)?)
}

fn check_ambient(u: &Matrix, v: &Matrix) -> Result<()> {
    if u.rows() != v.rows() {
        return Err(LinalgError::AmbientMismatch(u.rows(), v.rows()));
    }
    Ok(())
}

/// Principal angles between the spans of two orthonormal frames, ascending,
/// `min(dim u, dim v)` of them, each in `[0, pi/2]`.
///
/// Cosines come from the singular values of `U^T V` (clamped to `[0, 1]`);
/// angles whose cosine exceeds `1/sqrt(2)` are taken from the matching sine
/// (singular values of `(I - U U^T) V`) instead, where `acos` loses half the
/// digits.
pub fn principal_angles(u: &Matrix, v: &Matrix) -> Result<Vec<f64>> {
    check_ambient(u, v)?;
    let (u, v) = if u.cols() >= v.cols() { (u, v) } else { (v, u) };
    let l = v.cols();
    if l == 0 {
        return Ok(Vec::new());
    }
    let cosines = svd(&u.transpose().matmul(v)?)?.sigma;
    let mut sines = svd(&project_out(u, v)?)?.sigma;
    sines.reverse();
    let angles = (0..l)
        .map(|i| {
            let c = cosines[i].clamp(0.0, 1.0);
            if c * c <= 0.5 {
                c.acos()
            } else {
                sines[i].clamp(0.0, 1.0).asin()
            }
        })
        .collect::<Vec<_>>();
    let mut angles = angles;
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Frame of `span(u) ∩ span(v)`: directions of `u` whose principal angle to
/// `v` is at most `angle_tol` radians.
pub fn intersection(u: &Matrix, v: &Matrix, angle_tol: f64) -> Result<Matrix> {
    check_ambient(u, v)?;
    if u.cols() == 0 || v.cols() == 0 {
        return Ok(Matrix::zeros(u.rows(), 0));
    }
    let residual = project_out(v, u)?;
    let w = null_space_tol(&residual, Some(angle_tol.sin()))?;
    if w.cols() == 0 {
        return Ok(Matrix::zeros(u.rows(), 0));
    }
    let x = u.matmul(&w)?;
    let mut cols = x.columns();
    reorthonormalize(&mut cols);
    Matrix::from_cols(u.rows(), &cols)
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.rows();
    if n != m.cols() {
        return Err(LinalgError::ShapeMismatch(format!("inverse of {}x{}", m.rows(), m.cols())));
    }
    let mut a = m.clone();
    let mut inv = Matrix::identity(n);
    let scale = m.max_abs();
    if n > 0 && scale == 0.0 {
        return Err(LinalgError::Singular);
    }
    let tiny = scale * f64::EPSILON * n as f64;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
            .expect("non-empty pivot range");
        if a[(p, k)].abs() <= tiny {
            return Err(LinalgError::Singular);
        }
        if p != k {
            for j in 0..n {
                a.data.swap(p * n + j, k * n + j);
                inv.data.swap(p * n + j, k * n + j);
            }
        }
        let piv = a[(k, k)];
        for j in 0..n {
            a[(k, j)] /= piv;
            inv[(k, j)] /= piv;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[(i, k)];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[(i, j)] -= f * a[(k, j)];
                inv[(i, j)] -= f * inv[(k, j)];
            }
        }
    }
    Ok(inv)
}

/// 2-norm condition number; infinite for singular input.
pub fn condition_number(m: &Matrix) -> Result<f64> {
    let s = svd(m)?;
    match (s.sigma.first(), s.sigma.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => Ok(hi / lo),
        (Some(_), Some(_)) => Ok(f64::INFINITY),
        _ => Ok(1.0),
    }
}

/// Orthogonal matrix drawn from uniform entries via orthonormalization.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    loop {
        let q = orth_basis(&Matrix::random(n, n, rng)).expect("finite random matrix");
        if q.cols() == n {
            return q;
        }
    }
}

/// Random invertible matrix `Q1 diag(s) Q2` with singular values spread over
/// `[1, cond]`.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, cond: f64, rng: &mut R) -> Matrix {
    let q1 = random_orthogonal(n, rng);
    let q2 = random_orthogonal(n, rng);
    let s: Vec<f64> = (0..n)
        .map(|i| if i == 0 { 1.0 } else if i == 1 { cond } else { rng.gen_range(1.0..=cond) })
        .collect();
    q1.matmul(&Matrix::from_diag(&s)).and_then(|m| m.matmul(&q2)).expect("square factors")
}

/// Largest deviation of `F^T F` from the identity.
pub fn orthonormality_error(frame: &Matrix) -> f64 {
    let g = frame.transpose().matmul(frame).expect("F^T F is well-shaped");
    g.sub(&Matrix::identity(frame.cols())).expect("square gram").max_abs()
}

/// Orthogonal projector `F F^T` onto the span of a frame.
pub fn projector(frame: &Matrix) -> Matrix {
    frame.matmul(&frame.transpose()).expect("F F^T is well-shaped")
}
