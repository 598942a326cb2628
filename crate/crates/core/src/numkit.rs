//! Dense complex linear algebra.
//!
//! Everything here works on [`ComplexMatrix`], a row-major dense matrix of
//! `Complex64`. Element accessors are 0-based. The Hermitian eigensolver is a
//! cyclic complex Jacobi method; singular values come from a one-sided
//! (Hestenes) Jacobi sweep built on the same 2x2 rotation.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative off-diagonal threshold at which a Jacobi sweep is considered converged.
pub const JACOBI_REL_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: pos / cols, col: pos % cols });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Column vector as an n x 1 matrix.
    pub fn column(v: &[Complex64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// |x><y|
    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Self {
        let mut m = Self::zeros(x.len(), y.len());
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                m[(i, j)] = xi * yj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// <x| self |y>
    pub fn sandwich(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let ay = self.matvec(y);
        x.iter().zip(&ay).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Tr(self * rhs) without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Complex64 {
        assert_eq!((self.rows, self.cols), (rhs.cols, rhs.rows), "trace_product shape mismatch");
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * rhs[(k, i)];
            }
        }
        acc
    }

    /// Rows and columns permuted: out[(i, j)] = self[(p[i], p[j])].
    pub fn permute_symmetric(&self, p: &[usize]) -> Self {
        assert!(self.is_square() && p.len() == self.rows);
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(p[i], p[j])];
            }
        }
        out
    }

    /// self * U * self^H style conjugation: returns u * self * u^H.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self
                .row(r)
                .iter()
                .map(|z| if z.im == 0.0 { format!("{:.4}", z.re) } else { format!("{:.4}{:+.4}i", z.re, z.im) })
                .collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Block (i, k) of the result is `a[i, k] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for k in 0..ac {
            let s = a[(i, k)];
            if s == ZERO {
                continue;
            }
            for j in 0..br {
                for l in 0..bc {
                    out[(i * br + j, k * bc + l)] = s * b[(j, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors.
pub fn kron_vec(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Largest entrywise deviation |a - a^H|.
pub fn hermitian_defect(a: &ComplexMatrix) -> Result<f64> {
    let n = a.require_square()?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    Ok(worst)
}

pub fn is_hermitian(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(hermitian_defect(a)? <= tol)
}

/// Largest entrywise deviation |u^H u - I|.
pub fn unitary_defect(u: &ComplexMatrix) -> Result<f64> {
    let n = u.require_square()?;
    Ok(u.adjoint().matmul(u).max_abs_diff(&ComplexMatrix::identity(n)))
}

/// Eigenvalues or singular values, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Absolute convergence threshold used while computing the values.
    pub tolerance: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Eigenvalues (descending) with unit eigenvectors stored as matching columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub tolerance: f64,
    pub sweeps: usize,
}

/// Rotation (c, s, phase) for the 2x2 Hermitian block [[app, apq], [conj(apq), aqq]].
///
/// With J = [[c, s], [-s*conj(phase), c*conj(phase)]] the product J^H A J has a
/// zero (p, q) entry.
fn jacobi_rotation(app: f64, aqq: f64, apq: Complex64) -> (f64, f64, Complex64) {
    let r = apq.norm();
    let phase = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau == 0.0 { 1.0 } else { tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase)
}

/// m <- m * J on columns p and q.
fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let pc = phase.conj();
    for k in 0..m.rows {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * c - mq * pc * s;
        m[(k, q)] = mp * s + mq * pc * c;
    }
}

/// m <- J^H * m on rows p and q.
fn rotate_rows(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    for k in 0..m.cols {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = mp * c - mq * phase * s;
        m[(q, k)] = mp * s + mq * phase * c;
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = a.require_square()?;
    let norm = a.frobenius_norm();
    let deviation = hermitian_defect(a)?;
    if deviation > 1e-9 * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { deviation });
    }

    // Work on the exact Hermitian part so rounding asymmetry in the input cannot accumulate.
    let mut w = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        w[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            w[(i, j)] = z;
            w[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let tol = JACOBI_REL_TOL * norm;

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&w);
    while off > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = w[(p, q)];
                if apq == ZERO {
                    continue;
                }
                let (c, s, phase) = jacobi_rotation(w[(p, p)].re, w[(q, q)].re, apq);
                rotate_columns(&mut w, p, q, c, s, phase);
                rotate_rows(&mut w, p, q, c, s, phase);
                w[(p, q)] = ZERO;
                w[(q, p)] = ZERO;
                w[(p, p)].im = 0.0;
                w[(q, q)].im = 0.0;
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&w);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(j, j)].re.total_cmp(&w[(i, i)].re));
    let values = order.iter().map(|&i| w[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new)] = v[(r, old)];
        }
    }
    Ok(HermitianEigen { values, vectors, tolerance: tol, sweeps })
}

pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Spectrum> {
    let e = hermitian_eigen(a)?;
    Ok(Spectrum { values: e.values, tolerance: e.tolerance })
}

/// Thin singular value decomposition a = u * diag(values) * v^H.
#[derive(Clone, Debug)]
pub struct Svd {
    pub values: Vec<f64>,
    /// rows x k with orthonormal columns, k = min(rows, cols).
    pub u: ComplexMatrix,
    /// cols x k with orthonormal columns.
    pub v: ComplexMatrix,
}

/// One-sided Jacobi SVD. Small singular values keep high absolute accuracy
/// (about machine epsilon times the norm), unlike the a^H a route.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if a.rows < a.cols {
        let t = svd(&a.adjoint())?;
        return Ok(Svd { values: t.values, u: t.v, v: t.u });
    }
    let (m, n) = (a.rows, a.cols);
    let mut work = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let rel_tol = f64::EPSILON * m as f64;
    let negligible = (f64::EPSILON * a.frobenius_norm()).powi(2);
    let mut sweeps = 0;
    let mut off;
    loop {
        let mut rotated = false;
        off = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..m {
                    let x = work[(k, p)];
                    let y = work[(k, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                // columns at rounding level carry no information; rotating them only cycles
                if g == 0.0 || g <= rel_tol * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                off = off.max(g / (alpha * beta).sqrt());
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut work, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
    }

    let norms: Vec<f64> = (0..n).map(|c| (0..m).map(|r| work[(r, c)].norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let values: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let cutoff = values.first().copied().unwrap_or(0.0) * 1e-13;
    let mut u = ComplexMatrix::zeros(m, n);
    let mut vs = ComplexMatrix::zeros(n, n);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vs[(r, new)] = v[(r, old)];
        }
        let col: Vec<Complex64> = if norms[old] > cutoff && norms[old] > 0.0 {
            (0..m).map(|r| work[(r, old)] / norms[old]).collect()
        } else {
            complete_orthonormal(&basis, m)
        };
        for (r, z) in col.iter().enumerate() {
            u[(r, new)] = *z;
        }
        basis.push(col);
    }
    Ok(Svd { values, u, v: vs })
}

/// A unit vector orthogonal to every vector in `basis` (Gram-Schmidt on the standard basis).
fn complete_orthonormal(basis: &[Vec<Complex64>], dim: usize) -> Vec<Complex64> {
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for e in 0..dim {
        let mut cand = vec![ZERO; dim];
        cand[e] = ONE;
        for b in basis {
            let proj: Complex64 = b.iter().zip(&cand).map(|(x, y)| x.conj() * y).sum();
            for (c, x) in cand.iter_mut().zip(b) {
                *c -= proj * x;
            }
        }
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, cand));
        }
    }
    let (norm, cand) = best.expect("dimension must be positive");
    cand.into_iter().map(|z| z / norm).collect()
}

/// Unitary whose leading columns are the given orthonormal vectors.
pub fn unitary_with_columns(cols: &[Vec<Complex64>], dim: usize) -> Result<ComplexMatrix> {
    if cols.len() > dim || cols.iter().any(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch(format!("{} columns do not fit a {dim}x{dim} unitary", cols.len())));
    }
    let mut basis: Vec<Vec<Complex64>> = cols.to_vec();
    while basis.len() < dim {
        let next = complete_orthonormal(&basis, dim);
        basis.push(next);
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (c, v) in basis.iter().enumerate() {
        for (r, z) in v.iter().enumerate() {
            u[(r, c)] = *z;
        }
    }
    Ok(u)
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Spectrum> {
    let s = svd(a)?;
    let tolerance = f64::EPSILON * a.frobenius_norm();
    Ok(Spectrum { values: s.values, tolerance })
}

pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.sum())
}

/// Unit vector with i.i.d. standard complex normal components, normalized.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed unitary from Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        for b in &cols {
            let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (c, x) in v.iter_mut().zip(b) {
                *c -= proj * x;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            u[(r, c)] = *z;
        }
    }
    u
}

/// Ginibre-style random Hermitian matrix (G + G^H) / 2.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_ginibre(dim, dim, rng);
    g.add(&g.adjoint()).scale_re(0.5)
}

pub fn random_ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data =
        (0..rows * cols).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    ComplexMatrix { rows, cols, data }
}
