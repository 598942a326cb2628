//! Bipartite density matrices on H ⊗ K.
//!
//! A basis vector |i>|j'> (1-based, i over H and j over K) sits at one of two
//! positions depending on [`BasisOrdering`]:
//!
//! * `HMajor`: `(i-1)*dim_k + j`, K index fastest. This is the ordering that
//!   matches [`kron`](crate::numkit::kron) and is the canonical internal one.
//! * `KMajor`: `(j-1)*dim_h + i`, H index fastest. This is the product basis
//!   order the entry criterion is stated in, so the example builders use it.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{
    self, hermitian_defect, hermitian_eigenvalues, kron_vec, random_ginibre, random_unit_vector, ComplexMatrix,
    Spectrum,
};

pub const HERMITIAN_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-9;
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Schmidt coefficients above this count towards the Schmidt rank.
pub const SCHMIDT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub dim_h: usize,
    pub dim_k: usize,
}

impl BipartiteDims {
    pub fn new(dim_h: usize, dim_k: usize) -> Result<Self> {
        if dim_h == 0 || dim_k == 0 {
            return Err(Error::Domain(format!("dimensions must be positive, got {dim_h}x{dim_k}")));
        }
        Ok(Self { dim_h, dim_k })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn order(&self) -> usize {
        self.dim_h * self.dim_k
    }

    pub fn min_dim(&self) -> usize {
        self.dim_h.min(self.dim_k)
    }

    /// Both factors need at least two levels for entanglement to be possible.
    pub fn require_bipartite(&self) -> Result<()> {
        if self.dim_h < 2 || self.dim_k < 2 {
            return Err(Error::Domain(format!(
                "both dimensions must be at least 2, got {}x{}",
                self.dim_h, self.dim_k
            )));
        }
        Ok(())
    }

    /// 0-based position of |i>|j'> for 0-based i, j.
    pub(crate) fn pos(&self, ordering: BasisOrdering, i: usize, j: usize) -> usize {
        match ordering {
            BasisOrdering::HMajor => i * self.dim_k + j,
            BasisOrdering::KMajor => j * self.dim_h + i,
        }
    }
}

impl fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.dim_h, self.dim_k)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisOrdering {
    #[default]
    HMajor,
    KMajor,
}

impl fmt::Display for BasisOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisOrdering::HMajor => "h_major",
            BasisOrdering::KMajor => "k_major",
        })
    }
}

impl std::str::FromStr for BasisOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h_major" => Ok(Self::HMajor),
            "k_major" => Ok(Self::KMajor),
            other => Err(Error::Parse(format!("unknown ordering {other:?} (expected h_major or k_major)"))),
        }
    }
}

/// 1-based position of |i>|j'> in the given ordering.
pub fn basis_index(i: usize, j: usize, dims: BipartiteDims, ordering: BasisOrdering) -> Result<usize> {
    if i == 0 || i > dims.dim_h || j == 0 || j > dims.dim_k {
        return Err(Error::IndexOutOfRange(format!(
            "(i, j) = ({i}, {j}) outside 1..={} x 1..={}",
            dims.dim_h, dims.dim_k
        )));
    }
    Ok(dims.pos(ordering, i - 1, j - 1) + 1)
}

/// Position map from `from` ordering to `to` ordering (0-based): `map[p_to] = p_from`.
fn ordering_map(dims: BipartiteDims, from: BasisOrdering, to: BasisOrdering) -> Vec<usize> {
    let mut map = vec![0; dims.order()];
    for i in 0..dims.dim_h {
        for j in 0..dims.dim_k {
            map[dims.pos(to, i, j)] = dims.pos(from, i, j);
        }
    }
    map
}

/// Re-expresses an operator on H ⊗ K in another basis ordering.
pub fn reorder_matrix(
    mat: &ComplexMatrix,
    dims: BipartiteDims,
    from: BasisOrdering,
    to: BasisOrdering,
) -> ComplexMatrix {
    if from == to {
        return mat.clone();
    }
    mat.permute_symmetric(&ordering_map(dims, from, to))
}

/// One failed density-matrix axiom together with its measured defect.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Shape { expected: usize, rows: usize, cols: usize },
    NotHermitian { defect: f64 },
    TraceNotOne { trace: Complex64 },
    NegativeEigenvalue { min: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { expected, rows, cols } => {
                write!(f, "shape: expected {expected}x{expected}, got {rows}x{cols}")
            }
            Violation::NotHermitian { defect } => write!(f, "hermiticity: max |rho - rho^H| = {defect:.3e}"),
            Violation::TraceNotOne { trace } => {
                write!(f, "trace: Tr(rho) = {:.12}{:+.3e}i, expected 1", trace.re, trace.im)
            }
            Violation::NegativeEigenvalue { min } => write!(f, "positivity: minimum eigenvalue {min:.3e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: BipartiteDims,
    ordering: BasisOrdering,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Checked constructor: fails with the full violation list if any axiom is broken.
    pub fn new(dims: BipartiteDims, ordering: BasisOrdering, mat: ComplexMatrix) -> Result<Self> {
        let rho = Self::new_unchecked(dims, ordering, mat)?;
        let violations = rho.validate();
        if violations.is_empty() {
            Ok(rho)
        } else {
            Err(Error::InvalidState(violations))
        }
    }

    /// Only the shape is checked. Use [`validate`](Self::validate) for the state axioms.
    pub fn new_unchecked(dims: BipartiteDims, ordering: BasisOrdering, mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != dims.order() || mat.cols() != dims.order() {
            return Err(Error::InvalidState(vec![Violation::Shape {
                expected: dims.order(),
                rows: mat.rows(),
                cols: mat.cols(),
            }]));
        }
        Ok(Self { dims, ordering, mat })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn ordering(&self) -> BasisOrdering {
        self.ordering
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// <i, j'| rho |k, l'> with 1-based indices.
    pub fn entry(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> Result<Complex64> {
        let r = basis_index(i, j, self.dims, self.ordering)?;
        let c = basis_index(k, l, self.dims, self.ordering)?;
        Ok(self.mat[(r - 1, c - 1)])
    }

    /// 0-based variant of [`entry`](Self::entry) for internal loops.
    pub(crate) fn at(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.mat[(self.dims.pos(self.ordering, i, j), self.dims.pos(self.ordering, k, l))]
    }

    pub fn reorder(&self, target: BasisOrdering) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims,
            ordering: target,
            mat: reorder_matrix(&self.mat, self.dims, self.ordering, target),
        }
    }

    pub fn to_h_major(&self) -> DensityMatrix {
        self.reorder(BasisOrdering::HMajor)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let scale = self.mat.max_abs().max(f64::MIN_POSITIVE);
        let defect = hermitian_defect(&self.mat).unwrap_or(f64::INFINITY);
        if defect > HERMITIAN_TOL * scale {
            out.push(Violation::NotHermitian { defect });
        }
        let trace = self.mat.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            out.push(Violation::TraceNotOne { trace });
        }
        // Positivity is judged on the Hermitian part so it is reported even when hermiticity fails.
        let herm = self.mat.add(&self.mat.adjoint()).scale_re(0.5);
        match hermitian_eigenvalues(&herm) {
            Ok(spec) if spec.min() < -POSITIVITY_TOL => out.push(Violation::NegativeEigenvalue { min: spec.min() }),
            Ok(_) => {}
            Err(_) => out.push(Violation::NegativeEigenvalue { min: f64::NAN }),
        }
        out
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        hermitian_eigenvalues(&self.mat)
    }
}

/// Free-function form of [`DensityMatrix::reorder`].
pub fn reorder(rho: &DensityMatrix, target: BasisOrdering) -> DensityMatrix {
    rho.reorder(target)
}

pub fn validate(rho: &DensityMatrix) -> Vec<Violation> {
    rho.validate()
}

/// Pure state ψ = Σ C[i,j] |i>|j'> given by its dim_h x dim_k coefficient matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: BipartiteDims,
    coeffs: ComplexMatrix,
}

impl PureState {
    pub fn new(dims: BipartiteDims, coeffs: ComplexMatrix) -> Result<Self> {
        if coeffs.rows() != dims.dim_h || coeffs.cols() != dims.dim_k {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix is {}x{}, dims are {dims}",
                coeffs.rows(),
                coeffs.cols()
            )));
        }
        let norm_sq = coeffs.frobenius_norm().powi(2);
        if (norm_sq - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Domain(format!("pure state norm^2 is {norm_sq}, expected 1")));
        }
        Ok(Self { dims, coeffs })
    }

    /// Scales the coefficients to unit norm first.
    pub fn normalized(dims: BipartiteDims, coeffs: ComplexMatrix) -> Result<Self> {
        let norm = coeffs.frobenius_norm();
        if norm == 0.0 {
            return Err(Error::Domain("zero vector is not a state".into()));
        }
        Self::new(dims, coeffs.scale_re(1.0 / norm))
    }

    pub fn product(x: &[Complex64], y: &[Complex64]) -> Result<Self> {
        let dims = BipartiteDims::new(x.len(), y.len())?;
        let c = ComplexMatrix::from_vec(x.len(), y.len(), kron_vec(x, y))?;
        Self::normalized(dims, c)
    }

    /// (|1,1'> + ... + |n,n'>) / sqrt(n) embedded in `dims`.
    pub fn maximally_entangled(n: usize, dims: BipartiteDims) -> Result<Self> {
        if n < 2 || n > dims.min_dim() {
            return Err(Error::Domain(format!("n = {n} must satisfy 2 <= n <= min(dims) = {}", dims.min_dim())));
        }
        let mut c = ComplexMatrix::zeros(dims.dim_h, dims.dim_k);
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        for i in 0..n {
            c[(i, i)] = amp;
        }
        Self::new(dims, c)
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    /// State vector in h_major order (the coefficient matrix flattened row-major).
    pub fn vector(&self) -> Vec<Complex64> {
        self.coeffs.as_slice().to_vec()
    }

    pub fn density(&self) -> DensityMatrix {
        let v = self.vector();
        DensityMatrix { dims: self.dims, ordering: BasisOrdering::HMajor, mat: ComplexMatrix::outer(&v, &v) }
    }
}

/// ψ = Σ_k coefficients[k] |h_vectors[k]> |k_vectors[k]>.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub h_vectors: Vec<Vec<Complex64>>,
    pub k_vectors: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&d| d > SCHMIDT_TOL).count()
    }
}

pub fn schmidt_decomposition(psi: &PureState) -> Result<SchmidtDecomposition> {
    let s = numkit::svd(psi.coeffs())?;
    // C = Σ δ u v^H, so ψ = Σ δ |u> |conj(v)>.
    let k = s.values.len();
    let h_vectors = (0..k).map(|c| s.u.col(c)).collect();
    let k_vectors = (0..k).map(|c| s.v.col(c).into_iter().map(|z| z.conj()).collect()).collect();
    Ok(SchmidtDecomposition { coefficients: s.values, h_vectors, k_vectors })
}

/// Schmidt coefficients, descending.
pub fn schmidt(psi: &PureState) -> Result<Spectrum> {
    numkit::singular_values(psi.coeffs())
}

pub fn maximally_entangled(n: usize, dims: BipartiteDims) -> Result<DensityMatrix> {
    Ok(PureState::maximally_entangled(n, dims)?.density())
}

fn check_probabilities(q: &[f64]) -> Result<()> {
    for (i, &x) in q.iter().enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain(format!("q{} = {x} must be nonnegative", i + 1)));
        }
    }
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("q's must sum to 1, got {sum}")));
    }
    Ok(())
}

fn check_modulus_bound(names: &[&str], values: &[Complex64], bound: f64, bound_name: &str) -> Result<()> {
    for (name, z) in names.iter().zip(values) {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain(format!("{name} is not finite")));
        }
        // slack of a few ulps so boundary parameters such as |a|^2 = q2 q3 are accepted
        if z.norm_sqr() > bound * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::Domain(format!("|{name}|^2 = {} exceeds {bound_name} = {bound}", z.norm_sqr())));
        }
    }
    Ok(())
}

fn sparse_state(dims: BipartiteDims, scale: f64, cells: &[(usize, usize, Complex64)]) -> Result<DensityMatrix> {
    let n = dims.order();
    let mut m = ComplexMatrix::zeros(n, n);
    for &(r, c, z) in cells {
        m[(r - 1, c - 1)] = z * scale;
    }
    let rho = DensityMatrix::new_unchecked(dims, BasisOrdering::KMajor, m)?;
    let violations = rho.validate();
    if violations.is_empty() {
        Ok(rho)
    } else {
        Err(Error::InvalidState(violations))
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The 3x3 family with entries q1, q2, q3 and couplings a, b, c (k_major).
pub fn example_34(q1: f64, q2: f64, q3: f64, a: Complex64, b: Complex64, c: Complex64) -> Result<DensityMatrix> {
    check_probabilities(&[q1, q2, q3])?;
    check_modulus_bound(&["a", "b", "c"], &[a, b, c], q2 * q3, "q2*q3")?;
    let mut cells = Vec::new();
    for &r in &[1, 5, 9] {
        for &s in &[1, 5, 9] {
            cells.push((r, s, re(q1)));
        }
    }
    cells.extend_from_slice(&[
        (2, 2, re(q3)),
        (2, 3, a),
        (3, 2, a.conj()),
        (3, 3, re(q2)),
        (4, 4, re(q2)),
        (4, 6, b),
        (6, 4, b.conj()),
        (6, 6, re(q3)),
        (7, 7, re(q3)),
        (7, 8, c),
        (8, 7, c.conj()),
        (8, 8, re(q2)),
    ]);
    sparse_state(BipartiteDims::square(3)?, 1.0 / 3.0, &cells)
}

/// The 4x4 family with entries q1..q4 and couplings a, b, c, d (k_major).
#[allow(clippy::too_many_arguments)]
pub fn example_35(
    q1: f64,
    q2: f64,
    q3: f64,
    q4: f64,
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> Result<DensityMatrix> {
    check_probabilities(&[q1, q2, q3, q4])?;
    check_modulus_bound(&["a", "b", "c", "d"], &[a, b, c, d], q3 * q4, "q3*q4")?;
    let mut cells = Vec::new();
    for &r in &[1, 6, 11, 16] {
        for &s in &[1, 6, 11, 16] {
            cells.push((r, s, re(q1)));
        }
    }
    for &r in &[4, 5, 10, 15] {
        for &s in &[4, 5, 10, 15] {
            cells.push((r, s, re(q2)));
        }
    }
    cells.extend_from_slice(&[
        (2, 2, re(q4)),
        (2, 3, a),
        (3, 2, a.conj()),
        (3, 3, re(q3)),
        (7, 7, re(q4)),
        (7, 8, b),
        (8, 7, b.conj()),
        (8, 8, re(q3)),
        (9, 9, re(q3)),
        (9, 12, c),
        (12, 9, c.conj()),
        (12, 12, re(q4)),
        (13, 13, re(q4)),
        (13, 14, d),
        (14, 13, d.conj()),
        (14, 14, re(q3)),
    ]);
    sparse_state(BipartiteDims::square(4)?, 0.25, &cells)
}

/// Partial transpose on H, in `rho`'s own ordering:
/// <i,j'| rho^T1 |k,l'> = <k,j'| rho |i,l'>.
pub fn partial_transpose_first(rho: &DensityMatrix) -> ComplexMatrix {
    partial_transpose_matrix(rho.matrix(), rho.dims(), rho.ordering())
}

pub(crate) fn partial_transpose_matrix(
    mat: &ComplexMatrix,
    dims: BipartiteDims,
    ordering: BasisOrdering,
) -> ComplexMatrix {
    let n = dims.order();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..dims.dim_h {
        for j in 0..dims.dim_k {
            for k in 0..dims.dim_h {
                for l in 0..dims.dim_k {
                    out[(dims.pos(ordering, i, j), dims.pos(ordering, k, l))] =
                        mat[(dims.pos(ordering, k, j), dims.pos(ordering, i, l))];
                }
            }
        }
    }
    out
}

/// Realigned matrix R[(i,k), (j,l)] = <i,j'| rho |k,l'>, shape dim_h^2 x dim_k^2.
///
/// Rows run over (i, k) with k fastest and columns over (j, l) with l fastest.
pub fn realignment(rho: &DensityMatrix) -> ComplexMatrix {
    let d = rho.dims();
    let (dh, dk) = (d.dim_h, d.dim_k);
    let mut out = ComplexMatrix::zeros(dh * dh, dk * dk);
    for i in 0..dh {
        for k in 0..dh {
            for j in 0..dk {
                for l in 0..dk {
                    out[(i * dh + k, j * dk + l)] = rho.at(i, j, k, l);
                }
            }
        }
    }
    out
}

/// Convex combination of `terms` random pure product states with weights
/// uniform on the simplex. Deterministic for a fixed seed.
pub fn random_separable(dims: BipartiteDims, terms: usize, seed: u64) -> Result<DensityMatrix> {
    if terms == 0 {
        return Err(Error::Domain("terms must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..terms).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = weights.iter().sum();
    let n = dims.order();
    let mut m = ComplexMatrix::zeros(n, n);
    for w in weights {
        let x = random_unit_vector(dims.dim_h, &mut rng);
        let y = random_unit_vector(dims.dim_k, &mut rng);
        let v = kron_vec(&x, &y);
        let p = w / total;
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] += v[r] * v[c].conj() * p;
            }
        }
    }
    DensityMatrix::new(dims, BasisOrdering::HMajor, m)
}

/// Random mixed state G G^H / Tr(G G^H) with G a complex Ginibre matrix of
/// `rank` columns (the induced Hilbert-Schmidt measure).
pub fn random_state(dims: BipartiteDims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_ginibre(dims.order(), rank, &mut rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(dims, BasisOrdering::HMajor, m.scale_re(1.0 / tr))
}

/// Random pure state whose Schmidt rank is exactly `rank` (almost surely).
pub fn random_pure_with_rank(dims: BipartiteDims, rank: usize, seed: u64) -> Result<PureState> {
    if rank == 0 || rank > dims.min_dim() {
        return Err(Error::Domain(format!("Schmidt rank {rank} outside 1..={}", dims.min_dim())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = ComplexMatrix::zeros(dims.dim_h, dims.dim_k);
    for _ in 0..rank {
        let x = random_unit_vector(dims.dim_h, &mut rng);
        let y = random_unit_vector(dims.dim_k, &mut rng);
        c = c.add(&ComplexMatrix::from_vec(dims.dim_h, dims.dim_k, kron_vec(&x, &y))?);
    }
    PureState::normalized(dims, c)
}

pub fn random_pure(dims: BipartiteDims, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_unit_vector(dims.order(), &mut rng);
    PureState::normalized(dims, ComplexMatrix::from_vec(dims.dim_h, dims.dim_k, v)?)
}

/// Product state x x^H ⊗ y y^H as a density matrix (h_major).
pub fn product_density(x: &[Complex64], y: &[Complex64]) -> Result<DensityMatrix> {
    Ok(PureState::product(x, y)?.density())
}

/// σ ⊗ τ for two single-party density matrices.
pub fn tensor_product(sigma: &ComplexMatrix, tau: &ComplexMatrix) -> Result<DensityMatrix> {
    let dims = BipartiteDims::new(sigma.rows(), tau.rows())?;
    DensityMatrix::new(dims, BasisOrdering::HMajor, numkit::kron(sigma, tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{hermitian_eigenvalues, trace_norm, ZERO};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dims(h: usize, k: usize) -> BipartiteDims {
        BipartiteDims::new(h, k).unwrap()
    }

    #[test]
    fn basis_index_conventions() {
        let d3 = dims(3, 3);
        assert_eq!(basis_index(1, 1, d3, BasisOrdering::KMajor).unwrap(), 1);
        assert_eq!(basis_index(1, 1, d3, BasisOrdering::HMajor).unwrap(), 1);
        assert_eq!(basis_index(1, 2, d3, BasisOrdering::KMajor).unwrap(), 4);
        assert_eq!(basis_index(3, 3, d3, BasisOrdering::KMajor).unwrap(), 9);
        assert_eq!(basis_index(2, 1, dims(2, 3), BasisOrdering::HMajor).unwrap(), 4);
        assert!(basis_index(4, 1, d3, BasisOrdering::KMajor).is_err());
        assert!(basis_index(0, 1, d3, BasisOrdering::HMajor).is_err());
    }

    #[test]
    fn reorder_round_trip_preserves_spectrum() {
        let rho = random_state(dims(2, 3), 6, 1).unwrap();
        let k = rho.reorder(BasisOrdering::KMajor);
        assert_eq!(k.reorder(BasisOrdering::HMajor), rho);
        assert_eq!(rho.reorder(BasisOrdering::HMajor), rho);
        assert_abs_diff_eq!((k.matrix().trace() - rho.matrix().trace()).norm(), 0.0, epsilon = 1e-15);
        let a = rho.spectrum().unwrap().values;
        let b = k.spectrum().unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
        for i in 1..=2 {
            for j in 1..=3 {
                for kk in 1..=2 {
                    for l in 1..=3 {
                        assert_eq!(rho.entry((i, j), (kk, l)).unwrap(), k.entry((i, j), (kk, l)).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn validate_cases() {
        let mixed =
            DensityMatrix::new_unchecked(dims(2, 2), BasisOrdering::HMajor, ComplexMatrix::identity(4).scale_re(0.25))
                .unwrap();
        assert!(mixed.validate().is_empty());

        let bad_trace =
            DensityMatrix::new_unchecked(dims(2, 2), BasisOrdering::HMajor, ComplexMatrix::identity(4).scale_re(0.5))
                .unwrap();
        let v = bad_trace.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::TraceNotOne { .. }));
    }

    #[test]
    fn validate_flags_example_34_outside_its_domain() {
        // |a|^2 = 0.09 > q2 q3 = 0.07: build the raw matrix by hand, since the builder refuses it.
        let (q1, q2, q3) = (0.2, 0.1, 0.7);
        let a = c(0.3, 0.0);
        let good = example_34(q1, q2, q3, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let mut m = good.matrix().clone();
        m[(1, 2)] = a / 3.0;
        m[(2, 1)] = a.conj() / 3.0;
        let rho = DensityMatrix::new_unchecked(good.dims(), BasisOrdering::KMajor, m.clone()).unwrap();
        let v = rho.validate();
        assert_eq!(v.len(), 1, "{v:?}");
        let Violation::NegativeEigenvalue { min } = v[0] else { panic!("{v:?}") };
        // independent check: the 2x2 block [[q3, a],[a, q2]]/3 has eigenvalue (q2+q3 - sqrt((q3-q2)^2+4a^2))/6
        let block_min = (q2 + q3 - ((q3 - q2).powi(2) + 4.0 * 0.09_f64).sqrt()) / 6.0;
        assert_abs_diff_eq!(min, block_min, epsilon = 1e-12);
        assert!(example_34(q1, q2, q3, a, c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn maximally_entangled_two_qubits() {
        let rho = maximally_entangled(2, dims(2, 2)).unwrap();
        let m = rho.matrix();
        for r in 0..4 {
            for col in 0..4 {
                let expected = if [0, 3].contains(&r) && [0, 3].contains(&col) { 0.5 } else { 0.0 };
                assert_abs_diff_eq!(m[(r, col)].re, expected, epsilon = 1e-15);
                assert_eq!(m[(r, col)].im, 0.0);
            }
        }
        assert!(maximally_entangled(3, dims(2, 4)).is_err());
        assert!(maximally_entangled(1, dims(2, 2)).is_err());
    }

    #[test]
    fn schmidt_cases() {
        let psi = PureState::product(&[c(0.6, 0.0), c(0.0, 0.8)], &[c(1.0, 0.0), c(1.0, 1.0), c(0.0, -2.0)]).unwrap();
        let s = schmidt(&psi).unwrap();
        assert_abs_diff_eq!(s.values[0], 1.0, epsilon = 1e-14);
        assert!(s.values[1] < SCHMIDT_TOL);
        assert_eq!(schmidt_decomposition(&psi).unwrap().rank(), 1);

        let plus = PureState::maximally_entangled(2, dims(2, 2)).unwrap();
        let s = schmidt(&plus).unwrap();
        assert_abs_diff_eq!(s.values[0], 0.5_f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.values[1], 0.5_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn schmidt_decomposition_rebuilds_state() {
        let psi = random_pure(dims(3, 4), 9).unwrap();
        let sd = schmidt_decomposition(&psi).unwrap();
        let mut v = [ZERO; 12];
        for k in 0..sd.coefficients.len() {
            for (t, z) in kron_vec(&sd.h_vectors[k], &sd.k_vectors[k]).iter().enumerate() {
                v[t] += z * sd.coefficients[k];
            }
        }
        for (a, b) in v.iter().zip(psi.vector()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn schmidt_matches_gram_eigenvalue_route() {
        for seed in 0..20 {
            let psi = random_pure(dims(3, 4), seed).unwrap();
            let s = schmidt(&psi).unwrap();
            let c = psi.coeffs();
            let gram = c.matmul(&c.adjoint());
            let e = hermitian_eigenvalues(&gram).unwrap();
            for (d, lam) in s.values.iter().zip(&e.values) {
                assert_abs_diff_eq!(*d, lam.max(0.0).sqrt(), epsilon = 1e-9);
            }
            assert_abs_diff_eq!(s.values.iter().map(|d| d * d).sum::<f64>(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn example_34_layout() {
        let (a, b, cc) = (c(0.01, 0.02), c(-0.02, 0.01), c(0.03, -0.01));
        let rho = example_34(0.2, 0.1, 0.7, a, b, cc).unwrap();
        assert_eq!(rho.ordering(), BasisOrdering::KMajor);
        let m = rho.matrix();
        assert_abs_diff_eq!((m[(1, 2)] - a / 3.0).norm(), 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!((m[(2, 1)] - a.conj() / 3.0).norm(), 0.0, epsilon = 1e-16);
        assert!(crate::numkit::is_hermitian(m, 1e-15).unwrap());

        let degenerate = example_34(0.5, 0.25, 0.25, ZERO, ZERO, ZERO).unwrap();
        assert!(degenerate.validate().is_empty());
    }

    #[test]
    fn example_builders_reject_out_of_domain_parameters() {
        let err = example_34(0.2, 0.1, 0.6, ZERO, ZERO, ZERO).unwrap_err();
        assert!(err.to_string().contains("sum to 1"), "{err}");
        let err = example_34(0.2, 0.1, 0.7, ZERO, c(0.5, 0.0), ZERO).unwrap_err();
        assert!(err.to_string().contains("|b|^2"), "{err}");
        let err = example_35(0.25, 0.25, 0.25, 0.25, ZERO, ZERO, ZERO, c(0.0, 0.3)).unwrap_err();
        assert!(err.to_string().contains("|d|^2"), "{err}");
        assert!(example_35(-0.1, 0.3, 0.4, 0.4, ZERO, ZERO, ZERO, ZERO).is_err());
    }

    #[test]
    fn example_35_degenerate_family_is_valid() {
        let rho = example_35(0.1, 0.2, 0.3, 0.4, ZERO, ZERO, ZERO, ZERO).unwrap();
        assert!(rho.validate().is_empty());
        assert_eq!(rho.dims(), dims(4, 4));
    }

    #[test]
    fn partial_transpose_of_product_transposes_first_factor() {
        let sigma =
            ComplexMatrix::from_rows(&[vec![c(0.7, 0.0), c(0.1, 0.2)], vec![c(0.1, -0.2), c(0.3, 0.0)]]).unwrap();
        let tau = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, 0.1), ZERO],
            vec![c(0.0, -0.1), c(0.25, 0.0), c(0.05, 0.0)],
            vec![ZERO, c(0.05, 0.0), c(0.25, 0.0)],
        ])
        .unwrap();
        let rho = tensor_product(&sigma, &tau).unwrap();
        let pt = partial_transpose_first(&rho);
        assert!(pt.max_abs_diff(&crate::numkit::kron(&sigma.transpose(), &tau)) < 1e-16);

        // same answer in the other ordering
        let k = rho.reorder(BasisOrdering::KMajor);
        let pt_k = partial_transpose_first(&k);
        let back = reorder_matrix(&pt_k, rho.dims(), BasisOrdering::KMajor, BasisOrdering::HMajor);
        assert!(back.max_abs_diff(&pt) < 1e-16);
    }

    #[test]
    fn partial_transpose_is_involutive() {
        let rho = random_state(dims(3, 2), 3, 4).unwrap();
        let once = partial_transpose_first(&rho);
        let twice = partial_transpose_matrix(&once, rho.dims(), rho.ordering());
        assert_eq!(&twice, rho.matrix());
        assert_abs_diff_eq!(once.trace().re, 1.0, epsilon = 1e-14);
        assert!(crate::numkit::is_hermitian(&once, 1e-15).unwrap());
    }

    #[test]
    fn realignment_of_product_has_unit_trace_norm() {
        let rho = random_separable(dims(2, 3), 1, 5).unwrap();
        assert_abs_diff_eq!(trace_norm(&realignment(&rho)).unwrap(), 1.0, epsilon = 1e-12);
        let r = realignment(&rho);
        assert_eq!((r.rows(), r.cols()), (4, 9));
    }

    #[test]
    fn realignment_of_two_qubit_maximally_entangled_state() {
        let rho = maximally_entangled(2, dims(2, 2)).unwrap();
        assert_abs_diff_eq!(trace_norm(&realignment(&rho)).unwrap(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn random_separable_is_deterministic_and_valid() {
        let a = random_separable(dims(3, 3), 4, 42).unwrap();
        let b = random_separable(dims(3, 3), 4, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_empty());
        let one = random_separable(dims(2, 2), 1, 3).unwrap();
        let spec = one.spectrum().unwrap();
        assert_abs_diff_eq!(spec.max(), 1.0, epsilon = 1e-12);
        assert!(spec.values[1].abs() < 1e-12);
        assert!(random_separable(dims(2, 2), 0, 1).is_err());
    }
}
