//! Positive maps and the entanglement witnesses they generate.
//!
//! Maps act on operators of H and are written entrywise. A witness is the
//! Choi-type block matrix Σ_{i,j<=n} Φ(E_ij) ⊗ |i'><j'| stored densely in the
//! full dim_h·dim_k space, zero outside the n-block.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{hermitian_defect, hermitian_eigenvalues, kron, unitary_defect, ComplexMatrix, ONE, ZERO};
use crate::perm::Permutation;
use crate::states::{reorder_matrix, BasisOrdering, BipartiteDims, DensityMatrix};

/// Largest eigenvalue a witness may have on the negative side of zero.
pub const WITNESS_NEG_TOL: f64 = 1e-10;
pub const ORTHONORMAL_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-10;
const IMAG_TOL: f64 = 1e-10;

/// Parameters (n, κ, π, σ) of W_κ^{π,σ}.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WitnessSpec {
    pub n: usize,
    pub kappa: Permutation,
    pub pi: Permutation,
    pub sigma: Permutation,
    pub dims: BipartiteDims,
}

impl WitnessSpec {
    pub fn new(n: usize, kappa: Permutation, pi: Permutation, sigma: Permutation, dims: BipartiteDims) -> Result<Self> {
        let spec = Self { n, kappa, pi, sigma, dims };
        spec.check_shape()?;
        if spec.kappa.is_identity() {
            return Err(Error::NotAWitness("kappa must not be identity".into()));
        }
        Ok(spec)
    }

    /// π = σ = id.
    pub fn kappa_only(n: usize, kappa: Permutation, dims: BipartiteDims) -> Result<Self> {
        Self::new(n, kappa, Permutation::identity(n), Permutation::identity(n), dims)
    }

    fn check_shape(&self) -> Result<()> {
        self.dims.require_bipartite()?;
        if self.n < 2 || self.n > self.dims.min_dim() {
            return Err(Error::Domain(format!(
                "n = {} must satisfy 2 <= n <= min(dims) = {}",
                self.n,
                self.dims.min_dim()
            )));
        }
        for (name, p) in [("kappa", &self.kappa), ("pi", &self.pi), ("sigma", &self.sigma)] {
            if p.n() != self.n {
                return Err(Error::InvalidPermutation(format!("{name} acts on {} letters, n = {}", p.n(), self.n)));
            }
        }
        Ok(())
    }

    /// σπ⁻¹
    pub fn tau(&self) -> Permutation {
        self.sigma.compose(&self.pi.inverse()).expect("same length")
    }

    /// σκ⁻¹π⁻¹
    pub fn mu(&self) -> Permutation {
        self.sigma.compose(&self.kappa.inverse()).and_then(|p| p.compose(&self.pi.inverse())).expect("same length")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessKind {
    Rank4,
    Kps(WitnessSpec),
    Choi { n: usize },
    Conjugated(Box<WitnessKind>),
}

impl WitnessKind {
    pub fn name(&self) -> &'static str {
        match self {
            WitnessKind::Rank4 => "rank4",
            WitnessKind::Kps(_) => "kps",
            WitnessKind::Choi { .. } => "choi",
            WitnessKind::Conjugated(_) => "conjugated",
        }
    }
}

/// A Hermitian, non-positive operator on H ⊗ K.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    kind: WitnessKind,
    dims: BipartiteDims,
    ordering: BasisOrdering,
    mat: ComplexMatrix,
}

impl Witness {
    pub fn new(kind: WitnessKind, dims: BipartiteDims, ordering: BasisOrdering, mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != dims.order() || mat.cols() != dims.order() {
            return Err(Error::DimensionMismatch(format!(
                "witness matrix is {}x{}, dims {dims} need order {}",
                mat.rows(),
                mat.cols(),
                dims.order()
            )));
        }
        let defect = hermitian_defect(&mat)?;
        if defect > 1e-12 * mat.max_abs().max(1.0) {
            return Err(Error::NotAWitness(format!("matrix is not Hermitian (defect {defect:.3e})")));
        }
        let min = hermitian_eigenvalues(&mat)?.min();
        if min >= -WITNESS_NEG_TOL {
            return Err(Error::NotAWitness(format!("operator is positive (minimum eigenvalue {min:.3e})")));
        }
        Ok(Self { kind, dims, ordering, mat })
    }

    pub fn kind(&self) -> &WitnessKind {
        &self.kind
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

    pub fn reorder(&self, target: BasisOrdering) -> Witness {
        Witness {
            kind: self.kind.clone(),
            dims: self.dims,
            ordering: target,
            mat: reorder_matrix(&self.mat, self.dims, self.ordering, target),
        }
    }
}

/// [[a11,a12],[a21,a22]] ↦ [[a22,−a12],[−a21,a11]] on the leading 2x2 block, zero elsewhere.
pub fn phi_rank4(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = a.require_square()?;
    if d < 2 {
        return Err(Error::Domain(format!("phi_rank4 needs order >= 2, got {d}")));
    }
    let mut out = ComplexMatrix::zeros(d, d);
    out[(0, 0)] = a[(1, 1)];
    out[(1, 1)] = a[(0, 0)];
    out[(0, 1)] = -a[(0, 1)];
    out[(1, 0)] = -a[(1, 0)];
    Ok(out)
}

/// W = |1,2'><1,2'| − |1,1'><2,2'| − |2,2'><1,1'| + |2,1'><2,1'|.
pub fn rank4_witness(dims: BipartiteDims, ordering: BasisOrdering) -> Result<Witness> {
    dims.require_bipartite()?;
    let p = |i, j| dims.pos(ordering, i, j);
    let mut m = ComplexMatrix::zeros(dims.order(), dims.order());
    m[(p(0, 1), p(0, 1))] = ONE;
    m[(p(1, 0), p(1, 0))] = ONE;
    m[(p(0, 0), p(1, 1))] = -ONE;
    m[(p(1, 1), p(0, 0))] = -ONE;
    Witness::new(WitnessKind::Rank4, dims, ordering, m)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_orthonormal_pair(name: &str, a: &[Complex64], b: &[Complex64], dim: usize) -> Result<()> {
    if a.len() != dim || b.len() != dim {
        return Err(Error::DimensionMismatch(format!("{name}: vectors must have length {dim}")));
    }
    let na = (inner(a, a).re - 1.0).abs();
    let nb = (inner(b, b).re - 1.0).abs();
    let ov = inner(a, b).norm();
    let worst = na.max(nb).max(ov);
    if worst > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal(format!("{name}: defect {worst:.3e}")));
    }
    Ok(())
}

/// |a>|b'> laid out in the given ordering.
pub(crate) fn product_vector(
    dims: BipartiteDims,
    ordering: BasisOrdering,
    a: &[Complex64],
    b: &[Complex64],
) -> Vec<Complex64> {
    let mut v = vec![ZERO; dims.order()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[dims.pos(ordering, i, j)] = x * y;
        }
    }
    v
}

/// Tr((U⊗V) W (U⊗V)† ρ) for U: |1>,|2> ↦ x,z and V: |1'>,|2'> ↦ y,w.
///
/// Expands to <xw|ρ|xw> + <zy|ρ|zy> − 2 Re <xy|ρ|zw>.
pub fn rotated_rank4_value(
    rho: &DensityMatrix,
    x: &[Complex64],
    z: &[Complex64],
    y: &[Complex64],
    w: &[Complex64],
) -> Result<f64> {
    let dims = rho.dims();
    check_orthonormal_pair("(x, z)", x, z, dims.dim_h)?;
    check_orthonormal_pair("(y, w)", y, w, dims.dim_k)?;
    let ord = rho.ordering();
    let m = rho.matrix();
    let xw = product_vector(dims, ord, x, w);
    let zy = product_vector(dims, ord, z, y);
    let xy = product_vector(dims, ord, x, y);
    let zw = product_vector(dims, ord, z, w);
    Ok(m.sandwich(&xw, &xw).re + m.sandwich(&zy, &zy).re - 2.0 * m.sandwich(&xy, &zw).re)
}

/// (u ⊗ v) W (u ⊗ v)†.
pub fn conjugate_witness(w: &Witness, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Witness> {
    let dims = w.dims();
    if u.rows() != dims.dim_h || v.rows() != dims.dim_k {
        return Err(Error::DimensionMismatch(format!(
            "local unitaries are {}x{} and {}x{}, dims are {dims}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols()
        )));
    }
    for m in [u, v] {
        let d = unitary_defect(m)?;
        if d > UNITARY_TOL {
            return Err(Error::NotUnitary(d));
        }
    }
    let op = match w.ordering() {
        BasisOrdering::HMajor => kron(u, v),
        BasisOrdering::KMajor => kron(v, u),
    };
    let mat = w.matrix().conjugate_by(&op);
    // restore exact hermiticity lost to rounding
    let mat = mat.add(&mat.adjoint()).scale_re(0.5);
    Witness::new(WitnessKind::Conjugated(Box::new(w.kind().clone())), dims, w.ordering(), mat)
}

fn check_map_input(a: &ComplexMatrix, n: usize, kappa: &Permutation) -> Result<usize> {
    let d = a.require_square()?;
    if n < 2 || n > d {
        return Err(Error::DimensionMismatch(format!("need 2 <= n <= order(a), got n = {n}, order {d}")));
    }
    if kappa.n() != n {
        return Err(Error::DimensionMismatch(format!("kappa acts on {} letters, n = {n}", kappa.n())));
    }
    Ok(d)
}

/// Φ_κ: diagonal i ↦ (n−2)a_ii + a_κ(i)κ(i); off-diagonal (i≠j) ↦ −a_ij; outside the n-block ↦ 0.
pub fn phi_kappa(a: &ComplexMatrix, n: usize, kappa: &Permutation) -> Result<ComplexMatrix> {
    let d = check_map_input(a, n, kappa)?;
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] =
                if i == j { a[(i, i)] * (n as f64 - 2.0) + a[(kappa.at0(i), kappa.at0(i))] } else { -a[(i, j)] };
        }
    }
    Ok(out)
}

/// Φ_κ^{π,σ}, extended linearly from its action on matrix units:
/// E_ij ↦ −E_{τ(i),τ(j)} (i≠j), E_ii ↦ (n−2)E_{τ(i),τ(i)} + E_{μ(i),μ(i)}, with τ = σπ⁻¹, μ = σκ⁻¹π⁻¹.
pub fn phi_kappa_ps(a: &ComplexMatrix, spec: &WitnessSpec) -> Result<ComplexMatrix> {
    let n = spec.n;
    let d = check_map_input(a, n, &spec.kappa)?;
    let (tau, mu) = (spec.tau(), spec.mu());
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                out[(tau.at0(i), tau.at0(i))] += a[(i, i)] * (n as f64 - 2.0);
                out[(mu.at0(i), mu.at0(i))] += a[(i, i)];
            } else {
                out[(tau.at0(i), tau.at0(j))] -= a[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Φ_κ^{U,V}(A) = V Φ_κ(U A U†) V†, the sum-of-conjugations form.
pub fn phi_kappa_uv(
    a: &ComplexMatrix,
    n: usize,
    kappa: &Permutation,
    u: &ComplexMatrix,
    v: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    check_map_input(a, n, kappa)?;
    let inner = phi_kappa(&a.conjugate_by(u), n, kappa)?;
    Ok(inner.conjugate_by(v))
}

/// Φ_κ^{π,σ} realized through the unitaries U† = P_π, V = P_σ.
pub fn phi_kappa_conjugation(a: &ComplexMatrix, spec: &WitnessSpec) -> Result<ComplexMatrix> {
    let d = a.require_square()?;
    let u = spec.pi.matrix(d)?.adjoint();
    let v = spec.sigma.matrix(d)?;
    phi_kappa_uv(a, spec.n, &spec.kappa, &u, &v)
}

/// Block matrix (Φ(E_ij))_{i,j<=n} = n (Φ ⊗ I) ρ₊, without witness checks.
pub fn choi_matrix<F>(map: F, n: usize, dims: BipartiteDims, ordering: BasisOrdering) -> Result<ComplexMatrix>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    if n < 1 || n > dims.min_dim() {
        return Err(Error::Domain(format!("n = {n} must satisfy 1 <= n <= min(dims) = {}", dims.min_dim())));
    }
    let dh = dims.dim_h;
    let mut out = ComplexMatrix::zeros(dims.order(), dims.order());
    for i in 0..n {
        for j in 0..n {
            let mut e = ComplexMatrix::zeros(dh, dh);
            e[(i, j)] = ONE;
            let b = map(&e)?;
            if b.rows() != dh || b.cols() != dh {
                return Err(Error::DimensionMismatch(format!(
                    "map returned {}x{} on {dh}x{dh} input",
                    b.rows(),
                    b.cols()
                )));
            }
            for r in 0..dh {
                for c in 0..dh {
                    out[(dims.pos(ordering, r, i), dims.pos(ordering, c, j))] = b[(r, c)];
                }
            }
        }
    }
    Ok(out)
}

/// Choi witness of a positive map; rejected when the result is not a witness.
pub fn choi_witness<F>(map: F, n: usize, dims: BipartiteDims, ordering: BasisOrdering) -> Result<Witness>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let m = choi_matrix(map, n, dims, ordering)?;
    Witness::new(WitnessKind::Choi { n }, dims, ordering, m)
}

/// W_κ^{π,σ} = (n−2)Σ|τ(i),i'><τ(i),i'| + Σ|μ(i),i'><μ(i),i'| − Σ_{i≠j}|τ(i),i'><τ(j),j'|.
pub fn witness_kps(spec: &WitnessSpec, ordering: BasisOrdering) -> Result<Witness> {
    let spec = WitnessSpec::new(spec.n, spec.kappa.clone(), spec.pi.clone(), spec.sigma.clone(), spec.dims)?;
    let (n, dims) = (spec.n, spec.dims);
    let (tau, mu) = (spec.tau(), spec.mu());
    let p = |h, k| dims.pos(ordering, h, k);
    let mut m = ComplexMatrix::zeros(dims.order(), dims.order());
    for i in 0..n {
        let t = p(tau.at0(i), i);
        m[(t, t)] += Complex64::new(n as f64 - 2.0, 0.0);
        let s = p(mu.at0(i), i);
        m[(s, s)] += ONE;
        for j in 0..n {
            if i != j {
                m[(t, p(tau.at0(j), j))] -= ONE;
            }
        }
    }
    Witness::new(WitnessKind::Kps(spec), dims, ordering, m)
}

/// Re Tr(W ρ), reconciling orderings first.
pub fn witness_value(w: &Witness, rho: &DensityMatrix) -> Result<f64> {
    if w.dims() != rho.dims() {
        return Err(Error::DimensionMismatch(format!("witness dims {} vs state dims {}", w.dims(), rho.dims())));
    }
    let t = if w.ordering() == rho.ordering() {
        w.matrix().trace_product(rho.matrix())
    } else {
        w.matrix().trace_product(rho.reorder(w.ordering()).matrix())
    };
    if t.im.abs() > IMAG_TOL * w.matrix().max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: t.im.abs() });
    }
    Ok(t.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{random_hermitian, random_unitary, unitary_with_columns};
    use crate::states::{maximally_entangled, random_separable, random_state};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn dims(h: usize, k: usize) -> BipartiteDims {
        BipartiteDims::new(h, k).unwrap()
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn basis(d: usize, k: usize) -> Vec<Complex64> {
        (0..d).map(|i| if i == k { ONE } else { ZERO }).collect()
    }

    fn random_psd(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let g = crate::numkit::random_ginibre(d, d, rng);
        g.matmul(&g.adjoint())
    }

    #[test]
    fn phi_rank4_examples() {
        let out = phi_rank4(&real(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap();
        assert_eq!(out, real(&[&[0.0, 0.0], &[0.0, 1.0]]));
        assert_eq!(phi_rank4(&ComplexMatrix::identity(2)).unwrap(), ComplexMatrix::identity(2));
        assert!(phi_rank4(&ComplexMatrix::identity(1)).is_err());
    }

    #[test]
    fn rank4_two_qubit_matrix() {
        let w = rank4_witness(dims(2, 2), BasisOrdering::HMajor).unwrap();
        let expected =
            real(&[&[0.0, 0.0, 0.0, -1.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[-1.0, 0.0, 0.0, 0.0]]);
        assert_eq!(w.matrix(), &expected);
        let spec = hermitian_eigenvalues(w.matrix()).unwrap();
        assert_abs_diff_eq!(spec.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(spec.values[2], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(spec.values[3], -1.0, epsilon = 1e-14);
        assert!(rank4_witness(BipartiteDims::new(1, 3).unwrap(), BasisOrdering::HMajor).is_err());
    }

    #[test]
    fn rank4_is_twice_choi_of_phi_rank4() {
        for d in [dims(2, 2), dims(3, 2), dims(3, 4)] {
            for ord in [BasisOrdering::HMajor, BasisOrdering::KMajor] {
                let w = rank4_witness(d, ord).unwrap();
                let rho = maximally_entangled(2, d).unwrap().reorder(ord);
                // (Φ⊗I) applied blockwise to ρ₊, via the Choi matrix scaled back down
                let choi = choi_matrix(phi_rank4, 2, d, ord).unwrap();
                assert_eq!(&choi, w.matrix());
                // ρ₊ restricted to its block equals choi(identity)/2
                let id_choi = choi_matrix(|a| Ok(a.clone()), 2, d, ord).unwrap();
                assert!(id_choi.scale_re(0.5).max_abs_diff(rho.matrix()) < 1e-15);
            }
        }
    }

    #[test]
    fn rank4_on_maximally_entangled_is_minus_one() {
        let w = rank4_witness(dims(2, 2), BasisOrdering::HMajor).unwrap();
        let rho = maximally_entangled(2, dims(2, 2)).unwrap();
        assert_abs_diff_eq!(witness_value(&w, &rho).unwrap(), -1.0, epsilon = 4.0 * f64::EPSILON);
        let wk = w.reorder(BasisOrdering::KMajor);
        assert_abs_diff_eq!(witness_value(&wk, &rho).unwrap(), -1.0, epsilon = 4.0 * f64::EPSILON);
    }

    #[test]
    fn identity_map_choi_is_not_a_witness() {
        let err = choi_witness(|a| Ok(a.clone()), 2, dims(2, 2), BasisOrdering::HMajor).unwrap_err();
        assert!(matches!(err, Error::NotAWitness(_)), "{err}");
    }

    #[test]
    fn non_hermiticity_preserving_map_rejected() {
        let err =
            choi_witness(|a| Ok(a.transpose().scale(Complex64::new(0.0, 1.0))), 2, dims(2, 2), BasisOrdering::HMajor)
                .unwrap_err();
        assert!(err.to_string().contains("Hermitian"), "{err}");
    }

    #[test]
    fn phi_kappa_n2_is_phi_rank4() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let a = random_hermitian(3, &mut rng);
            let lhs = phi_kappa(&a, 2, &perm(&[2, 1])).unwrap();
            assert!(lhs.max_abs_diff(&phi_rank4(&a).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn phi_kappa_matches_sum_of_conjugations() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = crate::numkit::random_ginibre(4, 4, &mut rng);
        let kappa = perm(&[2, 3, 1]);
        let n = 3;
        let unit = |i: usize, j: usize| {
            let mut e = ComplexMatrix::zeros(4, 4);
            e[(i, j)] = ONE;
            e
        };
        let mut expected = ComplexMatrix::zeros(4, 4);
        let mut p = ComplexMatrix::zeros(4, 4);
        for i in 0..n {
            let e = unit(i, i);
            expected = expected.add(&e.matmul(&a).matmul(&e.adjoint()).scale_re(n as f64 - 1.0));
            let f = unit(i, kappa.at0(i));
            expected = expected.add(&f.matmul(&a).matmul(&f.adjoint()));
            p = p.add(&e);
        }
        expected = expected.sub(&p.matmul(&a).matmul(&p.adjoint()));
        assert!(phi_kappa(&a, n, &kappa).unwrap().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn phi_kappa_ps_reduces_to_phi_kappa() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = crate::numkit::random_ginibre(3, 3, &mut rng);
        let spec = WitnessSpec::kappa_only(3, perm(&[3, 1, 2]), dims(3, 3)).unwrap();
        let lhs = phi_kappa_ps(&a, &spec).unwrap();
        assert!(lhs.max_abs_diff(&phi_kappa(&a, 3, &spec.kappa).unwrap()) < 1e-15);
    }

    #[test]
    fn phi_kappa_ps_on_e11() {
        let spec = WitnessSpec::kappa_only(3, perm(&[2, 3, 1]), dims(3, 3)).unwrap();
        let mut e = ComplexMatrix::zeros(3, 3);
        e[(0, 0)] = ONE;
        let out = phi_kappa_ps(&e, &spec).unwrap();
        assert_eq!(out, ComplexMatrix::diag(&[1.0, 0.0, 1.0]));
    }

    #[test]
    fn phi_kappa_ps_matches_conjugation_form_exhaustively() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = crate::numkit::random_ginibre(4, 4, &mut rng);
        for kappa in Permutation::all(3).filter(|k| !k.is_identity()) {
            for pi in Permutation::all(3) {
                for sigma in Permutation::all(3) {
                    let spec = WitnessSpec::new(3, kappa.clone(), pi.clone(), sigma, dims(4, 3)).unwrap();
                    let direct = phi_kappa_ps(&a, &spec).unwrap();
                    let conj = phi_kappa_conjugation(&a, &spec).unwrap();
                    assert!(direct.max_abs_diff(&conj) < 1e-13, "{spec:?}");
                }
            }
        }
    }

    #[test]
    fn maps_preserve_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = WitnessSpec::new(3, perm(&[2, 3, 1]), perm(&[3, 1, 2]), perm(&[1, 3, 2]), dims(4, 4)).unwrap();
        for _ in 0..200 {
            let a = random_psd(4, &mut rng);
            assert!(hermitian_eigenvalues(&phi_kappa(&a, 3, &spec.kappa).unwrap()).unwrap().min() > -1e-9);
            assert!(hermitian_eigenvalues(&phi_kappa_ps(&a, &spec).unwrap()).unwrap().min() > -1e-9);
            assert!(hermitian_eigenvalues(&phi_rank4(&a).unwrap()).unwrap().min() > -1e-9);
        }
    }

    #[test]
    fn kps_with_n2_is_rank4() {
        let spec = WitnessSpec::kappa_only(2, perm(&[2, 1]), dims(2, 2)).unwrap();
        let w = witness_kps(&spec, BasisOrdering::HMajor).unwrap();
        assert_eq!(w.matrix(), rank4_witness(dims(2, 2), BasisOrdering::HMajor).unwrap().matrix());
    }

    #[test]
    fn kps_rejects_identity_kappa() {
        let err = WitnessSpec::kappa_only(3, Permutation::identity(3), dims(3, 3)).unwrap_err();
        assert!(err.to_string().contains("kappa must not be identity"));
        let err = WitnessSpec::kappa_only(4, perm(&[2, 1, 3, 4]), dims(3, 4)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn kps_on_maximally_entangled_counts_fixed_points() {
        // Tr(W ρ₊) = ((n−2)n + fix(κ) − n(n−1)) / n
        for kappa in Permutation::all(3).filter(|k| !k.is_identity()) {
            let spec = WitnessSpec::kappa_only(3, kappa.clone(), dims(3, 3)).unwrap();
            let w = witness_kps(&spec, BasisOrdering::HMajor).unwrap();
            let rho = maximally_entangled(3, dims(3, 3)).unwrap();
            let expected = (3.0 + kappa.fixed_points() as f64 - 6.0) / 3.0;
            assert_abs_diff_eq!(witness_value(&w, &rho).unwrap(), expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn kps_equals_choi_of_phi_kappa_ps() {
        let spec = WitnessSpec::new(3, perm(&[2, 3, 1]), perm(&[2, 1, 3]), perm(&[3, 2, 1]), dims(3, 4)).unwrap();
        for ord in [BasisOrdering::HMajor, BasisOrdering::KMajor] {
            let w = witness_kps(&spec, ord).unwrap();
            let c = choi_witness(|a| phi_kappa_ps(a, &spec), 3, spec.dims, ord).unwrap();
            assert!(w.matrix().max_abs_diff(c.matrix()) < 1e-12);
        }
    }

    #[test]
    fn permutation_conjugation_reproduces_kps() {
        let d = dims(4, 3);
        let kappa = perm(&[3, 1, 2]);
        let base = witness_kps(&WitnessSpec::kappa_only(3, kappa.clone(), d).unwrap(), BasisOrdering::HMajor).unwrap();
        for pi in Permutation::all(3) {
            for sigma in Permutation::all(3) {
                let spec = WitnessSpec::new(3, kappa.clone(), pi.clone(), sigma.clone(), d).unwrap();
                let u = sigma.matrix(4).unwrap();
                let v = pi.matrix(3).unwrap();
                let conj = conjugate_witness(&base, &u, &v).unwrap();
                let direct = witness_kps(&spec, BasisOrdering::HMajor).unwrap();
                assert!(conj.matrix().max_abs_diff(direct.matrix()) < 1e-14);
            }
        }
    }

    #[test]
    fn conjugation_preserves_spectrum_and_rejects_non_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let w = rank4_witness(dims(3, 2), BasisOrdering::KMajor).unwrap();
        let same = conjugate_witness(&w, &ComplexMatrix::identity(3), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(same.matrix(), w.matrix());
        let u = random_unitary(3, &mut rng);
        let v = random_unitary(2, &mut rng);
        let c = conjugate_witness(&w, &u, &v).unwrap();
        let a = hermitian_eigenvalues(w.matrix()).unwrap();
        let b = hermitian_eigenvalues(c.matrix()).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
        let bad = ComplexMatrix::identity(3).scale_re(1.1);
        assert!(matches!(conjugate_witness(&w, &bad, &v), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn rotated_value_matches_conjugated_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = dims(3, 4);
        let w = rank4_witness(d, BasisOrdering::HMajor).unwrap();
        for seed in 0..10 {
            let rho = random_state(d, 3, seed).unwrap();
            let u = random_unitary(3, &mut rng);
            let v = random_unitary(4, &mut rng);
            let (x, z) = (u.col(0), u.col(1));
            let (y, ww) = (v.col(0), v.col(1));
            let val = rotated_rank4_value(&rho, &x, &z, &y, &ww).unwrap();
            let uu = unitary_with_columns(&[x.clone(), z.clone()], 3).unwrap();
            let vv = unitary_with_columns(&[y.clone(), ww.clone()], 4).unwrap();
            let full = witness_value(&conjugate_witness(&w, &uu, &vv).unwrap(), &rho).unwrap();
            assert_abs_diff_eq!(val, full, epsilon = 1e-10);
            let k = rho.reorder(BasisOrdering::KMajor);
            assert_abs_diff_eq!(rotated_rank4_value(&k, &x, &z, &y, &ww).unwrap(), val, epsilon = 1e-12);
        }
    }

    #[test]
    fn rotated_value_examples() {
        let d = dims(2, 2);
        let rho = maximally_entangled(2, d).unwrap();
        let (e1, e2) = (basis(2, 0), basis(2, 1));
        assert_abs_diff_eq!(rotated_rank4_value(&rho, &e1, &e2, &e1, &e2).unwrap(), -1.0, epsilon = 1e-15);
        let err = rotated_rank4_value(&rho, &e1, &e1, &e1, &e2).unwrap_err();
        assert!(matches!(err, Error::NotOrthonormal(_)));
        // product state |1>|2'> is a witness eigenvector with value +1, never negative
        let prod = crate::states::product_density(&e1, &e2).unwrap();
        assert_abs_diff_eq!(rotated_rank4_value(&prod, &e1, &e2, &e1, &e2).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn witnesses_nonnegative_on_separable_samples() {
        let d = dims(3, 3);
        let ws = vec![
            rank4_witness(d, BasisOrdering::HMajor).unwrap(),
            witness_kps(&WitnessSpec::kappa_only(3, perm(&[2, 3, 1]), d).unwrap(), BasisOrdering::KMajor).unwrap(),
            witness_kps(
                &WitnessSpec::new(2, perm(&[2, 1]), perm(&[2, 1]), perm(&[1, 2]), d).unwrap(),
                BasisOrdering::HMajor,
            )
            .unwrap(),
        ];
        for seed in 0..300 {
            let rho = random_separable(d, 1 + (seed as usize % 5), seed).unwrap();
            for w in &ws {
                assert!(witness_value(w, &rho).unwrap() >= -1e-9);
            }
        }
    }

    #[test]
    fn witness_value_dimension_mismatch() {
        let w = rank4_witness(dims(2, 2), BasisOrdering::HMajor).unwrap();
        let rho = maximally_entangled(2, dims(2, 3)).unwrap();
        assert!(matches!(witness_value(&w, &rho), Err(Error::DimensionMismatch(_))));
    }
}
