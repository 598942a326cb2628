//! Entanglement criteria and their certificates.
//!
//! * PPT: minimum eigenvalue of the partial transpose.
//! * CCNR: trace norm of the realigned matrix.
//! * Entry criterion: a linear combination of n² + n density-matrix entries
//!   indexed by permutations (π, σ) with π(i) ≠ σ(i); a negative value is the
//!   expectation of a witness W_κ^{π,σ} and so certifies entanglement.
//! * Distillability: a negative rotated rank-4 witness value.

pub mod assignment;

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{self, hermitian_eigen, hermitian_eigenvalues, random_ginibre, trace_norm, ComplexMatrix, ZERO};
use crate::perm::Permutation;
use crate::states::{
    partial_transpose_first, partial_transpose_matrix, realignment, schmidt_decomposition, BasisOrdering,
    BipartiteDims, DensityMatrix, PureState, SCHMIDT_TOL,
};
use crate::witnesses::{rotated_rank4_value, WitnessSpec};

pub use assignment::{assignment_min_forbidden, Assignment};

/// A criterion value below −FIRE_TOL certifies entanglement.
pub const FIRE_TOL: f64 = 1e-10;
pub const PPT_TOL: f64 = 1e-9;
pub const CCNR_TOL: f64 = 1e-9;
/// Values within this distance of the minimum are ties.
pub const TIE_TOL: f64 = 1e-12;
pub const EXACT_MAX_N: usize = 8;
const IMAG_TOL: f64 = 1e-10;

pub fn ppt_check(rho: &DensityMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(&partial_transpose_first(rho))?.min())
}

pub fn ccnr_check(rho: &DensityMatrix) -> Result<f64> {
    trace_norm(&realignment(rho))
}

/// Global k_major indices and residue permutations behind an entry value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryCertificate {
    pub n: usize,
    pub k_indices: Vec<usize>,
    pub h_indices: Vec<usize>,
    pub pi1: Permutation,
    pub sigma1: Permutation,
    pub value: f64,
    pub witness_spec: WitnessSpec,
}

/// Checks the index-set constraints and returns the residue permutations (π₁, σ₁).
pub fn residue_permutations(k: &[usize], h: &[usize], n: usize) -> Result<(Permutation, Permutation)> {
    if n < 2 {
        return Err(Error::InvalidIndexSet(format!("n = {n} must be at least 2")));
    }
    if k.len() != n || h.len() != n {
        return Err(Error::InvalidIndexSet(format!("k and h need {n} entries, got {} and {}", k.len(), h.len())));
    }
    for (name, set) in [("k", k), ("h", h)] {
        for (slot, &v) in set.iter().enumerate() {
            let (lo, hi) = (slot * n + 1, (slot + 1) * n);
            if v < lo || v > hi {
                return Err(Error::InvalidIndexSet(format!("{name}_{} = {v} outside its block {lo}..={hi}", slot + 1)));
            }
        }
    }
    if let Some(slot) = (0..n).find(|&i| k[i] == h[i]) {
        return Err(Error::InvalidIndexSet(format!("k_{0} = h_{0} = {1}", slot + 1, k[slot])));
    }
    let residues = |set: &[usize]| set.iter().enumerate().map(|(i, &v)| v - i * n).collect::<Vec<_>>();
    let target = n * (n * n + 1) / 2;
    let mut out = Vec::with_capacity(2);
    for (name, set) in [("k", k), ("h", h)] {
        match Permutation::new(residues(set)) {
            Ok(p) => out.push(p),
            Err(_) => {
                let msg = format!("{name} = {set:?} has residues {:?}", residues(set));
                let sums_ok = k.iter().sum::<usize>() == target && h.iter().sum::<usize>() == target;
                return Err(if sums_ok { Error::SumOnlyIndexSet(msg) } else { Error::InvalidIndexSet(msg) });
            }
        }
    }
    let sigma1 = out.pop().expect("two entries");
    let pi1 = out.pop().expect("two entries");
    Ok((pi1, sigma1))
}

fn require_square_n(rho: &DensityMatrix, n: usize) -> Result<()> {
    let d = rho.dims();
    if d.dim_h != n || d.dim_k != n {
        return Err(Error::DimensionMismatch(format!("index sets of length {n} need a {n}x{n} state, got {d}")));
    }
    Ok(())
}

/// (n−2)Σ α_{k_i k_i} + Σ α_{h_i h_i} − Σ_{i≠j} α_{k_i k_j}, with α the entries of ρ
/// in k_major order and 1-based global indices.
pub fn entry_value_indices(rho: &DensityMatrix, k: &[usize], h: &[usize]) -> Result<f64> {
    let n = k.len();
    residue_permutations(k, h, n)?;
    require_square_n(rho, n)?;
    let d = rho.dims();
    // k_major global g = (j-1)·n + i
    let alpha = |g1: usize, g2: usize| {
        let (i1, j1) = ((g1 - 1) % d.dim_h, (g1 - 1) / d.dim_h);
        let (i2, j2) = ((g2 - 1) % d.dim_h, (g2 - 1) / d.dim_h);
        rho.at(i1, j1, i2, j2)
    };
    let mut diag = ZERO;
    for i in 0..n {
        diag += alpha(k[i], k[i]) * (n as f64 - 2.0) + alpha(h[i], h[i]);
    }
    let mut off = ZERO;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off += alpha(k[i], k[j]);
            }
        }
    }
    if off.im.abs() > IMAG_TOL {
        return Err(Error::NotHermitian { deviation: off.im.abs() });
    }
    Ok(diag.re - off.re)
}

fn check_perm_pair(rho: &DensityMatrix, n: usize, pi: &Permutation, sigma: &Permutation) -> Result<()> {
    let d = rho.dims();
    if n < 2 || n > d.min_dim() {
        return Err(Error::Domain(format!("n = {n} must satisfy 2 <= n <= min(dims) = {}", d.min_dim())));
    }
    if pi.n() != n || sigma.n() != n {
        return Err(Error::InvalidPermutation(format!("pi and sigma must act on {n} letters")));
    }
    if let Some(i) = (1..=n).find(|&i| pi.apply(i) == sigma.apply(i)) {
        return Err(Error::InvalidPermutation(format!("pi({i}) = sigma({i}) = {}", pi.apply(i))));
    }
    Ok(())
}

/// (n−2)Σ<π(i),i'|ρ|π(i),i'> + Σ<σ(i),i'|ρ|σ(i),i'> − Σ_{i≠j}<π(i),i'|ρ|π(j),j'>.
pub fn entry_value_perms(rho: &DensityMatrix, n: usize, pi: &Permutation, sigma: &Permutation) -> Result<f64> {
    check_perm_pair(rho, n, pi, sigma)?;
    let mut diag = ZERO;
    let mut off = ZERO;
    for i in 0..n {
        diag += rho.at(pi.at0(i), i, pi.at0(i), i) * (n as f64 - 2.0) + rho.at(sigma.at0(i), i, sigma.at0(i), i);
        for j in 0..n {
            if i != j {
                off += rho.at(pi.at0(i), i, pi.at0(j), j);
            }
        }
    }
    if off.im.abs() > IMAG_TOL {
        return Err(Error::NotHermitian { deviation: off.im.abs() });
    }
    Ok(diag.re - off.re)
}

/// Residue permutations of (k, h) and the witness parameters κ = σ₁⁻¹π₁, π = id, σ = π₁.
pub fn indices_to_perms(k: &[usize], h: &[usize], n: usize) -> Result<(Permutation, Permutation, WitnessSpec)> {
    let (pi1, sigma1) = residue_permutations(k, h, n)?;
    let dims = BipartiteDims::square(n)?;
    let spec = witness_spec_for(&pi1, &sigma1, dims)?;
    Ok((pi1, sigma1, spec))
}

fn witness_spec_for(pi1: &Permutation, sigma1: &Permutation, dims: BipartiteDims) -> Result<WitnessSpec> {
    let n = pi1.n();
    let kappa = sigma1.inverse().compose(pi1)?;
    WitnessSpec::new(n, kappa, Permutation::identity(n), pi1.clone(), dims)
}

/// k_i = (i−1)·dim_h + π(i), h_i = (i−1)·dim_h + σ(i): the k_major positions of
/// |π(i), i'> and |σ(i), i'>.
pub fn perms_to_indices(pi: &Permutation, sigma: &Permutation, dims: BipartiteDims) -> (Vec<usize>, Vec<usize>) {
    let k = (1..=pi.n()).map(|i| (i - 1) * dims.dim_h + pi.apply(i)).collect();
    let h = (1..=sigma.n()).map(|i| (i - 1) * dims.dim_h + sigma.apply(i)).collect();
    (k, h)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    #[default]
    Exact,
    Heuristic,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "heuristic" => Ok(Self::Heuristic),
            other => Err(Error::Parse(format!("unknown search mode {other:?} (expected exact or heuristic)"))),
        }
    }
}

impl std::fmt::Display for SearchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Heuristic => "heuristic",
        })
    }
}

/// Minimizing pair of the entry criterion at a fixed n.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryOptimum {
    pub n: usize,
    pub pi: Permutation,
    pub sigma: Permutation,
    pub value: f64,
}

/// Entry-criterion data split into the π part and the σ-cost table.
struct EntryProblem {
    n: usize,
    /// diag[s * n + i] = <s,i'|ρ|s,i'>
    diag: Vec<f64>,
    /// re_off[(s, i), (t, j)] = Re <s,i'|ρ|t,j'>, indexed [(s*n+i)*n*n + t*n+j]
    re_off: Vec<f64>,
}

impl EntryProblem {
    fn new(rho: &DensityMatrix, n: usize) -> Result<Self> {
        let d = rho.dims();
        if n < 2 || n > d.min_dim() {
            return Err(Error::Domain(format!("n = {n} must satisfy 2 <= n <= min(dims) = {}", d.min_dim())));
        }
        let mut diag = vec![0.0; n * n];
        let mut re_off = vec![0.0; n.pow(4)];
        for s in 0..n {
            for i in 0..n {
                diag[s * n + i] = rho.at(s, i, s, i).re;
                for t in 0..n {
                    for j in 0..n {
                        re_off[(s * n + i) * n * n + t * n + j] = rho.at(s, i, t, j).re;
                    }
                }
            }
        }
        Ok(Self { n, diag, re_off })
    }

    /// (n−2)Σ diag[π(i), i] − Σ_{i≠j} Re <π(i),i'|ρ|π(j),j'>.
    fn pi_part(&self, pi: &Permutation) -> f64 {
        let n = self.n;
        let mut v = 0.0;
        for i in 0..n {
            v += (n as f64 - 2.0) * self.diag[pi.at0(i) * n + i];
            for j in 0..n {
                if i != j {
                    v -= self.re_off[(pi.at0(i) * n + i) * n * n + pi.at0(j) * n + j];
                }
            }
        }
        v
    }

    fn sigma_assignment(&self, pi: &Permutation) -> Assignment {
        Assignment::avoiding(self.n, self.diag.clone(), pi)
    }

    /// Best value over σ for this π.
    fn value(&self, pi: &Permutation) -> f64 {
        let (_, b) = self.sigma_assignment(pi).solve().expect("n >= 2 always admits a derangement");
        self.pi_part(pi) + b
    }

    /// Lexicographically smallest σ completing `pi` within `threshold` of total value.
    fn lex_sigma(&self, pi: &Permutation, threshold: f64) -> Result<(Permutation, f64)> {
        let (image, b) = self.sigma_assignment(pi).lex_smallest_within(threshold - self.pi_part(pi))?;
        Ok((Permutation::from_zero_based(&image), self.pi_part(pi) + b))
    }

    fn finish(&self, values: &[(Permutation, f64)]) -> Result<EntryOptimum> {
        let best = values.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
        let threshold = best + TIE_TOL;
        let pi = values
            .iter()
            .filter(|(_, v)| *v <= threshold)
            .map(|(p, _)| p)
            .min()
            .expect("non-empty candidate list")
            .clone();
        let (sigma, value) = self.lex_sigma(&pi, threshold)?;
        Ok(EntryOptimum { n: self.n, pi, sigma, value })
    }
}

/// Minimum of [`entry_value_perms`] over all valid (π, σ) at this n.
///
/// Exact mode enumerates every π and solves the σ part as an assignment
/// problem; heuristic mode runs seeded 2-swap local search on π.
pub fn entry_minimum(rho: &DensityMatrix, n: usize, mode: SearchMode, seed: u64) -> Result<EntryOptimum> {
    entry_minimum_with(rho, n, mode, seed, DEFAULT_ENTRY_RESTARTS)
}

pub const DEFAULT_ENTRY_RESTARTS: usize = 16;

pub fn entry_minimum_with(
    rho: &DensityMatrix,
    n: usize,
    mode: SearchMode,
    seed: u64,
    restarts: usize,
) -> Result<EntryOptimum> {
    let problem = EntryProblem::new(rho, n)?;
    match mode {
        SearchMode::Exact => {
            if n > EXACT_MAX_N {
                return Err(Error::Domain(format!("exact search supports n <= {EXACT_MAX_N}, got {n}")));
            }
            let perms = Permutation::all_vec(n);
            let values: Vec<(Permutation, f64)> = perms
                .into_par_iter()
                .map(|p| {
                    let v = problem.value(&p);
                    (p, v)
                })
                .collect();
            problem.finish(&values)
        }
        SearchMode::Heuristic => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let starts: Vec<Permutation> = (0..restarts.max(1))
                .map(|r| {
                    if r == 0 {
                        Permutation::identity(n)
                    } else {
                        let mut img: Vec<usize> = (1..=n).collect();
                        img.shuffle(&mut rng);
                        Permutation::new(img).expect("shuffled identity")
                    }
                })
                .collect();
            let locals: Vec<(Permutation, f64)> = starts.into_par_iter().map(|p| local_search(&problem, p)).collect();
            problem.finish(&locals)
        }
    }
}

/// Best-improvement 2-swap descent; ties keep the current π.
fn local_search(problem: &EntryProblem, start: Permutation) -> (Permutation, f64) {
    let n = problem.n;
    let mut cur = start;
    let mut cur_v = problem.value(&cur);
    loop {
        let mut best: Option<(Permutation, f64)> = None;
        for a in 0..n {
            for b in a + 1..n {
                let mut img = cur.image().to_vec();
                img.swap(a, b);
                let cand = Permutation::new(img).expect("swap of a permutation");
                let v = problem.value(&cand);
                if v < cur_v - TIE_TOL && best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                    best = Some((cand, v));
                }
            }
        }
        match best {
            Some((p, v)) => {
                cur = p;
                cur_v = v;
            }
            None => return (cur, cur_v),
        }
    }
}

/// Full double enumeration over (π, σ) with the same tie rule; the reference
/// for [`entry_minimum`].
pub fn entry_minimum_brute_force(rho: &DensityMatrix, n: usize) -> Result<EntryOptimum> {
    EntryProblem::new(rho, n)?;
    let perms = Permutation::all_vec(n);
    let mut all = Vec::new();
    for pi in &perms {
        for sigma in &perms {
            if (0..n).any(|i| pi.at0(i) == sigma.at0(i)) {
                continue;
            }
            all.push((pi.clone(), sigma.clone(), entry_value_perms(rho, n, pi, sigma)?));
        }
    }
    let best = all.iter().map(|t| t.2).fold(f64::INFINITY, f64::min);
    let (pi, sigma, value) = all
        .into_iter()
        .filter(|t| t.2 <= best + TIE_TOL)
        .min_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)))
        .expect("n >= 2 has valid pairs");
    Ok(EntryOptimum { n, pi, sigma, value })
}

/// Certificate for an (π, σ) pair, with indices and witness parameters.
pub fn entry_certificate(rho: &DensityMatrix, opt: &EntryOptimum) -> Result<EntryCertificate> {
    let (k_indices, h_indices) = perms_to_indices(&opt.pi, &opt.sigma, rho.dims());
    let witness_spec = witness_spec_for(&opt.pi, &opt.sigma, rho.dims())?;
    Ok(EntryCertificate {
        n: opt.n,
        k_indices,
        h_indices,
        pi1: opt.pi.clone(),
        sigma1: opt.sigma.clone(),
        value: opt.value,
        witness_spec,
    })
}

/// Searches the entry criterion at n; returns a certificate when the minimum is below −1e-10.
pub fn entry_search(rho: &DensityMatrix, n: usize, mode: SearchMode, seed: u64) -> Result<Option<EntryCertificate>> {
    let opt = entry_minimum(rho, n, mode, seed)?;
    if opt.value < -FIRE_TOL {
        Ok(Some(entry_certificate(rho, &opt)?))
    } else {
        Ok(None)
    }
}

/// Pure-state verdict: entangled iff the second Schmidt coefficient exceeds
/// 1e-10; the value is the optimal rotated rank-4 witness value −2δ₁δ₂.
pub fn pure_check(psi: &PureState) -> Result<(bool, f64)> {
    let sd = schmidt_decomposition(psi)?;
    let d1 = sd.coefficients.first().copied().unwrap_or(0.0);
    let d2 = sd.coefficients.get(1).copied().unwrap_or(0.0);
    if d2 > SCHMIDT_TOL {
        Ok((true, -2.0 * d1 * d2))
    } else {
        Ok((false, 0.0))
    }
}

/// Orthonormal pairs (x, z) in H and (y, w) in K with their rotated rank-4 value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistillCertificate {
    pub x: Vec<Complex64>,
    pub z: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub w: Vec<Complex64>,
    pub value: f64,
}

/// The rotation built from the top two Schmidt pairs of a pure state.
pub fn pure_certificate(psi: &PureState) -> Result<DistillCertificate> {
    psi.dims().require_bipartite()?;
    let sd = schmidt_decomposition(psi)?;
    let (x, z) = (sd.h_vectors[0].clone(), sd.h_vectors[1].clone());
    let (y, w) = (sd.k_vectors[0].clone(), sd.k_vectors[1].clone());
    let value = rotated_rank4_value(&psi.density(), &x, &z, &y, &w)?;
    Ok(DistillCertificate { x, z, y, w, value })
}

/// Nearest (in the inner-product sense) coefficient matrix with exactly two
/// singular values equal to 1/√2.
fn project_two_level(y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = numkit::svd(y)?;
    let (r, c) = (y.rows(), y.cols());
    let mut m = ComplexMatrix::zeros(r, c);
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..2 {
        for a in 0..r {
            for b in 0..c {
                m[(a, b)] += s.u[(a, k)] * s.v[(b, k)].conj() * amp;
            }
        }
    }
    Ok(m)
}

fn quad(x: &ComplexMatrix, m: &ComplexMatrix) -> f64 {
    x.sandwich(m.as_slice(), m.as_slice()).re
}

/// Reads (x, z, y, w) back out of χ = (x̄⊗w − z̄⊗y)/√2.
fn certificate_from_chi(rho: &DensityMatrix, m: &ComplexMatrix) -> Result<DistillCertificate> {
    let s = numkit::svd(m)?;
    let conj = |v: Vec<Complex64>| v.into_iter().map(|c| c.conj()).collect::<Vec<_>>();
    let x = conj(s.u.col(0));
    let z: Vec<Complex64> = s.u.col(1).into_iter().map(|c| -c.conj()).collect();
    let w = conj(s.v.col(0));
    let y = conj(s.v.col(1));
    let value = rotated_rank4_value(rho, &x, &z, &y, &w)?;
    Ok(DistillCertificate { x, z, y, w, value })
}

const MAGIC: [[(f64, f64); 4]; 4] = {
    const R: f64 = std::f64::consts::FRAC_1_SQRT_2;
    [
        [(R, 0.0), (0.0, 0.0), (0.0, 0.0), (R, 0.0)],
        [(0.0, R), (0.0, 0.0), (0.0, 0.0), (0.0, -R)],
        [(0.0, 0.0), (0.0, R), (0.0, R), (0.0, 0.0)],
        [(0.0, 0.0), (R, 0.0), (-R, 0.0), (0.0, 0.0)],
    ]
};

/// Exact minimum of the rotated rank-4 value on a 2⊗2 state.
///
/// Maximally entangled two-qubit vectors are real combinations of the magic
/// basis, so the minimum is twice the smallest eigenvalue of Re(M† ρ^T1 M).
/// Returns the value and the minimizing χ as a 2x2 coefficient matrix.
pub fn distill_optimum_2x2(rho: &DensityMatrix) -> Result<(f64, ComplexMatrix)> {
    let d = rho.dims();
    if d.dim_h != 2 || d.dim_k != 2 {
        return Err(Error::DimensionMismatch(format!("expected a 2x2 state, got {d}")));
    }
    let h = rho.to_h_major();
    let x = partial_transpose_matrix(h.matrix(), d, BasisOrdering::HMajor);
    let mut mm = ComplexMatrix::zeros(4, 4);
    for (c, col) in MAGIC.iter().enumerate() {
        for (r, &(re, im)) in col.iter().enumerate() {
            mm[(r, c)] = Complex64::new(re, im);
        }
    }
    let g = mm.adjoint().matmul(&x).matmul(&mm);
    let mut real = ComplexMatrix::zeros(4, 4);
    for r in 0..4 {
        for c in 0..4 {
            real[(r, c)] = Complex64::new(g[(r, c)].re, 0.0);
        }
    }
    let eig = hermitian_eigen(&real)?;
    let last = eig.values.len() - 1;
    let coeffs: Vec<Complex64> = (0..4).map(|k| Complex64::new(eig.vectors[(k, last)].re, 0.0)).collect();
    let chi = mm.matvec(&coeffs);
    let norm = chi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let chi: Vec<Complex64> = chi.into_iter().map(|c| c / norm).collect();
    Ok((2.0 * eig.values[last], ComplexMatrix::from_vec(2, 2, chi)?))
}

const DISTILL_MAX_ITERS: usize = 500;
const DISTILL_STEP_TOL: f64 = 1e-14;

/// Seeded search for a negative rotated rank-4 value.
///
/// Works on χ = (x̄⊗w − z̄⊗y)/√2, where the rotated value equals 2<χ|ρ^T1|χ>.
/// Each restart runs projected ascent of <χ|(cI − ρ^T1)|χ> over coefficient
/// matrices with two singular values 1/√2, which decreases the value
/// monotonically. Restart 0 starts from the most negative eigenvector of
/// ρ^T1; on 2⊗2 states the exact optimum is tried as well. Any returned
/// certificate is re-evaluated from (x, z, y, w).
pub fn distill_search(rho: &DensityMatrix, restarts: usize, seed: u64) -> Result<Option<DistillCertificate>> {
    let d = rho.dims();
    d.require_bipartite()?;
    let h = rho.to_h_major();
    let x = partial_transpose_matrix(h.matrix(), d, BasisOrdering::HMajor);
    let eig = hermitian_eigen(&x)?;
    let shift = eig.values[0].abs() + 1.0;
    let g = ComplexMatrix::identity(d.order()).scale_re(shift).sub(&x);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = Vec::new();
    if d.dim_h == 2 && d.dim_k == 2 {
        starts.push(distill_optimum_2x2(&h)?.1);
    }
    let last = eig.values.len() - 1;
    starts.push(ComplexMatrix::from_vec(d.dim_h, d.dim_k, eig.vectors.col(last))?);
    for _ in 1..restarts.max(1) {
        starts.push(random_ginibre(d.dim_h, d.dim_k, &mut rng));
    }

    let mut best: Option<DistillCertificate> = None;
    for start in starts {
        let mut m = project_two_level(&start)?;
        let mut val = quad(&x, &m);
        for _ in 0..DISTILL_MAX_ITERS {
            let gm = ComplexMatrix::from_vec(d.dim_h, d.dim_k, g.matvec(m.as_slice()))?;
            let next = project_two_level(&gm)?;
            let next_val = quad(&x, &next);
            if next_val > val - DISTILL_STEP_TOL {
                if next_val < val {
                    m = next;
                    val = next_val;
                }
                break;
            }
            m = next;
            val = next_val;
        }
        let cert = certificate_from_chi(&h, &m)?;
        if best.as_ref().is_none_or(|b| cert.value < b.value) {
            best = Some(cert);
        }
    }
    let mut best = best.expect("at least one start");
    // report in the caller's ordering; the value is ordering independent
    best.value = rotated_rank4_value(rho, &best.x, &best.z, &best.y, &best.w)?;
    Ok(if best.value < -FIRE_TOL { Some(best) } else { None })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectConfig {
    /// Largest n tried by the entry criterion.
    pub n_cap: usize,
    /// Exact search up to this n, heuristic above.
    pub exact_max: usize,
    pub seed: u64,
    /// Restarts of the distillability search.
    pub restarts: usize,
    /// Restarts of the heuristic entry search.
    pub entry_restarts: usize,
    pub run_distill: bool,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            n_cap: 6,
            exact_max: 6,
            seed: 0,
            restarts: 20,
            entry_restarts: DEFAULT_ENTRY_RESTARTS,
            run_distill: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Entangled,
    Undetected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryMinimum {
    pub n: usize,
    pub value: f64,
    pub mode: SearchMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub verdict: Verdict,
    pub ppt_min_eig: f64,
    pub ccnr_trace_norm: f64,
    pub entry_certificate: Option<EntryCertificate>,
    pub entry_minima: Vec<EntryMinimum>,
    pub distill_certificate: Option<DistillCertificate>,
    pub fired: Vec<String>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl DetectionReport {
    /// Smallest entry-criterion value over the n's tried.
    pub fn best_entry_value(&self) -> Option<f64> {
        self.entry_minima.iter().map(|e| e.value).reduce(f64::min)
    }
}

fn timed<T>(timings: &mut BTreeMap<String, f64>, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let t = Instant::now();
    let out = f()?;
    timings.insert(name.to_string(), t.elapsed().as_secs_f64() * 1e3);
    Ok(out)
}

/// Runs every criterion. "undetected" never asserts separability.
pub fn detect(rho: &DensityMatrix, config: &DetectConfig) -> Result<DetectionReport> {
    let violations = rho.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidState(violations));
    }
    let mut timings = BTreeMap::new();
    let mut fired = Vec::new();

    let ppt = timed(&mut timings, "ppt", || ppt_check(rho))?;
    if ppt < -PPT_TOL {
        fired.push("ppt".to_string());
    }
    let ccnr = timed(&mut timings, "ccnr", || ccnr_check(rho))?;
    if ccnr > 1.0 + CCNR_TOL {
        fired.push("ccnr".to_string());
    }

    let top = rho.dims().min_dim().min(config.n_cap);
    let (entry_minima, entry_best) = timed(&mut timings, "entry_criterion", || {
        let mut minima = Vec::new();
        let mut best: Option<EntryOptimum> = None;
        for n in 2..=top {
            let mode = if n <= config.exact_max.min(EXACT_MAX_N) { SearchMode::Exact } else { SearchMode::Heuristic };
            let opt = entry_minimum_with(rho, n, mode, config.seed, config.entry_restarts)?;
            minima.push(EntryMinimum { n, value: opt.value, mode });
            if best.as_ref().is_none_or(|b| opt.value < b.value - TIE_TOL) {
                best = Some(opt);
            }
        }
        Ok((minima, best))
    })?;
    let entry_certificate = match entry_best {
        Some(opt) if opt.value < -FIRE_TOL => Some(entry_certificate(rho, &opt)?),
        _ => None,
    };
    if entry_certificate.is_some() {
        fired.push("entry_criterion".to_string());
    }

    let distill_certificate = if config.run_distill {
        timed(&mut timings, "distill", || distill_search(rho, config.restarts, config.seed))?
    } else {
        None
    };
    if distill_certificate.is_some() {
        fired.push("distill".to_string());
    }

    let verdict = if fired.is_empty() { Verdict::Undetected } else { Verdict::Entangled };
    Ok(DetectionReport {
        verdict,
        ppt_min_eig: ppt,
        ccnr_trace_norm: ccnr,
        entry_certificate,
        entry_minima,
        distill_certificate,
        fired,
        timings_ms: timings,
    })
}
