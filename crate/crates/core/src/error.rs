use thiserror::Error;

use crate::states::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |a - a^H| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parameter outside its domain: {0}")]
    Domain(String),

    #[error("invalid density matrix: {}", format_violations(.0))]
    InvalidState(Vec<Violation>),

    #[error("matrix is not unitary (max |u^H u - I| = {0:.3e})")]
    NotUnitary(f64),

    #[error("vectors are not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error("not an entanglement witness: {0}")]
    NotAWitness(String),

    #[error("assignment problem has no feasible permutation")]
    Infeasible,

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    /// Index sets meeting the sum condition whose per-block residues are not permutations.
    #[error("index sums equal n(n^2+1)/2 but residues are not permutations: {0}")]
    SumOnlyIndexSet(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
