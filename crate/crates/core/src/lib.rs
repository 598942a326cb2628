//! Entanglement witnesses and entry-based entanglement detection for
//! finite-dimensional bipartite states.

pub mod detection;
pub mod error;
pub mod io;
pub mod numkit;
pub mod perm;
pub mod selfcheck;
pub mod states;
pub mod witnesses;

pub use detection::{detect, DetectConfig, DetectionReport, Verdict};
pub use error::{Error, Result};
pub use numkit::ComplexMatrix;
pub use perm::Permutation;
pub use states::{BasisOrdering, BipartiteDims, DensityMatrix, PureState};
pub use witnesses::{Witness, WitnessKind, WitnessSpec};
