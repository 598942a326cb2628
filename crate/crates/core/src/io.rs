//! JSON formats for states, witnesses and detection reports.
//!
//! Complex numbers are `[re, im]` pairs. Matrices are row-major lists of such
//! pairs over the full matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detection::{DetectConfig, DetectionReport};
use crate::error::{Error, Result};
use crate::numkit::ComplexMatrix;
use crate::perm::Permutation;
use crate::states::{BasisOrdering, BipartiteDims, DensityMatrix};
use crate::witnesses::{rank4_witness, witness_kps, Witness, WitnessKind, WitnessSpec};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn to_pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(order: usize, entries: &[[f64; 2]]) -> Result<ComplexMatrix> {
    if entries.len() != order * order {
        return Err(Error::Parse(format!(
            "entries: expected {} pairs for a {order}x{order} matrix, got {}",
            order * order,
            entries.len()
        )));
    }
    let data = entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    ComplexMatrix::from_vec(order, order, data).map_err(|e| Error::Parse(format!("entries: {e}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim_h: usize,
    pub dim_k: usize,
    pub ordering: BasisOrdering,
    pub entries: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let d = rho.dims();
        Self { dim_h: d.dim_h, dim_k: d.dim_k, ordering: rho.ordering(), entries: to_pairs(rho.matrix()) }
    }

    /// Shape checks only; state axioms are left to the caller.
    pub fn into_unchecked(self) -> Result<DensityMatrix> {
        let dims = BipartiteDims::new(self.dim_h, self.dim_k).map_err(|e| Error::Parse(format!("dim_h/dim_k: {e}")))?;
        let m = from_pairs(dims.order(), &self.entries)?;
        DensityMatrix::new_unchecked(dims, self.ordering, m)
    }

    pub fn into_state(self) -> Result<DensityMatrix> {
        let rho = self.into_unchecked()?;
        let v = rho.validate();
        if v.is_empty() {
            Ok(rho)
        } else {
            Err(Error::InvalidState(v))
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses and validates a state file.
pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    parse_json::<StateFile>(text)?.into_state()
}

pub fn emit_state(rho: &DensityMatrix) -> String {
    let mut s = serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixBlock {
    pub ordering: BasisOrdering,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessType {
    Rank4,
    Kps,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    #[serde(rename = "type")]
    pub kind: WitnessType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Permutation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Permutation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Permutation>,
    pub dim_h: usize,
    pub dim_k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixBlock>,
}

impl WitnessFile {
    pub fn from_witness(w: &Witness, include_matrix: bool) -> Result<Self> {
        let d = w.dims();
        let matrix = include_matrix.then(|| MatrixBlock { ordering: w.ordering(), entries: to_pairs(w.matrix()) });
        match w.kind() {
            WitnessKind::Rank4 => Ok(Self {
                kind: WitnessType::Rank4,
                n: None,
                kappa: None,
                pi: None,
                sigma: None,
                dim_h: d.dim_h,
                dim_k: d.dim_k,
                matrix,
            }),
            WitnessKind::Kps(spec) => Ok(Self {
                kind: WitnessType::Kps,
                n: Some(spec.n),
                kappa: Some(spec.kappa.clone()),
                pi: Some(spec.pi.clone()),
                sigma: Some(spec.sigma.clone()),
                dim_h: d.dim_h,
                dim_k: d.dim_k,
                matrix,
            }),
            other => Err(Error::Parse(format!("{} witnesses have no file representation", other.name()))),
        }
    }

    /// Rebuilds the witness; a stored matrix must agree with the rebuilt one.
    pub fn into_witness(self) -> Result<Witness> {
        let dims = BipartiteDims::new(self.dim_h, self.dim_k)?;
        let ordering = self.matrix.as_ref().map_or(BasisOrdering::HMajor, |m| m.ordering);
        let w = match self.kind {
            WitnessType::Rank4 => rank4_witness(dims, ordering)?,
            WitnessType::Kps => {
                let n = self.n.ok_or_else(|| Error::Parse("kps witness needs field `n`".into()))?;
                let kappa = self.kappa.ok_or_else(|| Error::Parse("kps witness needs field `kappa`".into()))?;
                let pi = self.pi.unwrap_or_else(|| Permutation::identity(n));
                let sigma = self.sigma.unwrap_or_else(|| Permutation::identity(n));
                witness_kps(&WitnessSpec::new(n, kappa, pi, sigma, dims)?, ordering)?
            }
        };
        if let Some(block) = &self.matrix {
            let stored = from_pairs(dims.order(), &block.entries)?;
            let diff = stored.max_abs_diff(w.matrix());
            if diff > 1e-12 {
                return Err(Error::Parse(format!("matrix: differs from the specified witness by {diff:.3e}")));
            }
        }
        Ok(w)
    }
}

pub fn emit_witness(w: &Witness, include_matrix: bool) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&WitnessFile::from_witness(w, include_matrix)?)
        .map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_witness(text: &str) -> Result<Witness> {
    parse_json::<WitnessFile>(text)?.into_witness()
}

/// A detection report with the tool version and configuration that produced it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool_version: String,
    pub config: DetectConfig,
    #[serde(flatten)]
    pub report: DetectionReport,
}

pub fn emit_report(report: &DetectionReport, config: &DetectConfig) -> String {
    let file = ReportFile { tool_version: TOOL_VERSION.to_string(), config: config.clone(), report: report.clone() };
    let mut s = serde_json::to_string_pretty(&file).expect("plain data serializes");
    s.push('\n');
    s
}
