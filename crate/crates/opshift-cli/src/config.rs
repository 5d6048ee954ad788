//! JSON problem configuration: schema types, parsing, and validation.
//!
//! A configuration document carries the weight sequences, an optional
//! zeroth-column candidate, and numeric parameters:
//!
//! ```json
//! {
//!   "dim": 1,
//!   "S": { "kind": "periodic", "weights": [ [[[2.0, 0.0]]] ] },
//!   "T": { "kind": "windowed", "lo": -1, "weights": [ ... ] },
//!   "u0": { "support": [ { "row": 0, "block": [[[1.0, 0.0]]] } ] },
//!   "params": { "N": 8, "n_max": 3, "tol": 1e-8 }
//! }
//! ```
//!
//! Matrices are row-major nested arrays with complex entries written as
//! [re, im] pairs. Weights are validated at load time: every matrix must
//! be square of the declared dimension and every weight invertible.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use opshift::equivalence::ColumnIsometry;
use opshift::weights::WeightSequence;
use opshift::CMatrix;

use crate::CliError;

/// Row-major matrix with [re, im] entries.
pub type MatrixDesc = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub dim: usize,
    #[serde(rename = "S")]
    pub s: SeqDesc,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<SeqDesc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u0: Option<U0Desc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsDesc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SeqDesc {
    Windowed {
        lo: i64,
        #[serde(skip_serializing_if = "Option::is_none")]
        hi: Option<i64>,
        weights: Vec<MatrixDesc>,
    },
    Periodic {
        weights: Vec<MatrixDesc>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct U0Desc {
    pub support: Vec<RowBlockDesc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowBlockDesc {
    pub row: i64,
    pub block: MatrixDesc,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ParamsDesc {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_range: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_range: Option<i64>,
}

/// Resolved numeric parameters (config values with defaults filled in).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Params {
    #[serde(rename = "N")]
    pub n: i64,
    pub n_max: u32,
    pub margin: i64,
    pub tol: f64,
    pub tau_range: i64,
    pub p_range: i64,
}

impl Params {
    pub fn resolve(desc: Option<&ParamsDesc>) -> Self {
        let desc = desc.cloned().unwrap_or_default();
        let n_max = desc.n_max.unwrap_or(3);
        Params {
            n: desc.n.unwrap_or(8),
            n_max,
            margin: desc.margin.unwrap_or(i64::from(n_max)),
            tol: desc.tol.unwrap_or(1e-8),
            tau_range: desc.tau_range.unwrap_or(4),
            p_range: desc.p_range.unwrap_or(6),
        }
    }
}

/// Fully validated problem instance.
#[derive(Clone, Debug)]
pub struct ProblemConfig {
    pub dim: usize,
    pub s: WeightSequence,
    pub t: Option<WeightSequence>,
    pub u0: Option<ColumnIsometry>,
    pub params: Params,
}

fn matrix_from_desc(desc: &MatrixDesc, dim: usize, context: &str) -> Result<CMatrix, CliError> {
    if desc.len() != dim {
        return Err(CliError::invariant(format!(
            "{context}: expected {dim} rows, got {}",
            desc.len()
        )));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (r, row) in desc.iter().enumerate() {
        if row.len() != dim {
            return Err(CliError::invariant(format!(
                "{context}: row {r} has {} entries, expected {dim}",
                row.len()
            )));
        }
        for &[re, im] in row {
            entries.push(Complex64::new(re, im));
        }
    }
    CMatrix::from_rows(dim, &entries)
        .map_err(|err| CliError::invariant(format!("{context}: {err}")))
}

pub fn matrix_to_desc(matrix: &CMatrix) -> MatrixDesc {
    (0..matrix.dim())
        .map(|r| {
            (0..matrix.dim())
                .map(|c| {
                    let z = matrix.entry(r, c);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

fn sequence_from_desc(desc: &SeqDesc, dim: usize, name: &str) -> Result<WeightSequence, CliError> {
    match desc {
        SeqDesc::Windowed { lo, hi, weights } => {
            if let Some(hi) = hi {
                let expected = lo + weights.len() as i64 - 1;
                if *hi != expected {
                    return Err(CliError::invariant(format!(
                        "{name}: hi = {hi} does not match lo = {lo} plus {} weights",
                        weights.len()
                    )));
                }
            }
            let parsed = weights
                .iter()
                .enumerate()
                .map(|(i, w)| matrix_from_desc(w, dim, &format!("{name}.weights[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            WeightSequence::windowed(*lo, parsed)
                .map_err(|err| CliError::invariant(format!("{name}: {err}")))
        }
        SeqDesc::Periodic { weights } => {
            let parsed = weights
                .iter()
                .enumerate()
                .map(|(i, w)| matrix_from_desc(w, dim, &format!("{name}.weights[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            WeightSequence::periodic(parsed)
                .map_err(|err| CliError::invariant(format!("{name}: {err}")))
        }
    }
}

pub fn sequence_to_desc(seq: &WeightSequence) -> SeqDesc {
    match seq.kind() {
        opshift::SequenceKind::Windowed { lo, weights } => SeqDesc::Windowed {
            lo: *lo,
            hi: Some(lo + weights.len() as i64 - 1),
            weights: weights.iter().map(matrix_to_desc).collect(),
        },
        opshift::SequenceKind::Periodic { weights } => SeqDesc::Periodic {
            weights: weights.iter().map(matrix_to_desc).collect(),
        },
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ProblemConfig, CliError> {
    let doc: ConfigDoc =
        serde_json::from_str(text).map_err(|err| CliError::parse(format!("config: {err}")))?;
    if doc.dim == 0 {
        return Err(CliError::invariant("dim must be at least 1".to_string()));
    }
    let s = sequence_from_desc(&doc.s, doc.dim, "S")?;
    let t = doc
        .t
        .as_ref()
        .map(|desc| sequence_from_desc(desc, doc.dim, "T"))
        .transpose()?;
    let u0 = doc
        .u0
        .as_ref()
        .map(|desc| {
            let support = desc
                .support
                .iter()
                .enumerate()
                .map(|(i, rb)| {
                    matrix_from_desc(&rb.block, doc.dim, &format!("u0.support[{i}].block"))
                        .map(|block| (rb.row, block))
                })
                .collect::<Result<Vec<_>, _>>()?;
            ColumnIsometry::new(doc.dim, support)
                .map_err(|err| CliError::invariant(format!("u0: {err}")))
        })
        .transpose()?;
    Ok(ProblemConfig {
        dim: doc.dim,
        s,
        t,
        u0,
        params: Params::resolve(doc.params.as_ref()),
    })
}
