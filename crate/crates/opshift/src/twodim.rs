//! Constructive two-diagonal equivalence on ℂ².
//!
//! For positive commuting 2×2 weights in which every weight has two
//! distinct eigenvalues, unitary equivalence of the shifts is always
//! witnessed by a unitary with at most two non-zero diagonals. The
//! construction runs in three steps: extract the common orthonormal
//! eigenbasis and per-index eigenvalue sequences of each side, search
//! for a branch bijection σ and row offsets τ aligning the eigenvalue
//! sequences (λ^S_{k,j} = λ^T_{τ(j)+k, σ(j)}), and assemble the zeroth
//! column whose row τ(j) maps the source eigenvector v_j to the target
//! eigenvector w_{σ(j)}. The column then goes through the general
//! verifier and column builder.
//!
//! The offsets are searched over a caller-supplied bounded range; a miss
//! inside the range is inconclusive, not a disproof of equivalence.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::banded::BandedOperator;
use crate::cmatrix::CMatrix;
use crate::equivalence::{build_unitary, verify_u0, ColumnIsometry, EquivalenceReport};
use crate::error::{Error, Result};
use crate::weights::WeightSequence;

/// Default relative eigenvalue gap below which branches are inseparable.
pub const DELTA_GAP: f64 = 1e-6;

/// Common eigenbasis of a windowed family of 2×2 weights together with
/// the per-index eigenvalue sequences of both branches.
#[derive(Clone, Debug)]
pub struct EigenData {
    basis: CMatrix,
    lo: i64,
    eigenvalues: Vec<[f64; 2]>,
}

impl EigenData {
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn basis_column(&self, branch: usize) -> Vec<Complex64> {
        self.basis.column(branch)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.eigenvalues.len() as i64 - 1
    }

    /// λ_{k,branch}, or None outside the stored window.
    pub fn eigenvalue(&self, k: i64, branch: usize) -> Option<f64> {
        let offset = k - self.lo;
        if offset < 0 || offset as usize >= self.eigenvalues.len() {
            None
        } else {
            Some(self.eigenvalues[offset as usize][branch])
        }
    }
}

/// Branch bijection σ and row offsets τ, both indexed by source branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaTau {
    pub sigma: [usize; 2],
    pub tau: [i64; 2],
}

fn phase_fixed(mut column: Vec<Complex64>) -> Vec<Complex64> {
    let mut best = 0usize;
    for (i, z) in column.iter().enumerate() {
        if z.norm() > column[best].norm() {
            best = i;
        }
    }
    let anchor = column[best];
    if anchor.norm() > 0.0 {
        let phase = anchor.conj() / anchor.norm();
        for z in &mut column {
            *z *= phase;
        }
    }
    column
}

/// Simultaneous orthonormal eigenbasis of pairwise commuting positive
/// 2×2 matrices, each with two distinct eigenvalues.
///
/// The basis is extracted from the weight with the widest relative gap
/// and cross-checked against every other weight. Branches are ordered by
/// the eigenvalue at the smallest window index and eigenvector phases
/// are fixed by making the largest-magnitude component real positive.
pub fn common_eigenbasis(weights: &[CMatrix], lo: i64, tol: f64) -> Result<EigenData> {
    if weights.is_empty() {
        return Err(Error::EmptyDescription);
    }
    for (pos, w) in weights.iter().enumerate() {
        if w.dim() != 2 {
            return Err(Error::DimensionMismatch {
                context: "common_eigenbasis",
                expected: 2,
                got: w.dim(),
            });
        }
        if !w.is_positive_definite(tol) {
            return Err(Error::NotPositive {
                index: lo + pos as i64,
            });
        }
    }
    for (a, wa) in weights.iter().enumerate() {
        for (b, wb) in weights.iter().enumerate().skip(a + 1) {
            let commutator = wa.mul(wb).sub(&wb.mul(wa));
            let scale = (wa.spectral_norm() * wb.spectral_norm()).max(f64::MIN_POSITIVE);
            let defect = commutator.frobenius_norm() / scale;
            if defect > tol {
                return Err(Error::NotCommuting {
                    first: lo + a as i64,
                    second: lo + b as i64,
                    defect,
                });
            }
        }
    }

    let mut gaps = Vec::with_capacity(weights.len());
    for (pos, w) in weights.iter().enumerate() {
        let (values, _) = w.hermitian_eigen();
        let gap = (values[1] - values[0]).abs() / values[1].abs().max(f64::MIN_POSITIVE);
        if gap < DELTA_GAP {
            return Err(Error::DegenerateSpectrum {
                index: lo + pos as i64,
            });
        }
        gaps.push(gap);
    }
    let widest = gaps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite gaps"))
        .map(|(i, _)| i)
        .expect("nonempty weights");
    let (_, vectors) = weights[widest].hermitian_eigen();
    let mut columns = [vectors.column(0), vectors.column(1)];

    // all weights must be diagonal in this basis
    let anchor = widest;
    for (pos, w) in weights.iter().enumerate() {
        let cross: Complex64 = {
            let wv: Vec<Complex64> = (0..2)
                .map(|r| w.entry(r, 0) * columns[1][0] + w.entry(r, 1) * columns[1][1])
                .collect();
            columns[0][0].conj() * wv[0] + columns[0][1].conj() * wv[1]
        };
        if cross.norm() > tol * w.spectral_norm().max(f64::MIN_POSITIVE) {
            return Err(Error::NotCommuting {
                first: lo + anchor as i64,
                second: lo + pos as i64,
                defect: cross.norm() / w.spectral_norm().max(f64::MIN_POSITIVE),
            });
        }
    }

    let eigenvalue_of = |w: &CMatrix, v: &[Complex64]| -> f64 {
        let wv: Vec<Complex64> = (0..2)
            .map(|r| w.entry(r, 0) * v[0] + w.entry(r, 1) * v[1])
            .collect();
        (v[0].conj() * wv[0] + v[1].conj() * wv[1]).re
    };

    // order branches by the eigenvalue at the smallest window index
    let first = &weights[0];
    if eigenvalue_of(first, &columns[0]) > eigenvalue_of(first, &columns[1]) {
        columns.swap(0, 1);
    }
    let columns = [
        phase_fixed(columns[0].clone()),
        phase_fixed(columns[1].clone()),
    ];

    let eigenvalues: Vec<[f64; 2]> = weights
        .iter()
        .map(|w| [eigenvalue_of(w, &columns[0]), eigenvalue_of(w, &columns[1])])
        .collect();
    Ok(EigenData {
        basis: CMatrix::from_columns(&columns),
        lo,
        eigenvalues,
    })
}

/// Eigen data for the weights of `seq` over an explicit index window.
pub fn eigen_data_for(seq: &WeightSequence, lo: i64, hi: i64, tol: f64) -> Result<EigenData> {
    let weights: Vec<CMatrix> = (lo..=hi).map(|i| seq.weight_at(i)).collect();
    common_eigenbasis(&weights, lo, tol)
}

fn branch_matches(
    sdata: &EigenData,
    tdata: &EigenData,
    sigma_j: usize,
    tau_j: i64,
    branch: usize,
    tol: f64,
) -> bool {
    let mut overlap = 0usize;
    for k in sdata.lo()..=sdata.hi() {
        let Some(source) = sdata.eigenvalue(k, branch) else {
            continue;
        };
        let Some(target) = tdata.eigenvalue(tau_j + k, sigma_j) else {
            continue;
        };
        overlap += 1;
        if (source - target).abs() > tol * source.abs().max(target.abs()).max(1.0) {
            return false;
        }
    }
    overlap >= 1
}

/// Searches σ ∈ {id, swap} and τ(1), τ(2) ∈ [-tau_range, tau_range] for
/// an alignment λ^S_{k,j} = λ^T_{τ(j)+k, σ(j)} over the overlapping
/// window. Candidates are tried with σ = id first, then by growing
/// |τ(1)| + |τ(2)| and lexicographic (τ(1), τ(2)); the first hit wins.
pub fn match_sigma_tau(
    sdata: &EigenData,
    tdata: &EigenData,
    tau_range: i64,
    tol: f64,
) -> Result<SigmaTau> {
    assert!(tau_range >= 0, "tau_range must be non-negative");
    let mut taus: Vec<(i64, i64)> = Vec::new();
    for t0 in -tau_range..=tau_range {
        for t1 in -tau_range..=tau_range {
            taus.push((t0, t1));
        }
    }
    taus.sort_by_key(|&(t0, t1)| (t0.abs() + t1.abs(), t0, t1));
    for sigma in [[0usize, 1], [1, 0]] {
        for &(t0, t1) in &taus {
            let tau = [t0, t1];
            if (0..2).all(|j| branch_matches(sdata, tdata, sigma[j], tau[j], j, tol)) {
                return Ok(SigmaTau { sigma, tau });
            }
        }
    }
    Err(Error::NoMatch { tau_range })
}

/// Builds the two-diagonal unitary witnessed by a matched (σ, τ):
/// the zeroth column carries the rank-one maps v_j ↦ w_{σ(j)} at rows
/// τ(j) (merged into one unitary block when τ(1) = τ(2)), which is then
/// verified and expanded into columns [-col_range, col_range].
#[allow(clippy::too_many_arguments)]
pub fn construct_two_diagonal_unitary(
    s: &WeightSequence,
    t: &WeightSequence,
    st: &SigmaTau,
    sdata: &EigenData,
    tdata: &EigenData,
    window: i64,
    col_range: u32,
    tol: f64,
) -> Result<(BandedOperator, EquivalenceReport)> {
    let mut rows: BTreeMap<i64, CMatrix> = BTreeMap::new();
    for j in 0..2 {
        let v = sdata.basis_column(j);
        let w = tdata.basis_column(st.sigma[j]);
        let outer = CMatrix::outer(&w, &v);
        rows.entry(st.tau[j])
            .and_modify(|block| *block = block.add(&outer))
            .or_insert(outer);
    }
    let column = ColumnIsometry::new(2, rows.into_iter().collect())?;
    let report = verify_u0(&column, s, t, col_range, window, tol)?;
    if !report.pass {
        return Err(Error::VerificationFailed {
            report: Box::new(report),
        });
    }
    let built = build_unitary(&column, s, t, window, col_range, tol)?;
    assert!(
        built.band().len() <= 2,
        "two support rows can occupy at most two diagonals"
    );
    Ok((built, report))
}
