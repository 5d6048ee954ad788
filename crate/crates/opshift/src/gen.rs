//! Seeded fixture generators for randomized cross-checks.
//!
//! Two fabrication routes produce shift pairs whose intertwining unitary
//! is known in closed form, so round trips can compare against exact
//! expectations:
//!
//! * conjugation at an offset: T_i = C_{i-p} S_{i-p} C*_{i-p-1} for a
//!   sequence of unitaries C, intertwined by the diagonal-form unitary
//!   with blocks C_i on offset p;
//! * branch shifts: weights sharing an eigenbasis, with each eigenvalue
//!   branch shifted by its own offset and re-expressed in a second
//!   basis, intertwined by a unitary with one diagonal per distinct
//!   offset.
//!
//! Everything is driven by a caller-seeded ChaCha stream, so fixtures
//! are reproducible across runs and platforms.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::banded::BandedOperator;
use crate::cmatrix::{polar_decompose, CMatrix};
use crate::equivalence::ColumnIsometry;
use crate::error::Result;
use crate::weights::WeightSequence;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

pub fn random_matrix(rng: &mut impl Rng, dim: usize) -> CMatrix {
    let entries: Vec<Complex64> = (0..dim * dim).map(|_| gaussian_complex(rng)).collect();
    CMatrix::from_rows(dim, &entries).expect("gaussian entries are finite")
}

/// Haar-distributed unitary (polar factor of a Gaussian matrix).
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> CMatrix {
    loop {
        if let Ok(pair) = polar_decompose(&random_matrix(rng, dim)) {
            return pair.factor;
        }
    }
}

/// Random matrix kept away from singularity (condition number ≤ 100).
pub fn random_invertible(rng: &mut impl Rng, dim: usize) -> CMatrix {
    loop {
        let candidate = random_matrix(rng, dim);
        let sv = candidate.singular_values();
        if sv[dim - 1] > 1e-2 * sv[0] && sv[0] > 1e-2 {
            return candidate;
        }
    }
}

pub fn random_windowed(rng: &mut impl Rng, dim: usize, lo: i64, hi: i64) -> WeightSequence {
    let weights = (lo..=hi).map(|_| random_invertible(rng, dim)).collect();
    WeightSequence::windowed(lo, weights).expect("generated weights are invertible")
}

pub fn random_unitary_windowed(rng: &mut impl Rng, dim: usize, lo: i64, hi: i64) -> WeightSequence {
    let weights = (lo..=hi).map(|_| random_unitary(rng, dim)).collect();
    WeightSequence::windowed(lo, weights).expect("unitaries are invertible")
}

/// T_i = C_{i-offset} · S_{i-offset} · C*_{i-offset-1}: the target of the
/// diagonal-form conjugation whose intertwining unitary has blocks C_i
/// on offset `offset`. Both inputs must be windowed.
pub fn conjugated_shift(
    s: &WeightSequence,
    c: &WeightSequence,
    offset: i64,
) -> Result<WeightSequence> {
    let (s_lo, s_hi) = s
        .window_bounds()
        .expect("conjugated_shift needs windowed S");
    let (c_lo, c_hi) = c
        .window_bounds()
        .expect("conjugated_shift needs windowed C");
    let base_lo = s_lo.min(c_lo);
    let base_hi = s_hi.max(c_hi + 1);
    let weights = (base_lo..=base_hi)
        .map(|base| {
            c.weight_at(base)
                .mul(&s.weight_at(base))
                .mul(&c.weight_at(base - 1).adjoint())
        })
        .collect();
    WeightSequence::windowed(base_lo + offset, weights)
}

/// The diagonal-form unitary with blocks C_i at (i + offset, i).
pub fn diagonal_form_operator(c: &WeightSequence, offset: i64, window: i64) -> BandedOperator {
    let mut op = BandedOperator::new(c.dim(), window);
    for i in -window..=window {
        let row = i + offset;
        if row.abs() <= window {
            op.set_block(row, i, c.weight_at(i))
                .expect("blocks inside the window");
        }
    }
    op
}

/// A fabricated pair of shifts sharing shifted eigenvalue branches,
/// together with the closed-form intertwining data.
pub struct BranchShiftPair {
    pub s: WeightSequence,
    pub t: WeightSequence,
    /// Zeroth column of the closed-form intertwining unitary.
    pub column: ColumnIsometry,
    pub taus: Vec<i64>,
    pub sigma: Vec<usize>,
    pub source_basis: CMatrix,
    pub target_basis: CMatrix,
    pub lo: i64,
    pub hi: i64,
    /// `source_values[t][j]` = eigenvalue of S_{lo+t} on source branch j.
    pub source_values: Vec<Vec<f64>>,
    /// Stored window of T (edges carry partially padded branches).
    pub target_lo: i64,
    pub target_hi: i64,
    /// Sub-window of T on which every branch carries grid data.
    pub target_core_lo: i64,
    pub target_core_hi: i64,
}

impl BranchShiftPair {
    /// The full intertwining unitary on a given window: block
    /// Σ_j r_{σ(j)} q_j* at (i + τ_j, i).
    pub fn unitary(&self, window: i64) -> BandedOperator {
        let dim = self.s.dim();
        let mut op = BandedOperator::new(dim, window);
        for i in -window..=window {
            for (j, &tau) in self.taus.iter().enumerate() {
                let row = i + tau;
                if row.abs() <= window {
                    let w = self.target_basis.column(self.sigma[j]);
                    let v = self.source_basis.column(j);
                    op.add_to_block(row, i, CMatrix::outer(&w, &v))
                        .expect("blocks inside the window");
                }
            }
        }
        op
    }

    /// Eigenvalue of T_n on target branch c (identity padding gives 1).
    pub fn target_value(&self, n: i64, branch: usize) -> f64 {
        for (j, &tau) in self.taus.iter().enumerate() {
            if self.sigma[j] == branch {
                let k = n - tau;
                if k >= self.lo && k <= self.hi {
                    return self.source_values[(k - self.lo) as usize][j];
                }
                return 1.0;
            }
        }
        1.0
    }
}

/// Fabricates an m-branch pair: weights S_k = Q·diag(s_{k,·})·Q* on
/// [lo, hi], targets T_n = R·diag(t_{n,·})·R* with branch σ(j) of T
/// carrying the j-th source branch shifted by τ_j. Scalars are positive,
/// pairwise distinct, and bounded away from 0; with `positive = false`
/// they pick up random phases (weights stay normal and commuting).
pub fn branch_shift_pair(
    rng: &mut impl Rng,
    dim: usize,
    lo: i64,
    hi: i64,
    taus: &[i64],
    sigma: &[usize],
    positive: bool,
) -> BranchShiftPair {
    assert_eq!(taus.len(), dim, "one offset per branch");
    assert_eq!(sigma.len(), dim, "one target branch per source branch");
    let mut seen = vec![false; dim];
    for &target in sigma {
        assert!(!seen[target], "sigma must be a bijection");
        seen[target] = true;
    }
    let tau_max = taus.iter().copied().max().expect("nonempty taus");
    let tau_min = taus.iter().copied().min().expect("nonempty taus");
    assert!(
        hi - lo >= tau_max - tau_min + 2,
        "window too short for the requested branch shifts"
    );

    let steps = (hi - lo + 1) as usize;
    let count = steps * dim;
    let mut order: Vec<usize> = (0..count).collect();
    order.shuffle(rng);
    let spread = (count.max(2) - 1) as f64;
    let grid: Vec<f64> = order
        .iter()
        .map(|&p| 0.6 + 2.4 * p as f64 / spread)
        .collect();
    let source_values: Vec<Vec<f64>> = (0..steps)
        .map(|t| (0..dim).map(|j| grid[t * dim + j]).collect())
        .collect();
    let phases: Vec<Vec<Complex64>> = (0..steps)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    if positive {
                        Complex64::new(1.0, 0.0)
                    } else {
                        let theta = rng.random::<f64>() * std::f64::consts::TAU;
                        Complex64::new(theta.cos(), theta.sin())
                    }
                })
                .collect()
        })
        .collect();

    let q = random_unitary(rng, dim);
    let r = random_unitary(rng, dim);
    let conjugate = |basis: &CMatrix, diag: Vec<Complex64>| {
        basis
            .mul(&CMatrix::diagonal_complex(&diag))
            .mul(&basis.adjoint())
    };

    let s_weights: Vec<CMatrix> = (0..steps)
        .map(|t| {
            let diag: Vec<Complex64> = (0..dim)
                .map(|j| phases[t][j] * source_values[t][j])
                .collect();
            conjugate(&q, diag)
        })
        .collect();
    let s = WeightSequence::windowed(lo, s_weights).expect("scalars stay away from zero");

    // store T wherever any branch carries grid data; branches whose shifted
    // lookup falls outside the grid take the identity eigenvalue, which is
    // exactly what the identity padding of S feeds through the intertwining
    let target_lo = lo + tau_min;
    let target_hi = hi + tau_max;
    let t_weights: Vec<CMatrix> = (target_lo..=target_hi)
        .map(|n| {
            let mut diag = vec![Complex64::new(1.0, 0.0); dim];
            for (j, &tau) in taus.iter().enumerate() {
                let k = n - tau;
                if k >= lo && k <= hi {
                    let step = (k - lo) as usize;
                    diag[sigma[j]] = phases[step][j] * source_values[step][j];
                }
            }
            conjugate(&r, diag)
        })
        .collect();
    let t = WeightSequence::windowed(target_lo, t_weights).expect("scalars stay away from zero");

    let mut rows: std::collections::BTreeMap<i64, CMatrix> = std::collections::BTreeMap::new();
    for (j, &tau) in taus.iter().enumerate() {
        let w = r.column(sigma[j]);
        let v = q.column(j);
        let outer = CMatrix::outer(&w, &v);
        rows.entry(tau)
            .and_modify(|block| *block = block.add(&outer))
            .or_insert(outer);
    }
    let column = ColumnIsometry::new(dim, rows.into_iter().collect())
        .expect("distinct rows by construction");

    BranchShiftPair {
        s,
        t,
        column,
        taus: taus.to_vec(),
        sigma: sigma.to_vec(),
        source_basis: q,
        target_basis: r,
        lo,
        hi,
        source_values,
        target_lo,
        target_hi,
        target_core_lo: lo + tau_max,
        target_core_hi: hi + tau_min,
    }
}
