//! Finitely banded block operators on a truncated index window.
//!
//! A `BandedOperator` stores m×m blocks at integer (row, col) positions
//! inside [-N, N] and represents the finite section of an operator on
//! the two-sided sequence space. Truncation introduces edge defects, so
//! identities between operators are asserted on interior indices only;
//! callers pass a margin and compare blocks with max(|i|, |j|) ≤ N - margin.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::weights::WeightSequence;

/// Blockwise sparse operator with all block indices inside [-window, window].
#[derive(Clone, Debug)]
pub struct BandedOperator {
    dim: usize,
    window: i64,
    blocks: BTreeMap<(i64, i64), CMatrix>,
}

impl BandedOperator {
    pub fn new(dim: usize, window: i64) -> Self {
        assert!(window >= 0, "window must be non-negative");
        Self {
            dim,
            window,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize, window: i64) -> Self {
        let mut op = Self::new(dim, window);
        for i in -window..=window {
            op.blocks.insert((i, i), CMatrix::identity(dim));
        }
        op
    }

    /// Diagonal operator with block `f(i)` at (i, i).
    pub fn diagonal_operator(
        dim: usize,
        window: i64,
        mut block_at: impl FnMut(i64) -> CMatrix,
    ) -> Result<Self> {
        let mut op = Self::new(dim, window);
        for i in -window..=window {
            op.set_block(i, i, block_at(i))?;
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Stores a block; exact-zero blocks clear the slot so the occupied
    /// band set stays in sync with the numerically non-zero blocks.
    pub fn set_block(&mut self, row: i64, col: i64, block: CMatrix) -> Result<()> {
        if row.abs() > self.window || col.abs() > self.window {
            return Err(Error::BlockOutsideWindow {
                row,
                col,
                window: self.window,
            });
        }
        if block.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "BandedOperator::set_block",
                expected: self.dim,
                got: block.dim(),
            });
        }
        if block.frobenius_norm() > 0.0 {
            self.blocks.insert((row, col), block);
        } else {
            self.blocks.remove(&(row, col));
        }
        Ok(())
    }

    /// Adds into the slot (missing slots start at zero).
    pub fn add_to_block(&mut self, row: i64, col: i64, block: CMatrix) -> Result<()> {
        let combined = match self.blocks.get(&(row, col)) {
            Some(existing) => existing.add(&block),
            None => block,
        };
        self.set_block(row, col, combined)
    }

    pub fn block(&self, row: i64, col: i64) -> Option<&CMatrix> {
        self.blocks.get(&(row, col))
    }

    pub fn block_or_zero(&self, row: i64, col: i64) -> CMatrix {
        self.blocks
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.dim))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(i64, i64), &CMatrix)> {
        self.blocks.iter()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Occupied diagonal offsets d = row - col.
    pub fn band(&self) -> BTreeSet<i64> {
        self.blocks.keys().map(|&(i, j)| i - j).collect()
    }

    /// Offsets whose strongest block exceeds `tol` times the strongest
    /// block overall.
    pub fn diagonal_support(&self, tol: f64) -> BTreeSet<i64> {
        let mut per_offset: BTreeMap<i64, f64> = BTreeMap::new();
        let mut overall = 0.0_f64;
        for (&(i, j), block) in &self.blocks {
            let norm = block.frobenius_norm();
            let entry = per_offset.entry(i - j).or_insert(0.0);
            *entry = entry.max(norm);
            overall = overall.max(norm);
        }
        per_offset
            .into_iter()
            .filter(|&(_, norm)| norm > tol * overall)
            .map(|(offset, _)| offset)
            .collect()
    }

    /// (A*)_{i,j} = (A_{j,i})*.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::new(self.dim, self.window);
        for (&(i, j), block) in &self.blocks {
            out.blocks.insert((j, i), block.adjoint());
        }
        out
    }

    /// Truncated product: inner index restricted to the shared window.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                context: "BandedOperator::mul",
                expected: self.dim,
                got: other.dim,
            });
        }
        assert_eq!(self.window, other.window, "window mismatch in product");
        let mut by_row: BTreeMap<i64, Vec<(i64, &CMatrix)>> = BTreeMap::new();
        for (&(k, j), block) in &other.blocks {
            by_row.entry(k).or_default().push((j, block));
        }
        let mut out = Self::new(self.dim, self.window);
        for (&(i, k), left) in &self.blocks {
            if let Some(rights) = by_row.get(&k) {
                for &(j, right) in rights {
                    out.add_to_block(i, j, left.mul(right))?;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                context: "BandedOperator::sub",
                expected: self.dim,
                got: other.dim,
            });
        }
        assert_eq!(self.window, other.window, "window mismatch in difference");
        let mut out = self.clone();
        for (&(i, j), block) in &other.blocks {
            let updated = out.block_or_zero(i, j).sub(block);
            out.set_block(i, j, updated)?;
        }
        Ok(out)
    }

    pub fn max_block_frobenius(&self) -> f64 {
        self.blocks
            .values()
            .map(|b| b.frobenius_norm())
            .fold(0.0, f64::max)
    }

    pub fn max_block_spectral(&self) -> f64 {
        self.blocks
            .values()
            .map(|b| b.spectral_norm())
            .fold(0.0, f64::max)
    }

    /// Dense (2N+1)m × (2N+1)m matrix of the truncation.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let m = self.dim;
        let side = (2 * self.window + 1) as usize * m;
        let mut dense = DMatrix::zeros(side, side);
        for (&(i, j), block) in &self.blocks {
            let r0 = ((i + self.window) as usize) * m;
            let c0 = ((j + self.window) as usize) * m;
            for r in 0..m {
                for c in 0..m {
                    dense[(r0 + r, c0 + c)] = block.entry(r, c);
                }
            }
        }
        dense
    }
}

/// Extracts block (i, j) from a dense truncation produced by `to_dense`.
pub fn dense_block(dense: &DMatrix<Complex64>, dim: usize, window: i64, i: i64, j: i64) -> CMatrix {
    let r0 = ((i + window) as usize) * dim;
    let c0 = ((j + window) as usize) * dim;
    let mut entries = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            entries.push(dense[(r0 + r, c0 + c)]);
        }
    }
    CMatrix::from_rows(dim, &entries).expect("dense blocks are finite")
}

/// Finite section of the weighted shift: block (i, i-1) = S_i for
/// -N+1 ≤ i ≤ N, nothing else.
pub fn truncate_shift(seq: &WeightSequence, window: i64) -> BandedOperator {
    let mut op = BandedOperator::new(seq.dim(), window);
    for i in (-window + 1)..=window {
        op.set_block(i, i - 1, seq.weight_at(i))
            .expect("shift blocks are inside the window");
    }
    op
}

/// Finite section of the signed shift power:
/// k ≥ 1 gives the k-th power (blocks on offset k), k = 0 the identity,
/// k ≤ -1 the (-k)-th adjoint power (blocks on offset k).
pub fn shift_power_signed(seq: &WeightSequence, k: i64, window: i64) -> Result<BandedOperator> {
    if k.abs() > 2 * window {
        return Err(Error::WindowTooSmall {
            window,
            context: format!("signed power {k} exceeds 2N = {}", 2 * window),
        });
    }
    let mut op = BandedOperator::new(seq.dim(), window);
    if k == 0 {
        return Ok(BandedOperator::identity(seq.dim(), window));
    }
    if k >= 1 {
        let n = k as u32;
        for j in -window..=(window - k) {
            op.set_block(j + k, j, seq.forward_product(j, n))?;
        }
    } else {
        let n = (-k) as u32;
        for row in -window..=(window + k) {
            let col = row + i64::from(n);
            op.set_block(row, col, seq.backward_adjoint_product(col, n))?;
        }
    }
    Ok(op)
}

/// Largest Frobenius distance between blocks of `a` and `b` over the
/// interior box max(|i|, |j|) ≤ window - margin.
pub fn max_interior_block_diff(a: &BandedOperator, b: &BandedOperator, margin: i64) -> f64 {
    assert_eq!(a.window(), b.window(), "window mismatch");
    let bound = a.window() - margin;
    let mut positions: BTreeSet<(i64, i64)> = BTreeSet::new();
    for (&pos, _) in a.blocks() {
        positions.insert(pos);
    }
    for (&pos, _) in b.blocks() {
        positions.insert(pos);
    }
    let mut worst = 0.0_f64;
    for (i, j) in positions {
        if i.abs() <= bound && j.abs() <= bound {
            worst = worst.max(a.block_or_zero(i, j).fro_distance(&b.block_or_zero(i, j)));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn scalar_seq(x: f64) -> WeightSequence {
        WeightSequence::periodic(vec![CMatrix::from_real_rows(1, &[x]).unwrap()]).unwrap()
    }

    #[test]
    fn truncate_identity_weights() {
        let seq = WeightSequence::all_identity(2);
        let op = truncate_shift(&seq, 2);
        assert_eq!(op.band().into_iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(op.block_count(), 4);
        for i in -1..=2 {
            assert!(
                op.block(i, i - 1)
                    .unwrap()
                    .fro_distance(&CMatrix::identity(2))
                    < 1e-15
            );
        }
    }

    #[test]
    fn truncate_scalar_shift_small_window() {
        let op = truncate_shift(&scalar_seq(2.0), 1);
        assert_eq!(op.block_count(), 2);
        assert!((op.block(0, -1).unwrap().entry(0, 0).re - 2.0).abs() < 1e-15);
        assert!((op.block(1, 0).unwrap().entry(0, 0).re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adjoint_moves_band_and_conjugates() {
        let seq = WeightSequence::windowed(
            0,
            vec![
                CMatrix::from_rows(1, &[Complex64::new(0.0, 2.0)]).unwrap(),
                CMatrix::from_rows(1, &[Complex64::new(1.0, -1.0)]).unwrap(),
            ],
        )
        .unwrap();
        let op = truncate_shift(&seq, 3);
        let adj = op.adjoint();
        assert_eq!(adj.band().into_iter().collect::<Vec<_>>(), vec![-1]);
        // dense oracle: adjoint of the dense truncation
        let dense_adj = op.to_dense().adjoint();
        for j in -3..=2 {
            let block = adj.block_or_zero(j, j + 1);
            let oracle = dense_block(&dense_adj, 1, 3, j, j + 1);
            assert!(block.fro_distance(&oracle) < 1e-15);
        }
        // double adjoint is the original, exactly
        assert!(max_interior_block_diff(&adj.adjoint(), &op, 0) == 0.0);
    }

    #[test]
    fn signed_power_zero_is_identity() {
        let op = shift_power_signed(&scalar_seq(3.0), 0, 4).unwrap();
        assert!(max_interior_block_diff(&op, &BandedOperator::identity(1, 4), 0) < 1e-15);
    }

    #[test]
    fn signed_power_identity_weights_offset_three() {
        let seq = WeightSequence::all_identity(1);
        let op = shift_power_signed(&seq, 3, 4).unwrap();
        assert_eq!(op.band().into_iter().collect::<Vec<_>>(), vec![3]);
        for j in -4..=1 {
            assert!((op.block(j + 3, j).unwrap().entry(0, 0).re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn signed_power_interior_matches_dense_power() {
        // random-ish invertible 2x2 weights on a window, k = ±3 against the
        // dense matrix-power oracle
        let weights: Vec<CMatrix> = (0..9)
            .map(|t| {
                let x = 0.6 + 0.15 * t as f64;
                CMatrix::from_rows(
                    2,
                    &[
                        Complex64::new(x, 0.2),
                        Complex64::new(0.3, -x),
                        Complex64::new(-0.1, x),
                        Complex64::new(1.0 + x, 0.1),
                    ],
                )
                .unwrap()
            })
            .collect();
        let seq = WeightSequence::windowed(-4, weights).unwrap();
        let window = 8;
        let truncated = truncate_shift(&seq, window);
        let dense = truncated.to_dense();
        let cube = &dense * &dense * &dense;
        let fwd = shift_power_signed(&seq, 3, window).unwrap();
        let bound = window - 3;
        for j in -bound..=(bound - 3) {
            let oracle = dense_block(&cube, 2, window, j + 3, j);
            assert!(fwd.block_or_zero(j + 3, j).fro_distance(&oracle) < 1e-10);
        }
        let cube_adj = cube.adjoint();
        let bwd = shift_power_signed(&seq, -3, window).unwrap();
        for row in -bound..=(bound - 3) {
            let oracle = dense_block(&cube_adj, 2, window, row, row + 3);
            assert!(bwd.block_or_zero(row, row + 3).fro_distance(&oracle) < 1e-10);
        }
    }

    #[test]
    fn signed_power_rejects_oversized_exponent() {
        let err = shift_power_signed(&scalar_seq(2.0), 9, 4);
        assert!(matches!(err, Err(Error::WindowTooSmall { .. })));
    }
}
