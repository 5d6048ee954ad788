//! Finite descriptions of bilateral weight sequences and their product formulas.
//!
//! A bilateral weighted shift maps (x_i) to (S_i x_{i-1}); its behaviour
//! is fully determined by the two-sided weight sequence (S_i). Two finite
//! descriptions are supported:
//!
//! * `Windowed` — weights stored on an index window [lo, hi] with
//!   identity padding outside;
//! * `Periodic` — weights repeat with period p, anchored so that index 0
//!   maps to the first stored weight.
//!
//! Both make the sequence uniformly bounded by construction. Every stored
//! weight must be invertible: the kernel conditions that single out the
//! admissible weights collapse to invertibility on ℂ^m.
//!
//! The product formulas implemented here are the matrix entries of shift
//! powers: the n-th power of the shift carries S_{j+n}···S_{j+1} at block
//! (j+n, j), the adjoint power carries S*_{i+1}···S*_{i+n} at (i, i+n),
//! and S*ⁿSⁿ is diagonal with blocks |S_{j+n}···S_{j+1}|².

use crate::cmatrix::{gram_sqrt, polar_decompose, CMatrix, EPS_INV};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum SequenceKind {
    /// Weights stored for lo ≤ i ≤ hi; identity outside.
    Windowed { lo: i64, weights: Vec<CMatrix> },
    /// weights[i mod p], anchored at index 0.
    Periodic { weights: Vec<CMatrix> },
}

/// Uniformly bounded two-sided sequence of invertible m×m weights.
#[derive(Clone, Debug)]
pub struct WeightSequence {
    dim: usize,
    kind: SequenceKind,
}

fn validate_weights(weights: &[CMatrix], index_of: impl Fn(usize) -> i64) -> Result<usize> {
    if weights.is_empty() {
        return Err(Error::EmptyDescription);
    }
    let dim = weights[0].dim();
    let mut extremes = Vec::with_capacity(weights.len());
    for w in weights {
        if w.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "weight description",
                expected: dim,
                got: w.dim(),
            });
        }
        let sv = w.singular_values();
        extremes.push((sv[0], *sv.last().expect("nonempty singular values")));
    }
    let global_max = extremes.iter().map(|e| e.0).fold(0.0_f64, f64::max);
    for (pos, &(_, min)) in extremes.iter().enumerate() {
        if global_max <= 0.0 || min <= EPS_INV * global_max {
            let ratio = if global_max > 0.0 {
                min / global_max
            } else {
                0.0
            };
            return Err(Error::WeightNotInvertible {
                index: index_of(pos),
                ratio,
                eps: EPS_INV,
            });
        }
    }
    Ok(dim)
}

impl WeightSequence {
    /// Weights for indices lo..=lo+len-1 with identity padding outside.
    pub fn windowed(lo: i64, weights: Vec<CMatrix>) -> Result<Self> {
        let dim = validate_weights(&weights, |pos| lo + pos as i64)?;
        Ok(Self {
            dim,
            kind: SequenceKind::Windowed { lo, weights },
        })
    }

    /// Periodic weights with period = weights.len(), anchor at index 0.
    pub fn periodic(weights: Vec<CMatrix>) -> Result<Self> {
        let dim = validate_weights(&weights, |pos| pos as i64)?;
        Ok(Self {
            dim,
            kind: SequenceKind::Periodic { weights },
        })
    }

    /// All-identity sequence (the unweighted shift).
    pub fn all_identity(dim: usize) -> Self {
        Self {
            dim,
            kind: SequenceKind::Periodic {
                weights: vec![CMatrix::identity(dim)],
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    /// Stored description window, if windowed.
    pub fn window_bounds(&self) -> Option<(i64, i64)> {
        match &self.kind {
            SequenceKind::Windowed { lo, weights } => Some((*lo, lo + weights.len() as i64 - 1)),
            SequenceKind::Periodic { .. } => None,
        }
    }

    pub fn period(&self) -> Option<usize> {
        match &self.kind {
            SequenceKind::Periodic { weights } => Some(weights.len()),
            SequenceKind::Windowed { .. } => None,
        }
    }

    /// Indices at which the description stores an explicit weight.
    pub fn description_indices(&self) -> Vec<i64> {
        match &self.kind {
            SequenceKind::Windowed { lo, weights } => {
                (0..weights.len() as i64).map(|k| lo + k).collect()
            }
            SequenceKind::Periodic { weights } => (0..weights.len() as i64).collect(),
        }
    }

    /// The weight S_i.
    pub fn weight_at(&self, index: i64) -> CMatrix {
        match &self.kind {
            SequenceKind::Windowed { lo, weights } => {
                let offset = index - lo;
                if offset >= 0 && (offset as usize) < weights.len() {
                    weights[offset as usize].clone()
                } else {
                    CMatrix::identity(self.dim)
                }
            }
            SequenceKind::Periodic { weights } => {
                let p = weights.len() as i64;
                weights[index.rem_euclid(p) as usize].clone()
            }
        }
    }

    /// sup over i of the spectral norm of S_i.
    pub fn sup_norm(&self) -> f64 {
        let description_max = match &self.kind {
            SequenceKind::Windowed { weights, .. } | SequenceKind::Periodic { weights } => weights
                .iter()
                .map(|w| w.spectral_norm())
                .fold(0.0_f64, f64::max),
        };
        match &self.kind {
            // identity padding contributes norm 1
            SequenceKind::Windowed { .. } => description_max.max(1.0),
            SequenceKind::Periodic { .. } => description_max,
        }
    }

    /// True when every weight is positive definite (identity padding included).
    pub fn all_positive(&self, tol: f64) -> bool {
        match &self.kind {
            SequenceKind::Windowed { weights, .. } | SequenceKind::Periodic { weights } => {
                weights.iter().all(|w| w.is_positive_definite(tol))
            }
        }
    }

    /// S_{j+n}···S_{j+1}, the block of the n-th shift power at (j+n, j).
    pub fn forward_product(&self, j: i64, n: u32) -> CMatrix {
        assert!(n >= 1, "forward_product needs n >= 1");
        let mut acc = self.weight_at(j + 1);
        for t in 2..=i64::from(n) {
            acc = self.weight_at(j + t).mul(&acc);
        }
        acc
    }

    /// S*_{j-n+1}···S*_j, the block of the n-th adjoint power at (j-n, j);
    /// equal to the adjoint of `forward_product(j - n, n)`.
    pub fn backward_adjoint_product(&self, j: i64, n: u32) -> CMatrix {
        assert!(n >= 1, "backward_adjoint_product needs n >= 1");
        self.forward_product(j - i64::from(n), n).adjoint()
    }

    /// |S_{j+n}···S_{j+1}|, the positive square root of the forward Gram block.
    pub fn modulus_product(&self, j: i64, n: u32) -> Result<CMatrix> {
        gram_sqrt(&self.forward_product(j, n))
    }

    /// |S*_{j-n+1}···S*_j|, the modulus of the adjoint product.
    pub fn adjoint_modulus_product(&self, j: i64, n: u32) -> Result<CMatrix> {
        gram_sqrt(&self.backward_adjoint_product(j, n))
    }

    /// Weightwise polar decomposition: returns (V-sequence, modulus-sequence)
    /// with V_i the unitary factor of S_i and |S_i| its modulus. The shift
    /// with the V weights composed with the diagonal of moduli reproduces
    /// the original shift.
    pub fn shift_polar(&self) -> Result<(WeightSequence, WeightSequence)> {
        let polar_all = |weights: &[CMatrix]| -> Result<(Vec<CMatrix>, Vec<CMatrix>)> {
            let mut factors = Vec::with_capacity(weights.len());
            let mut moduli = Vec::with_capacity(weights.len());
            for w in weights {
                let pair = polar_decompose(w)?;
                factors.push(pair.factor);
                moduli.push(pair.modulus);
            }
            Ok((factors, moduli))
        };
        match &self.kind {
            SequenceKind::Windowed { lo, weights } => {
                let (factors, moduli) = polar_all(weights)?;
                Ok((
                    WeightSequence::windowed(*lo, factors)?,
                    WeightSequence::windowed(*lo, moduli)?,
                ))
            }
            SequenceKind::Periodic { weights } => {
                let (factors, moduli) = polar_all(weights)?;
                Ok((
                    WeightSequence::periodic(factors)?,
                    WeightSequence::periodic(moduli)?,
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn scalar(x: f64) -> CMatrix {
        CMatrix::from_real_rows(1, &[x]).unwrap()
    }

    #[test]
    fn weight_at_identity_padding() {
        let seq = WeightSequence::windowed(0, vec![CMatrix::identity(2)]).unwrap();
        assert!(seq.weight_at(7).fro_distance(&CMatrix::identity(2)) == 0.0);
    }

    #[test]
    fn weight_at_periodic_wraps_negative_indices() {
        let seq = WeightSequence::periodic(vec![
            CMatrix::diagonal(&[1.0, 2.0]),
            CMatrix::diagonal(&[3.0, 4.0]),
        ])
        .unwrap();
        // (-1) mod 2 = 1
        assert!(
            seq.weight_at(-1)
                .fro_distance(&CMatrix::diagonal(&[3.0, 4.0]))
                == 0.0
        );
    }

    #[test]
    fn weight_at_windowed_lookup() {
        let seq = WeightSequence::windowed(
            1,
            vec![
                CMatrix::diagonal(&[2.0, 5.0]),
                CMatrix::diagonal(&[1.0, 1.0]),
            ],
        )
        .unwrap();
        assert!(
            seq.weight_at(1)
                .fro_distance(&CMatrix::diagonal(&[2.0, 5.0]))
                == 0.0
        );
    }

    #[test]
    fn forward_product_identity_weights() {
        let seq = WeightSequence::all_identity(3);
        assert!(
            seq.forward_product(-5, 4)
                .fro_distance(&CMatrix::identity(3))
                < 1e-15
        );
    }

    #[test]
    fn forward_product_constant_scalar() {
        let seq = WeightSequence::periodic(vec![scalar(2.0)]).unwrap();
        let p = seq.forward_product(0, 3);
        assert!((p.entry(0, 0).re - 8.0).abs() < 1e-14);
    }

    #[test]
    fn forward_product_orders_factors_high_index_left() {
        // S_1 = diag(1, 2), S_2 = diag(3, 4): S_2 · S_1 = diag(3, 8).
        let seq = WeightSequence::windowed(
            1,
            vec![
                CMatrix::diagonal(&[1.0, 2.0]),
                CMatrix::diagonal(&[3.0, 4.0]),
            ],
        )
        .unwrap();
        let dense = seq.weight_at(2).mul(&seq.weight_at(1));
        let p = seq.forward_product(0, 2);
        assert!(p.fro_distance(&dense) < 1e-14);
        assert!(p.fro_distance(&CMatrix::diagonal(&[3.0, 8.0])) < 1e-14);
    }

    #[test]
    fn backward_adjoint_product_scalar_oracle() {
        // S_1 = 2, S_2 = 4 stored on the window {1, 2}: for j = 2, n = 2 the
        // product is conj(2)·conj(4) = 8.
        let seq = WeightSequence::windowed(1, vec![scalar(2.0), scalar(4.0)]).unwrap();
        let p = seq.backward_adjoint_product(2, 2);
        assert!((p.entry(0, 0) - Complex64::new(8.0, 0.0)).norm() < 1e-14);
        // and it is the adjoint of the forward product starting at j - n
        let fwd = seq.forward_product(0, 2);
        assert!(p.fro_distance(&fwd.adjoint()) < 1e-15);
    }

    #[test]
    fn backward_adjoint_product_of_unitary_weights_is_unitary() {
        let w = CMatrix::from_rows(
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let seq = WeightSequence::periodic(vec![w]).unwrap();
        assert!(seq.backward_adjoint_product(3, 4).is_unitary(1e-12));
    }

    #[test]
    fn modulus_product_of_unitary_weights_is_identity() {
        let w = CMatrix::from_rows(
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let seq = WeightSequence::periodic(vec![w]).unwrap();
        let modulus = seq.modulus_product(0, 3).unwrap();
        assert!(modulus.fro_distance(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn modulus_product_absorbs_signs() {
        let seq = WeightSequence::periodic(vec![scalar(-2.0)]).unwrap();
        let modulus = seq.modulus_product(0, 2).unwrap();
        assert!((modulus.entry(0, 0).re - 4.0).abs() < 1e-13);
    }

    #[test]
    fn modulus_product_antidiagonal_oracle() {
        // single weight [[0,2],[1,0]]: Gram matrix diag(1,4), modulus diag(1,2)
        let m = CMatrix::from_real_rows(2, &[0.0, 2.0, 1.0, 0.0]).unwrap();
        let seq = WeightSequence::windowed(1, vec![m]).unwrap();
        let modulus = seq.modulus_product(0, 1).unwrap();
        assert!(modulus.fro_distance(&CMatrix::diagonal(&[1.0, 2.0])) < 1e-12);
    }

    #[test]
    fn shift_polar_positive_weights_trivial_factor() {
        let seq = WeightSequence::windowed(
            0,
            vec![
                CMatrix::diagonal(&[2.0, 3.0]),
                CMatrix::diagonal(&[0.5, 1.5]),
            ],
        )
        .unwrap();
        let (factors, moduli) = seq.shift_polar().unwrap();
        for i in 0..2 {
            assert!(factors.weight_at(i).fro_distance(&CMatrix::identity(2)) < 1e-12);
            assert!(moduli.weight_at(i).fro_distance(&seq.weight_at(i)) < 1e-12);
        }
    }

    #[test]
    fn shift_polar_unitary_weights_trivial_modulus() {
        let w = CMatrix::from_rows(
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let seq = WeightSequence::periodic(vec![w.clone()]).unwrap();
        let (factors, moduli) = seq.shift_polar().unwrap();
        assert!(factors.weight_at(0).fro_distance(&w) < 1e-12);
        assert!(moduli.weight_at(0).fro_distance(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn shift_polar_antidiagonal_weight() {
        let m = CMatrix::from_real_rows(2, &[0.0, 2.0, 1.0, 0.0]).unwrap();
        let seq = WeightSequence::windowed(1, vec![m]).unwrap();
        let (factors, moduli) = seq.shift_polar().unwrap();
        let flip = CMatrix::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(factors.weight_at(1).fro_distance(&flip) < 1e-12);
        assert!(
            moduli
                .weight_at(1)
                .fro_distance(&CMatrix::diagonal(&[1.0, 2.0]))
                < 1e-12
        );
    }

    #[test]
    fn singular_weight_rejected_at_construction() {
        let err = WeightSequence::windowed(
            0,
            vec![CMatrix::from_real_rows(2, &[1.0, 0.0, 0.0, 0.0]).unwrap()],
        );
        assert!(matches!(
            err,
            Err(Error::WeightNotInvertible { index: 0, .. })
        ));
    }
}
