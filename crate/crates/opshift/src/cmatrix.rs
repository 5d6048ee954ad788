//! Dense complex matrix primitives sized for operator weights.
//!
//! Weights act on ℂ^m for small m, so everything here is a dense m×m
//! complex matrix. The polar decomposition M = V·|M| with
//! |M| = (M*M)^{1/2} is the workhorse: it is computed by
//! eigendecomposing the Hermitian Gram matrix M*M, which keeps the
//! factor deterministic (the polar factor of an invertible matrix is
//! unique, so eigenvector phase choices cannot leak into results).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative singular-value threshold below which a matrix is treated as singular.
pub const EPS_INV: f64 = 1e-10;

/// Default relative tolerance for approximate comparisons.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Square complex matrix acting on ℂ^m.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    data: DMatrix<Complex64>,
}

impl CMatrix {
    /// Wraps a square nalgebra matrix, rejecting NaN/Inf entries.
    pub fn from_dmatrix(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::DimensionMismatch {
                context: "CMatrix::from_dmatrix",
                expected: data.nrows(),
                got: data.ncols(),
            });
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFiniteEntries);
        }
        Ok(Self { data })
    }

    /// Row-major complex entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        Self::from_dmatrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Row-major real entries (imaginary parts zero).
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let complex: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(dim, &complex)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    /// Diagonal matrix with real entries.
    pub fn diagonal(entries: &[f64]) -> Self {
        let dim = entries.len();
        let mut data = DMatrix::zeros(dim, dim);
        for (i, &x) in entries.iter().enumerate() {
            data[(i, i)] = Complex64::new(x, 0.0);
        }
        Self { data }
    }

    /// Diagonal matrix with complex entries.
    pub fn diagonal_complex(entries: &[Complex64]) -> Self {
        let dim = entries.len();
        let mut data = DMatrix::zeros(dim, dim);
        for (i, &z) in entries.iter().enumerate() {
            data[(i, i)] = z;
        }
        Self { data }
    }

    /// Rank-one matrix w·v*, i.e. entry (i, j) = w_i · conj(v_j).
    pub fn outer(w: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(w.len(), v.len(), "outer product needs equal lengths");
        let dim = w.len();
        let mut data = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                data[(i, j)] = w[i] * v[j].conj();
            }
        }
        Self { data }
    }

    /// Matrix whose j-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let dim = columns.len();
        let mut data = DMatrix::zeros(dim, dim);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column length must equal dimension");
            for i in 0..dim {
                data[(i, j)] = col[i];
            }
        }
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.data[(i, col)]).collect()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in product");
        Self {
            data: &self.data * &other.data,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in sum");
        Self {
            data: &self.data + &other.data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in difference");
        Self {
            data: &self.data - &other.data,
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.map(|z| z * factor),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Singular values sorted in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let svd = self.data.clone().svd(false, false);
        let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
        values.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        values
    }

    /// Eigendecomposition of a (numerically) Hermitian matrix.
    ///
    /// The input is symmetrized first, so tiny Hermiticity defects from
    /// rounding do not disturb the result. Returns eigenvalues in
    /// ascending order together with the unitary of eigenvectors whose
    /// columns follow the same order.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMatrix) {
        let dim = self.dim();
        let herm = (&self.data + self.data.adjoint()).map(|z| z * 0.5);
        let eigen = SymmetricEigen::new(herm);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| {
            eigen.eigenvalues[a]
                .partial_cmp(&eigen.eigenvalues[b])
                .expect("eigenvalues are finite")
        });
        let values: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
        let mut vectors = DMatrix::zeros(dim, dim);
        for (new_col, &old_col) in order.iter().enumerate() {
            vectors.set_column(new_col, &eigen.eigenvectors.column(old_col));
        }
        (values, CMatrix { data: vectors })
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// True when M*M is the identity within `tol` (Frobenius).
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Frobenius distance between M*M and the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.data.adjoint() * &self.data;
        let eye = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        (gram - eye).norm()
    }

    /// Hermitian within `tol` and all eigenvalues above `-tol·scale`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let scale = self.frobenius_norm().max(1.0);
        let herm_defect = (&self.data - self.data.adjoint()).norm();
        if herm_defect > tol * scale {
            return false;
        }
        let (values, _) = self.hermitian_eigen();
        values.first().copied().unwrap_or(0.0) >= -tol * scale
    }

    /// Positive semidefinite and invertible (relative smallest eigenvalue above `EPS_INV`).
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        if !self.is_positive_semidefinite(tol) {
            return false;
        }
        let (values, _) = self.hermitian_eigen();
        let top = values.last().copied().unwrap_or(0.0);
        let bottom = values.first().copied().unwrap_or(0.0);
        bottom > 0.0 && bottom > EPS_INV * top
    }

    /// Smallest singular value strictly above `tol` times the largest.
    pub fn is_invertible(&self, tol: f64) -> bool {
        let sv = self.singular_values();
        match (sv.first(), sv.last()) {
            (Some(&max), Some(&min)) => min > tol * max,
            _ => false,
        }
    }

    /// True when every off-diagonal entry is below `tol` relative to the norm.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let scale = self.frobenius_norm().max(1.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if i != j && self.data[(i, j)].norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn fro_distance(&self, other: &Self) -> f64 {
        (&self.data - &other.data).norm()
    }
}

impl std::ops::Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.mul(rhs)
    }
}

/// Unitary factor and positive modulus of an invertible matrix: M = factor · modulus.
#[derive(Clone, Debug)]
pub struct PolarPair {
    pub factor: CMatrix,
    pub modulus: CMatrix,
}

/// (M*M)^{1/2} together with its inverse and the relative smallest singular value.
fn gram_sqrt_with_inverse(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let gram = m.adjoint().mul(m);
    let (values, q) = gram.hermitian_eigen();
    let top = values.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    let bottom = values.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let ratio = if top > 0.0 { bottom / top } else { 0.0 };
    if bottom <= 0.0 || ratio <= EPS_INV {
        return Err(Error::SingularModulus { ratio });
    }
    let roots: Vec<f64> = values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let inv_roots: Vec<f64> = roots.iter().map(|&r| 1.0 / r).collect();
    let qh = q.adjoint();
    let sqrt = q.mul(&CMatrix::diagonal(&roots)).mul(&qh);
    let inv_sqrt = q.mul(&CMatrix::diagonal(&inv_roots)).mul(&qh);
    Ok((sqrt, inv_sqrt))
}

/// Positive square root (M*M)^{1/2} of an invertible matrix.
pub fn gram_sqrt(m: &CMatrix) -> Result<CMatrix> {
    gram_sqrt_with_inverse(m).map(|(sqrt, _)| sqrt)
}

/// Polar decomposition M = factor · modulus for invertible M.
///
/// The factor comes out as M·(M*M)^{-1/2}; if rounding leaves a
/// unitarity defect above 1e-12 the factor is re-polarized once.
pub fn polar_decompose(m: &CMatrix) -> Result<PolarPair> {
    let (modulus, inv_sqrt) = gram_sqrt_with_inverse(m)?;
    let mut factor = m.mul(&inv_sqrt);
    if factor.unitarity_defect() > 1e-12 {
        let (_, correction) = gram_sqrt_with_inverse(&factor)?;
        factor = factor.mul(&correction);
    }
    Ok(PolarPair { factor, modulus })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polar_of_identity_is_trivial() {
        let id = CMatrix::identity(3);
        let pair = polar_decompose(&id).unwrap();
        assert!(pair.factor.fro_distance(&id) < 1e-14);
        assert!(pair.modulus.fro_distance(&id) < 1e-14);
    }

    #[test]
    fn polar_of_negative_scalar() {
        let m = CMatrix::from_real_rows(1, &[-3.0]).unwrap();
        let pair = polar_decompose(&m).unwrap();
        assert!((pair.factor.entry(0, 0) - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((pair.modulus.entry(0, 0) - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn polar_of_antidiagonal() {
        // M = [[0, 2], [1, 0]]: M*M = diag(1, 4), so the modulus is
        // diag(1, 2) and the factor is the flip [[0, 1], [1, 0]].
        let m = CMatrix::from_real_rows(2, &[0.0, 2.0, 1.0, 0.0]).unwrap();
        let pair = polar_decompose(&m).unwrap();
        let expected_modulus = CMatrix::diagonal(&[1.0, 2.0]);
        let expected_factor = CMatrix::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(pair.modulus.fro_distance(&expected_modulus) < 1e-12);
        assert!(pair.factor.fro_distance(&expected_factor) < 1e-12);
        assert!(pair.factor.mul(&pair.modulus).fro_distance(&m) < 1e-12);
    }

    #[test]
    fn polar_rejects_singular_input() {
        let m = CMatrix::from_real_rows(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            polar_decompose(&m),
            Err(Error::SingularModulus { .. })
        ));
    }

    #[test]
    fn hermitian_eigen_orders_ascending() {
        let m =
            CMatrix::from_rows(2, &[c(2.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        let (values, vectors) = m.hermitian_eigen();
        assert!((values[0] - 1.0).abs() < 1e-12);
        assert!((values[1] - 3.0).abs() < 1e-12);
        assert!(vectors.is_unitary(1e-12));
        // reconstruct
        let lambda = CMatrix::diagonal(&values);
        let recon = vectors.mul(&lambda).mul(&vectors.adjoint());
        assert!(recon.fro_distance(&m) < 1e-12);
    }

    #[test]
    fn predicates_on_simple_matrices() {
        let id = CMatrix::identity(2);
        assert!(id.is_unitary(1e-14));
        assert!(id.is_positive_semidefinite(1e-14));
        assert!(id.is_invertible(EPS_INV));
        let singular = CMatrix::from_real_rows(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(!singular.is_invertible(EPS_INV));
        assert!(singular.is_positive_semidefinite(1e-12));
        let rot =
            CMatrix::from_rows(2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(rot.is_unitary(1e-14));
        assert!(!rot.is_positive_semidefinite(1e-12));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let err = CMatrix::from_real_rows(1, &[f64::NAN]);
        assert!(matches!(err, Err(Error::NonFiniteEntries)));
    }

    #[test]
    fn outer_product_entries() {
        let w = [c(1.0, 0.0), c(0.0, 1.0)];
        let v = [c(0.0, 0.0), c(1.0, 0.0)];
        let m = CMatrix::outer(&w, &v);
        assert_eq!(m.entry(0, 0), c(0.0, 0.0));
        assert_eq!(m.entry(0, 1), c(1.0, 0.0));
        assert_eq!(m.entry(1, 1), c(0.0, 1.0));
    }
}
