//! Numerical certification of unitary equivalence between two shifts.
//!
//! Two shifts S and T with invertible weights are unitarily equivalent
//! exactly when some isometric zeroth column U₀ satisfies four
//! conditions: the forward and backward moduli intertwinings
//!
//! ```text
//!   U₀|S_n···S_1|         = D[(|T_{i+n}···T_{i+1}|)] U₀,
//!   U₀|S*_{-n+1}···S*_0|  = D[(|T*_{i-n+1}···T*_i|)] U₀,
//! ```
//!
//! pairwise orthogonality of the ranges T^[k](R(U₀)) (the wandering
//! property), and fullness of their joint span. Under these conditions
//! every column of the intertwining unitary is forced: column n is
//! F^n D[(W_{n,i})] U₀ V_n* with V_n, W_{n,i} the unitary polar factors
//! of the weight products, and column -n the analogous adjoint formula.
//! `verify_u0` measures the four conditions at a finite truncation and
//! `build_unitary` assembles the forced columns.
//!
//! At a finite window the span condition has no literal meaning, so it
//! is replaced by a rank condition: the smallest singular value of the
//! matrix stacking the (column-normalized) images T^\[i\]·U₀ restricted
//! to interior rows must stay above a relative threshold.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::banded::BandedOperator;
use crate::cmatrix::{polar_decompose, CMatrix};
use crate::error::{Error, Result};
use crate::weights::WeightSequence;

/// Relative threshold for the span rank test.
pub const RANK_TOL: f64 = 1e-6;

/// Finitely supported column map ℂ^m → ℓ²: a list of (row, block) pairs.
#[derive(Clone, Debug)]
pub struct ColumnIsometry {
    dim: usize,
    support: Vec<(i64, CMatrix)>,
}

impl ColumnIsometry {
    /// Sorted, distinct-row support; zero blocks are dropped.
    pub fn new(dim: usize, mut support: Vec<(i64, CMatrix)>) -> Result<Self> {
        for (_, block) in &support {
            if block.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "ColumnIsometry::new",
                    expected: dim,
                    got: block.dim(),
                });
            }
        }
        support.retain(|(_, block)| block.frobenius_norm() > 0.0);
        support.sort_by_key(|(row, _)| *row);
        for pair in support.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateSupportRow { row: pair[0].0 });
            }
        }
        Ok(Self { dim, support })
    }

    /// Support concentrated at a single row.
    pub fn single(row: i64, block: CMatrix) -> Self {
        let dim = block.dim();
        Self {
            dim,
            support: vec![(row, block)],
        }
    }

    /// The column `col` of a banded operator as a column map.
    pub fn from_column(op: &BandedOperator, col: i64) -> Result<Self> {
        let support: Vec<(i64, CMatrix)> = op
            .blocks()
            .filter(|(&(_, c), _)| c == col)
            .map(|(&(r, _), block)| (r, block.clone()))
            .collect();
        Self::new(op.dim(), support)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &[(i64, CMatrix)] {
        &self.support
    }

    pub fn max_row_abs(&self) -> i64 {
        self.support
            .iter()
            .map(|(row, _)| row.abs())
            .max()
            .unwrap_or(0)
    }

    /// Frobenius distance of Σ_i U_{i,0}* U_{i,0} from the identity.
    pub fn isometry_defect(&self) -> f64 {
        let mut gram = CMatrix::zeros(self.dim);
        for (_, block) in &self.support {
            gram = gram.add(&block.adjoint().mul(block));
        }
        gram.fro_distance(&CMatrix::identity(self.dim))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceParams {
    pub n_max: u32,
    pub window: i64,
    pub margin: i64,
    pub tol: f64,
}

/// Per-condition residuals and verdicts for a candidate zeroth column.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub params: EquivalenceParams,
    pub residual_moduli_forward: f64,
    pub residual_moduli_backward: f64,
    pub residual_wandering: f64,
    pub span_defect: f64,
    pub span_threshold: f64,
    pub pass_moduli_forward: bool,
    pub pass_moduli_backward: bool,
    pub pass_wandering: bool,
    pub pass_span: bool,
    pub pass: bool,
}

/// Largest interior residual of A·Sⁿ − Tⁿ·A, blockwise:
/// ‖A_{i+n,j+n}(S_{j+n}···S_{j+1}) − (T_{i+n}···T_{i+1})A_{i,j}‖_F,
/// scaled by max(‖A‖, 1)·max(‖S‖, ‖T‖)ⁿ.
pub fn intertwining_residual(
    a: &BandedOperator,
    s: &WeightSequence,
    t: &WeightSequence,
    n: u32,
    margin: i64,
) -> Result<f64> {
    if s.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "intertwining_residual (source weights)",
            expected: a.dim(),
            got: s.dim(),
        });
    }
    if t.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "intertwining_residual (target weights)",
            expected: a.dim(),
            got: t.dim(),
        });
    }
    assert!(n >= 1, "intertwining_residual needs n >= 1");
    let bound = a.window() - margin;
    let shift = i64::from(n);
    let inside = |x: i64| x.abs() <= bound;
    let mut pairs: BTreeSet<(i64, i64)> = BTreeSet::new();
    for (&(r, c), _) in a.blocks() {
        if inside(r) && inside(c) && inside(r + shift) && inside(c + shift) {
            pairs.insert((r, c));
        }
        if inside(r) && inside(c) && inside(r - shift) && inside(c - shift) {
            pairs.insert((r - shift, c - shift));
        }
    }
    let scale = a.max_block_spectral().max(1.0) * s.sup_norm().max(t.sup_norm()).powi(n as i32);
    let scale = scale.max(f64::MIN_POSITIVE);
    let mut worst = 0.0_f64;
    for (i, j) in pairs {
        let left = a
            .block_or_zero(i + shift, j + shift)
            .mul(&s.forward_product(j, n));
        let right = t.forward_product(i, n).mul(&a.block_or_zero(i, j));
        worst = worst.max(left.fro_distance(&right) / scale);
    }
    Ok(worst)
}

/// Images T^[k]·U₀ for |k| ≤ k_max, keyed by k then by row (rows clipped
/// to the window). Products along each support row are accumulated
/// incrementally.
fn column_images(
    t: &WeightSequence,
    u0: &ColumnIsometry,
    k_max: i64,
    window: i64,
) -> BTreeMap<i64, BTreeMap<i64, CMatrix>> {
    let mut images: BTreeMap<i64, BTreeMap<i64, CMatrix>> = BTreeMap::new();
    for k in -k_max..=k_max {
        images.insert(k, BTreeMap::new());
    }
    for (row, block) in u0.support() {
        if row.abs() <= window {
            images
                .get_mut(&0)
                .expect("k = 0 preallocated")
                .insert(*row, block.clone());
        }
        let mut forward = CMatrix::identity(t.dim());
        for k in 1..=k_max {
            forward = t.weight_at(row + k).mul(&forward);
            let target = row + k;
            if target.abs() <= window {
                images
                    .get_mut(&k)
                    .expect("preallocated")
                    .insert(target, forward.mul(block));
            }
        }
        let mut backward = CMatrix::identity(t.dim());
        for n in 1..=k_max {
            backward = t.weight_at(row - n + 1).adjoint().mul(&backward);
            let target = row - n;
            if target.abs() <= window {
                images
                    .get_mut(&-n)
                    .expect("preallocated")
                    .insert(target, backward.mul(block));
            }
        }
    }
    images
}

fn column_map_norm(image: &BTreeMap<i64, CMatrix>, dim: usize) -> f64 {
    let mut gram = CMatrix::zeros(dim);
    for block in image.values() {
        gram = gram.add(&block.adjoint().mul(block));
    }
    let (values, _) = gram.hermitian_eigen();
    values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

fn cross_gram(a: &BTreeMap<i64, CMatrix>, b: &BTreeMap<i64, CMatrix>, dim: usize) -> CMatrix {
    let mut gram = CMatrix::zeros(dim);
    for (row, left) in a {
        if let Some(right) = b.get(row) {
            gram = gram.add(&left.adjoint().mul(right));
        }
    }
    gram
}

/// Checks the four equivalence conditions for a candidate zeroth column
/// at truncation parameters (n_max, window) and returns the residual
/// report. The interior margin equals n_max.
pub fn verify_u0(
    u0: &ColumnIsometry,
    s: &WeightSequence,
    t: &WeightSequence,
    n_max: u32,
    window: i64,
    tol: f64,
) -> Result<EquivalenceReport> {
    assert!(n_max >= 1, "verify_u0 needs n_max >= 1");
    if u0.dim() != s.dim() || u0.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            context: "verify_u0",
            expected: u0.dim(),
            got: if u0.dim() != s.dim() {
                s.dim()
            } else {
                t.dim()
            },
        });
    }
    let defect = u0.isometry_defect();
    if defect > tol {
        return Err(Error::IsometryViolation { defect, tol });
    }
    let margin = i64::from(n_max);
    if u0.max_row_abs() + margin > window {
        return Err(Error::WindowTooSmall {
            window,
            context: format!(
                "support reaches row {} and n_max = {} shifts leave the window",
                u0.max_row_abs(),
                n_max
            ),
        });
    }

    let mut forward = 0.0_f64;
    let mut backward = 0.0_f64;
    for n in 1..=n_max {
        let s_mod = s.modulus_product(0, n)?;
        let s_adj_mod = s.adjoint_modulus_product(0, n)?;
        for (row, block) in u0.support() {
            let t_mod = t.modulus_product(*row, n)?;
            let scale = s_mod
                .spectral_norm()
                .max(t_mod.spectral_norm())
                .max(f64::MIN_POSITIVE);
            forward = forward.max(block.mul(&s_mod).fro_distance(&t_mod.mul(block)) / scale);

            let t_adj_mod = t.adjoint_modulus_product(*row, n)?;
            let scale = s_adj_mod
                .spectral_norm()
                .max(t_adj_mod.spectral_norm())
                .max(f64::MIN_POSITIVE);
            backward =
                backward.max(block.mul(&s_adj_mod).fro_distance(&t_adj_mod.mul(block)) / scale);
        }
    }

    let dim = u0.dim();
    let images = column_images(t, u0, 2 * window, window);

    let mut wandering = 0.0_f64;
    let reach = margin;
    let mut norms: BTreeMap<i64, f64> = BTreeMap::new();
    for k in -reach..=reach {
        norms.insert(k, column_map_norm(&images[&k], dim));
    }
    for k in -reach..=reach {
        for m in (k + 1)..=reach {
            let gram = cross_gram(&images[&k], &images[&m], dim);
            let scale = (norms[&k] * norms[&m]).max(f64::MIN_POSITIVE);
            wandering = wandering.max(gram.frobenius_norm() / scale);
        }
    }

    // Span rank test on interior rows. Columns are normalized so that the
    // relative threshold is not drowned by the exponential growth or decay
    // of long weight products.
    let bound = window - margin;
    let row_count = (2 * bound + 1) as usize * dim;
    let col_keys: Vec<i64> = (-2 * window..=2 * window).collect();
    let mut stacked = DMatrix::<Complex64>::zeros(row_count, col_keys.len() * dim);
    for (slot, k) in col_keys.iter().enumerate() {
        for (&row, block) in &images[k] {
            if row.abs() <= bound {
                let r0 = ((row + bound) as usize) * dim;
                let c0 = slot * dim;
                for r in 0..dim {
                    for c in 0..dim {
                        stacked[(r0 + r, c0 + c)] = block.entry(r, c);
                    }
                }
            }
        }
    }
    for c in 0..stacked.ncols() {
        let norm = stacked.column(c).norm();
        if norm > 0.0 {
            let inv = Complex64::new(1.0 / norm, 0.0);
            for r in 0..row_count {
                stacked[(r, c)] *= inv;
            }
        }
    }
    let svd = stacked.svd(false, false);
    let mut singular: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    let span_max = singular.first().copied().unwrap_or(0.0);
    let span_defect = if singular.len() >= row_count {
        singular[row_count - 1]
    } else {
        0.0
    };
    let span_threshold = RANK_TOL * span_max;

    let pass_moduli_forward = forward <= tol;
    let pass_moduli_backward = backward <= tol;
    let pass_wandering = wandering <= tol;
    let pass_span = span_defect >= span_threshold && span_defect > 0.0;
    Ok(EquivalenceReport {
        params: EquivalenceParams {
            n_max,
            window,
            margin,
            tol,
        },
        residual_moduli_forward: forward,
        residual_moduli_backward: backward,
        residual_wandering: wandering,
        span_defect,
        span_threshold,
        pass_moduli_forward,
        pass_moduli_backward,
        pass_wandering,
        pass_span,
        pass: pass_moduli_forward && pass_moduli_backward && pass_wandering && pass_span,
    })
}

/// Assembles the unitary forced by a verified zeroth column.
///
/// Column n (1 ≤ n ≤ col_range) places W_{n,i}·U_{i,0}·V_n* at row i+n,
/// where V_n is the polar factor of S_n···S_1 and W_{n,i} that of
/// T_{i+n}···T_{i+1}; column -n places W_{-n,i}*·U_{i,0}·V_{-n} at row
/// i-n with the factors of S_0···S_{-n+1} and T_i···T_{i-n+1}. Refuses
/// (with the report attached) when `verify_u0` fails at n_max = col_range.
pub fn build_unitary(
    u0: &ColumnIsometry,
    s: &WeightSequence,
    t: &WeightSequence,
    window: i64,
    col_range: u32,
    tol: f64,
) -> Result<BandedOperator> {
    assert!(col_range >= 1, "build_unitary needs col_range >= 1");
    let report = verify_u0(u0, s, t, col_range, window, tol)?;
    if !report.pass {
        return Err(Error::PreconditionFailed {
            report: Box::new(report),
        });
    }
    let mut out = BandedOperator::new(u0.dim(), window);
    for (row, block) in u0.support() {
        out.set_block(*row, 0, block.clone())?;
    }
    for n in 1..=col_range {
        let nn = i64::from(n);
        let v_pos = polar_decompose(&s.forward_product(0, n))?.factor;
        let v_neg = polar_decompose(&s.forward_product(-nn, n))?.factor;
        for (row, block) in u0.support() {
            let w_pos = polar_decompose(&t.forward_product(*row, n))?.factor;
            out.set_block(row + nn, nn, w_pos.mul(block).mul(&v_pos.adjoint()))?;
            let w_neg = polar_decompose(&t.forward_product(row - nn, n))?.factor;
            out.set_block(row - nn, -nn, w_neg.adjoint().mul(block).mul(&v_neg))?;
        }
    }
    Ok(out)
}

/// Largest deviation of the column Gram matrix from the identity over
/// columns |c| ≤ col_bound; measures unitarity of an operator whose
/// columns are complete inside the window.
pub fn column_gram_defect(op: &BandedOperator, col_bound: i64) -> f64 {
    let mut columns: BTreeMap<i64, Vec<(i64, CMatrix)>> = BTreeMap::new();
    for (&(r, c), block) in op.blocks() {
        if c.abs() <= col_bound {
            columns.entry(c).or_default().push((r, block.clone()));
        }
    }
    let dim = op.dim();
    let mut worst = 0.0_f64;
    for c1 in -col_bound..=col_bound {
        for c2 in c1..=col_bound {
            let mut gram = CMatrix::zeros(dim);
            if let (Some(a), Some(b)) = (columns.get(&c1), columns.get(&c2)) {
                let rows: BTreeMap<i64, &CMatrix> = a.iter().map(|(r, m)| (*r, m)).collect();
                for (r, right) in b {
                    if let Some(left) = rows.get(r) {
                        gram = gram.add(&left.adjoint().mul(right));
                    }
                }
            }
            let target = if c1 == c2 {
                CMatrix::identity(dim)
            } else {
                CMatrix::zeros(dim)
            };
            worst = worst.max(gram.fro_distance(&target));
        }
    }
    worst
}

/// Report of the diagonal-form equivalence check at a fixed offset.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalFormReport {
    pub offset: i64,
    pub n_max: u32,
    pub tol: f64,
    pub max_residual: f64,
    pub pass: bool,
}

/// Checks whether the single unitary block U_{p,0} intertwines all
/// forward and backward weight-product moduli at offset p:
/// U|S_n···S_1| = |T_{p+n}···T_{p+1}|U and the adjoint analogue.
pub fn diagonal_unitary_check(
    s: &WeightSequence,
    t: &WeightSequence,
    p: i64,
    up0: &CMatrix,
    n_max: u32,
    tol: f64,
) -> Result<DiagonalFormReport> {
    assert!(n_max >= 1, "diagonal_unitary_check needs n_max >= 1");
    if up0.dim() != s.dim() || up0.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            context: "diagonal_unitary_check",
            expected: up0.dim(),
            got: if up0.dim() != s.dim() {
                s.dim()
            } else {
                t.dim()
            },
        });
    }
    let defect = up0.unitarity_defect();
    if defect > tol {
        return Err(Error::NotUnitary { defect, tol });
    }
    let mut worst = 0.0_f64;
    for n in 1..=n_max {
        let s_mod = s.modulus_product(0, n)?;
        let t_mod = t.modulus_product(p, n)?;
        let scale = s_mod
            .spectral_norm()
            .max(t_mod.spectral_norm())
            .max(f64::MIN_POSITIVE);
        worst = worst.max(up0.mul(&s_mod).fro_distance(&t_mod.mul(up0)) / scale);

        let s_adj = s.adjoint_modulus_product(0, n)?;
        let t_adj = t.adjoint_modulus_product(p, n)?;
        let scale = s_adj
            .spectral_norm()
            .max(t_adj.spectral_norm())
            .max(f64::MIN_POSITIVE);
        worst = worst.max(up0.mul(&s_adj).fro_distance(&t_adj.mul(up0)) / scale);
    }
    Ok(DiagonalFormReport {
        offset: p,
        n_max,
        tol,
        max_residual: worst,
        pass: worst <= tol,
    })
}

/// Report of the per-index singular-value comparison at a fixed offset.
#[derive(Clone, Debug, Serialize)]
pub struct SpectraReport {
    pub offset: i64,
    pub tol: f64,
    pub max_mismatch: f64,
    pub indices_checked: usize,
    pub pass: bool,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Indices i at which comparing S_i against T_{i+p} covers every distinct
/// case of both descriptions (windows plus one full period block).
fn comparison_indices(s: &WeightSequence, t: &WeightSequence, p: i64) -> Vec<i64> {
    let mut lo = 0_i64;
    let mut hi = 0_i64;
    if let Some((a, b)) = s.window_bounds() {
        lo = lo.min(a - 1);
        hi = hi.max(b + 1);
    }
    if let Some((a, b)) = t.window_bounds() {
        lo = lo.min(a - 1 - p);
        hi = hi.max(b + 1 - p);
    }
    let ps = s.period().unwrap_or(1) as i64;
    let pt = t.period().unwrap_or(1) as i64;
    let lcm = ps / gcd(ps, pt) * pt;
    (lo..=hi + lcm).collect()
}

/// Necessary condition for diagonal-form equivalence at offset p: the
/// singular values of S_i and T_{i+p} must agree for every i. Failure
/// certifies that no diagonal-form intertwining unitary exists at p.
pub fn spectra_necessary_check(
    s: &WeightSequence,
    t: &WeightSequence,
    p: i64,
    tol: f64,
) -> SpectraReport {
    let indices = comparison_indices(s, t, p);
    let mut worst = 0.0_f64;
    for &i in &indices {
        let a = s.weight_at(i).singular_values();
        let b = t.weight_at(i + p).singular_values();
        let scale = a
            .first()
            .copied()
            .unwrap_or(0.0)
            .max(b.first().copied().unwrap_or(0.0))
            .max(f64::MIN_POSITIVE);
        for (x, y) in a.iter().zip(b.iter()) {
            worst = worst.max((x - y).abs() / scale);
        }
    }
    SpectraReport {
        offset: p,
        tol,
        max_mismatch: worst,
        indices_checked: indices.len(),
        pass: worst <= tol,
    }
}

/// Residuals tying the shift intertwining to its polar pieces.
#[derive(Clone, Debug, Serialize)]
pub struct PolarFactorReport {
    /// Residual of U·S − T·U on the interior.
    pub shift_residual: f64,
    /// Residual of U·|S| − |T|·U (diagonal moduli).
    pub modulus_residual: f64,
    /// Residual of U·V_S − V_T·U (unitary factor shifts).
    pub factor_residual: f64,
    pub tol: f64,
    pub shift_pass: bool,
    pub polar_pass: bool,
    /// Whether the two verdicts agree, as the characterization demands.
    pub agreement: bool,
}

/// Cross-checks US = TU against the pair U|S| = |T|U and UV_S = V_T U.
pub fn polar_factor_check(
    u: &BandedOperator,
    s: &WeightSequence,
    t: &WeightSequence,
    margin: i64,
    tol: f64,
) -> Result<PolarFactorReport> {
    let gram = u.adjoint().mul(u)?;
    let identity = BandedOperator::identity(u.dim(), u.window());
    let defect = crate::banded::max_interior_block_diff(&gram, &identity, margin);
    if defect > tol {
        return Err(Error::NotUnitary { defect, tol });
    }
    let shift_residual = intertwining_residual(u, s, t, 1, margin)?;
    let (v_s, _) = s.shift_polar()?;
    let (v_t, _) = t.shift_polar()?;
    let factor_residual = intertwining_residual(u, &v_s, &v_t, 1, margin)?;

    let bound = u.window() - margin;
    let scale = u.max_block_spectral().max(1.0) * s.sup_norm().max(t.sup_norm());
    let scale = scale.max(f64::MIN_POSITIVE);
    let mut modulus_residual = 0.0_f64;
    for (&(i, j), block) in u.blocks() {
        if i.abs() <= bound && j.abs() <= bound {
            let s_mod = s.modulus_product(j, 1)?;
            let t_mod = t.modulus_product(i, 1)?;
            modulus_residual =
                modulus_residual.max(block.mul(&s_mod).fro_distance(&t_mod.mul(block)) / scale);
        }
    }
    let shift_pass = shift_residual <= tol;
    let polar_pass = modulus_residual <= tol && factor_residual <= tol;
    Ok(PolarFactorReport {
        shift_residual,
        modulus_residual,
        factor_residual,
        tol,
        shift_pass,
        polar_pass,
        agreement: shift_pass == polar_pass,
    })
}

/// Outcome of the block-Toeplitz test.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalConstancy {
    pub constant: bool,
    pub max_deviation: f64,
}

/// Largest interior deviation ‖U_{i+1,j+1} − U_{i,j}‖_F; zero for
/// operators that are constant on diagonals.
pub fn constant_on_diagonals_check(u: &BandedOperator, margin: i64, tol: f64) -> DiagonalConstancy {
    let bound = u.window() - margin;
    let inside = |x: i64| x.abs() <= bound;
    let mut pairs: BTreeSet<(i64, i64)> = BTreeSet::new();
    for (&(i, j), _) in u.blocks() {
        if inside(i) && inside(j) && inside(i + 1) && inside(j + 1) {
            pairs.insert((i, j));
        }
        if inside(i) && inside(j) && inside(i - 1) && inside(j - 1) {
            pairs.insert((i - 1, j - 1));
        }
    }
    let mut worst = 0.0_f64;
    for (i, j) in pairs {
        worst = worst.max(
            u.block_or_zero(i + 1, j + 1)
                .fro_distance(&u.block_or_zero(i, j)),
        );
    }
    DiagonalConstancy {
        constant: worst <= tol,
        max_deviation: worst,
    }
}

/// Diagonal offsets carrying non-negligible blocks.
pub fn diagonal_support(u: &BandedOperator, tol: f64) -> BTreeSet<i64> {
    u.diagonal_support(tol)
}
