//! Numerical toolkit for bilateral weighted shifts with matrix weights.
//!
//! A bilateral weighted shift on the two-sided sequence space over ℂ^m
//! maps (x_i) to (S_i x_{i-1}) for a uniformly bounded sequence of
//! invertible weights S_i. This crate models such shifts through finite
//! weight descriptions and banded truncations, and provides:
//!
//! * the product and modulus formulas for shift powers and the polar
//!   decomposition of the shift ([`weights`], [`banded`], [`cmatrix`]);
//! * verification of the zeroth-column conditions characterizing
//!   unitary equivalence, and reconstruction of the full intertwining
//!   unitary from a verified column ([`equivalence`]);
//! * the constructive two-diagonal equivalence for 2×2 positive
//!   commuting weights ([`twodim`]);
//! * the k-diagonal example family with a numerical certificate that
//!   k diagonals are necessary ([`gallery`]);
//! * seeded fixture generators for randomized cross-checks ([`gen`]).
//!
//! All comparisons are tolerance-driven; operations that compare take
//! the tolerance explicitly and truncation artefacts are kept out of
//! verdicts by asserting identities on interior indices only.

pub mod banded;
pub mod cmatrix;
pub mod equivalence;
pub mod error;
pub mod gallery;
pub mod gen;
pub mod twodim;
pub mod weights;

pub use banded::{
    dense_block, max_interior_block_diff, shift_power_signed, truncate_shift, BandedOperator,
};
pub use cmatrix::{gram_sqrt, polar_decompose, CMatrix, PolarPair, DEFAULT_TOL, EPS_INV};
pub use equivalence::{
    build_unitary, column_gram_defect, constant_on_diagonals_check, diagonal_support,
    diagonal_unitary_check, intertwining_residual, polar_factor_check, spectra_necessary_check,
    verify_u0, ColumnIsometry, DiagonalConstancy, DiagonalFormReport, EquivalenceParams,
    EquivalenceReport, PolarFactorReport, SpectraReport, RANK_TOL,
};
pub use error::{Error, Result};
pub use gallery::{
    canonical_u0, certify_min_support, generate_k_diagonal_pair, EigenGrid, MinSupportCertificate,
    DELTA_GRID,
};
pub use twodim::{
    common_eigenbasis, construct_two_diagonal_unitary, eigen_data_for, match_sigma_tau, EigenData,
    SigmaTau, DELTA_GAP,
};
pub use weights::{SequenceKind, WeightSequence};
