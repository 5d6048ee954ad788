//! Property tests for the structural identities of truncated shifts.

use proptest::prelude::*;

use opshift::banded::{dense_block, max_interior_block_diff, truncate_shift, BandedOperator};
use opshift::cmatrix::polar_decompose;
use opshift::equivalence::{
    diagonal_unitary_check, spectra_necessary_check, verify_u0, ColumnIsometry,
};
use opshift::gen;
use opshift::twodim::{construct_two_diagonal_unitary, eigen_data_for, match_sigma_tau};
use opshift::weights::WeightSequence;

fn dense_power(
    seq: &WeightSequence,
    window: i64,
    n: u32,
) -> nalgebra::DMatrix<num_complex::Complex64> {
    let dense = truncate_shift(seq, window).to_dense();
    let mut power = dense.clone();
    for _ in 1..n {
        power = &power * &dense;
    }
    power
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn power_blocks_match_dense_powers(
        seed in any::<u64>(),
        m in 1usize..=4,
        n in 1u32..=5,
        window in 8i64..=16,
    ) {
        let mut rng = gen::rng(seed);
        let seq = gen::random_windowed(&mut rng, m, -5, 5);
        let power = dense_power(&seq, window, n);
        let shift = i64::from(n);
        let bound = window - shift;
        let scale = seq.sup_norm().powi(n as i32).max(1.0);
        for j in -bound..=(bound - shift) {
            let oracle = dense_block(&power, m, window, j + shift, j);
            let formula = seq.forward_product(j, n);
            prop_assert!(formula.fro_distance(&oracle) / scale < 1e-10);
        }
        let adjoint_power = power.adjoint();
        for row in -bound..=(bound - shift) {
            let oracle = dense_block(&adjoint_power, m, window, row, row + shift);
            let formula = seq.backward_adjoint_product(row + shift, n);
            prop_assert!(formula.fro_distance(&oracle) / scale < 1e-10);
        }
    }

    #[test]
    fn modulus_squares_to_the_gram_block(seed in any::<u64>(), m in 1usize..=3, n in 1u32..=5) {
        let mut rng = gen::rng(seed);
        let seq = gen::random_windowed(&mut rng, m, -4, 4);
        for j in -3..=3_i64 {
            let product = seq.forward_product(j, n);
            let gram = product.adjoint().mul(&product);
            let modulus = seq.modulus_product(j, n).unwrap();
            let squared = modulus.mul(&modulus);
            let scale = gram.frobenius_norm().max(1.0);
            prop_assert!(squared.fro_distance(&gram) / scale < 1e-10);
            prop_assert!(modulus.is_positive_semidefinite(1e-10));
        }
    }

    #[test]
    fn polar_reconstructs_and_factor_is_unitary(seed in any::<u64>(), m in 1usize..=4) {
        let mut rng = gen::rng(seed);
        let matrix = gen::random_invertible(&mut rng, m);
        let pair = polar_decompose(&matrix).unwrap();
        prop_assert!(pair.factor.unitarity_defect() < 1e-12);
        let recon = pair.factor.mul(&pair.modulus);
        prop_assert!(recon.fro_distance(&matrix) / matrix.frobenius_norm().max(1.0) < 1e-10);
        prop_assert!(pair.modulus.is_positive_semidefinite(1e-10));
    }

    #[test]
    fn shift_polar_reconstructs_the_truncation(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = gen::rng(seed);
        let window = 8i64;
        let seq = gen::random_windowed(&mut rng, m, -4, 4);
        let (factors, moduli) = seq.shift_polar().unwrap();
        let factor_shift = truncate_shift(&factors, window);
        let modulus_diag =
            BandedOperator::diagonal_operator(m, window, |i| moduli.weight_at(i + 1)).unwrap();
        let recombined = factor_shift.mul(&modulus_diag).unwrap();
        let original = truncate_shift(&seq, window);
        let diff = max_interior_block_diff(&recombined, &original, 1);
        prop_assert!(diff / seq.sup_norm().max(1.0) < 1e-10);
    }

    #[test]
    fn adjoint_laws_hold_on_the_interior(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = gen::rng(seed);
        let window = 8i64;
        let a = truncate_shift(&gen::random_windowed(&mut rng, m, -4, 4), window);
        let b = truncate_shift(&gen::random_windowed(&mut rng, m, -4, 4), window);
        // double adjoint is exact
        prop_assert!(max_interior_block_diff(&a.adjoint().adjoint(), &a, 0) == 0.0);
        // (AB)* = B*A* on the interior
        let left = a.mul(&b).unwrap().adjoint();
        let right = b.adjoint().mul(&a.adjoint()).unwrap();
        let scale = (a.max_block_spectral() * b.max_block_spectral()).max(1.0);
        prop_assert!(max_interior_block_diff(&left, &right, 2) / scale < 1e-12);
    }

    #[test]
    fn diagonal_form_bridge(seed in any::<u64>(), m in 1usize..=3, p in -2i64..=2) {
        let mut rng = gen::rng(seed);
        let s = gen::random_windowed(&mut rng, m, -4, 4);
        let c = gen::random_unitary_windowed(&mut rng, m, -5, 5);
        let t = gen::conjugated_shift(&s, &c, p).unwrap();
        let up0 = c.weight_at(0);

        // conjugated pair: both routes agree and pass
        let flat = diagonal_unitary_check(&s, &t, p, &up0, 3, 1e-8).unwrap();
        let column = ColumnIsometry::single(p, up0.clone());
        let full = verify_u0(&column, &s, &t, 3, 10, 1e-8).unwrap();
        prop_assert!(flat.pass);
        prop_assert_eq!(flat.pass, full.pass);
        // wandering and span are automatic for single-row unitary support
        prop_assert!(full.pass_wandering);
        prop_assert!(full.pass_span);

        // unrelated target: both routes agree and fail
        let unrelated = gen::random_windowed(&mut rng, m, -4, 4);
        let flat_bad = diagonal_unitary_check(&s, &unrelated, p, &up0, 3, 1e-8).unwrap();
        let full_bad = verify_u0(&column, &s, &unrelated, 3, 10, 1e-8).unwrap();
        prop_assert_eq!(flat_bad.pass, full_bad.pass);
        prop_assert!(full_bad.pass_wandering);
        prop_assert!(full_bad.pass_span);
    }

    #[test]
    fn diagonal_form_pass_implies_spectra_pass(seed in any::<u64>(), m in 1usize..=3, p in -3i64..=3) {
        let mut rng = gen::rng(seed);
        let s = gen::random_windowed(&mut rng, m, -4, 4);
        let c = gen::random_unitary_windowed(&mut rng, m, -4, 4);
        let t = gen::conjugated_shift(&s, &c, p).unwrap();
        let up0 = c.weight_at(0);
        let flat = diagonal_unitary_check(&s, &t, p, &up0, 3, 1e-8).unwrap();
        prop_assert!(flat.pass);
        let spectra = spectra_necessary_check(&s, &t, p, 1e-8);
        prop_assert!(spectra.pass, "mismatch {}", spectra.max_mismatch);
    }

    #[test]
    fn two_branch_construction_bookkeeping(
        seed in any::<u64>(),
        tau0 in -2i64..=2,
        tau1 in -2i64..=2,
        swap in any::<bool>(),
    ) {
        let mut rng = gen::rng(seed);
        let sigma = if swap { [1usize, 0] } else { [0usize, 1] };
        let pair = gen::branch_shift_pair(&mut rng, 2, -6, 6, &[tau0, tau1], &sigma, true);
        // the fabricated zeroth column is isometric to rounding error
        prop_assert!(pair.column.isometry_defect() < 1e-12);

        let sdata = eigen_data_for(&pair.s, -6, 6, 1e-8).unwrap();
        let tdata = eigen_data_for(
            &pair.t,
            pair.target_core_lo,
            pair.target_core_hi,
            1e-8,
        )
        .unwrap();
        let st = match_sigma_tau(&sdata, &tdata, 2, 1e-8).unwrap();
        let mut expected_taus = [tau0, tau1];
        expected_taus.sort_unstable();
        let mut found_taus = st.tau;
        found_taus.sort_unstable();
        prop_assert_eq!(expected_taus, found_taus);

        let (built, report) =
            construct_two_diagonal_unitary(&pair.s, &pair.t, &st, &sdata, &tdata, 10, 4, 1e-8)
                .unwrap();
        prop_assert!(report.pass);
        let support = built.band();
        prop_assert!(support.len() <= 2);
        prop_assert_eq!(support.len() == 1, tau0 == tau1);
    }
}
