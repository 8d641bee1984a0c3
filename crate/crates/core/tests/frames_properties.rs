mod common;

use common::*;
use optframe::schur_horn::{norms_majorized_by_spectrum, realize_frame, unitary_for_diagonal_counted};
use optframe::{is_dual, ComplexMatrix, Frame, FrameJson, PotentialKind};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_frame(d: usize, n: usize, rng: &mut StdRng) -> Frame {
    Frame::from_synthesis(random_complex_matrix(d, n, rng)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_identity(seed in any::<u64>(), d in 1usize..=6, n in 1usize..=10) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_frame(d, n, &mut rng);
        let from_operator = f.potential(PotentialKind::FramePotential).unwrap();
        prop_assert!((from_operator - f.frame_potential_gram()).abs() <= 1e-8 * (1.0 + from_operator));
    }

    #[test]
    fn canonical_dual_is_an_involution(seed in any::<u64>(), d in 1usize..=6, extra in 0usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_frame(d, d + extra, &mut rng);
        let dual = f.canonical_dual().unwrap();
        let back = dual.canonical_dual().unwrap();
        prop_assert!(back.synthesis().sub(f.synthesis()).frobenius_norm() <= 1e-8 * (1.0 + f.synthesis().frobenius_norm()));
        prop_assert!(is_dual(&f, &dual, 1e-8).unwrap());
    }

    #[test]
    fn canonical_dual_operator_is_inverse(seed in any::<u64>(), d in 1usize..=6, extra in 0usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_frame(d, d + extra, &mut rng);
        let s_dual = f.canonical_dual().unwrap().frame_operator().matrix().clone();
        let product = s_dual.matmul(f.frame_operator().matrix());
        prop_assert!(product.sub(&ComplexMatrix::identity(d)).frobenius_norm() <= 1e-8);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), d in 1usize..=4, n in 1usize..=6, real in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let syn = if real { random_real_matrix(d, n, &mut rng) } else { random_complex_matrix(d, n, &mut rng) };
        let f = Frame::from_synthesis(syn).unwrap();
        let text = serde_json::to_string(&FrameJson::from_frame(&f)).unwrap();
        let back: FrameJson = serde_json::from_str(&text).unwrap();
        let back = back.to_frame().unwrap();
        prop_assert_eq!((back.dim(), back.len()), (d, n));
        prop_assert!(back.synthesis().sub(f.synthesis()).frobenius_norm() <= 1e-14 * (1.0 + f.synthesis().frobenius_norm()));
    }

    #[test]
    fn schur_horn_round_trip(seed in any::<u64>(), d in 1usize..=10, k in 1usize..=14) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rank = rng.random_range(1..=d.min(k));
        let mut values = random_spectrum(rank, 0.1, 3.0, &mut rng);
        values.resize(d, 0.0);
        let b = random_psd_with_spectrum(&values, &mut rng);
        let lam_k = b.eigenvalues().resized(k);
        let u = random_unitary(k, &mut rng);
        let beta: Vec<f64> = (0..k)
            .map(|i| (0..k).map(|j| u[(i, j)].norm_sqr() * lam_k.as_slice()[j]).sum::<f64>())
            .collect();
        let counted = unitary_for_diagonal_counted(&lam_k, &beta, 1e-9).unwrap();
        prop_assert!(counted.rotations <= k - 1);
        let g = realize_frame(&b, &beta, 1e-9).unwrap();
        let f = Frame::from_vectors(d, &g).unwrap();
        prop_assert!(f.frame_operator().matrix().sub(b.matrix()).frobenius_norm() <= 1e-8);
        prop_assert!(max_abs_diff(&f.squared_norms(), &beta) <= 1e-9);
    }

    #[test]
    fn norms_are_majorized_by_spectrum(seed in any::<u64>(), d in 1usize..=6, k in 1usize..=10) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_frame(d, k, &mut rng);
        prop_assert!(norms_majorized_by_spectrum(&f.vectors(), 1e-9).unwrap());
    }
}
