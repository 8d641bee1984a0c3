mod common;

use common::*;
use optframe::completion::{optimal_b, optimal_b_in_basis};
use optframe::majorization::majorizes;
use optframe::{complete, plan, CompletionProblem, ComplexMatrix, Frame, FrameError, PotentialKind, C64};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A random frame, a number `k` of added vectors and norms `β` built to be feasible.
fn feasible_instance(seed: u64) -> (StdRng, CompletionProblem) {
    let mut rng = StdRng::seed_from_u64(seed);
    let d = rng.random_range(2..=6);
    let k = rng.random_range(1..=d + 3);
    let n0 = rng.random_range(d..=d + 4);
    let mut values = random_spectrum(d, 0.5, 4.0, &mut rng);
    if rng.random_bool(0.3) {
        values[1] = values[0];
    }
    let f0 = frame_with_operator_spectrum(&values, n0, &mut rng);
    let total = 0.5 + 4.0 * rng.random::<f64>();
    let probe = CompletionProblem::new(f0.clone(), vec![total / k as f64; k]).unwrap();
    let mut mu = plan(&probe).unwrap().mu_hat;
    mu.resize(k, 0.0);
    // diagonals of unitary conjugates of diag(μ̂) are exactly the vectors majorized by μ̂
    let u = random_unitary(k, &mut rng);
    let beta: Vec<f64> = (0..k).map(|i| (0..k).map(|j| u[(i, j)].norm_sqr() * mu[j]).sum::<f64>()).collect();
    (rng, CompletionProblem::new(f0, beta).unwrap())
}

/// Eigenvectors of `S₀` re-randomized inside each eigenspace.
fn rotated_eigenbasis(vectors: &ComplexMatrix, lambda: &[f64], rng: &mut StdRng) -> ComplexMatrix {
    let d = lambda.len();
    let mut out = vectors.clone();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (lambda[end] - lambda[start]).abs() <= 1e-9 * (1.0 + lambda[0]) {
            end += 1;
        }
        let size = end - start;
        let u = random_unitary(size, rng);
        for a in 0..d {
            for j in 0..size {
                out[(a, start + j)] = (0..size).map(|i| vectors[(a, start + i)] * u[(i, j)]).sum::<C64>();
            }
        }
        start = end;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn optimal_completion_has_spectrum_nu_and_norms_beta(seed in any::<u64>()) {
        let (_, problem) = feasible_instance(seed);
        let result = complete(&problem).unwrap();
        prop_assert!(result.feasible());
        let completed = result.completed.unwrap();
        let spectrum = completed.frame_operator().eigenvalues().as_slice().to_vec();
        prop_assert!(max_abs_diff(&spectrum, result.plan.nu.as_slice()) <= 1e-8);
        prop_assert!(max_abs_diff(&result.f1.unwrap().squared_norms(), problem.beta()) <= 1e-8);
    }

    #[test]
    fn optimal_spectrum_is_majorized_by_alternatives(seed in any::<u64>()) {
        let (mut rng, problem) = feasible_instance(seed);
        let result = complete(&problem).unwrap();
        let nu = result.plan.nu.as_slice().to_vec();
        let d = problem.f0().dim();
        for _ in 0..30 {
            let g = random_vectors_with_norms(d, problem.beta(), &mut rng);
            let alt = problem.f0().concat(&Frame::from_vectors(d, &g).unwrap()).unwrap();
            let spectrum = alt.frame_operator().eigenvalues().as_slice().to_vec();
            prop_assert!(majorizes(&spectrum, &nu, 1e-9 * (1.0 + problem.t())).unwrap());
        }
    }

    #[test]
    fn unique_flag_means_basis_independent_b(seed in any::<u64>()) {
        let (mut rng, problem) = feasible_instance(seed);
        let p = plan(&problem).unwrap();
        let s0 = problem.f0().frame_operator();
        let b = optimal_b(s0, &p).unwrap();
        let rotated = rotated_eigenbasis(s0.eigenvectors(), s0.eigenvalues().as_slice(), &mut rng);
        let other = optimal_b_in_basis(&rotated, &p).unwrap();
        // either way S₀ + B has spectrum ν
        prop_assert!(max_abs_diff(&spectrum_of(&s0.matrix().add(other.matrix())), p.nu.as_slice()) <= 1e-8);
        if p.unique_b {
            prop_assert!(b.matrix().sub(other.matrix()).frobenius_norm() <= 1e-8);
        }
    }
}

#[test]
fn non_unique_example_depends_on_the_basis() {
    let lambda = [7.0, 4.0, 4.0, 3.0, 1.0];
    let problem = CompletionProblem::new(frame_with_spectrum(&lambda, 6), vec![2.0, 2.0, 1.0]).unwrap();
    let p = plan(&problem).unwrap();
    assert!(!p.unique_b);
    let s0 = problem.f0().frame_operator();
    let b = optimal_b(s0, &p).unwrap();
    let mut rng = StdRng::seed_from_u64(3);
    let other = optimal_b_in_basis(&rotated_eigenbasis(s0.eigenvectors(), &lambda, &mut rng), &p).unwrap();
    assert!(b.matrix().sub(other.matrix()).frobenius_norm() > 1e-3);
}

#[test]
fn worked_example_potentials() {
    let hand_fp = 81.0 + 25.0 + 2.0 * 4.25 * 4.25 + 16.0;
    let hand_mse = 1.0 / 9.0 + 1.0 / 5.0 + 2.0 / 4.25 + 1.0 / 4.0;

    // same spectrum as the printed frame, without the 4-digit rounding
    let exact = frame_with_spectrum(&[9.0, 5.0, 4.0, 2.0, 1.0], 7);
    let result = complete(&CompletionProblem::new(exact, vec![3.0, 2.5]).unwrap()).unwrap();
    assert!((result.lower_bounds.fp - hand_fp).abs() < 1e-9);
    assert!((result.lower_bounds.mse.unwrap() - hand_mse).abs() < 1e-9);
    let fp = result.completed.unwrap().potential(PotentialKind::FramePotential).unwrap();
    assert!((fp - hand_fp).abs() < 1e-3, "{fp}");

    // printed frame: eigenvalues are off by up to 2e-4, so FP moves by a few 1e-3
    let f0 = load_frame("completion_f0.json");
    let result = complete(&CompletionProblem::new(f0.clone(), vec![3.0, 2.5]).unwrap()).unwrap();
    let fp = result.completed.unwrap().potential(PotentialKind::FramePotential).unwrap();
    assert!((fp - hand_fp).abs() < 1e-2, "{fp}");
    assert!((fp - result.lower_bounds.fp).abs() < 1e-9);

    let infeasible = complete(&CompletionProblem::new(f0, vec![3.5, 2.0]).unwrap()).unwrap();
    assert!(!infeasible.feasible());
    assert!(infeasible.completed.is_none());
    assert_eq!(infeasible.plan.nu.len(), 5);
}

#[test]
fn too_few_vectors_for_a_singular_operator() {
    // S₀ of rank 2 in C^4 needs at least two added vectors to span
    let f0 = Frame::from_real_synthesis(4, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    assert!(matches!(CompletionProblem::new(f0, vec![1.0]), Err(FrameError::RankDeficient { .. })));
}
