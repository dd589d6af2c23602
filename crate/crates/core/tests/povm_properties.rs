use cxi::infotheory::{ensemble_coherence, Ensemble};
use cxi::povm::{
    dilation_spectrum_defect, naimark_dilate, post_measurement_holevo, povm_coherence,
    povm_cxi_residual, povm_ensemble_coherence, povm_probabilities, Povm,
};
use cxi::qmath::{hermitian_eigenvalues, random, von_neumann_entropy};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup(seed: u64, rank_one: bool) -> (Ensemble, Povm) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.random_range(2..=3);
    let n = rng.random_range(2..=5);
    let prior = random::random_distribution(&mut rng, n);
    let states = (0..n)
        .map(|_| {
            let rank = rng.random_range(1..=dim);
            random::random_density_matrix(&mut rng, dim, rank)
        })
        .collect();
    let e = Ensemble::from_parts(&prior, states).unwrap();
    let p = if rank_one {
        let outcomes = rng.random_range(dim..=4);
        Povm::random_rank_one(&mut rng, dim, outcomes).unwrap()
    } else {
        let outcomes = rng.random_range(2..=4);
        Povm::random(&mut rng, dim, outcomes).unwrap()
    };
    (e, p)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn generator_is_complete_and_effects_are_positive(seed in any::<u64>(), rank_one in any::<bool>()) {
        let (_, p) = setup(seed, rank_one);
        prop_assert!(p.completeness_defect() < 1e-9);
        for e in p.effects() {
            prop_assert!(hermitian_eigenvalues(&e).unwrap()[0] >= -1e-10);
        }
    }

    #[test]
    fn dilation_preserves_norms_statistics_and_spectrum(seed in any::<u64>()) {
        let (e, p) = setup(seed, false);
        let d = naimark_dilate(&p);
        prop_assert!(d.isometry_defect() < 1e-9);
        for entry in e.entries() {
            let direct = povm_probabilities(&entry.state, &p).unwrap();
            let tilde = d.dilate_state(&entry.state).unwrap();
            for (a, b) in direct.weights().iter().zip(d.dilated_probabilities(&tilde)) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            prop_assert!((von_neumann_entropy(&tilde).unwrap() - von_neumann_entropy(&entry.state).unwrap()).abs() < 1e-9);
            prop_assert!(dilation_spectrum_defect(&entry.state, &d).unwrap() < 1e-9);
        }
    }

    #[test]
    fn rank_one_povms_satisfy_the_equality(seed in any::<u64>()) {
        let (e, p) = setup(seed, true);
        prop_assert!(povm_cxi_residual(&e, &p).unwrap().abs() < 1e-9);
    }

    #[test]
    fn general_povms_leave_the_post_measurement_holevo_term(seed in any::<u64>()) {
        let (e, p) = setup(seed, false);
        let extra = post_measurement_holevo(&e, &p).unwrap();
        prop_assert!(extra >= -1e-9);
        prop_assert!((povm_cxi_residual(&e, &p).unwrap() + extra).abs() < 1e-9);
        prop_assert!(povm_ensemble_coherence(&e, &p).unwrap() >= -1e-9);
    }

    #[test]
    fn projective_povms_reduce_to_the_basis_case(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (e, _) = setup(seed, false);
        let basis = random::random_basis(&mut rng, e.dim());
        let p = Povm::from_projective(&basis);
        let direct = ensemble_coherence(&e, &basis).unwrap();
        prop_assert!((povm_ensemble_coherence(&e, &p).unwrap() - direct).abs() < 1e-9);
        let rho = &e.entries()[0].state;
        prop_assert!((povm_coherence(rho, &p).unwrap() - cxi::infotheory::relative_entropy_of_coherence(rho, &basis).unwrap()).abs() < 1e-9);
    }
}
