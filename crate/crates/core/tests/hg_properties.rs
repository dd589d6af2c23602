use cxi::hgmetrology::{
    bayes_update, default_prior, measurement_model, mmse_estimate, HgConfig, PriorConfig,
    SourceGrid,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(24) })]

    /// `Σ_m p(m) p(φ|m) = p(φ)`.
    #[test]
    fn posteriors_average_back_to_the_prior(theta in -5.0f64..5.0) {
        let prior = default_prior();
        let cfg = HgConfig::default();
        let model = measurement_model(&prior, theta, &cfg).unwrap();
        let mut total = vec![0.0; prior.len()];
        for m in 0..model.n_outcomes() {
            let likelihood = model.likelihood(m);
            let marginal: f64 = likelihood.iter().zip(prior.weights()).map(|(l, w)| l * w).sum();
            if marginal <= 1e-300 {
                continue;
            }
            let post = bayes_update(&prior, &model, m).unwrap();
            prop_assert!(post.weights().iter().all(|w| *w >= 0.0));
            for (t, w) in total.iter_mut().zip(post.weights()) {
                *t += marginal * w;
            }
        }
        for (t, w) in total.iter().zip(prior.weights()) {
            prop_assert!((t - w).abs() < 1e-10);
        }
    }

    #[test]
    fn columns_are_distributions_with_small_overflow(theta in -5.0f64..5.0) {
        let prior = default_prior();
        let model = measurement_model(&prior, theta, &HgConfig::default()).unwrap();
        for i in 0..model.n_phis() {
            let col = model.conditional(i);
            prop_assert!((col.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(col[col.len() - 1] < 0.01);
        }
    }

    #[test]
    fn estimates_stay_inside_the_grid(theta in -3.0f64..3.0, m in 0usize..6) {
        let prior = SourceGrid::two_peak(&PriorConfig::default()).unwrap();
        let model = measurement_model(&prior, theta, &HgConfig::default()).unwrap();
        if let Ok(post) = bayes_update(&prior, &model, m) {
            let est = mmse_estimate(&post);
            prop_assert!((-2.0..=2.0).contains(&est));
        }
    }
}

#[test]
fn coarse_truncations_are_rejected() {
    let cfg = HgConfig { n_modes: 1, ..HgConfig::default() };
    let err = measurement_model(&default_prior(), 0.0, &cfg).unwrap_err();
    assert!(matches!(err, cxi::Error::TruncationInadequate { .. }));
}
