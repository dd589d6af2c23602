//! Naimark dilation of random POVMs: isometry and statistics checks, and how
//! the ensemble coherence compares with Holevo minus mutual information.
//!
//! With full-rank Kraus operators the post-measurement states still carry
//! information about the parameter; that term closes the gap exactly.

use cxi::infotheory::{holevo_information, Ensemble};
use cxi::povm::{
    naimark_dilate, post_measurement_holevo, povm_cxi_residual, povm_ensemble_coherence,
    povm_mutual_information, povm_probabilities, Povm,
};
use cxi::qmath::random;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cxi::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!("{:<10} {:>3} {:>3} {:>10} {:>10} {:>10} {:>10} {:>10}", "family", "d", "N", "C", "chi - I", "residual", "post chi", "isometry");
    for (family, dim, outcomes) in [("general", 2, 3), ("general", 3, 4), ("rank-one", 2, 3), ("rank-one", 3, 4)] {
        let prior = random::random_distribution(&mut rng, 3);
        let states = (0..3).map(|_| random::random_density_matrix(&mut rng, dim, dim)).collect();
        let e = Ensemble::from_parts(&prior, states)?;
        let p = if family == "general" {
            Povm::random(&mut rng, dim, outcomes)?
        } else {
            Povm::random_rank_one(&mut rng, dim, outcomes)?
        };
        let d = naimark_dilate(&p);
        let rho = &e.entries()[0].state;
        let direct = povm_probabilities(rho, &p)?;
        let dilated = d.dilated_probabilities(&d.dilate_state(rho)?);
        let stats = direct.weights().iter().zip(&dilated).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(stats < 1e-10);

        let c = povm_ensemble_coherence(&e, &p)?;
        let gap = holevo_information(&e)? - povm_mutual_information(&e, &p)?;
        println!(
            "{family:<10} {dim:>3} {outcomes:>3} {c:>10.6} {gap:>10.6} {:>10.2e} {:>10.6} {:>10.2e}",
            povm_cxi_residual(&e, &p)?,
            post_measurement_holevo(&e, &p)?,
            d.isometry_defect()
        );
    }
    Ok(())
}
