//! Ensemble coherence against Holevo minus mutual information for random
//! ensembles and bases, plus the same check for a fixed qubit example.

use cxi::infotheory::{
    cxi_residual, ensemble_coherence, holevo_information, mutual_information, Ensemble,
};
use cxi::qmath::{random, ProbabilityDistribution, ProjectiveMeasurement, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> cxi::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e = Ensemble::from_parts(
        &ProbabilityDistribution::uniform(2),
        vec![PureState::from_real(&[1.0, 0.0])?.density(), PureState::from_real(&[h, h])?.density()],
    )?;
    let z = ProjectiveMeasurement::computational(2);
    let (c, chi, i) = (ensemble_coherence(&e, &z)?, holevo_information(&e)?, mutual_information(&e, &z)?);
    println!("{{|0>, |+>}} in Z: C = {c:.6}, chi = {chi:.6}, I = {i:.6}, chi - I = {:.6}", chi - i);

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let dim = rng.random_range(2..=4);
        let n = rng.random_range(2..=5);
        let prior = random::random_distribution(&mut rng, n);
        let states = (0..n)
            .map(|_| {
                let rank = rng.random_range(1..=dim);
                random::random_density_matrix(&mut rng, dim, rank)
            })
            .collect();
        let e = Ensemble::from_parts(&prior, states)?;
        let basis = random::random_basis(&mut rng, dim);
        worst = worst.max(cxi_residual(&e, &basis)?.abs());
    }
    println!("200 random ensembles: max |C - (chi - I)| = {worst:.2e}");
    Ok(())
}
