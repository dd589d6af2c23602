//! Monte-Carlo AMSE of fixed and greedy adaptive shifts.
//!
//! Usage: `hg_adaptive [sequences] [measurements] [seed]`

use std::time::Instant;

use cxi::hgmetrology::{
    coherence_vs_shift, default_prior, positive_optima, shift_grid, simulate_amse, HgConfig,
    SimulationConfig, Strategy,
};

fn main() -> cxi::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let sim = SimulationConfig {
        n_sequences: args.first().copied().unwrap_or(60) as usize,
        n_measurements: args.get(1).copied().unwrap_or(100) as usize,
        ..SimulationConfig::default()
    };
    let seed = args.get(2).copied().unwrap_or(1);
    let hg = HgConfig::default();
    let prior = default_prior();

    let curve = coherence_vs_shift(&prior, &shift_grid(-5.0, 5.0, 0.05)?, &hg)?;
    let (opt1, opt2) = positive_optima(&curve)?;
    let strategies = [
        Strategy::Constant(0.0),
        Strategy::Constant(0.5),
        Strategy::Constant(opt1),
        Strategy::Constant(opt2),
        Strategy::Adaptive,
    ];

    let k = sim.n_measurements;
    println!("{:<14} {:>10} {:>10} {:>10} {:>8}", "strategy", "k=1", format!("k={}", k / 2), format!("k={k}"), "secs");
    for s in strategies {
        let start = Instant::now();
        let amse = simulate_amse(s, &sim, &prior, &hg, seed)?;
        println!(
            "{:<14} {:>10.5} {:>10.5} {:>10.5} {:>8.1}",
            s.to_string(),
            amse.at(1),
            amse.at(k / 2),
            amse.final_mean(),
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
