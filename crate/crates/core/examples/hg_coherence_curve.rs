//! Coherence of the two-peak prior against the mode shift, its local minima,
//! and the same curve after one measurement.

use cxi::hgmetrology::{
    bayes_update, coherence_vs_shift, default_prior, measurement_model, positive_optima,
    shift_grid, HgConfig,
};

fn main() -> cxi::Result<()> {
    let cfg = HgConfig::default();
    let prior = default_prior();
    let thetas = shift_grid(-5.0, 5.0, 0.05)?;
    let curve = coherence_vs_shift(&prior, &thetas, &cfg)?;

    let at_zero = curve.value_at(0.0).expect("0 is on the grid");
    println!("C(0) = {at_zero:.4} nats, chi = {:.4} nats", curve.points[0].holevo);
    println!("asymmetry {:.2e}", curve.asymmetry());
    for p in curve.local_minima() {
        println!("local minimum at {:+.2}: {:.4}", p.theta, p.coherence);
    }
    let (opt1, opt2) = positive_optima(&curve)?;
    println!("opt1 = {opt1}, opt2 = {opt2}");

    // One photon in mode 2 at the first optimum breaks the mirror symmetry.
    let post = bayes_update(&prior, &measurement_model(&prior, opt1, &cfg)?, 2)?;
    let post_curve = coherence_vs_shift(&post, &thetas, &cfg)?;
    let best = post_curve.global_min().expect("non-empty");
    println!("after h_2 at {opt1}: minimum {:.4} at {:+.2}", best.coherence, best.theta);
    for p in post_curve.local_minima() {
        println!("  local minimum at {:+.2}: {:.4}", p.theta, p.coherence);
    }
    Ok(())
}
