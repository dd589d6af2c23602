//! Minimum-error projective measurement versus unambiguous discrimination:
//! normalized ensemble coherence and single-shot error across separations.

use cxi::discrimination::{
    helstrom_angle, numeric_min_angle, theta_grid, usd_constant, usd_inconclusive_probability,
    comparison_row, DiscriminationProblem,
};

fn main() -> cxi::Result<()> {
    for theta in [std::f64::consts::PI / 10.0, std::f64::consts::FRAC_PI_2] {
        let problem = DiscriminationProblem::new(theta)?;
        println!(
            "theta = {theta:.4}: minimum-error axis {:.6}, numeric search {:.6}, c = {:.6}, p_? = {:.6}",
            helstrom_angle(theta),
            numeric_min_angle(&problem)?,
            usd_constant(theta)?,
            usd_inconclusive_probability(theta)?
        );
    }
    println!();
    println!("{:>7} {:>8} {:>9} {:>9} {:>9} {:>9} {:>9}", "theta", "chi", "C_proj", "C_usd", "P_err", "P_err usd", "residual");
    for theta in theta_grid(10) {
        let r = comparison_row(theta)?;
        println!(
            "{:>7.4} {:>8.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.1e}",
            r.theta,
            r.chi,
            r.projective_normalized,
            r.usd_normalized,
            r.projective_error,
            r.usd_error,
            r.projective_residual.abs().max(r.usd_residual.abs())
        );
    }
    Ok(())
}
