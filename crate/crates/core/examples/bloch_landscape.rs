//! Normalized coherence over every projective qubit basis for two pure
//! states at separation θ, written as CSV to stdout.
//!
//! Usage: `bloch_landscape [theta] [n_polar] [n_azimuth]`.

use cxi::discrimination::{
    coherence_landscape, helstrom_direction, landscape_argmin, DiscriminationProblem,
};

fn main() -> cxi::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let theta = arg(0, std::f64::consts::FRAC_PI_2);
    let grid = (arg(1, 37.0) as usize, arg(2, 18.0) as usize);

    let problem = DiscriminationProblem::new(theta)?;
    let samples = coherence_landscape(&problem, grid)?;
    println!("polar,azimuth,coherence,normalized");
    for s in &samples {
        println!("{:.6},{:.6},{:.9},{:.9}", s.direction.polar(), s.direction.azimuth(), s.coherence, s.normalized);
    }
    let best = landscape_argmin(&samples).expect("non-empty grid");
    eprintln!(
        "chi = {:.6}; grid minimum {:.6} at polar {:.4}, azimuth {:.4}; {:.2e} rad from the minimum-error axis",
        problem.holevo()?,
        best.normalized,
        best.direction.polar(),
        best.direction.azimuth(),
        best.direction.axis_angle(&helstrom_direction(theta))
    );
    Ok(())
}
