//! Entropies, decoherence and the relative entropy of coherence for a few
//! qubit states, in nats and bits.

use cxi::infotheory::relative_entropy_of_coherence;
use cxi::qmath::{
    decohere, measurement_probabilities, shannon_entropy, von_neumann_entropy, DensityMatrix,
    LogBase, ProjectiveMeasurement, PureState,
};

fn main() -> cxi::Result<()> {
    let z = ProjectiveMeasurement::computational(2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let states = [
        ("|0>", PureState::from_real(&[1.0, 0.0])?.density()),
        ("|+>", PureState::from_real(&[h, h])?.density()),
        ("cos(pi/8)|0> + sin(pi/8)|1>", {
            let a = std::f64::consts::FRAC_PI_8;
            PureState::from_real(&[a.cos(), a.sin()])?.density()
        }),
        ("I/2", DensityMatrix::maximally_mixed(2)),
    ];
    println!("{:<30} {:>8} {:>8} {:>10} {:>10}", "state", "S", "H(Z)", "C_Z nats", "C_Z bits");
    for (name, rho) in &states {
        let s = von_neumann_entropy(rho)?;
        let hz = shannon_entropy(&measurement_probabilities(rho, &z)?);
        let c = relative_entropy_of_coherence(rho, &z)?;
        // S(Δ[ρ]) equals the Shannon entropy of the outcomes.
        assert!((von_neumann_entropy(&decohere(rho, &z)?)? - hz).abs() < 1e-12);
        println!("{name:<30} {s:>8.4} {hz:>8.4} {c:>10.4} {:>10.4}", LogBase::Bits.from_nats(c));
    }
    Ok(())
}
