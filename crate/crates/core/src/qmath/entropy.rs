use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::matrix::{hermitian_eigenvalues, C64};
use super::state::{DensityMatrix, ProbabilityDistribution, ProjectiveMeasurement, STATE_TOL};
use super::sum::NeumaierSum;
use crate::error::{Error, Result};

/// Logarithm base for reported entropies. Everything is computed in nats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl LogBase {
    pub fn from_nats(self, value: f64) -> f64 {
        match self {
            LogBase::Nats => value,
            LogBase::Bits => value / std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Nats => "nats",
            LogBase::Bits => "bits",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.unit())
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "nats" => Ok(LogBase::Nats),
            "bits" => Ok(LogBase::Bits),
            other => Err(format!("unknown log base '{other}' (expected nats or bits)")),
        }
    }
}

/// `-Σ λ ln λ` with `0 ln 0 = 0`. Eigenvalues in `[-1e-10, 0)` count as zero.
pub fn spectral_entropy(values: &[f64]) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    for &v in values {
        if v < -STATE_TOL {
            return Err(Error::NegativeEigenvalue { value: v });
        }
        if v > 0.0 {
            acc.add(-v * v.ln());
        }
    }
    Ok(acc.value().max(0.0))
}

/// Shannon entropy of raw non-negative weights; zero weights contribute nothing.
pub(crate) fn shannon_nats(weights: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for &p in weights {
        if p > 0.0 {
            acc.add(-p * p.ln());
        }
    }
    acc.value().max(0.0)
}

/// `S(rho) = -tr(rho ln rho)` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectral_entropy(&hermitian_eigenvalues(rho.matrix())?)
}

/// `H(p) = -Σ p ln p` in nats.
pub fn shannon_entropy(p: &ProbabilityDistribution) -> f64 {
    shannon_nats(p.weights())
}

/// `<m|rho|m>` for each basis vector, as raw reals.
fn basis_diagonal(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<Vec<f64>> {
    m.check_dim(rho.dim())?;
    let u = m.unitary();
    let r = rho.as_matrix();
    let mut out = Vec::with_capacity(m.dim());
    for k in 0..m.dim() {
        let col = u.column(k);
        let v = r * col;
        let p = col.dotc(&v).re;
        if p < -STATE_TOL {
            return Err(Error::NegativeEigenvalue { value: p });
        }
        out.push(p.max(0.0));
    }
    Ok(out)
}

/// `p_m = tr(Π_m rho)`.
pub fn measurement_probabilities(
    rho: &DensityMatrix,
    m: &ProjectiveMeasurement,
) -> Result<ProbabilityDistribution> {
    ProbabilityDistribution::new(basis_diagonal(rho, m)?)
}

/// `Δ_M[rho] = Σ_m <m|rho|m> |m><m|`.
pub fn decohere(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<DensityMatrix> {
    let diag = basis_diagonal(rho, m)?;
    let u = m.unitary();
    let mut scaled = u.clone();
    for (k, p) in diag.iter().enumerate() {
        scaled.column_mut(k).scale_mut(*p);
    }
    let out: DMatrix<C64> = scaled * u.adjoint();
    Ok(DensityMatrix::from_trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{ComplexSquareMatrix, PureState};
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn up_x() -> PureState {
        PureState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }

    #[test]
    fn maximally_mixed_qubit_has_entropy_ln2() {
        let s = von_neumann_entropy(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((s - LN_2).abs() < 1e-14);
    }

    #[test]
    fn pure_states_have_zero_entropy() {
        let s = von_neumann_entropy(&up_x().density()).unwrap();
        assert!(s.abs() < 1e-14);
    }

    #[test]
    fn two_level_spectrum() {
        let rho = DensityMatrix::new(
            ComplexSquareMatrix::from_real_rows(2, &[0.25, 0.0, 0.0, 0.75]).unwrap(),
        )
        .unwrap();
        // -0.25 ln 0.25 - 0.75 ln 0.75 evaluated independently:
        // 0.25 * 1.3862943611198906 + 0.75 * 0.2876820724517809
        let expected = 0.5623351446188083;
        assert!((von_neumann_entropy(&rho).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn shannon_reference_values() {
        let die = ProbabilityDistribution::uniform(6);
        assert!((shannon_entropy(&die) - 6f64.ln()).abs() < 1e-14);
        let certain = ProbabilityDistribution::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(shannon_entropy(&certain), 0.0);
        let coin = ProbabilityDistribution::new(vec![0.5, 0.5]).unwrap();
        assert!((shannon_entropy(&coin) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn spectral_entropy_clamps_and_rejects() {
        assert_eq!(spectral_entropy(&[-5e-11, 1.0]).unwrap(), 0.0);
        assert!(matches!(
            spectral_entropy(&[-1e-6, 1.0]),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn decohering_up_x_in_z_gives_maximally_mixed() {
        let z = ProjectiveMeasurement::computational(2);
        let d = decohere(&up_x().density(), &z).unwrap();
        assert!(d.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-15);
        let p = measurement_probabilities(&up_x().density(), &z).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn diagonal_state_is_a_fixed_point() {
        let rho = DensityMatrix::new(
            ComplexSquareMatrix::from_real_rows(3, &[0.2, 0.0, 0.0, 0.0, 0.3, 0.0, 0.0, 0.0, 0.5])
                .unwrap(),
        )
        .unwrap();
        let z = ProjectiveMeasurement::computational(3);
        assert!(decohere(&rho, &z).unwrap().max_abs_diff(&rho) < 1e-16);
        let p = measurement_probabilities(&PureState::basis(3, 1).density(), &z).unwrap();
        assert_eq!(p.weights(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let z = ProjectiveMeasurement::computational(3);
        assert!(matches!(
            decohere(&up_x().density(), &z),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn log_base_conversion() {
        assert_eq!(LogBase::Bits.from_nats(LN_2), 1.0);
        assert_eq!(LogBase::Nats.from_nats(0.3), 0.3);
        assert_eq!("bits".parse::<LogBase>().unwrap(), LogBase::Bits);
        assert!("decibels".parse::<LogBase>().is_err());
    }
}
