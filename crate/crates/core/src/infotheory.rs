//! Holevo information, measurement mutual information, relative entropy of
//! coherence and the ensemble coherence of a projective measurement.
//!
//! For an ensemble `{(p_φ, ρ_φ)}` measured in a basis `M` these quantities are
//! tied together by `C_M(E) = χ(E) - I(Φ;M)`. [`cxi_residual`] evaluates the
//! two sides along independent routes:
//!
//! * `C_M(E)` from coherences `S(Δ[ρ]) - S(ρ)` of every state and of the mixture,
//! * `χ(E)` from von Neumann entropies of the states and the mixture,
//! * `I(Φ;M)` from Shannon entropies of outcome distributions.

use crate::error::{Error, Result};
use crate::qmath::{
    decohere, hermitian_eigensystem, measurement_probabilities, shannon_entropy,
    von_neumann_entropy, DensityMatrix, MatrixSum, NeumaierSum, ProbabilityDistribution,
    ProjectiveMeasurement,
};

/// One `(label, probability, state)` member of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEntry {
    /// Parameter value `φ`. Opaque to every computation; duplicates are allowed.
    pub label: f64,
    pub probability: f64,
    pub state: DensityMatrix,
}

/// A parameter-indexed family of states `{(φ, p_Φ(φ), ρ_φ)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    entries: Vec<EnsembleEntry>,
    prior: ProbabilityDistribution,
}

impl Ensemble {
    pub fn new(entries: Vec<EnsembleEntry>) -> Result<Self> {
        let dim = entries.first().map(|e| e.state.dim()).ok_or(Error::EmptyEnsemble)?;
        for e in &entries {
            if e.state.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.state.dim() });
            }
        }
        let prior = ProbabilityDistribution::new(entries.iter().map(|e| e.probability).collect())?;
        Ok(Self { entries, prior })
    }

    /// Pairs states with a prior; labels are the entry indices.
    pub fn from_parts(prior: &ProbabilityDistribution, states: Vec<DensityMatrix>) -> Result<Self> {
        if prior.len() != states.len() {
            return Err(Error::DimensionMismatch { expected: prior.len(), found: states.len() });
        }
        let entries = states
            .into_iter()
            .enumerate()
            .map(|(i, state)| EnsembleEntry { label: i as f64, probability: prior[i], state })
            .collect();
        Self::new(entries)
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].state.dim()
    }

    pub fn prior(&self) -> &ProbabilityDistribution {
        &self.prior
    }

    /// Entropy of the parameter, `H(Φ)`.
    pub fn label_entropy(&self) -> f64 {
        shannon_entropy(&self.prior)
    }

    /// New ensemble with the same weights and every state mapped by `f`.
    pub fn map_states(&self, f: impl Fn(&DensityMatrix) -> Result<DensityMatrix>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok(EnsembleEntry { label: e.label, probability: e.probability, state: f(&e.state)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// `Σ_φ p(φ) f(ρ_φ)` with compensated accumulation.
    pub(crate) fn weighted_sum(&self, f: impl Fn(&DensityMatrix) -> Result<f64>) -> Result<f64> {
        let mut acc = NeumaierSum::new();
        for e in &self.entries {
            acc.add(e.probability * f(&e.state)?);
        }
        Ok(acc.value())
    }
}

/// `ρ_Φ = Σ_φ p(φ) ρ_φ`.
pub fn ensemble_state(e: &Ensemble) -> DensityMatrix {
    let d = e.dim();
    let mut acc = MatrixSum::new(d, d);
    for entry in e.entries() {
        acc.add_scaled(entry.probability, entry.state.as_matrix());
    }
    DensityMatrix::from_trusted(acc.value())
}

/// `χ(E) = S(ρ_Φ) - Σ_φ p(φ) S(ρ_φ)`.
pub fn holevo_information(e: &Ensemble) -> Result<f64> {
    let mixture = von_neumann_entropy(&ensemble_state(e))?;
    let average = e.weighted_sum(von_neumann_entropy)?;
    Ok(mixture - average)
}

/// `H(M|Φ) = Σ_φ p(φ) H(p_{M|φ})`.
pub fn conditional_measurement_entropy(e: &Ensemble, m: &ProjectiveMeasurement) -> Result<f64> {
    m.check_dim(e.dim())?;
    e.weighted_sum(|rho| Ok(shannon_entropy(&measurement_probabilities(rho, m)?)))
}

/// `I(Φ;M) = H(M) - H(M|Φ)`, with `H(M)` taken on the ensemble state.
pub fn mutual_information(e: &Ensemble, m: &ProjectiveMeasurement) -> Result<f64> {
    m.check_dim(e.dim())?;
    let marginal = shannon_entropy(&measurement_probabilities(&ensemble_state(e), m)?);
    Ok(marginal - conditional_measurement_entropy(e, m)?)
}

/// `C_M(ρ) = S(Δ_M[ρ]) - S(ρ)`.
pub fn relative_entropy_of_coherence(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<f64> {
    Ok(von_neumann_entropy(&decohere(rho, m)?)? - von_neumann_entropy(rho)?)
}

/// `C_M(E) = Σ_φ p(φ) C_M(ρ_φ) - C_M(ρ_Φ)`.
pub fn ensemble_coherence(e: &Ensemble, m: &ProjectiveMeasurement) -> Result<f64> {
    m.check_dim(e.dim())?;
    let average = e.weighted_sum(|rho| relative_entropy_of_coherence(rho, m))?;
    Ok(average - relative_entropy_of_coherence(&ensemble_state(e), m)?)
}

/// `C_M(E) - (χ(E) - I(Φ;M))`; zero up to rounding for every valid input.
pub fn cxi_residual(e: &Ensemble, m: &ProjectiveMeasurement) -> Result<f64> {
    let c = ensemble_coherence(e, m)?;
    let chi = holevo_information(e)?;
    let i = mutual_information(e, m)?;
    Ok(c - (chi - i))
}

/// Support threshold used when taking logarithms of singular operators.
pub const SUPPORT_FLOOR: f64 = 1e-12;

/// Umegaki relative entropy `tr(ρ ln ρ) - tr(ρ ln σ)`.
///
/// Returns `None` when the support of `ρ` is not contained in the support of
/// `σ` (eigenvalue floor `1e-12`), where the quantity is infinite.
pub fn quantum_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Option<f64>> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let er = hermitian_eigensystem(rho.matrix())?;
    let es = hermitian_eigensystem(sigma.matrix())?;

    // tr(ρ ln σ) = Σ_k ln s_k <s_k|ρ|s_k>; any weight of ρ on the kernel of σ is fatal.
    let mut cross = NeumaierSum::new();
    for (k, &s) in es.values.iter().enumerate() {
        let v = es.vectors.column(k);
        let w = v.dotc(&(rho.as_matrix() * v)).re;
        if s > SUPPORT_FLOOR {
            cross.add(w * s.ln());
        } else if w > SUPPORT_FLOOR {
            return Ok(None);
        }
    }
    let mut self_term = NeumaierSum::new();
    for &r in &er.values {
        if r > 0.0 {
            self_term.add(r * r.ln());
        }
    }
    Ok(Some(self_term.value() - cross.value()))
}
