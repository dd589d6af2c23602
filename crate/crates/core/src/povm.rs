//! Generalized measurements stored as Kraus operators, their Naimark
//! dilation, and the coherence of a state relative to a POVM.
//!
//! The dilated space has dimension `dim * N` and is indexed with the system
//! index major and the ancilla index minor: basis vector `|i>|j>` sits at
//! position `i * N + j`.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::infotheory::{holevo_information, ensemble_state, Ensemble};
use crate::qmath::{
    hermitian_eigenvalues, positive_inverse_sqrt, psd_sqrt, random::ginibre, shannon_nats,
    von_neumann_entropy, ComplexSquareMatrix, DensityMatrix, MatrixSum, NeumaierSum,
    ProbabilityDistribution, ProjectiveMeasurement, C64, STATE_TOL,
};

/// Completeness tolerance for `Σ M_j†M_j = I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Outcome probabilities below this cannot be conditioned on.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    kraus: Vec<DMatrix<C64>>,
}

fn completeness_defect(dim: usize, kraus: &[DMatrix<C64>]) -> f64 {
    let mut acc = MatrixSum::new(dim, dim);
    for m in kraus {
        acc.add_scaled(1.0, &(m.adjoint() * m));
    }
    let sum = acc.value() - DMatrix::<C64>::identity(dim, dim);
    sum.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl Povm {
    pub fn from_kraus(kraus: Vec<ComplexSquareMatrix>) -> Result<Self> {
        let p = Self::from_kraus_unchecked(kraus)?;
        let defect = completeness_defect(p.dim, &p.kraus);
        if defect > COMPLETENESS_TOL {
            return Err(Error::IncompletePovm { defect });
        }
        Ok(p)
    }

    /// Checks shapes only. Used to feed deliberately broken measurements to
    /// the invariant checks; everything downstream assumes completeness.
    pub fn from_kraus_unchecked(kraus: Vec<ComplexSquareMatrix>) -> Result<Self> {
        let dim = kraus.first().map(ComplexSquareMatrix::dim).ok_or(Error::EmptyMatrix)?;
        let mut ops = Vec::with_capacity(kraus.len());
        for k in kraus {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: k.dim() });
            }
            ops.push(k.into_matrix());
        }
        Ok(Self { dim, kraus: ops })
    }

    /// Imports effects `E_j` through their positive square roots.
    pub fn from_effects(effects: &[ComplexSquareMatrix]) -> Result<Self> {
        let kraus = effects
            .iter()
            .map(|e| psd_sqrt(e, STATE_TOL))
            .collect::<Result<Vec<_>>>()?;
        Self::from_kraus(kraus)
    }

    pub fn from_projective(m: &ProjectiveMeasurement) -> Self {
        let kraus = (0..m.dim()).map(|k| m.projector(k).into_matrix()).collect();
        Self { dim: m.dim(), kraus }
    }

    /// `{I}`: a single outcome that reveals nothing.
    pub fn trivial(dim: usize) -> Self {
        Self { dim, kraus: vec![DMatrix::identity(dim, dim)] }
    }

    /// `M_j = A_j (Σ_k A_k†A_k)^{-1/2}` with Ginibre `A_j`.
    pub fn random(rng: &mut impl Rng, dim: usize, outcomes: usize) -> Result<Self> {
        if dim == 0 || outcomes == 0 {
            return Err(Error::InvalidParameter("POVM needs dim >= 1 and at least one outcome".into()));
        }
        let a: Vec<DMatrix<C64>> = (0..outcomes).map(|_| ginibre(rng, dim, dim)).collect();
        Self::normalized(dim, a)
    }

    /// Same normalization with rank-one `A_j = |a_j><b_j|`, so every Kraus
    /// operator has rank one. Needs `outcomes >= dim`.
    pub fn random_rank_one(rng: &mut impl Rng, dim: usize, outcomes: usize) -> Result<Self> {
        if dim == 0 || outcomes < dim {
            return Err(Error::InvalidParameter(format!(
                "rank-one POVM on dimension {dim} needs at least {dim} outcomes, got {outcomes}"
            )));
        }
        let a: Vec<DMatrix<C64>> = (0..outcomes)
            .map(|_| ginibre(rng, dim, 1) * ginibre(rng, dim, 1).adjoint())
            .collect();
        Self::normalized(dim, a)
    }

    fn normalized(dim: usize, a: Vec<DMatrix<C64>>) -> Result<Self> {
        let mut acc = MatrixSum::new(dim, dim);
        for aj in &a {
            acc.add_scaled(1.0, &(aj.adjoint() * aj));
        }
        let norm = positive_inverse_sqrt(&ComplexSquareMatrix::new(acc.value())?)?;
        let kraus = a
            .iter()
            .map(|aj| ComplexSquareMatrix::new(aj * norm.as_matrix()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_kraus(kraus)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[DMatrix<C64>] {
        &self.kraus
    }

    /// `E_j = M_j†M_j`.
    pub fn effects(&self) -> Vec<ComplexSquareMatrix> {
        self.kraus
            .iter()
            .map(|m| {
                ComplexSquareMatrix::new(m.adjoint() * m)
                    .expect("finite square product")
                    .hermitian_part()
            })
            .collect()
    }

    /// `max |Σ M_j†M_j - I|`.
    pub fn completeness_defect(&self) -> f64 {
        completeness_defect(self.dim, &self.kraus)
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: dim });
        }
        Ok(())
    }

    fn raw_probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        self.check_dim(rho.dim())?;
        let r = rho.as_matrix();
        let mut out = Vec::with_capacity(self.outcomes());
        for m in &self.kraus {
            let p = (m * r * m.adjoint()).trace().re;
            if p < -STATE_TOL {
                return Err(Error::NegativeEigenvalue { value: p });
            }
            out.push(p.max(0.0));
        }
        Ok(out)
    }

    /// `ρ_j = M_j ρ M_j† / p_j`.
    pub fn post_measurement_state(&self, rho: &DensityMatrix, outcome: usize) -> Result<DensityMatrix> {
        self.check_dim(rho.dim())?;
        let m = self.kraus.get(outcome).ok_or(Error::OutcomeOutOfRange {
            outcome,
            count: self.outcomes(),
        })?;
        let unnormalized = m * rho.as_matrix() * m.adjoint();
        let probability = unnormalized.trace().re;
        if probability < MIN_OUTCOME_PROBABILITY {
            return Err(Error::ZeroProbabilityOutcome { outcome, probability });
        }
        Ok(DensityMatrix::from_trusted(unnormalized / C64::new(probability, 0.0)))
    }
}

/// `p_j = tr(ρ M_j†M_j)`.
pub fn povm_probabilities(rho: &DensityMatrix, p: &Povm) -> Result<ProbabilityDistribution> {
    ProbabilityDistribution::new(p.raw_probabilities(rho)?)
}

/// Isometry `V = Σ_j M_j ⊗ |j>` into the system-ancilla space.
#[derive(Debug, Clone, PartialEq)]
pub struct NaimarkDilation {
    dim: usize,
    outcomes: usize,
    isometry: DMatrix<C64>,
}

pub fn naimark_dilate(p: &Povm) -> NaimarkDilation {
    let (d, n) = (p.dim, p.outcomes());
    let mut v = DMatrix::<C64>::zeros(d * n, d);
    for (j, m) in p.kraus.iter().enumerate() {
        for i in 0..d {
            for c in 0..d {
                v[(i * n + j, c)] = m[(i, c)];
            }
        }
    }
    NaimarkDilation { dim: d, outcomes: n, isometry: v }
}

impl NaimarkDilation {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn dilated_dim(&self) -> usize {
        self.dim * self.outcomes
    }

    pub fn isometry(&self) -> &DMatrix<C64> {
        &self.isometry
    }

    /// `max |V†V - I|`.
    pub fn isometry_defect(&self) -> f64 {
        let g = self.isometry.adjoint() * &self.isometry - DMatrix::<C64>::identity(self.dim, self.dim);
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `I ⊗ |j><j|` on the dilated space.
    pub fn dilated_projector(&self, j: usize) -> DMatrix<C64> {
        let n = self.dilated_dim();
        DMatrix::from_fn(n, n, |r, c| {
            if r == c && r % self.outcomes == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn dilated_projectors(&self) -> Vec<DMatrix<C64>> {
        (0..self.outcomes).map(|j| self.dilated_projector(j)).collect()
    }

    /// `ρ̃ = V ρ V†`.
    pub fn dilate_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rho.dim() });
        }
        Ok(DensityMatrix::from_trusted(&self.isometry * rho.as_matrix() * self.isometry.adjoint()))
    }

    /// Block diagonal of `ρ̃`: `Σ_j (I⊗|j><j|) ρ̃ (I⊗|j><j|)`.
    pub fn block_dephase(&self, rho_tilde: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.dilated_dim();
        if rho_tilde.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rho_tilde.dim() });
        }
        let r = rho_tilde.as_matrix();
        let out = DMatrix::from_fn(n, n, |a, b| {
            if a % self.outcomes == b % self.outcomes {
                r[(a, b)]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Ok(DensityMatrix::from_trusted(out))
    }

    /// `tr(ρ̃ (I⊗|j><j|))` for every `j`.
    pub fn dilated_probabilities(&self, rho_tilde: &DensityMatrix) -> Vec<f64> {
        let r = rho_tilde.as_matrix();
        let mut out = vec![NeumaierSum::new(); self.outcomes];
        for a in 0..self.dilated_dim() {
            out[a % self.outcomes].add(r[(a, a)].re);
        }
        out.iter().map(|s| s.value()).collect()
    }

    /// The dilated ensemble `{(p_φ, V ρ_φ V†)}`.
    pub fn dilate_ensemble(&self, e: &Ensemble) -> Result<Ensemble> {
        e.map_states(|rho| self.dilate_state(rho))
    }
}

/// `S(Σ_j M̃_j ρ̃ M̃_j†) - S(ρ̃)` on the dilated space.
pub fn povm_coherence(rho: &DensityMatrix, p: &Povm) -> Result<f64> {
    p.check_dim(rho.dim())?;
    let d = naimark_dilate(p);
    let rho_tilde = d.dilate_state(rho)?;
    coherence_of_dilated(&d, &rho_tilde)
}

fn coherence_of_dilated(d: &NaimarkDilation, rho_tilde: &DensityMatrix) -> Result<f64> {
    Ok(von_neumann_entropy(&d.block_dephase(rho_tilde)?)? - von_neumann_entropy(rho_tilde)?)
}

/// `Σ_φ p(φ) C_M(ρ_φ) - C_M(ρ_Φ)` for a POVM.
pub fn povm_ensemble_coherence(e: &Ensemble, p: &Povm) -> Result<f64> {
    p.check_dim(e.dim())?;
    let d = naimark_dilate(p);
    let average = e.weighted_sum(|rho| coherence_of_dilated(&d, &d.dilate_state(rho)?))?;
    let mixture = coherence_of_dilated(&d, &d.dilate_state(&ensemble_state(e))?)?;
    Ok(average - mixture)
}

/// `I(Φ;M) = H(M) - H(M|Φ)` from POVM outcome probabilities.
pub fn povm_mutual_information(e: &Ensemble, p: &Povm) -> Result<f64> {
    p.check_dim(e.dim())?;
    let marginal = shannon_nats(&p.raw_probabilities(&ensemble_state(e))?);
    let conditional = e.weighted_sum(|rho| Ok(shannon_nats(&p.raw_probabilities(rho)?)))?;
    Ok(marginal - conditional)
}

/// `C_M(E) - (χ(E) - I(Φ;M))` for a POVM.
pub fn povm_cxi_residual(e: &Ensemble, p: &Povm) -> Result<f64> {
    let c = povm_ensemble_coherence(e, p)?;
    Ok(c - (holevo_information(e)? - povm_mutual_information(e, p)?))
}

/// `Σ_j p_j χ(E_j)`, where `E_j` is the ensemble left behind after outcome `j`:
/// states `M_j ρ_φ M_j† / p(j|φ)` with weights `p(φ|j)`.
///
/// Block dephasing keeps whatever the post-measurement states still say about
/// the parameter, so for any POVM `C_M(E) = χ(E) − I(Φ;M) − post_measurement_holevo`.
/// The term vanishes when every Kraus operator has rank one.
pub fn post_measurement_holevo(e: &Ensemble, p: &Povm) -> Result<f64> {
    p.check_dim(e.dim())?;
    let mut total = NeumaierSum::new();
    for m in &p.kraus {
        let unnormalized = m * ensemble_state(e).as_matrix() * m.adjoint();
        let pj = unnormalized.trace().re;
        if pj < MIN_OUTCOME_PROBABILITY {
            continue;
        }
        let mixture = DensityMatrix::from_trusted(unnormalized / C64::new(pj, 0.0));
        total.add(pj * von_neumann_entropy(&mixture)?);
        for entry in e.entries() {
            let branch = m * entry.state.as_matrix() * m.adjoint();
            let q = branch.trace().re;
            if q < MIN_OUTCOME_PROBABILITY {
                continue;
            }
            let state = DensityMatrix::from_trusted(branch / C64::new(q, 0.0));
            total.add(-entry.probability * q * von_neumann_entropy(&state)?);
        }
    }
    Ok(total.value())
}

/// Nonzero spectrum of `ρ̃` against that of `ρ`, as a max abs difference.
pub fn dilation_spectrum_defect(rho: &DensityMatrix, d: &NaimarkDilation) -> Result<f64> {
    let mut a = hermitian_eigenvalues(rho.matrix())?;
    let mut b = hermitian_eigenvalues(d.dilate_state(rho)?.matrix())?;
    a.reverse();
    b.reverse();
    let mut worst = b[a.len()..].iter().map(|x| x.abs()).fold(0.0, f64::max);
    for (x, y) in a.iter().zip(&b) {
        worst = worst.max((x - y).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::{ensemble_coherence, relative_entropy_of_coherence};
    use crate::qmath::{measurement_probabilities, random, PureState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn up_x() -> DensityMatrix {
        PureState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap().density()
    }

    #[test]
    fn projective_povm_effects_are_projectors() {
        let z = ProjectiveMeasurement::computational(2);
        let p = Povm::from_projective(&z);
        for (k, e) in p.effects().iter().enumerate() {
            assert!(e.max_abs_diff(&z.projector(k)) < 1e-15);
        }
        assert!(p.completeness_defect() < 1e-15);
    }

    #[test]
    fn trivial_povm() {
        let p = Povm::trivial(2);
        assert!((povm_probabilities(&up_x(), &p).unwrap()[0] - 1.0).abs() < 1e-15);
        let rho = random::random_density_matrix(&mut ChaCha8Rng::seed_from_u64(3), 2, 2);
        assert!(povm_coherence(&rho, &p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn incomplete_sets_are_rejected() {
        let half = ComplexSquareMatrix::identity(2).scale(0.5);
        assert!(matches!(Povm::from_kraus(vec![half]), Err(Error::IncompletePovm { .. })));
        let h = ComplexSquareMatrix::identity(2).scale(FRAC_1_SQRT_2);
        assert!(Povm::from_kraus(vec![h.clone(), h]).is_ok());
    }

    #[test]
    fn uninformative_povm_gives_half_half() {
        let h = ComplexSquareMatrix::identity(2).scale(FRAC_1_SQRT_2);
        let p = Povm::from_kraus(vec![h.clone(), h]).unwrap();
        let d = naimark_dilate(&p);
        assert!(d.isometry_defect() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let rho = random::random_density_matrix(&mut rng, 2, 2);
            let probs = d.dilated_probabilities(&d.dilate_state(&rho).unwrap());
            assert!((probs[0] - 0.5).abs() < 1e-12 && (probs[1] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn projective_dilation_layout() {
        let z = ProjectiveMeasurement::computational(2);
        let d = naimark_dilate(&Povm::from_projective(&z));
        assert_eq!(d.isometry().shape(), (4, 2));
        // |0> -> |0>|0> at index 0, |1> -> |1>|1> at index 1*2+1 = 3.
        assert_eq!(d.isometry()[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(d.isometry()[(3, 1)], C64::new(1.0, 0.0));
        let rho = up_x();
        let probs = d.dilated_probabilities(&d.dilate_state(&rho).unwrap());
        let direct = measurement_probabilities(&rho, &z).unwrap();
        assert!((probs[0] - direct[0]).abs() < 1e-15);
    }

    #[test]
    fn dilated_projectors_partition_identity() {
        let p = Povm::random(&mut ChaCha8Rng::seed_from_u64(9), 3, 4).unwrap();
        let d = naimark_dilate(&p);
        let ps = d.dilated_projectors();
        let sum = ps.iter().fold(DMatrix::zeros(12, 12), |acc, m| acc + m);
        assert_eq!(sum, DMatrix::identity(12, 12));
        assert_eq!(&ps[0] * &ps[1], DMatrix::zeros(12, 12));
        assert_eq!(ps[2].trace().re, 3.0);
    }

    #[test]
    fn projective_reduction_of_coherence() {
        let z = ProjectiveMeasurement::computational(2);
        let c = povm_coherence(&up_x(), &Povm::from_projective(&z)).unwrap();
        assert!((c - LN_2).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let rho = random::random_density_matrix(&mut rng, 3, 2);
            let m = random::random_basis(&mut rng, 3);
            let a = povm_coherence(&rho, &Povm::from_projective(&m)).unwrap();
            let b = relative_entropy_of_coherence(&rho, &m).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    // Independent route: S(block diag) = H(p) + Σ p_j S(ρ_j) with ρ_j the
    // post-measurement states, since each block of ρ̃ is p_j ρ_j up to a
    // unitary relabelling.
    #[test]
    fn coherence_matches_post_measurement_decomposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rho = random::random_density_matrix(&mut rng, 2, 2);
            let p = Povm::random(&mut rng, 2, 3).unwrap();
            let probs = povm_probabilities(&rho, &p).unwrap();
            let mut expected = shannon_nats(probs.weights()) - von_neumann_entropy(&rho).unwrap();
            for j in 0..p.outcomes() {
                let post = p.post_measurement_state(&rho, j).unwrap();
                expected += probs[j] * von_neumann_entropy(&post).unwrap();
            }
            assert!((povm_coherence(&rho, &p).unwrap() - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn post_measurement_guards_small_probabilities() {
        let p = Povm::from_projective(&ProjectiveMeasurement::computational(2));
        let rho = PureState::basis(2, 0).density();
        assert!(matches!(
            p.post_measurement_state(&rho, 1),
            Err(Error::ZeroProbabilityOutcome { outcome: 1, .. })
        ));
        assert!(matches!(p.post_measurement_state(&rho, 7), Err(Error::OutcomeOutOfRange { .. })));
    }

    #[test]
    fn projective_ensemble_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let prior = random::random_distribution(&mut rng, 3);
        let states = (0..3).map(|_| random::random_density_matrix(&mut rng, 2, 2)).collect();
        let e = Ensemble::from_parts(&prior, states).unwrap();
        let m = random::random_basis(&mut rng, 2);
        let a = povm_ensemble_coherence(&e, &Povm::from_projective(&m)).unwrap();
        let b = ensemble_coherence(&e, &m).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn entropy_is_preserved_by_dilation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = Povm::random(&mut rng, 2, 3).unwrap();
        let d = naimark_dilate(&p);
        let mixed = d.dilate_state(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - LN_2).abs() < 1e-10);
        let pure = d.dilate_state(&up_x()).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-9);
        let rho = random::random_density_matrix(&mut rng, 2, 2);
        assert!(dilation_spectrum_defect(&rho, &d).unwrap() < 1e-9);
    }

    #[test]
    fn effects_import_round_trips() {
        let p = Povm::random(&mut ChaCha8Rng::seed_from_u64(8), 2, 3).unwrap();
        let q = Povm::from_effects(&p.effects()).unwrap();
        let rho = up_x();
        let a = povm_probabilities(&rho, &p).unwrap();
        let b = povm_probabilities(&rho, &q).unwrap();
        for j in 0..3 {
            assert!((a[j] - b[j]).abs() < 1e-10);
        }
    }

    fn random_ensemble(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> Ensemble {
        let prior = random::random_distribution(rng, n);
        let states = (0..n).map(|_| random::random_density_matrix(rng, dim, dim)).collect();
        Ensemble::from_parts(&prior, states).unwrap()
    }

    #[test]
    fn residual_is_the_post_measurement_holevo_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut largest: f64 = 0.0;
        for dim in 2..=3 {
            for outcomes in 2..=4 {
                let e = random_ensemble(&mut rng, dim, 3);
                let p = Povm::random(&mut rng, dim, outcomes).unwrap();
                let r = povm_cxi_residual(&e, &p).unwrap();
                let extra = post_measurement_holevo(&e, &p).unwrap();
                assert!(extra >= -1e-12);
                assert!((r + extra).abs() < 1e-9, "{r} vs {extra}");
                largest = largest.max(extra);
            }
        }
        assert!(largest > 1e-3);
    }

    #[test]
    fn rank_one_povms_satisfy_the_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for dim in 2..=3 {
            for outcomes in dim..=4 {
                let e = random_ensemble(&mut rng, dim, 4);
                let p = Povm::random_rank_one(&mut rng, dim, outcomes).unwrap();
                assert!(p.completeness_defect() < 1e-12);
                assert!(povm_cxi_residual(&e, &p).unwrap().abs() < 1e-9);
                assert!(post_measurement_holevo(&e, &p).unwrap().abs() < 1e-9);
            }
        }
        assert!(Povm::random_rank_one(&mut rng, 3, 2).is_err());
    }
}
