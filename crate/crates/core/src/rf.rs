//! Reference-frame misalignment and degradation under repeated covariant use.

use std::collections::BTreeMap;

use crate::channels::{reduce_with, ChannelBases};
use crate::error::{dim_err, Error, Result};
use crate::linalg::{hs_inner, ComplexMatrix, DensityMatrix, Superoperator, C64};
use crate::su2::{angular_momentum, tensor_basis_spin_j, HalfInteger, SU2Representation, TensorOperatorBasis};
use crate::u1::{u1_weighted_twirl, FourierWeights, U1Representation};

/// A covariant self-map of spin `j`, described by one real `c^{(μ)}` per rank.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradationModel {
    pub j: HalfInteger,
    pub coefficients: BTreeMap<HalfInteger, f64>,
}

impl DegradationModel {
    /// `c^{(0)}` defaults to 1; every other rank `1..=2j` must be given.
    pub fn new(j: HalfInteger, mut coefficients: BTreeMap<HalfInteger, f64>, tol: f64) -> Result<Self> {
        let c0 = *coefficients.entry(HalfInteger::ZERO).or_insert(1.0);
        if (c0 - 1.0).abs() > tol {
            return Err(Error::InvalidInput(format!("c^(0) must be 1 for a trace-preserving map, got {c0}")));
        }
        for mu in 0..=j.twice() {
            let mu = HalfInteger::from_int(mu);
            match coefficients.get(&mu) {
                None => return Err(Error::InvalidInput(format!("missing coefficient for rank {mu}"))),
                Some(c) if !c.is_finite() || c.abs() > 1.0 + tol => {
                    return Err(Error::InvalidInput(format!("|c^({mu})| = {} exceeds 1", c.abs())))
                }
                _ => {}
            }
        }
        if let Some(mu) = coefficients.keys().find(|mu| !mu.is_integer() || mu.twice() > 2 * j.twice() || mu.twice() < 0) {
            return Err(Error::InvalidInput(format!("rank {mu} does not occur on spin {j}")));
        }
        Ok(Self { j, coefficients })
    }

    /// Model of a covariant channel on spin `j`; rejects non-covariant input.
    pub fn from_channel(e: &Superoperator, j: HalfInteger, tol: f64) -> Result<Self> {
        let rep = SU2Representation::spin(j);
        let cb = ChannelBases::new(&rep, &rep);
        let red = reduce_with(&cb, e, tol)?;
        if !red.covariant {
            return Err(Error::NotCovariant {
                residual: red.residual.max(red.cross_check),
                tol,
            });
        }
        let coefficients = red
            .coefficients
            .mu_blocks
            .iter()
            .map(|(mu, b)| (*mu, b[(0, 0)].re))
            .collect();
        Self::new(j, coefficients, tol)
    }

    pub fn coefficient(&self, mu: HalfInteger) -> f64 {
        self.coefficients[&mu]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStep {
    pub k: usize,
    /// `tr(ρ_k T^{(μ)}_m†)`.
    pub expectations: BTreeMap<(HalfInteger, HalfInteger), C64>,
    pub lz: f64,
    pub lz2: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub j: HalfInteger,
    pub steps: Vec<TrajectoryStep>,
    /// Full states, kept only when the trajectory comes from iterating a channel.
    pub states: Option<Vec<DensityMatrix>>,
}

impl Trajectory {
    /// Largest difference in any tensor expectation between two trajectories.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        self.steps
            .iter()
            .zip(&other.steps)
            .flat_map(|(a, b)| {
                a.expectations
                    .iter()
                    .map(move |(key, v)| (v - b.expectations.get(key).copied().unwrap_or_default()).norm())
            })
            .fold(0.0, f64::max)
    }
}

/// `tr(ρ X)` from the expectations `e_t = tr(T_t† ρ)` of a Hermitian `ρ`.
fn expectation_from(basis: &TensorOperatorBasis, expectations: &BTreeMap<(HalfInteger, HalfInteger), C64>, x: &ComplexMatrix) -> f64 {
    basis
        .ops()
        .iter()
        .map(|t| hs_inner(&t.matrix, x).expect("same space") * expectations[&(t.mu, t.m)].conj())
        .sum::<C64>()
        .re
}

fn step_record(basis: &TensorOperatorBasis, k: usize, expectations: BTreeMap<(HalfInteger, HalfInteger), C64>) -> TrajectoryStep {
    let lz = angular_momentum(basis.rep().max_spin()).lz;
    let lz2 = &lz * &lz;
    TrajectoryStep {
        k,
        lz: expectation_from(basis, &expectations, &lz),
        lz2: expectation_from(basis, &expectations, &lz2),
        expectations,
    }
}

fn expectations_of(basis: &TensorOperatorBasis, rho: &ComplexMatrix) -> BTreeMap<(HalfInteger, HalfInteger), C64> {
    basis
        .ops()
        .iter()
        .map(|t| ((t.mu, t.m), hs_inner(&t.matrix, rho).expect("same space")))
        .collect()
}

/// Closed form `tr(ρ_k T^{(μ)}_m†) = (c^{(μ)})^k tr(ρ_0 T^{(μ)}_m†)` for `k = 0..=steps`.
pub fn degrade_trajectory(rho0: &DensityMatrix, model: &DegradationModel, steps: usize) -> Result<Trajectory> {
    if rho0.dim() != model.j.dim() {
        return Err(dim_err(model.j.dim(), rho0.dim()));
    }
    let basis = tensor_basis_spin_j(model.j);
    let initial = expectations_of(&basis, rho0.matrix());
    let steps = (0..=steps)
        .map(|k| {
            let ex = initial
                .iter()
                .map(|(&(mu, m), v)| ((mu, m), v * model.coefficient(mu).powi(k as i32)))
                .collect();
            step_record(&basis, k, ex)
        })
        .collect();
    Ok(Trajectory {
        j: model.j,
        steps,
        states: None,
    })
}

/// Iterates `ρ_k = E(ρ_{k−1})` for a covariant channel on spin `j`.
pub fn degrade_via_channel(rho0: &DensityMatrix, e: &Superoperator, j: HalfInteger, steps: usize, tol: f64) -> Result<Trajectory> {
    if rho0.dim() != j.dim() {
        return Err(dim_err(j.dim(), rho0.dim()));
    }
    let rep = SU2Representation::spin(j);
    let residual = ChannelBases::new(&rep, &rep).covariance_residual(e)?;
    if residual > tol {
        return Err(Error::NotCovariant { residual, tol });
    }
    let basis = tensor_basis_spin_j(j);
    let mut states = vec![rho0.clone()];
    let mut records = vec![step_record(&basis, 0, expectations_of(&basis, rho0.matrix()))];
    for k in 1..=steps {
        let next = DensityMatrix::new_unchecked(e.apply(states[k - 1].matrix())?);
        records.push(step_record(&basis, k, expectations_of(&basis, next.matrix())));
        states.push(next);
    }
    Ok(Trajectory {
        j,
        steps: records,
        states: Some(states),
    })
}

/// `ρ̃ = ∫dθ p(θ) U(θ) ρ U(θ)† = Σ_k p_{−k} ρ^{(k)}` for a U(1) frame.
pub fn misalignment_state(rho: &DensityMatrix, rep: &U1Representation, weights: &FourierWeights) -> Result<DensityMatrix> {
    u1_weighted_twirl(rho, rep, weights)
}

/// Zero-mean Gaussian misalignment of width `delta_theta`: `p_k = e^{−k²δθ²/2}`.
pub fn gaussian_misalignment(delta_theta: f64) -> Result<FourierWeights> {
    FourierWeights::gaussian(0.0, delta_theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::random_covariant_channel;
    use crate::linalg::{basis_vector, max_abs_diff};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hi(t: i32) -> HalfInteger {
        HalfInteger::from_twice(t)
    }

    fn model(j: HalfInteger, cs: &[(i32, f64)]) -> DegradationModel {
        DegradationModel::new(j, cs.iter().map(|&(mu, c)| (HalfInteger::from_int(mu), c)).collect(), 1e-12).unwrap()
    }

    #[test]
    fn geometric_law_examples() {
        let j = HalfInteger::ONE;
        // ρ₀ = |1,1⟩ has ⟨Lz⟩ = 1 and ⟨Lz²⟩ = 1
        let rho = DensityMatrix::pure(&basis_vector(3, 0)).unwrap();
        let t = degrade_trajectory(&rho, &model(j, &[(1, 0.9), (2, 0.5)]), 40).unwrap();
        assert!((t.steps[2].lz - 0.81).abs() < 1e-14);
        assert!((t.steps[40].lz2 - 2.0 / 3.0).abs() < 1e-9);
        for k in 0..=40 {
            let c2k = 0.5f64.powi(k as i32);
            assert!((t.steps[k].lz2 - (c2k + (1.0 - c2k) * 2.0 / 3.0)).abs() < 1e-13);
        }
        let flat = degrade_trajectory(&rho, &model(j, &[(1, 1.0), (2, 1.0)]), 5).unwrap();
        assert!(flat.max_deviation(&degrade_trajectory(&rho, &model(j, &[(1, 1.0), (2, 1.0)]), 0).unwrap()) < 1e-15);
        for s in &flat.steps {
            assert!((s.lz - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn model_validation() {
        let j = HalfInteger::ONE;
        let bad = |cs: &[(i32, f64)]| {
            DegradationModel::new(j, cs.iter().map(|&(mu, c)| (HalfInteger::from_int(mu), c)).collect(), 1e-12).is_err()
        };
        assert!(bad(&[(1, 1.2), (2, 0.5)]));
        assert!(bad(&[(1, 0.2)]));
        assert!(bad(&[(0, 0.9), (1, 0.2), (2, 0.1)]));
        assert!(bad(&[(1, 0.2), (2, 0.1), (3, 0.1)]));
    }

    #[test]
    fn dual_path_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(131);
        for t in [1, 2, 3] {
            let j = hi(t);
            let rep = SU2Representation::spin(j);
            let e = random_covariant_channel(&rep, &rep, 2, &mut rng).unwrap();
            let rho = random::density_matrix(j.dim(), 2, &mut rng);
            let m = DegradationModel::from_channel(&e, j, 1e-10).unwrap();
            let a = degrade_trajectory(&rho, &m, 10).unwrap();
            let b = degrade_via_channel(&rho, &e, j, 10, 1e-10).unwrap();
            assert!(a.max_deviation(&b) < 1e-12);
            for (x, y) in a.steps.iter().zip(&b.steps) {
                assert!((x.lz - y.lz).abs() < 1e-12 && (x.lz2 - y.lz2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn twirl_identity_and_rejection() {
        let j = HalfInteger::ONE;
        let rep = SU2Representation::spin(j);
        let mut rng = ChaCha8Rng::seed_from_u64(132);
        let rho = random::density_matrix(3, 3, &mut rng);
        let id_map = crate::channels::twirl_superop(&Superoperator::identity(3), &rep, &rep).unwrap();
        // the twirl of the identity map keeps only the trace
        let mut l = ComplexMatrix::zeros(9, 9);
        for a in 0..3 {
            for b in 0..3 {
                l[(a * 3 + a, b * 3 + b)] = (1.0 / 3.0).into();
            }
        }
        let full = Superoperator::new(3, 3, l).unwrap();
        let t = degrade_via_channel(&rho, &full, j, 2, 1e-10).unwrap();
        for ((mu, _), v) in &t.steps[1].expectations {
            if mu.twice() > 0 {
                assert!(v.norm() < 1e-14);
            }
        }
        let id = degrade_via_channel(&rho, &id_map, j, 3, 1e-10).unwrap();
        assert!(max_abs_diff(id.states.as_ref().unwrap()[3].matrix(), rho.matrix()) < 1e-12);
        let u = random::unitary(3, &mut rng);
        assert!(matches!(
            degrade_via_channel(&rho, &Superoperator::conjugation(&u).unwrap(), j, 2, 1e-8),
            Err(Error::NotCovariant { .. })
        ));
    }

    #[test]
    fn gaussian_misalignment_weights() {
        let w = gaussian_misalignment(0.001).unwrap();
        assert!(w.coefficient(10).norm() >= 0.9999);
        let rep = U1Representation::range(0, 3);
        let psi = nalgebra::DVector::from_element(4, C64::new(0.5, 0.0));
        let rho = DensityMatrix::pure(&psi).unwrap();
        let same = misalignment_state(&rho, &rep, &gaussian_misalignment(0.0).unwrap()).unwrap();
        assert!(max_abs_diff(same.matrix(), rho.matrix()) < 1e-14);
        let wide = misalignment_state(&rho, &rep, &gaussian_misalignment(50.0).unwrap()).unwrap();
        assert!(max_abs_diff(wide.matrix(), &(ComplexMatrix::identity(4, 4) * C64::new(0.25, 0.0))) < 1e-12);
    }
}
