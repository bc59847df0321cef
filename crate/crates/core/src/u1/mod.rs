//! Modes of asymmetry for the phase group U(1).
//!
//! A representation is a list of integer charges, one per basis vector, with
//! `U(θ) = diag(e^{i n θ})`. The mode-`k` component of an operator keeps the
//! entries `(i, j)` with `charges[i] - charges[j] = k`; it is the exact value
//! of the Fourier integral `(1/2π)∫ dθ e^{-ikθ} U(θ) X U(θ)†`.

mod coherent;
mod weights;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::linalg::{ensure_dim, tensor_product, trace_norm, ComplexMatrix, DensityMatrix, Superoperator, C64, ZERO};

pub use coherent::{coherent_envelope, coherent_state, default_n_max, CoherentState};
pub use weights::{alignment_accessible_state, u1_weighted_twirl, FourierWeights};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct U1Representation {
    charges: Vec<i64>,
}

impl U1Representation {
    pub fn new(charges: Vec<i64>) -> Result<Self> {
        if charges.is_empty() {
            return Err(Error::InvalidInput("empty charge list".into()));
        }
        Ok(Self { charges })
    }

    /// Charges `lo, lo+1, ..., hi`.
    pub fn range(lo: i64, hi: i64) -> Self {
        Self {
            charges: (lo..=hi).collect(),
        }
    }

    pub fn charges(&self) -> &[i64] {
        &self.charges
    }

    pub fn dim(&self) -> usize {
        self.charges.len()
    }

    /// Largest charge difference; modes live in `-spread..=spread`.
    pub fn spread(&self) -> i64 {
        let max = self.charges.iter().max().unwrap();
        let min = self.charges.iter().min().unwrap();
        max - min
    }

    pub fn unitary(&self, theta: f64) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::from_polar(1.0, self.charges[i] as f64 * theta)
            } else {
                ZERO
            }
        })
    }

    /// Representation on `H_self ⊗ H_other`: charges add.
    pub fn tensor(&self, other: &Self) -> Self {
        let charges = self
            .charges
            .iter()
            .flat_map(|a| other.charges.iter().map(move |b| a + b))
            .collect();
        Self { charges }
    }

    fn mode_of(&self, i: usize, j: usize) -> i64 {
        self.charges[i] - self.charges[j]
    }
}

/// Component of `x` in mode `k`.
pub fn u1_mode_project(x: &ComplexMatrix, rep: &U1Representation, k: i64) -> Result<ComplexMatrix> {
    ensure_dim(x, rep.dim())?;
    let d = rep.dim();
    Ok(ComplexMatrix::from_fn(d, d, |i, j| if rep.mode_of(i, j) == k { x[(i, j)] } else { ZERO }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct U1ModeSpectrum {
    pub components: BTreeMap<i64, ComplexMatrix>,
    pub norms: BTreeMap<i64, f64>,
}

impl U1ModeSpectrum {
    pub fn modes(&self, tol: f64) -> BTreeSet<i64> {
        self.norms.iter().filter(|(_, n)| **n > tol).map(|(k, _)| *k).collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut it = self.components.values();
        let first = it.next().expect("spectrum has at least mode 0").clone();
        it.fold(first, |acc, c| acc + c)
    }
}

/// Every mode component in `-spread..=spread`, with trace norms.
pub fn u1_decompose(x: &ComplexMatrix, rep: &U1Representation) -> Result<U1ModeSpectrum> {
    ensure_dim(x, rep.dim())?;
    let s = rep.spread();
    let mut components = BTreeMap::new();
    let mut norms = BTreeMap::new();
    for k in -s..=s {
        let comp = u1_mode_project(x, rep, k)?;
        norms.insert(k, trace_norm(&comp)?);
        components.insert(k, comp);
    }
    Ok(U1ModeSpectrum { components, norms })
}

/// `{k : ‖x^(k)‖ > tol}`.
pub fn u1_modes_of(x: &ComplexMatrix, rep: &U1Representation, tol: f64) -> Result<BTreeSet<i64>> {
    Ok(u1_decompose(x, rep)?.modes(tol))
}

/// The monotone `‖ρ^(k)‖`.
pub fn u1_mode_monotone(rho: &DensityMatrix, rep: &U1Representation, k: i64) -> Result<f64> {
    trace_norm(&u1_mode_project(rho.matrix(), rep, k)?)
}

/// True when `U(θ) x U(θ)† = x` within `tol`.
pub fn is_invariant_under(x: &ComplexMatrix, rep: &U1Representation, theta: f64, tol: f64) -> Result<bool> {
    ensure_dim(x, rep.dim())?;
    let u = rep.unitary(theta);
    let y = &u * x * u.adjoint();
    Ok(crate::linalg::max_abs_diff(&y, x) <= tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionBound {
    /// `min(1, ‖ρ^(k)‖/‖σ^(k)‖)` for every mode of the target above tolerance.
    pub per_mode: BTreeMap<i64, f64>,
    pub overall: f64,
    /// Target modes absent from the source; any entry forces `overall = 0`.
    pub missing_modes: Vec<i64>,
}

impl TransitionBound {
    pub fn feasible(&self) -> bool {
        self.overall > 0.0
    }
}

/// Upper bounds on the success probability of a covariant transformation `ρ → σ`.
pub fn u1_transition_bound(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    rep: &U1Representation,
    tol: f64,
) -> Result<TransitionBound> {
    if rho.dim() != rep.dim() || sigma.dim() != rep.dim() {
        return Err(dim_err(rep.dim(), format!("{} and {}", rho.dim(), sigma.dim())));
    }
    let src = u1_decompose(rho.matrix(), rep)?;
    let dst = u1_decompose(sigma.matrix(), rep)?;
    let mut per_mode = BTreeMap::new();
    let mut missing_modes = Vec::new();
    for (k, &target) in &dst.norms {
        if target <= tol {
            continue;
        }
        let source = src.norms[k];
        if source <= tol {
            missing_modes.push(*k);
        }
        per_mode.insert(*k, (source / target).min(1.0));
    }
    let overall = if missing_modes.is_empty() {
        per_mode.values().copied().fold(1.0, f64::min)
    } else {
        0.0
    };
    Ok(TransitionBound {
        per_mode,
        overall,
        missing_modes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleBound {
    /// `‖ρ^(k)‖ − Σ_i p_i ‖σ_i^(k)‖`.
    pub residuals: BTreeMap<i64, f64>,
    pub feasible: bool,
}

pub(crate) fn check_probabilities(probs: impl Iterator<Item = f64>, tol: f64) -> Result<()> {
    let mut total = 0.0;
    for p in probs {
        if !p.is_finite() || p < -tol {
            return Err(Error::InvalidProbabilities(format!("negative or non-finite probability {p}")));
        }
        total += p;
    }
    if total > 1.0 + tol {
        return Err(Error::InvalidProbabilities(format!("probabilities sum to {total} > 1")));
    }
    Ok(())
}

/// Per-mode residuals of the state-to-ensemble constraint.
pub fn u1_ensemble_bound(
    rho: &DensityMatrix,
    ensemble: &[(DensityMatrix, f64)],
    rep: &U1Representation,
    tol: f64,
) -> Result<EnsembleBound> {
    check_probabilities(ensemble.iter().map(|(_, p)| *p), tol)?;
    let src = u1_decompose(rho.matrix(), rep)?;
    let mut residuals: BTreeMap<i64, f64> = src.norms.clone();
    for (sigma, p) in ensemble {
        ensure_dim(sigma.matrix(), rep.dim())?;
        for (k, n) in u1_decompose(sigma.matrix(), rep)?.norms {
            *residuals.get_mut(&k).unwrap() -= p * n;
        }
    }
    let feasible = residuals.values().all(|r| *r >= -tol);
    Ok(EnsembleBound { residuals, feasible })
}

/// `(ρ1 ⊗ ρ2)^(j) = Σ_k ρ1^(k) ⊗ ρ2^(j−k)`.
pub fn joint_mode_component(
    rho1: &ComplexMatrix,
    rep1: &U1Representation,
    rho2: &ComplexMatrix,
    rep2: &U1Representation,
    j: i64,
) -> Result<ComplexMatrix> {
    let a = u1_decompose(rho1, rep1)?;
    let b = u1_decompose(rho2, rep2)?;
    let d = rep1.dim() * rep2.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for (k, ck) in &a.components {
        if let Some(cj) = b.components.get(&(j - k)) {
            out += tensor_product(ck, cj);
        }
    }
    Ok(out)
}

/// Exact U(1) twirl of a superoperator: keeps the Liouville entries that map
/// mode `k` of the input to mode `k` of the output.
pub fn u1_twirl_superop(e: &Superoperator, in_rep: &U1Representation, out_rep: &U1Representation) -> Result<Superoperator> {
    if e.in_dim() != in_rep.dim() || e.out_dim() != out_rep.dim() {
        return Err(dim_err(
            format!("{} -> {}", in_rep.dim(), out_rep.dim()),
            format!("{} -> {}", e.in_dim(), e.out_dim()),
        ));
    }
    let (di, do_) = (in_rep.dim(), out_rep.dim());
    let l = e.liouville();
    let masked = ComplexMatrix::from_fn(do_ * do_, di * di, |r, c| {
        if out_rep.mode_of(r / do_, r % do_) == in_rep.mode_of(c / di, c % di) {
            l[(r, c)]
        } else {
            ZERO
        }
    });
    Superoperator::new(di, do_, masked)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::random;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #[test]
        fn modes_reconstruct(seed in any::<u64>(), charges in proptest::collection::vec(-3i64..4, 1..7)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rep = U1Representation::new(charges).unwrap();
            let d = rep.dim();
            let x = random::ginibre(d, d, &mut rng);
            let spec = u1_decompose(&x, &rep).unwrap();
            prop_assert!(max_abs_diff(&spec.reconstruct(), &x) == 0.0);
        }

        #[test]
        fn hermitian_inputs_pair_modes(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rep = U1Representation::new(vec![0, 2, 1, 1, 3]).unwrap();
            let h = random::hermitian(5, &mut rng);
            for k in 0..=3 {
                let plus = u1_mode_project(&h, &rep, k).unwrap();
                let minus = u1_mode_project(&h, &rep, -k).unwrap();
                prop_assert!(max_abs_diff(&plus.adjoint(), &minus) < 1e-15);
            }
        }

        #[test]
        fn pure_state_monotone_ceiling(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rep = U1Representation::new(vec![0, 1, 2, 2, 5]).unwrap();
            let psi = random::pure_state(5, &mut rng);
            let rho = DensityMatrix::pure(&psi).unwrap();
            for k in -5..=5 {
                prop_assert!(u1_mode_monotone(&rho, &rep, k).unwrap() <= 1.0 + 1e-12);
            }
        }
    }
}
