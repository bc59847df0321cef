use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{ensure_dim, tensor_product, ComplexMatrix, DensityMatrix, C64, ONE, ZERO};

use super::U1Representation;

/// Fourier coefficients `p_k = ∫ dθ p(θ) e^{-ikθ}` of a phase distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierWeights {
    kind: Kind,
    /// Integration error estimate for sampled densities; zero for closed forms.
    error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Uniform,
    /// `(weight, angle)` pairs of a mixture of point masses.
    Deltas(Vec<(f64, f64)>),
    /// Wrapped normal with the given mean and standard deviation.
    Gaussian { mean: f64, sigma: f64 },
    /// Explicit coefficients; unlisted modes have `p_k = 0`.
    Table(BTreeMap<i64, C64>),
}

impl FourierWeights {
    /// Uniform density: `p_k = δ_{k,0}` (the full twirl).
    pub fn uniform() -> Self {
        Self::from_kind(Kind::Uniform)
    }

    /// Point mass at `θ = 0`: `p_k = 1` for every `k`.
    pub fn identity() -> Self {
        Self::delta_at(0.0)
    }

    pub fn delta_at(theta: f64) -> Self {
        Self::from_kind(Kind::Deltas(vec![(1.0, theta)]))
    }

    pub fn delta_mixture(components: Vec<(f64, f64)>, tol: f64) -> Result<Self> {
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w < -tol) || (total - 1.0).abs() > tol {
            return Err(Error::InvalidWeights("mixture weights must be non-negative and sum to 1".into()));
        }
        Ok(Self::from_kind(Kind::Deltas(components)))
    }

    /// Wrapped Gaussian: `p_k = e^{-ikμ} e^{-k²σ²/2}`.
    pub fn gaussian(mean: f64, sigma: f64) -> Result<Self> {
        if sigma.is_nan() || sigma < 0.0 {
            return Err(Error::InvalidWeights(format!("negative width {sigma}")));
        }
        Ok(Self::from_kind(Kind::Gaussian { mean, sigma }))
    }

    pub fn from_table(table: BTreeMap<i64, C64>, tol: f64) -> Result<Self> {
        let w = Self::from_kind(Kind::Table(table));
        w.validate(tol)?;
        Ok(w)
    }

    /// Fourier coefficients of a density sampled at `θ_s = 2πs/L`, up to `|k| ≤ k_max`,
    /// by the trapezoidal rule. The samples are normalized to integrate to one.
    /// The returned error estimate is the largest coefficient magnitude in the
    /// top quarter of the resolvable band, a proxy for aliasing.
    pub fn from_samples(density: &[f64], k_max: i64) -> Result<Self> {
        let l = density.len();
        if l < 2 || density.iter().any(|p| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidWeights("need >= 2 finite non-negative samples".into()));
        }
        let mass: f64 = density.iter().sum::<f64>() * 2.0 * PI / l as f64;
        if mass <= 0.0 {
            return Err(Error::InvalidWeights("density integrates to zero".into()));
        }
        let coeff = |k: i64| -> C64 {
            density
                .iter()
                .enumerate()
                .map(|(s, p)| C64::from_polar(*p, -(k as f64) * 2.0 * PI * s as f64 / l as f64))
                .sum::<C64>()
                * (2.0 * PI / l as f64 / mass)
        };
        let table: BTreeMap<i64, C64> = (-k_max..=k_max).map(|k| (k, coeff(k))).collect();
        let nyquist = (l / 2) as i64;
        let error_estimate = ((3 * nyquist / 4).max(1)..=nyquist)
            .map(|k| coeff(k).norm())
            .fold(0.0, f64::max);
        Ok(Self {
            kind: Kind::Table(table),
            error_estimate,
        })
    }

    fn from_kind(kind: Kind) -> Self {
        Self {
            kind,
            error_estimate: 0.0,
        }
    }

    pub fn error_estimate(&self) -> f64 {
        self.error_estimate
    }

    pub fn coefficient(&self, k: i64) -> C64 {
        match &self.kind {
            Kind::Uniform => {
                if k == 0 {
                    ONE
                } else {
                    ZERO
                }
            }
            Kind::Deltas(ds) => ds
                .iter()
                .map(|(w, theta)| C64::from_polar(*w, -(k as f64) * theta))
                .sum(),
            Kind::Gaussian { mean, sigma } => {
                let kf = k as f64;
                C64::from_polar((-0.5 * kf * kf * sigma * sigma).exp(), -kf * mean)
            }
            Kind::Table(t) => t.get(&k).copied().unwrap_or(ZERO),
        }
    }

    /// Checks `p_0 = 1`, `|p_k| ≤ 1` and `p_{-k} = conj(p_k)` on tabulated modes.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if (self.coefficient(0) - ONE).norm() > tol {
            return Err(Error::InvalidWeights(format!("p_0 = {} != 1", self.coefficient(0))));
        }
        if let Kind::Table(t) = &self.kind {
            for (k, p) in t {
                if p.norm() > 1.0 + tol {
                    return Err(Error::InvalidWeights(format!("|p_{k}| = {} > 1", p.norm())));
                }
                if (self.coefficient(-k) - p.conj()).norm() > tol {
                    return Err(Error::InvalidWeights(format!("p_{{-{k}}} != conj(p_{k})")));
                }
            }
        }
        Ok(())
    }
}

/// `σ = ∫ dθ p(θ) U(θ) ρ U(θ)† = Σ_k p_{-k} ρ^(k)`.
pub fn u1_weighted_twirl(rho: &DensityMatrix, rep: &U1Representation, weights: &FourierWeights) -> Result<DensityMatrix> {
    weights.validate(1e-10)?;
    ensure_dim(rho.matrix(), rep.dim())?;
    let d = rep.dim();
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(d, d, |i, j| m[(i, j)] * weights.coefficient(-rep.mode_of(i, j)));
    DensityMatrix::new(out, 1e-8).map_err(|e| {
        Error::InvalidWeights(format!("weights are not the Fourier series of a probability density ({e})"))
    })
}

/// State available to a party whose phase reference is misaligned by the
/// distribution `weights`, holding the frame `tau` and the system `rho`:
/// the weighted twirl of `τ ⊗ ρ` under the joint charges.
pub fn alignment_accessible_state(
    tau: &DensityMatrix,
    rep_rf: &U1Representation,
    rho: &DensityMatrix,
    rep_sys: &U1Representation,
    weights: &FourierWeights,
) -> Result<DensityMatrix> {
    ensure_dim(tau.matrix(), rep_rf.dim())?;
    ensure_dim(rho.matrix(), rep_sys.dim())?;
    let joint = DensityMatrix::new_unchecked(tensor_product(tau.matrix(), rho.matrix()));
    u1_weighted_twirl(&joint, &rep_rf.tensor(rep_sys), weights)
}
