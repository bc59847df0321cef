//! SU(2) asymmetry monotones: per-mode trace norms, spin-j closed forms,
//! two-state discrimination with a spin-j frame, and the parameter counts
//! that decide which tasks a frame state can perform.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::linalg::{hs_inner, projector, real, tensor_product, trace_norm, ComplexMatrix, DensityMatrix};
use crate::su2::{
    angular_momentum, so3_decompose, so3_mode_project, tensor_basis_spin_j, EulerAngles, HalfInteger, SU2Representation,
};
use crate::u1::check_probabilities;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeMonotoneTable {
    /// `F_{μ,m} = ‖ρ^{(μ,m)}‖₁`.
    pub entries: BTreeMap<(HalfInteger, HalfInteger), f64>,
}

impl ModeMonotoneTable {
    pub fn get(&self, mu: HalfInteger, m: HalfInteger) -> f64 {
        self.entries.get(&(mu, m)).copied().unwrap_or(0.0)
    }
}

pub fn mode_monotone_table(rho: &DensityMatrix, rep: &SU2Representation) -> Result<ModeMonotoneTable> {
    let spec = so3_decompose(rho.matrix(), rep)?;
    Ok(ModeMonotoneTable { entries: spec.norms })
}

/// Single-irrep shortcut `F_{μ,m} = tr√(T T†) · |tr(T ρ)|`.
pub fn mode_monotone_table_spin_j(rho: &DensityMatrix, j: HalfInteger) -> Result<ModeMonotoneTable> {
    if rho.dim() != j.dim() {
        return Err(dim_err(j.dim(), rho.dim()));
    }
    let basis = tensor_basis_spin_j(j);
    let mut entries = BTreeMap::new();
    for t in basis.ops() {
        let overlap = hs_inner(&t.matrix, rho.matrix())?.norm();
        entries.insert((t.mu, t.m), trace_norm(&t.matrix)? * overlap);
    }
    Ok(ModeMonotoneTable { entries })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleBoundG {
    /// `‖ρ^{(μ,m)}‖ − Σ_i p_i ‖σ_i^{(μ,m)}‖`; negative entries forbid the transition.
    pub residuals: BTreeMap<(HalfInteger, HalfInteger), f64>,
    pub feasible: bool,
}

pub fn ensemble_bound_g(
    rho: &DensityMatrix,
    ensemble: &[(DensityMatrix, f64)],
    rep: &SU2Representation,
    tol: f64,
) -> Result<EnsembleBoundG> {
    check_probabilities(ensemble.iter().map(|(_, p)| *p), tol)?;
    let mut residuals = mode_monotone_table(rho, rep)?.entries;
    for (sigma, p) in ensemble {
        for (k, f) in mode_monotone_table(sigma, rep)?.entries {
            *residuals.entry(k).or_insert(0.0) -= p * f;
        }
    }
    let feasible = residuals.values().all(|r| *r >= -tol);
    Ok(EnsembleBoundG { residuals, feasible })
}

fn check_spin(rho: &DensityMatrix, j: HalfInteger) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::InvalidHalfInteger(format!("negative spin {j}")));
    }
    if rho.dim() != j.dim() {
        return Err(Error::Unsupported(format!(
            "state of dimension {} is not on a single spin-{j} irrep",
            rho.dim()
        )));
    }
    Ok(())
}

/// `tr(ρ L_n̂)` and `tr(ρ L_n̂²)`, with `n̂` reduced to `ẑ` by a rotation of the state.
fn axis_moments(rho: &DensityMatrix, j: HalfInteger, axis: [f64; 3]) -> (f64, f64) {
    let u = crate::su2::wigner_d_matrix(j, EulerAngles::aligning_z_to(axis));
    let rotated = u.adjoint() * rho.matrix() * &u;
    let lz = angular_momentum(j).lz;
    let first = (&rotated * &lz).trace().re;
    let second = (&rotated * &lz * &lz).trace().re;
    (first, second)
}

/// `‖ρ^{(1,0)}‖` for the axis `n̂`, from the closed forms
/// `(3/2)|⟨L_n̂⟩|/(j+1/2)` (integer `j`) and `(3/2)|⟨L_n̂⟩|(j+1/2)/(j(j+1))`
/// (half-integer `j`). Never exceeds 3/2.
pub fn angular_momentum_monotone(rho: &DensityMatrix, j: HalfInteger, axis: [f64; 3]) -> Result<f64> {
    check_spin(rho, j)?;
    if j.twice() == 0 {
        return Ok(0.0);
    }
    let (first, _) = axis_moments(rho, j, axis);
    let jv = j.value();
    Ok(if j.is_integer() {
        1.5 * first.abs() / (jv + 0.5)
    } else {
        1.5 * first.abs() * (jv + 0.5) / (jv * (jv + 1.0))
    })
}

/// `|tr(ρ L_n̂²) − j(j+1)/3|`.
pub fn second_moment_monotone(rho: &DensityMatrix, j: HalfInteger, axis: [f64; 3]) -> Result<f64> {
    check_spin(rho, j)?;
    let (_, second) = axis_moments(rho, j, axis);
    Ok((second - j.casimir() / 3.0).abs())
}

/// `(1/2)[1 + |tr(ρ L_z)|/(j + 1/2)]`: best success probability for telling
/// `|↑⟩` from `|↓⟩` of a spin-1/2 using a spin-`j` frame `ρ` and rotationally
/// covariant operations.
pub fn distinguish_success_probability(rho: &DensityMatrix, j: HalfInteger) -> Result<f64> {
    check_spin(rho, j)?;
    let lz = angular_momentum(j).lz;
    let first = rho.expectation(&lz).re;
    Ok(0.5 * (1.0 + first.abs() / (j.value() + 0.5)))
}

/// Helstrom value `1/2 + (1/4)‖𝒢(|↑⟩⟨↑| ⊗ ρ) − 𝒢(|↓⟩⟨↓| ⊗ ρ)‖₁` with `𝒢` the
/// exact SU(2) twirl on spin-1/2 ⊗ spin-j.
pub fn distinguish_success_oracle(rho: &DensityMatrix, j: HalfInteger) -> Result<f64> {
    check_spin(rho, j)?;
    let joint = SU2Representation::spin(HalfInteger::HALF).tensor(&SU2Representation::spin(j));
    let up = projector(&crate::linalg::basis_vector(2, 0));
    let down = projector(&crate::linalg::basis_vector(2, 1));
    let diff = tensor_product(&(up - down), rho.matrix());
    let twirled = so3_mode_project(&diff, &joint, HalfInteger::ZERO, HalfInteger::ZERO)?;
    Ok(0.5 + 0.25 * trace_norm(&twirled)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsuccComparison {
    pub formula: f64,
    pub oracle: f64,
    pub delta: f64,
    /// False when the two values differ by more than the tolerance.
    pub agree: bool,
}

pub fn distinguish_success_compare(rho: &DensityMatrix, j: HalfInteger, tol: f64) -> Result<PsuccComparison> {
    let formula = distinguish_success_probability(rho, j)?;
    let oracle = distinguish_success_oracle(rho, j)?;
    let delta = (formula - oracle).abs();
    Ok(PsuccComparison {
        formula,
        oracle,
        delta,
        agree: delta <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Measurement,
    Channel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationParameterReport {
    pub l: HalfInteger,
    pub task: Task,
    /// Largest rank (or moment order) that matters: `2l` or `4l`, capped at `2j`.
    pub cap: usize,
    pub count: usize,
    pub labels: Vec<String>,
    pub values: Vec<f64>,
}

/// Parameters of the frame `ρ` (spin `j`) that fix which measurements
/// (`task = Measurement`) or channels on a system of largest spin `l` it can
/// simulate.
///
/// Without an axis these are the real and imaginary parts of
/// `tr(ρ T^{(μ)}_m†)` for `1 ≤ μ ≤ cap`, `m ≥ 0`; with an axis the moments
/// `tr(ρ L_n̂^k)`, `1 ≤ k ≤ cap`.
pub fn simulation_parameter_report(
    rho: &DensityMatrix,
    j: HalfInteger,
    l: HalfInteger,
    task: Task,
    axial_axis: Option<[f64; 3]>,
) -> Result<SimulationParameterReport> {
    check_spin(rho, j)?;
    if l.twice() < 0 {
        return Err(Error::InvalidHalfInteger(format!("negative spin {l}")));
    }
    let reach = match task {
        Task::Measurement => l.twice(),
        Task::Channel => 2 * l.twice(),
    } as usize;
    let cap = reach.min(j.twice() as usize);
    let mut labels = Vec::new();
    let mut values = Vec::new();
    match axial_axis {
        Some(axis) => {
            let u = crate::su2::wigner_d_matrix(j, EulerAngles::aligning_z_to(axis));
            let rotated = u.adjoint() * rho.matrix() * &u;
            let lz = angular_momentum(j).lz;
            let mut power = ComplexMatrix::identity(j.dim(), j.dim());
            for k in 1..=cap {
                power = &power * &lz;
                labels.push(format!("L^{k}"));
                values.push((&rotated * &power).trace().re);
            }
        }
        None => {
            let basis = tensor_basis_spin_j(j);
            for t in basis.ops() {
                if t.mu.twice() == 0 || t.mu.twice() / 2 > cap as i32 || t.m.twice() < 0 {
                    continue;
                }
                // for Hermitian ρ the m < 0 values follow from m > 0
                let v = hs_inner(&t.matrix, rho.matrix())?;
                labels.push(format!("T({},{}).re", t.mu, t.m));
                values.push(v.re);
                if t.m.twice() > 0 {
                    labels.push(format!("T({},{}).im", t.mu, t.m));
                    values.push(v.im);
                }
            }
        }
    }
    Ok(SimulationParameterReport {
        l,
        task,
        cap,
        count: values.len(),
        labels,
        values,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub max_difference: f64,
}

/// Two frames are interchangeable for the task iff all reported parameters agree.
pub fn equal_moment_equivalence_check(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    j: HalfInteger,
    l: HalfInteger,
    task: Task,
    axial_axis: Option<[f64; 3]>,
    tol: f64,
) -> Result<EquivalenceVerdict> {
    let a = simulation_parameter_report(rho1, j, l, task, axial_axis)?;
    let b = simulation_parameter_report(rho2, j, l, task, axial_axis)?;
    let max_difference = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(EquivalenceVerdict {
        equivalent: max_difference <= tol,
        max_difference,
    })
}

/// `(1/2π)∫dθ e^{−iθL_n̂} ρ e^{iθL_n̂}`: drops all coherence between
/// different eigenvalues of `L_n̂`.
pub fn axial_symmetrization(rho: &DensityMatrix, j: HalfInteger, axis: [f64; 3]) -> Result<DensityMatrix> {
    check_spin(rho, j)?;
    let u = crate::su2::wigner_d_matrix(j, EulerAngles::aligning_z_to(axis));
    let mut rotated = u.adjoint() * rho.matrix() * &u;
    let d = j.dim();
    for r in 0..d {
        for c in 0..d {
            if r != c {
                rotated[(r, c)] = real(0.0);
            }
        }
    }
    Ok(DensityMatrix::new_unchecked(&u * rotated * u.adjoint()))
}
