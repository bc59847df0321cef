use std::collections::BTreeMap;

use crate::error::Result;
use crate::linalg::{ensure_dim, hs_norm, trace_norm, ComplexMatrix, C64};

use super::basis::{pair_entries, rank_structure};
use super::{HalfInteger, SU2Representation};

/// `X^{(μ,m)} = Σ_α T^{(μ,α)}_m tr(T^{(μ,α)}_m† X)`, evaluated entrywise
/// without materializing the operator basis.
pub fn so3_mode_project(x: &ComplexMatrix, rep: &SU2Representation, mu: HalfInteger, m: HalfInteger) -> Result<ComplexMatrix> {
    ensure_dim(x, rep.dim())?;
    let y = rep.to_standard(x);
    let d = rep.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    if m.twice().abs() > mu.twice() || (mu.twice() - m.twice()) % 2 != 0 {
        return Ok(out);
    }
    for (rank, pairs) in rank_structure(rep) {
        if rank != mu {
            continue;
        }
        for pair in pairs {
            let entries = pair_entries(rep, pair, mu, m);
            let coef: C64 = entries.iter().map(|&(r, c, v)| y[(r, c)] * v).sum();
            for (r, c, v) in entries {
                out[(r, c)] += coef * v;
            }
        }
    }
    Ok(rep.from_standard(&out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SO3ModeSpectrum {
    pub components: BTreeMap<(HalfInteger, HalfInteger), ComplexMatrix>,
    /// Trace norms of the components.
    pub norms: BTreeMap<(HalfInteger, HalfInteger), f64>,
}

impl SO3ModeSpectrum {
    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        let mut it = self.components.values();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, c| acc + c))
    }

    /// Modes whose trace norm exceeds `tol`.
    pub fn modes(&self, tol: f64) -> Vec<(HalfInteger, HalfInteger)> {
        self.norms.iter().filter(|(_, &n)| n > tol).map(|(k, _)| *k).collect()
    }

    pub fn norm(&self, mu: HalfInteger, m: HalfInteger) -> f64 {
        self.norms.get(&(mu, m)).copied().unwrap_or(0.0)
    }
}

/// All `(μ, m)` components of `x` with their trace norms.
pub fn so3_decompose(x: &ComplexMatrix, rep: &SU2Representation) -> Result<SO3ModeSpectrum> {
    ensure_dim(x, rep.dim())?;
    let mut components = BTreeMap::new();
    let mut norms = BTreeMap::new();
    for (mu, _) in rank_structure(rep) {
        for m in mu.projections() {
            let c = so3_mode_project(x, rep, mu, m)?;
            norms.insert((mu, m), trace_norm(&c)?);
            components.insert((mu, m), c);
        }
    }
    Ok(SO3ModeSpectrum { components, norms })
}

/// `|Σ‖x^{(μ,m)}‖²_HS − ‖x‖²_HS|`.
pub fn parseval_residual(x: &ComplexMatrix, spectrum: &SO3ModeSpectrum) -> f64 {
    let total: f64 = spectrum.components.values().map(|c| hs_norm(c).powi(2)).sum();
    (total - hs_norm(x).powi(2)).abs()
}
