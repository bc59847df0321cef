use std::collections::BTreeSet;

use crate::error::{dim_err, Result};
use crate::linalg::{ComplexMatrix, Povm, Superoperator};
use crate::su2::{so3_decompose, Block, HalfInteger, SU2Representation};

use super::superop::{ChannelBases, SuperopModeSpectrum};

/// `X ↦ Σ_λ tr(X A_λ) |λ⟩⟨λ|` for arbitrary (not necessarily positive) `A_λ`.
pub fn measurement_superoperator(elements: &[ComplexMatrix]) -> Result<Superoperator> {
    let d = elements.first().map_or(0, |e| e.nrows());
    let n = elements.len();
    let mut l = ComplexMatrix::zeros(n * n, d * d);
    for (lam, a) in elements.iter().enumerate() {
        if a.shape() != (d, d) {
            return Err(dim_err(format!("({d}, {d})"), format!("{:?}", a.shape())));
        }
        // tr(X A) = Σ_ij X_ij A_ji
        for i in 0..d {
            for j in 0..d {
                l[(lam * n + lam, i * d + j)] = a[(j, i)];
            }
        }
    }
    Superoperator::new(d, n, l)
}

/// Representation of a classical outcome register: `n` trivial irreps.
pub fn flag_register(n: usize) -> Result<SU2Representation> {
    SU2Representation::new(vec![Block {
        j: HalfInteger::ZERO,
        mult: n,
    }])
}

#[derive(Debug, Clone)]
pub struct MeasurementChannel {
    pub channel: Superoperator,
    pub spectrum: SuperopModeSpectrum,
    /// Union of the `(μ, m)` modes of the POVM elements.
    pub element_modes: BTreeSet<(HalfInteger, HalfInteger)>,
}

pub fn measurement_channel(povm: &Povm, rep: &SU2Representation, tol: f64) -> Result<MeasurementChannel> {
    if povm.dim() != rep.dim() {
        return Err(dim_err(rep.dim(), povm.dim()));
    }
    let channel = measurement_superoperator(povm.elements())?;
    let out = flag_register(povm.elements().len())?;
    let spectrum = ChannelBases::new(rep, &out).decompose(&channel)?;
    let mut element_modes = BTreeSet::new();
    for m in povm.elements() {
        element_modes.extend(so3_decompose(m, rep)?.modes(tol));
    }
    Ok(MeasurementChannel {
        channel,
        spectrum,
        element_modes,
    })
}
