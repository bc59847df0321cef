use std::collections::BTreeSet;

use crate::error::{dim_err, Error, Result};
use crate::linalg::{
    basis_vector, ket_bra, partial_trace, projector, tensor_product, trace_norm, vec_rows, ComplexMatrix, DensityMatrix, Keep,
    Superoperator, C64,
};
use crate::su2::{so3_mode_project, Block, EulerAngles, HalfInteger, SU2Representation};

use super::superop::ChannelBases;

/// Covariance threshold used when none is supplied.
pub const DEFAULT_COVARIANCE_TOL: f64 = 1e-8;

/// `E(X) = tr_RF(Ẽ(X ⊗ ρ_RF))` for a covariant joint map on system ⊗ frame.
///
/// The joint map is checked against the product representation; a residual
/// above `tol` rejects the input.
pub fn simulate_with_frame(
    joint: &Superoperator,
    frame: &DensityMatrix,
    sys_rep: &SU2Representation,
    rf_rep: &SU2Representation,
    tol: f64,
) -> Result<Superoperator> {
    let (ds, dr) = (sys_rep.dim(), rf_rep.dim());
    if frame.dim() != dr {
        return Err(dim_err(dr, frame.dim()));
    }
    if joint.in_dim() != ds * dr || joint.out_dim() != ds * dr {
        return Err(dim_err(
            format!("{} -> {}", ds * dr, ds * dr),
            format!("{} -> {}", joint.in_dim(), joint.out_dim()),
        ));
    }
    let joint_rep = sys_rep.tensor(rf_rep);
    let residual = ChannelBases::new(&joint_rep, &joint_rep).covariance_residual(joint)?;
    if residual > tol {
        return Err(Error::NotCovariant { residual, tol });
    }
    Ok(effective_channel(joint, frame.matrix(), ds, dr))
}

/// `X ↦ tr_RF(Ẽ(X ⊗ τ))` for any operator `τ` on the frame (no checks).
pub fn effective_channel(joint: &Superoperator, tau: &ComplexMatrix, ds: usize, dr: usize) -> Superoperator {
    let mut l = ComplexMatrix::zeros(ds * ds, ds * ds);
    for i in 0..ds {
        for j in 0..ds {
            let x = ket_bra(&basis_vector(ds, i), &basis_vector(ds, j));
            let y = joint.apply(&tensor_product(&x, tau)).expect("dimensions checked");
            let reduced = partial_trace(&y, (ds, dr), Keep::A).expect("dimensions checked");
            l.set_column(i * ds + j, &vec_rows(&reduced));
        }
    }
    Superoperator::new(ds, ds, l).expect("square system map")
}

/// Covariant joint unitary `Σ_J e^{−iφ_J} P_J` on `a ⊗ b`, with `P_J` the
/// projector onto total spin `J` (built from Clebsch–Gordan coefficients).
pub fn coupled_phase_unitary(a: &SU2Representation, b: &SU2Representation, phase: impl Fn(HalfInteger) -> f64) -> ComplexMatrix {
    let joint = a.tensor(b);
    let mut diag = ComplexMatrix::zeros(joint.dim(), joint.dim());
    for (bi, blk) in joint.blocks().iter().enumerate() {
        let start = joint.block_offset(bi);
        for k in 0..blk.dim() {
            diag[(start + k, start + k)] = C64::from_polar(1.0, -phase(blk.j));
        }
    }
    joint.from_standard(&diag)
}

#[derive(Debug, Clone)]
pub struct MissingModeReport {
    pub n: usize,
    pub rep: SU2Representation,
    pub state: DensityMatrix,
    pub f_one_plus: f64,
    pub f_one_minus: f64,
    /// `(μ, F_{μ,0})` for every rank present.
    pub f_m_zero: Vec<(HalfInteger, f64)>,
    /// Minimum of `|⟨ψ|e^{−iβL_y}|ψ⟩|²` over the β grid.
    pub min_rotation_fidelity: f64,
    pub rotation_sensitive: bool,
}

/// Largest total dimension accepted by [`missing_mode_family`].
pub const MAX_FAMILY_DIM: usize = 200;

/// `|ψ_N⟩ = N^{-1/2} Σ_{k=1}^N |j = N² + 2k, m = N² + k⟩` on the direct sum of
/// the spins involved, with its rank-1 and `m = 0` mode report.
pub fn missing_mode_family(n: usize) -> Result<MissingModeReport> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let nn = (n * n) as i32;
    let blocks: Vec<Block> = (1..=n as i32)
        .map(|k| Block {
            j: HalfInteger::from_int(nn + 2 * k),
            mult: 1,
        })
        .collect();
    let dim: usize = blocks.iter().map(Block::dim).sum();
    if dim > MAX_FAMILY_DIM {
        return Err(Error::TooLarge(format!("N = {n} needs dimension {dim} > {MAX_FAMILY_DIM}")));
    }
    let rep = SU2Representation::new(blocks)?;
    let mut psi = nalgebra::DVector::from_element(dim, C64::new(0.0, 0.0));
    let amp = 1.0 / (n as f64).sqrt();
    for k in 1..=n as i32 {
        let idx = rep.index((k - 1) as usize, HalfInteger::from_int(nn + k), 0);
        psi[idx] = amp.into();
    }
    let rho = projector(&psi);
    let one = HalfInteger::ONE;
    let f = |mu: HalfInteger, m: HalfInteger| -> Result<f64> { trace_norm(&so3_mode_project(&rho, &rep, mu, m)?) };
    let f_one_plus = f(one, one)?;
    let f_one_minus = f(one, -one)?;
    let ranks: BTreeSet<HalfInteger> = crate::su2::rank_structure(&rep).into_iter().map(|(mu, _)| mu).collect();
    let mut f_m_zero = Vec::new();
    for mu in ranks {
        if mu.is_integer() {
            f_m_zero.push((mu, f(mu, HalfInteger::ZERO)?));
        }
    }
    let mut min_fid = 1.0f64;
    for step in 1..=180 {
        let beta = step as f64 * std::f64::consts::PI / 180.0;
        let u = rep.unitary(EulerAngles::new(0.0, beta, 0.0));
        let amp = (psi.adjoint() * (&u * &psi))[(0, 0)];
        min_fid = min_fid.min(amp.norm_sqr());
    }
    Ok(MissingModeReport {
        n,
        rep,
        state: DensityMatrix::new_unchecked(rho),
        f_one_plus,
        f_one_minus,
        f_m_zero,
        min_rotation_fidelity: min_fid,
        rotation_sensitive: min_fid < 0.99,
    })
}
