//! SU(2) representations, tensor operators and mode decompositions.

mod angular;
mod basis;
mod cg;
mod half;
mod modes;
mod rep;
mod wigner;

pub use angular::{angular_momentum, m_index, AngularMomentumOps};
pub use cg::{clebsch_gordan, clebsch_gordan_f64};
pub(crate) use cg::operator_coupling;
pub use half::HalfInteger;
pub(crate) use half::parity_sign;
pub use rep::{Block, SU2Representation};
pub use wigner::{small_d, wigner_d_matrix, EulerAngles};
pub use basis::{
    hermitian_conjugate_mode_check, rank_structure, tensor_basis_general, tensor_basis_spin_j, BlockPair,
    ConjugateModeReport, TensorOperator, TensorOperatorBasis,
};
pub use modes::{parseval_residual, so3_decompose, so3_mode_project, SO3ModeSpectrum};
