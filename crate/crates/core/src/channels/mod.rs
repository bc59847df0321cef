//! Rotationally covariant superoperators: reduction to per-rank coefficient
//! matrices, superoperator modes, measurement channels and reference-frame
//! simulation.

mod covariant;
mod frame;
mod measurement;
mod random;
mod superop;

pub use covariant::{
    apply_reduced, coefficient_bounds_check, compose_reduced, reduce_covariant, superoperator_from_reduced, BoundEntry,
    BoundsReport, CovariantChannelCoefficients, Reduction,
};
pub(crate) use covariant::reduce_with;
pub use frame::{
    coupled_phase_unitary, effective_channel, missing_mode_family, simulate_with_frame, MissingModeReport,
    DEFAULT_COVARIANCE_TOL, MAX_FAMILY_DIM,
};
pub use measurement::{flag_register, measurement_channel, measurement_superoperator, MeasurementChannel};
pub use random::{random_covariant_channel, random_covariant_channel_with, random_covariant_instrument};
pub use superop::{
    covariance_residual, superop_decompose, superop_mode_project, twirl_superop, ChannelBases, SuperopModeSpectrum,
};
