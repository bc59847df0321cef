//! Random covariant channels and instruments for property tests.
//!
//! A random trace-preserving Kraus map is twirled exactly. The twirl of a
//! CPTP map is CPTP, so no renormalization or resampling is needed.

use rand::Rng;

use crate::error::Result;
use crate::linalg::Superoperator;
use crate::random::kraus_operators;
use crate::su2::SU2Representation;

use super::superop::ChannelBases;

pub fn random_covariant_channel<R: Rng + ?Sized>(
    in_rep: &SU2Representation,
    out_rep: &SU2Representation,
    kraus_rank: usize,
    rng: &mut R,
) -> Result<Superoperator> {
    let cb = ChannelBases::new(in_rep, out_rep);
    random_covariant_channel_with(&cb, kraus_rank, rng)
}

pub fn random_covariant_channel_with<R: Rng + ?Sized>(cb: &ChannelBases, kraus_rank: usize, rng: &mut R) -> Result<Superoperator> {
    let k = kraus_operators(cb.in_dim(), cb.out_dim(), kraus_rank, rng);
    cb.twirl(&Superoperator::from_kraus(&k)?)
}

/// Covariant instrument: CP covariant maps summing to a covariant channel.
/// The Kraus operators of one random channel are split among the outcomes.
pub fn random_covariant_instrument<R: Rng + ?Sized>(
    in_rep: &SU2Representation,
    out_rep: &SU2Representation,
    outcomes: usize,
    kraus_per_outcome: usize,
    rng: &mut R,
) -> Result<Vec<Superoperator>> {
    let cb = ChannelBases::new(in_rep, out_rep);
    let per = kraus_per_outcome.max(1);
    let k = kraus_operators(cb.in_dim(), cb.out_dim(), outcomes.max(1) * per, rng);
    k.chunks(per)
        .map(|group| cb.twirl(&Superoperator::from_kraus(group)?))
        .collect()
}
