//! Seedable random operators, states and channels for tests and batch runs.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, hermitian_function, real, ComplexMatrix, DensityMatrix, C64};

pub fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    (&g + g.adjoint()) * real(0.5)
}

pub fn pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(d, |_, _| gaussian_c64(rng));
    let n = v.norm();
    v / real(n)
}

/// Random state `G G† / tr(G G†)` with `G` a `d × rank` Ginibre matrix.
pub fn density_matrix<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(d, rank.max(1), rng);
    let m = &g * g.adjoint();
    let t = m.trace();
    DensityMatrix::new_unchecked(m / t)
}

/// Haar-distributed unitary via QR with the phase correction on R's diagonal.
pub fn unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let z = r[(i, i)];
            if z.norm() > 0.0 {
                z / z.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        } else {
            C64::new(0.0, 0.0)
        }
    });
    q * phases
}

/// Kraus operators `K_i = G_i S^{-1/2}` with `S = Σ G_i† G_i`, so `Σ K_i† K_i = I`.
///
/// `S` is only invertible when `rank · d_out ≥ d_in`, so the rank is raised
/// to `⌈d_in / d_out⌉` when needed.
pub fn kraus_operators<R: Rng + ?Sized>(d_in: usize, d_out: usize, rank: usize, rng: &mut R) -> Vec<ComplexMatrix> {
    let rank = rank.max(d_in.div_ceil(d_out.max(1))).max(1);
    let gs: Vec<ComplexMatrix> = (0..rank).map(|_| ginibre(d_out, d_in, rng)).collect();
    let s = gs
        .iter()
        .fold(ComplexMatrix::zeros(d_in, d_in), |acc, g| acc + g.adjoint() * g);
    let s_inv_sqrt = hermitian_function(&s, |x| real(1.0 / x.sqrt()));
    gs.into_iter().map(|g| g * &s_inv_sqrt).collect()
}
