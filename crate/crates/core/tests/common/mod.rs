//! Test-side oracles that do not go through the library's Wigner-D,
//! Clebsch–Gordan or tensor-basis code.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use asymmodes::linalg::{c, unitary_exp, ComplexMatrix, C64};
use asymmodes::su2::{EulerAngles, HalfInteger, SU2Representation};
use gauss_quad::legendre::GaussLegendre;

pub fn hi(twice: i32) -> HalfInteger {
    HalfInteger::from_twice(twice)
}

/// `(L_x, L_y, L_z)` for spin `j` in the descending-`m` basis, from the
/// ladder matrix elements `√(j(j+1) − m(m+1))`.
pub fn spin_ops(j: HalfInteger) -> [ComplexMatrix; 3] {
    let jv = j.value();
    let d = j.dim();
    let mut lp = ComplexMatrix::zeros(d, d);
    let mut lz = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        let m = jv - i as f64;
        lz[(i, i)] = c(m, 0.0);
        if i > 0 {
            // ⟨m+1| L+ |m⟩
            lp[(i - 1, i)] = c((jv * (jv + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let lm = lp.adjoint();
    let lx = (&lp + &lm) * c(0.5, 0.0);
    let ly = (&lp - &lm) * c(0.0, -0.5);
    [lx, ly, lz]
}

/// Generators on a representation, assembled block by block from [`spin_ops`].
pub fn rep_generators(rep: &SU2Representation) -> [ComplexMatrix; 3] {
    let d = rep.dim();
    let mut out = [ComplexMatrix::zeros(d, d), ComplexMatrix::zeros(d, d), ComplexMatrix::zeros(d, d)];
    for (b, blk) in rep.blocks().iter().enumerate() {
        let ops = spin_ops(blk.j);
        let ms: Vec<HalfInteger> = blk.j.projections().collect();
        for alpha in 0..blk.mult {
            for (r, &mr) in ms.iter().enumerate() {
                for (cc, &mc) in ms.iter().enumerate() {
                    let (i, k) = (rep.index(b, mr, alpha), rep.index(b, mc, alpha));
                    for a in 0..3 {
                        out[a][(i, k)] = ops[a][(r, cc)];
                    }
                }
            }
        }
    }
    out.map(|g| rep.from_standard(&g))
}

/// `e^{−iαL_z} e^{−iβL_y} e^{−iγL_z}`.
pub fn rotation(gens: &[ComplexMatrix; 3], g: EulerAngles) -> ComplexMatrix {
    unitary_exp(&gens[2], g.alpha) * unitary_exp(&gens[1], g.beta) * unitary_exp(&gens[2], g.gamma)
}

/// Spin-`j` rotation matrix from exponentiated generators; rows and columns
/// in descending `m`.
pub fn spin_rotation(j: HalfInteger, g: EulerAngles) -> ComplexMatrix {
    rotation(&spin_ops(j), g)
}

pub fn m_pos(j: HalfInteger, m: HalfInteger) -> usize {
    ((j.twice() - m.twice()) / 2) as usize
}

/// Normalized product rule on SU(2): equispaced α and γ, Gauss–Legendre in
/// cos β. Exact for matrix elements of representations up to spin `4J`
/// with `J` the largest spin involved.
///
/// With `double_cover`, γ runs over [0, 4π) so that terms odd under
/// `g → −g` average to zero. Needed whenever integer and half-integer spins
/// are mixed.
pub struct EulerQuadrature {
    pub points: Vec<(EulerAngles, f64)>,
    n_alpha: usize,
    n_gamma: usize,
    gamma_span: f64,
    betas: Vec<f64>,
}

impl EulerQuadrature {
    pub fn new(max_spin: HalfInteger, double_cover: bool) -> Self {
        let n_alpha = (2 * max_spin.twice() + 1) as usize;
        let (n_gamma, gamma_span) = if double_cover { (2 * n_alpha, 4.0 * PI) } else { (n_alpha, 2.0 * PI) };
        let n_beta = n_alpha.max(2);
        let gl = GaussLegendre::new(NonZeroUsize::new(n_beta).unwrap());
        let mut points = Vec::with_capacity(n_alpha * n_gamma * n_beta);
        let mut betas = Vec::with_capacity(n_beta);
        for &(x, wb) in gl.as_node_weight_pairs() {
            let beta = x.clamp(-1.0, 1.0).acos();
            betas.push(beta);
            for ia in 0..n_alpha {
                for ig in 0..n_gamma {
                    let alpha = 2.0 * PI * ia as f64 / n_alpha as f64;
                    let gamma = gamma_span * ig as f64 / n_gamma as f64;
                    let w = wb / 2.0 / (n_alpha * n_gamma) as f64;
                    points.push((EulerAngles::new(alpha, beta, gamma), w));
                }
            }
        }
        Self {
            points,
            n_alpha,
            n_gamma,
            gamma_span,
            betas,
        }
    }

    pub fn for_rep(rep: &SU2Representation) -> Self {
        let parities: std::collections::BTreeSet<bool> = rep.blocks().iter().map(|b| b.j.is_integer()).collect();
        Self::new(rep.max_spin(), parities.len() > 1)
    }

    /// Rotation matrices at every node, from per-angle factors.
    fn rotations(&self, gens: &[ComplexMatrix; 3]) -> Vec<ComplexMatrix> {
        let ea: Vec<ComplexMatrix> =
            (0..self.n_alpha).map(|i| unitary_exp(&gens[2], 2.0 * PI * i as f64 / self.n_alpha as f64)).collect();
        let eg: Vec<ComplexMatrix> = (0..self.n_gamma)
            .map(|i| unitary_exp(&gens[2], self.gamma_span * i as f64 / self.n_gamma as f64))
            .collect();
        let mut out = Vec::with_capacity(self.points.len());
        for &beta in &self.betas {
            let eb = unitary_exp(&gens[1], beta);
            for a in &ea {
                let ab = a * &eb;
                for g in &eg {
                    out.push(&ab * g);
                }
            }
        }
        out
    }

    /// `(2μ+1) ∫ dg conj(D^μ_{mm}(g)) U(g) X U(g)†` for every requested mode.
    pub fn mode_projections(
        &self,
        x: &ComplexMatrix,
        gens: &[ComplexMatrix; 3],
        modes: &[(HalfInteger, HalfInteger)],
    ) -> Vec<ComplexMatrix> {
        self.mode_projections_many(std::slice::from_ref(x), gens, modes).pop().unwrap()
    }

    /// [`Self::mode_projections`] for several operators sharing one set of
    /// rotation matrices.
    pub fn mode_projections_many(
        &self,
        xs: &[ComplexMatrix],
        gens: &[ComplexMatrix; 3],
        modes: &[(HalfInteger, HalfInteger)],
    ) -> Vec<Vec<ComplexMatrix>> {
        let us = self.rotations(gens);
        let mut ranks: Vec<HalfInteger> = modes.iter().map(|&(mu, _)| mu).collect();
        ranks.sort();
        ranks.dedup();
        let rank_ops: BTreeMap<HalfInteger, [ComplexMatrix; 3]> = ranks.iter().map(|&mu| (mu, spin_ops(mu))).collect();
        // Weighted conj(D^μ_{mm}(g)) at every node.
        let mut weights = vec![Vec::with_capacity(self.points.len()); modes.len()];
        let mut per_beta: BTreeMap<(HalfInteger, usize), ComplexMatrix> = BTreeMap::new();
        for (p, (g, w)) in self.points.iter().enumerate() {
            let ib = p / (self.n_alpha * self.n_gamma);
            for (k, &(mu, m)) in modes.iter().enumerate() {
                let d = per_beta
                    .entry((mu, ib))
                    .or_insert_with(|| unitary_exp(&rank_ops[&mu][1], self.betas[ib]));
                let i = m_pos(mu, m);
                let phase = C64::from_polar(1.0, -m.value() * (g.alpha + g.gamma));
                let dmm = phase * d[(i, i)];
                weights[k].push(dmm.conj() * (*w * mu.dim() as f64));
            }
        }
        xs.iter()
            .map(|x| {
                let d = x.nrows();
                let mut acc = vec![ComplexMatrix::zeros(d, d); modes.len()];
                for (p, u) in us.iter().enumerate() {
                    let y = u * x * u.adjoint();
                    for (k, a) in acc.iter_mut().enumerate() {
                        a.zip_apply(&y, |s, v| *s += v * weights[k][p]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Group average `∫ dg U(g) X U(g)†`.
    pub fn twirl(&self, x: &ComplexMatrix, gens: &[ComplexMatrix; 3]) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(x.nrows(), x.ncols());
        for (u, (_, w)) in self.rotations(gens).iter().zip(&self.points) {
            acc += u * x * u.adjoint() * c(*w, 0.0);
        }
        acc
    }
}

/// Ranks occurring in `B(H)` for a representation, from the triangle rule.
pub fn ranks_of(rep: &SU2Representation) -> Vec<HalfInteger> {
    let mut out = Vec::new();
    for a in rep.blocks() {
        for b in rep.blocks() {
            let lo = (a.j.twice() - b.j.twice()).abs();
            let hi_ = a.j.twice() + b.j.twice();
            for t in (lo..=hi_).step_by(2) {
                out.push(hi(t));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every `(μ, m)` label in `B(H)`.
pub fn mode_labels(rep: &SU2Representation) -> Vec<(HalfInteger, HalfInteger)> {
    ranks_of(rep).into_iter().flat_map(|mu| mu.projections().map(move |m| (mu, m))).collect()
}

fn commutator(a: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    a * x - x * a
}

/// Mode component by spectral projection of the commutator superoperators
/// `Σ_i [L_i,[L_i,·]]` (eigenvalue `μ(μ+1)`) and `[L_z,·]` (eigenvalue `m`),
/// written as Lagrange interpolation polynomials.
pub fn casimir_mode_project(
    x: &ComplexMatrix,
    gens: &[ComplexMatrix; 3],
    ranks: &[HalfInteger],
    mu: HalfInteger,
    m: HalfInteger,
) -> ComplexMatrix {
    let casimir = |y: &ComplexMatrix| -> ComplexMatrix {
        gens.iter().fold(ComplexMatrix::zeros(y.nrows(), y.ncols()), |acc, l| acc + commutator(l, &commutator(l, y)))
    };
    let lambda = |r: HalfInteger| r.value() * (r.value() + 1.0);
    let mut y = x.clone();
    for &nu in ranks.iter().filter(|&&nu| nu != mu) {
        let shifted = casimir(&y) - &y * c(lambda(nu), 0.0);
        y = shifted * c(1.0 / (lambda(mu) - lambda(nu)), 0.0);
    }
    let max_m = ranks.iter().map(|r| r.twice()).max().unwrap_or(0);
    let mut t = -max_m;
    while t <= max_m {
        let mm = hi(t);
        if mm != m && (t - m.twice()) % 2 == 0 {
            let shifted = commutator(&gens[2], &y) - &y * c(mm.value(), 0.0);
            y = shifted * c(1.0 / (m.value() - mm.value()), 0.0);
        }
        t += 1;
    }
    y
}

/// `Σ σ_i` from a singular value decomposition.
pub fn trace_norm(x: &ComplexMatrix) -> f64 {
    x.clone().svd(false, false).singular_values.iter().sum()
}

pub fn max_abs(x: &ComplexMatrix) -> f64 {
    x.iter().map(|z: &C64| z.norm()).fold(0.0, f64::max)
}

pub fn hs_norm(x: &ComplexMatrix) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}
