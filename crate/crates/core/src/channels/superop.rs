//! Superoperators expressed in tensor operator bases: exact twirl and
//! `(ν, M)` mode decomposition.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{dim_err, Result};
use crate::linalg::{hs_norm, ComplexMatrix, Superoperator, C64};
use crate::su2::{clebsch_gordan, parity_sign, tensor_basis_general, HalfInteger, SU2Representation, TensorOperatorBasis};

/// A full rank-`μ` multiplet `T^{(μ,α)}_m`, `m = μ..−μ`, at basis positions
/// `start..start + 2μ + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Multiplet {
    pub mu: HalfInteger,
    pub alpha: usize,
    pub start: usize,
}

pub(crate) fn multiplets(basis: &TensorOperatorBasis) -> Vec<Multiplet> {
    let mut out = Vec::new();
    for (i, t) in basis.ops().iter().enumerate() {
        if t.m == t.mu {
            out.push(Multiplet {
                mu: t.mu,
                alpha: t.alpha,
                start: i,
            });
        }
    }
    out
}

/// Input and output tensor bases for maps `B(H_in) → B(H_out)`.
#[derive(Debug, Clone)]
pub struct ChannelBases {
    pub in_basis: TensorOperatorBasis,
    pub out_basis: TensorOperatorBasis,
    in_liouville: ComplexMatrix,
    out_liouville: ComplexMatrix,
    in_multiplets: Vec<Multiplet>,
    out_multiplets: Vec<Multiplet>,
}

impl ChannelBases {
    pub fn new(in_rep: &SU2Representation, out_rep: &SU2Representation) -> Self {
        Self::from_bases(tensor_basis_general(in_rep), tensor_basis_general(out_rep))
    }

    pub fn from_bases(in_basis: TensorOperatorBasis, out_basis: TensorOperatorBasis) -> Self {
        Self {
            in_liouville: in_basis.liouville_matrix(),
            out_liouville: out_basis.liouville_matrix(),
            in_multiplets: multiplets(&in_basis),
            out_multiplets: multiplets(&out_basis),
            in_basis,
            out_basis,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_basis.rep().dim()
    }

    pub fn out_dim(&self) -> usize {
        self.out_basis.rep().dim()
    }

    fn check(&self, e: &Superoperator) -> Result<()> {
        if e.in_dim() != self.in_dim() || e.out_dim() != self.out_dim() {
            return Err(dim_err(
                format!("{} -> {}", self.in_dim(), self.out_dim()),
                format!("{} -> {}", e.in_dim(), e.out_dim()),
            ));
        }
        Ok(())
    }

    /// `e_{kl} = tr(S_k† E(T_l))`.
    pub fn tensor_components(&self, e: &Superoperator) -> Result<ComplexMatrix> {
        self.check(e)?;
        Ok(self.out_liouville.adjoint() * e.liouville() * &self.in_liouville)
    }

    pub fn from_tensor_components(&self, comps: &ComplexMatrix) -> Superoperator {
        let l = &self.out_liouville * comps * self.in_liouville.adjoint();
        Superoperator::new(self.in_dim(), self.out_dim(), l).expect("shapes follow the bases")
    }

    /// Group average `∫dg 𝒰^out_g ∘ E ∘ 𝒰^in_{g⁻¹}`, exactly.
    ///
    /// In tensor components the covariant part keeps only equal-rank blocks
    /// proportional to the identity in `m`, with the coefficient averaged
    /// over `m`.
    pub fn twirl(&self, e: &Superoperator) -> Result<Superoperator> {
        let comps = self.tensor_components(e)?;
        Ok(self.from_tensor_components(&twirl_components(&comps, &self.out_multiplets, &self.in_multiplets)))
    }

    /// `‖E − twirl(E)‖_HS`; zero exactly for covariant maps.
    pub fn covariance_residual(&self, e: &Superoperator) -> Result<f64> {
        let comps = self.tensor_components(e)?;
        let cov = twirl_components(&comps, &self.out_multiplets, &self.in_multiplets);
        Ok(hs_norm(&(comps - cov)))
    }

    /// Ranks `ν` that can occur for superoperators between these spaces.
    pub fn superop_ranks(&self) -> Vec<HalfInteger> {
        let mut set = BTreeSet::new();
        for o in &self.out_multiplets {
            for i in &self.in_multiplets {
                let mut t = (o.mu.twice() - i.mu.twice()).abs();
                while t <= o.mu.twice() + i.mu.twice() {
                    set.insert(t);
                    t += 2;
                }
            }
        }
        set.into_iter().map(HalfInteger::from_twice).collect()
    }

    fn project_components(&self, comps: &ComplexMatrix, nu: HalfInteger, big_m: HalfInteger) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(comps.nrows(), comps.ncols());
        if big_m.twice().abs() > nu.twice() || (nu.twice() - big_m.twice()) % 2 != 0 {
            return out;
        }
        for o in &self.out_multiplets {
            for i in &self.in_multiplets {
                let (mo, mi) = (o.mu, i.mu);
                if nu.twice() < (mo.twice() - mi.twice()).abs()
                    || nu.twice() > mo.twice() + mi.twice()
                    || (mo.twice() + mi.twice() + nu.twice()) % 2 != 0
                {
                    continue;
                }
                // bra ⟨T_n| transforms like (−1)^{μ+n} |μ, −n⟩
                let mut entries = Vec::new();
                for (r, mp) in mo.projections().enumerate() {
                    for (c, n) in mi.projections().enumerate() {
                        let cg = clebsch_gordan(mo, mp, mi, -n, nu, big_m);
                        if cg != 0.0 {
                            entries.push((o.start + r, i.start + c, parity_sign(mi.twice() + n.twice()) * cg));
                        }
                    }
                }
                let coef: C64 = entries.iter().map(|&(r, c, w)| comps[(r, c)] * w).sum();
                for (r, c, w) in entries {
                    out[(r, c)] += coef * w;
                }
            }
        }
        out
    }

    /// Mode `(ν, M)` of a superoperator under `𝔘_g[E] = 𝒰^out_g ∘ E ∘ 𝒰^in_{g⁻¹}`.
    pub fn mode_project(&self, e: &Superoperator, nu: HalfInteger, big_m: HalfInteger) -> Result<Superoperator> {
        let comps = self.tensor_components(e)?;
        Ok(self.from_tensor_components(&self.project_components(&comps, nu, big_m)))
    }

    pub fn decompose(&self, e: &Superoperator) -> Result<SuperopModeSpectrum> {
        let comps = self.tensor_components(e)?;
        let mut components = BTreeMap::new();
        let mut norms = BTreeMap::new();
        for nu in self.superop_ranks() {
            for big_m in nu.projections() {
                let p = self.project_components(&comps, nu, big_m);
                // bases are orthonormal, so the Liouville HS norm is preserved
                norms.insert((nu, big_m), hs_norm(&p));
                components.insert((nu, big_m), self.from_tensor_components(&p));
            }
        }
        Ok(SuperopModeSpectrum { components, norms })
    }
}

pub(crate) fn twirl_components(comps: &ComplexMatrix, outs: &[Multiplet], ins: &[Multiplet]) -> ComplexMatrix {
    let mut cov = ComplexMatrix::zeros(comps.nrows(), comps.ncols());
    for o in outs {
        for i in ins.iter().filter(|i| i.mu == o.mu) {
            let d = o.mu.dim();
            let avg: C64 = (0..d).map(|k| comps[(o.start + k, i.start + k)]).sum::<C64>() / d as f64;
            for k in 0..d {
                cov[(o.start + k, i.start + k)] = avg;
            }
        }
    }
    cov
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperopModeSpectrum {
    pub components: BTreeMap<(HalfInteger, HalfInteger), Superoperator>,
    /// HS norm of each Liouville component.
    pub norms: BTreeMap<(HalfInteger, HalfInteger), f64>,
}

impl SuperopModeSpectrum {
    pub fn reconstruct(&self) -> Option<Superoperator> {
        let mut it = self.components.values();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, c| &acc + c))
    }

    pub fn modes(&self, tol: f64) -> Vec<(HalfInteger, HalfInteger)> {
        self.norms.iter().filter(|(_, &n)| n > tol).map(|(k, _)| *k).collect()
    }

    pub fn norm(&self, nu: HalfInteger, m: HalfInteger) -> f64 {
        self.norms.get(&(nu, m)).copied().unwrap_or(0.0)
    }
}

pub fn twirl_superop(e: &Superoperator, in_rep: &SU2Representation, out_rep: &SU2Representation) -> Result<Superoperator> {
    ChannelBases::new(in_rep, out_rep).twirl(e)
}

pub fn covariance_residual(e: &Superoperator, in_rep: &SU2Representation, out_rep: &SU2Representation) -> Result<f64> {
    ChannelBases::new(in_rep, out_rep).covariance_residual(e)
}

pub fn superop_mode_project(
    e: &Superoperator,
    in_rep: &SU2Representation,
    out_rep: &SU2Representation,
    nu: HalfInteger,
    big_m: HalfInteger,
) -> Result<Superoperator> {
    ChannelBases::new(in_rep, out_rep).mode_project(e, nu, big_m)
}

pub fn superop_decompose(
    e: &Superoperator,
    in_rep: &SU2Representation,
    out_rep: &SU2Representation,
) -> Result<SuperopModeSpectrum> {
    ChannelBases::new(in_rep, out_rep).decompose(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, tensor_product};
    use crate::random;
    use crate::su2::{angular_momentum, EulerAngles, Block};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hi(t: i32) -> HalfInteger {
        HalfInteger::from_twice(t)
    }

    fn rotated(e: &Superoperator, in_rep: &SU2Representation, out_rep: &SU2Representation, g: EulerAngles) -> Superoperator {
        let uo = out_rep.unitary(g);
        let ui = in_rep.unitary(g);
        let lo = tensor_product(&uo, &uo.map(|z| z.conj()));
        let li = tensor_product(&ui, &ui.map(|z| z.conj()));
        Superoperator::new(e.in_dim(), e.out_dim(), lo * e.liouville() * li.adjoint()).unwrap()
    }

    #[test]
    fn twirl_is_covariant_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let pairs = [
            (SU2Representation::spin(hi(1)), SU2Representation::spin(hi(1))),
            (SU2Representation::spin(hi(2)), SU2Representation::spin(hi(1))),
            (
                SU2Representation::new(vec![Block { j: hi(0), mult: 1 }, Block { j: hi(1), mult: 1 }]).unwrap(),
                SU2Representation::spin(hi(3)),
            ),
        ];
        for (a, b) in pairs {
            let cb = ChannelBases::new(&a, &b);
            let k = random::kraus_operators(a.dim(), b.dim(), 3, &mut rng);
            let e = Superoperator::from_kraus(&k).unwrap();
            let t = cb.twirl(&e).unwrap();
            assert!(cb.covariance_residual(&t).unwrap() < 1e-12);
            assert!(max_abs_diff(cb.twirl(&t).unwrap().liouville(), t.liouville()) < 1e-12);
            // covariance checked directly against rotated copies
            for _ in 0..3 {
                let g = EulerAngles::haar(&mut rng);
                assert!(max_abs_diff(rotated(&t, &a, &b, g).liouville(), t.liouville()) < 1e-11);
            }
            // twirl of a TP map stays TP
            assert!(t.trace_preservation_residual() < 1e-12);
            assert!(crate::linalg::min_eigenvalue(&t.choi()) > -1e-12);
        }
    }

    #[test]
    fn rotations_are_not_covariant() {
        let j = hi(2);
        let rep = SU2Representation::spin(j);
        let u = rep.unitary(EulerAngles::new(0.2, 0.9, 0.1));
        let e = Superoperator::conjugation(&u).unwrap();
        let t = twirl_superop(&e, &rep, &rep).unwrap();
        assert!(max_abs_diff(t.liouville(), e.liouville()) > 0.1);
        assert!(covariance_residual(&e, &rep, &rep).unwrap() > 0.1);
    }

    #[test]
    fn decomposition_reconstructs_and_respects_band_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for (t1, t2) in [(1, 1), (2, 1), (1, 3)] {
            let (a, b) = (SU2Representation::spin(hi(t1)), SU2Representation::spin(hi(t2)));
            let cb = ChannelBases::new(&a, &b);
            let l = random::ginibre(b.dim() * b.dim(), a.dim() * a.dim(), &mut rng);
            let e = Superoperator::from_liouville(l).unwrap();
            let spec = cb.decompose(&e).unwrap();
            assert!(max_abs_diff(spec.reconstruct().unwrap().liouville(), e.liouville()) < 1e-12);
            let max_rank = spec.norms.keys().map(|(nu, _)| nu.twice()).max().unwrap();
            assert_eq!(max_rank, 2 * (t1 + t2));
            let total: f64 = spec.norms.values().map(|n| n * n).sum();
            assert!((total - e.hs_norm().powi(2)).abs() < 1e-9);
            // the ν = 0 component is the twirl
            let zero = &spec.components[&(hi(0), hi(0))];
            assert!(max_abs_diff(zero.liouville(), cb.twirl(&e).unwrap().liouville()) < 1e-12);
        }
    }

    /// Independent check of the (ν, M) labels: a mode component must pick up
    /// the phase `e^{−iMφ}` under 𝔘 for rotations about z.
    #[test]
    fn mode_components_transform_correctly_about_z() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let (a, b) = (SU2Representation::spin(hi(1)), SU2Representation::spin(hi(2)));
        let cb = ChannelBases::new(&a, &b);
        let l = random::ginibre(9, 4, &mut rng);
        let e = Superoperator::from_liouville(l).unwrap();
        let spec = cb.decompose(&e).unwrap();
        let phi = 0.37;
        let g = EulerAngles::new(phi, 0.0, 0.0);
        for ((_, m), comp) in &spec.components {
            let r = rotated(comp, &a, &b, g);
            let phase = C64::from_polar(1.0, -m.value() * phi);
            assert!(max_abs_diff(r.liouville(), &(comp.liouville() * phase)) < 1e-12);
        }
    }

    #[test]
    fn spin_half_conjugation_by_z_rotation_has_only_m_zero() {
        let rep = SU2Representation::spin(HalfInteger::HALF);
        let lz = angular_momentum(HalfInteger::HALF).lz;
        let u = crate::linalg::unitary_exp(&lz, -0.8);
        let e = Superoperator::conjugation(&u).unwrap();
        let spec = superop_decompose(&e, &rep, &rep).unwrap();
        for ((nu, m), n) in &spec.norms {
            if m.twice() != 0 {
                assert!(*n < 1e-12, "({nu},{m}) = {n}");
            }
            assert!(nu.twice() <= 4);
        }
        assert!(spec.norm(hi(2), hi(0)) > 1e-3);
    }
}
