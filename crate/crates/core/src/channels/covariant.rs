use std::collections::BTreeMap;

use crate::error::{dim_err, Error, Result};
use crate::linalg::{ensure_dim, trace_norm, ComplexMatrix, Superoperator, C64};
use crate::su2::{HalfInteger, TensorOperatorBasis};

use super::superop::ChannelBases;

/// Reduced description of a covariant map: one matrix `c^{(μ)}` of shape
/// `(out multiplicity, in multiplicity)` per rank present on both sides, with
/// `E(T^{(μ,α)}_m) = Σ_β c^{(μ)}_{βα} S^{(μ,β)}_m`.
#[derive(Debug, Clone)]
pub struct CovariantChannelCoefficients {
    pub mu_blocks: BTreeMap<HalfInteger, ComplexMatrix>,
    pub in_basis: TensorOperatorBasis,
    pub out_basis: TensorOperatorBasis,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub coefficients: CovariantChannelCoefficients,
    /// Max over `(μ, m, α)` of `‖E(T^{(μ,α)}_m) − Σ_β c_{βα} S^{(μ,β)}_m‖_HS`.
    pub residual: f64,
    /// Max entry difference between coefficients read at `m = μ` and `m = −μ`.
    pub cross_check: f64,
    pub covariant: bool,
}

impl CovariantChannelCoefficients {
    pub fn block(&self, mu: HalfInteger) -> Option<&ComplexMatrix> {
        self.mu_blocks.get(&mu)
    }

    /// Scalar `c^{(μ)}` for multiplicity-free bases.
    pub fn scalar(&self, mu: HalfInteger) -> Option<C64> {
        self.mu_blocks
            .get(&mu)
            .filter(|b| b.shape() == (1, 1))
            .map(|b| b[(0, 0)])
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.mu_blocks.values().all(|b| b.shape() == (1, 1))
    }

    /// Real parameters beyond the trace-fixed `c^{(0)}` for multiplicity-free
    /// bases, where every nontrivial `c^{(μ)}` is a single real number.
    pub fn free_parameter_count(&self) -> Option<usize> {
        self.is_multiplicity_free()
            .then(|| self.mu_blocks.keys().filter(|mu| mu.twice() > 0).count())
    }
}

pub fn reduce_covariant(
    e: &Superoperator,
    in_basis: &TensorOperatorBasis,
    out_basis: &TensorOperatorBasis,
    tol: f64,
) -> Result<Reduction> {
    let cb = ChannelBases::from_bases(in_basis.clone(), out_basis.clone());
    reduce_with(&cb, e, tol)
}

pub(crate) fn reduce_with(cb: &ChannelBases, e: &Superoperator, tol: f64) -> Result<Reduction> {
    let comps = cb.tensor_components(e)?;
    let mut mu_blocks = BTreeMap::new();
    let mut low_blocks = BTreeMap::new();
    for mu in cb.in_basis.ranks() {
        let n_out = cb.out_basis.multiplicity(mu);
        if n_out == 0 {
            continue;
        }
        let n_in = cb.in_basis.multiplicity(mu);
        let mut top = ComplexMatrix::zeros(n_out, n_in);
        let mut low = ComplexMatrix::zeros(n_out, n_in);
        for alpha in 0..n_in {
            for beta in 0..n_out {
                let at = |m: HalfInteger| {
                    let col = cb.in_basis.position(mu, m, alpha).expect("input op");
                    let row = cb.out_basis.position(mu, m, beta).expect("output op");
                    comps[(row, col)]
                };
                top[(beta, alpha)] = at(mu);
                low[(beta, alpha)] = at(-mu);
            }
        }
        mu_blocks.insert(mu, top);
        low_blocks.insert(mu, low);
    }
    let cross_check = mu_blocks
        .iter()
        .map(|(mu, top)| crate::linalg::max_abs_diff(top, &low_blocks[mu]))
        .fold(0.0, f64::max);

    let mut predicted = ComplexMatrix::zeros(comps.nrows(), comps.ncols());
    for (col, t) in cb.in_basis.ops().iter().enumerate() {
        if let Some(block) = mu_blocks.get(&t.mu) {
            for beta in 0..block.nrows() {
                let row = cb.out_basis.position(t.mu, t.m, beta).expect("output op");
                predicted[(row, col)] = block[(beta, t.alpha)];
            }
        }
    }
    let diff = comps - predicted;
    let residual = (0..diff.ncols())
        .map(|c| diff.column(c).norm())
        .fold(0.0, f64::max);
    Ok(Reduction {
        coefficients: CovariantChannelCoefficients {
            mu_blocks,
            in_basis: cb.in_basis.clone(),
            out_basis: cb.out_basis.clone(),
        },
        residual,
        cross_check,
        covariant: residual <= tol && cross_check <= tol,
    })
}

/// Evaluates the covariant map described by `c` on `x`.
pub fn apply_reduced(c: &CovariantChannelCoefficients, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_dim(x, c.in_basis.rep().dim())?;
    let d_out = c.out_basis.rep().dim();
    let mut out = ComplexMatrix::zeros(d_out, d_out);
    let coeffs = c.in_basis.coefficients(x)?;
    for (t, a) in c.in_basis.ops().iter().zip(coeffs) {
        let Some(block) = c.mu_blocks.get(&t.mu) else { continue };
        for beta in 0..block.nrows() {
            let w = block[(beta, t.alpha)] * a;
            if w != C64::new(0.0, 0.0) {
                out += c.out_basis.get(t.mu, t.m, beta).expect("output op") * w;
            }
        }
    }
    Ok(out)
}

/// Coefficients of `d ∘ c` (apply `c` first): `d^{(μ)} c^{(μ)}` per rank.
pub fn compose_reduced(d: &CovariantChannelCoefficients, c: &CovariantChannelCoefficients) -> Result<CovariantChannelCoefficients> {
    if c.out_basis.rep() != d.in_basis.rep() {
        return Err(dim_err(
            format!("middle space of dim {}", d.in_basis.rep().dim()),
            format!("dim {}", c.out_basis.rep().dim()),
        ));
    }
    let mut mu_blocks = BTreeMap::new();
    for (mu, cb) in &c.mu_blocks {
        if let Some(db) = d.mu_blocks.get(mu) {
            mu_blocks.insert(*mu, db * cb);
        }
    }
    Ok(CovariantChannelCoefficients {
        mu_blocks,
        in_basis: c.in_basis.clone(),
        out_basis: d.out_basis.clone(),
    })
}

/// Rebuilds the Liouville form of the map described by `c`.
pub fn superoperator_from_reduced(c: &CovariantChannelCoefficients) -> Result<Superoperator> {
    let (di, dout) = (c.in_basis.rep().dim(), c.out_basis.rep().dim());
    let mut l = ComplexMatrix::zeros(dout * dout, di * di);
    for i in 0..di {
        for j in 0..di {
            let y = apply_reduced(c, &crate::linalg::ket_bra(&crate::linalg::basis_vector(di, i), &crate::linalg::basis_vector(di, j)))?;
            l.set_column(i * di + j, &crate::linalg::vec_rows(&y));
        }
    }
    Superoperator::new(di, dout, l)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub mu: HalfInteger,
    pub m: HalfInteger,
    pub value: f64,
    /// `‖T^{(μ)}_m‖₁ / ‖S^{(μ)}_m‖₁`.
    pub bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub entries: Vec<BoundEntry>,
    pub passed: bool,
}

/// Checks `|c^{(μ)}| ≤ ‖T^{(μ)}_m‖₁/‖S^{(μ)}_m‖₁` for every `(μ, m)`; a
/// violation shows the map cannot be positive and trace preserving.
pub fn coefficient_bounds_check(c: &CovariantChannelCoefficients, tol: f64) -> Result<BoundsReport> {
    if !c.is_multiplicity_free() {
        return Err(Error::Unsupported("coefficient bounds need multiplicity-free bases".into()));
    }
    let mut entries = Vec::new();
    for (mu, block) in &c.mu_blocks {
        let value = block[(0, 0)].norm();
        for m in mu.projections() {
            let t = c.in_basis.get(*mu, m, 0).expect("input op");
            let s = c.out_basis.get(*mu, m, 0).expect("output op");
            let bound = trace_norm(t)? / trace_norm(s)?;
            entries.push(BoundEntry {
                mu: *mu,
                m,
                value,
                bound,
                ok: value <= bound + tol,
            });
        }
    }
    let passed = entries.iter().all(|e| e.ok);
    Ok(BoundsReport { entries, passed })
}
