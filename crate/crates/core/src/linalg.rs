//! Dense complex operators, density matrices, POVMs and superoperators in
//! Liouville form.
//!
//! Operators are vectorized by stacking rows: `vec(|i><j|)` is the basis
//! vector at index `i * d + j`. With this convention `vec(A X B) = (A ⊗ Bᵀ) vec(X)`,
//! so conjugation `X ↦ K X K†` has Liouville matrix `K ⊗ conj(K)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{dim_err, Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// Default tolerance for invariant checks.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

pub fn zeros(r: usize, c: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(r, c)
}

pub fn diag(entries: &[f64]) -> ComplexMatrix {
    let d = entries.len();
    ComplexMatrix::from_fn(d, d, |i, j| if i == j { real(entries[i]) } else { ZERO })
}

/// Builds a matrix from row-major entries.
pub fn from_rows(rows: usize, cols: usize, entries: &[C64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
    ComplexMatrix::from_row_slice(rows, cols, entries)
}

pub fn ket_bra(ket: &DVector<C64>, bra: &DVector<C64>) -> ComplexMatrix {
    ket * bra.adjoint()
}

pub fn projector(psi: &DVector<C64>) -> ComplexMatrix {
    ket_bra(psi, psi)
}

pub fn basis_vector(d: usize, i: usize) -> DVector<C64> {
    let mut v = DVector::zeros(d);
    v[i] = ONE;
    v
}

pub fn ensure_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

pub fn ensure_dim(a: &ComplexMatrix, d: usize) -> Result<()> {
    let n = ensure_square(a)?;
    if n != d {
        return Err(dim_err(format!("{d}x{d}"), format!("{n}x{n}")));
    }
    Ok(())
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// Hilbert–Schmidt inner product `tr(a† b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(dim_err(
            format!("{:?}", a.shape()),
            format!("{:?}", b.shape()),
        ));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

pub fn hs_norm(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn hermiticity_residual(a: &ComplexMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

pub fn is_hermitian(a: &ComplexMatrix, tol: f64) -> bool {
    a.is_square() && hermiticity_residual(a) <= tol
}

pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()) * real(0.5)
}

/// Eigen-decomposition of the Hermitian part of `a`; eigenvalues ascending,
/// eigenvectors as the matching columns.
pub fn hermitian_eigen(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let h = hermitian_part(a);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = ComplexMatrix::from_fn(a.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

pub fn min_eigenvalue(a: &ComplexMatrix) -> f64 {
    hermitian_eigen(a).0.first().copied().unwrap_or(0.0)
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    a.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Trace norm `tr √(a† a)`: the sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    ensure_square(a)?;
    if a.nrows() == 0 {
        return Ok(0.0);
    }
    let scale = max_abs(a);
    if scale == 0.0 {
        return Ok(0.0);
    }
    if hermiticity_residual(a) <= 1e-14 * scale {
        let (vals, _) = hermitian_eigen(a);
        return Ok(vals.iter().map(|v| v.abs()).sum());
    }
    Ok(singular_values(a).iter().sum())
}

/// Functional calculus for Hermitian `h`: `V f(Λ) V†`.
pub fn hermitian_function(h: &ComplexMatrix, f: impl Fn(f64) -> C64) -> ComplexMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let fd = ComplexMatrix::from_fn(vals.len(), vals.len(), |i, j| if i == j { f(vals[i]) } else { ZERO });
    &vecs * fd * vecs.adjoint()
}

/// `exp(-i θ h)` for Hermitian `h`.
pub fn unitary_exp(h: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    hermitian_function(h, |x| C64::from_polar(1.0, -theta * x))
}

pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of an operator on `H_A ⊗ H_B` (A is the slow index).
pub fn partial_trace(x: &ComplexMatrix, dims: (usize, usize), keep: Keep) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    ensure_dim(x, da * db)?;
    Ok(match keep {
        Keep::A => ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|k| x[(i * db + k, j * db + k)]).sum()),
        Keep::B => ComplexMatrix::from_fn(db, db, |i, j| (0..da).map(|k| x[(k * db + i, k * db + j)]).sum()),
    })
}

/// Row-stacking vectorization.
pub fn vec_rows(x: &ComplexMatrix) -> DVector<C64> {
    let (r, c) = x.shape();
    DVector::from_fn(r * c, |k, _| x[(k / c, k % c)])
}

pub fn unvec_rows(v: &DVector<C64>, rows: usize, cols: usize) -> ComplexMatrix {
    assert_eq!(v.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// A validated density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        ensure_square(&matrix)?;
        let herm = hermiticity_residual(&matrix);
        if herm > tol {
            return Err(Error::InvalidState(format!("not Hermitian (residual {herm:e})")));
        }
        let tr = trace(&matrix);
        if (tr - ONE).norm() > tol {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = min_eigenvalue(&matrix);
        if min < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix without checks; for outputs of maps known to preserve states.
    pub fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn pure(psi: &DVector<C64>) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Ok(Self {
            matrix: projector(&(psi / real(n))),
        })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: identity(d) / real(d as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn expectation(&self, obs: &ComplexMatrix) -> C64 {
        trace(&(&self.matrix * obs))
    }
}

/// Linear map `B(C^in_dim) → B(C^out_dim)` in row-stacked Liouville form.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    in_dim: usize,
    out_dim: usize,
    liouville: ComplexMatrix,
}

impl Superoperator {
    pub fn new(in_dim: usize, out_dim: usize, liouville: ComplexMatrix) -> Result<Self> {
        if liouville.shape() != (out_dim * out_dim, in_dim * in_dim) {
            return Err(dim_err(
                format!("({}, {})", out_dim * out_dim, in_dim * in_dim),
                format!("{:?}", liouville.shape()),
            ));
        }
        Ok(Self {
            in_dim,
            out_dim,
            liouville,
        })
    }

    /// Infers square in/out dimensions from a Liouville matrix.
    pub fn from_liouville(liouville: ComplexMatrix) -> Result<Self> {
        let isqrt = |n: usize| {
            let r = (n as f64).sqrt().round() as usize;
            (r * r == n).then_some(r)
        };
        let out_dim = isqrt(liouville.nrows()).ok_or_else(|| dim_err("square row count", liouville.nrows()))?;
        let in_dim = isqrt(liouville.ncols()).ok_or_else(|| dim_err("square column count", liouville.ncols()))?;
        Self::new(in_dim, out_dim, liouville)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            in_dim: d,
            out_dim: d,
            liouville: identity(d * d),
        }
    }

    pub fn zero(in_dim: usize, out_dim: usize) -> Self {
        Self {
            in_dim,
            out_dim,
            liouville: zeros(out_dim * out_dim, in_dim * in_dim),
        }
    }

    /// Conjugation `X ↦ U X U†`.
    pub fn conjugation(u: &ComplexMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u))
    }

    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidInput("empty Kraus list".into()))?;
        let (out_dim, in_dim) = first.shape();
        let mut l = zeros(out_dim * out_dim, in_dim * in_dim);
        for k in kraus {
            if k.shape() != (out_dim, in_dim) {
                return Err(dim_err(format!("({out_dim}, {in_dim})"), format!("{:?}", k.shape())));
            }
            l += k.kronecker(&k.conjugate());
        }
        Ok(Self {
            in_dim,
            out_dim,
            liouville: l,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn liouville(&self) -> &ComplexMatrix {
        &self.liouville
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        ensure_dim(x, self.in_dim)?;
        let v = &self.liouville * vec_rows(x);
        Ok(unvec_rows(&v, self.out_dim, self.out_dim))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Superoperator) -> Result<Superoperator> {
        if first.out_dim != self.in_dim {
            return Err(dim_err(self.in_dim, first.out_dim));
        }
        Ok(Superoperator {
            in_dim: first.in_dim,
            out_dim: self.out_dim,
            liouville: &self.liouville * &first.liouville,
        })
    }

    /// Max entry deviation of `tr ∘ E` from `tr`.
    pub fn trace_preservation_residual(&self) -> f64 {
        let d_in = self.in_dim;
        let d_out = self.out_dim;
        let mut worst: f64 = 0.0;
        for col in 0..d_in * d_in {
            let t: C64 = (0..d_out).map(|i| self.liouville[(i * d_out + i, col)]).sum();
            let target = if col / d_in == col % d_in { ONE } else { ZERO };
            worst = worst.max((t - target).norm());
        }
        worst
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.trace_preservation_residual() <= tol
    }

    /// Choi matrix `Σ_ij |i><j| ⊗ E(|i><j|)` (input factor first).
    pub fn choi(&self) -> ComplexMatrix {
        let (di, do_) = (self.in_dim, self.out_dim);
        let mut ch = zeros(di * do_, di * do_);
        for i in 0..di {
            for j in 0..di {
                let col = i * di + j;
                for a in 0..do_ {
                    for b in 0..do_ {
                        ch[(i * do_ + a, j * do_ + b)] = self.liouville[(a * do_ + b, col)];
                    }
                }
            }
        }
        ch
    }

    pub fn hs_norm(&self) -> f64 {
        hs_norm(&self.liouville)
    }
}

impl std::ops::Add for &Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: &Superoperator) -> Superoperator {
        assert_eq!((self.in_dim, self.out_dim), (rhs.in_dim, rhs.out_dim));
        Superoperator {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            liouville: &self.liouville + &rhs.liouville,
        }
    }
}

/// Builds the Liouville form of `Σ K · K†` and reports whether `Σ K†K = I` within `tol`.
pub fn channel_from_kraus(kraus: &[ComplexMatrix], tol: f64) -> Result<(Superoperator, bool)> {
    let e = Superoperator::from_kraus(kraus)?;
    let d = e.in_dim();
    let completeness = kraus.iter().fold(zeros(d, d), |acc, k| acc + k.adjoint() * k);
    let tp = max_abs_diff(&completeness, &identity(d)) <= tol;
    Ok((e, tp))
}

pub fn apply_superop(e: &Superoperator, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    e.apply(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, labels: Vec<String>, tol: f64) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        let d = ensure_square(first)?;
        if labels.len() != elements.len() {
            return Err(Error::InvalidPovm("label count differs from element count".into()));
        }
        let mut sum = zeros(d, d);
        for (m, l) in elements.iter().zip(&labels) {
            ensure_dim(m, d)?;
            if !is_hermitian(m, tol) {
                return Err(Error::InvalidPovm(format!("element {l} is not Hermitian")));
            }
            if min_eigenvalue(m) < -tol {
                return Err(Error::InvalidPovm(format!("element {l} is not PSD")));
            }
            sum += m;
        }
        if max_abs_diff(&sum, &identity(d)) > tol {
            return Err(Error::InvalidPovm("elements do not sum to identity".into()));
        }
        Ok(Self { elements, labels })
    }

    /// Labels default to "0", "1", ...
    pub fn from_elements(elements: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let labels = (0..elements.len()).map(|i| i.to_string()).collect();
        Self::new(elements, labels, tol)
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }
}

/// Pauli matrices, used throughout the tests and examples.
pub mod pauli {
    use super::*;

    pub fn x() -> ComplexMatrix {
        from_rows(2, 2, &[ZERO, ONE, ONE, ZERO])
    }
    pub fn y() -> ComplexMatrix {
        from_rows(2, 2, &[ZERO, -I, I, ZERO])
    }
    pub fn z() -> ComplexMatrix {
        diag(&[1.0, -1.0])
    }
}
