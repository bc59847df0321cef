use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_dim, max_abs_diff, ComplexMatrix, ZERO};

use super::{angular_momentum, clebsch_gordan, wigner_d_matrix, EulerAngles, HalfInteger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub j: HalfInteger,
    pub mult: usize,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.j.dim() * self.mult
    }
}

/// A representation `U(g) = W† (⊕_b D^{j_b}(g) ⊗ I_{mult_b}) W`.
///
/// Within block `b` the basis vector for `(m, α)` sits at offset
/// `m_index(j_b, m) * mult_b + α`. `W` is the identity unless the
/// representation was produced in a non-standard basis, e.g. by [`SU2Representation::tensor`].
#[derive(Debug, Clone, PartialEq)]
pub struct SU2Representation {
    blocks: Vec<Block>,
    offsets: Vec<usize>,
    dim: usize,
    basis_change: Option<ComplexMatrix>,
}

impl SU2Representation {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidInput("representation needs at least one block".into()));
        }
        for b in &blocks {
            if b.mult == 0 || b.j.twice() < 0 {
                return Err(Error::InvalidInput(format!("invalid block (j={}, mult={})", b.j, b.mult)));
            }
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            offsets.push(dim);
            dim += b.dim();
        }
        Ok(Self {
            blocks,
            offsets,
            dim,
            basis_change: None,
        })
    }

    pub fn spin(j: HalfInteger) -> Self {
        Self::new(vec![Block { j, mult: 1 }]).expect("single spin block is valid")
    }

    /// Attaches a unitary `W` so that `U(g) = W† U_std(g) W`.
    pub fn with_basis_change(mut self, w: ComplexMatrix, tol: f64) -> Result<Self> {
        ensure_dim(&w, self.dim)?;
        let id = ComplexMatrix::identity(self.dim, self.dim);
        if max_abs_diff(&(w.adjoint() * &w), &id) > tol {
            return Err(Error::InvalidInput("basis change is not unitary".into()));
        }
        self.basis_change = Some(w);
        Ok(self)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_offset(&self, b: usize) -> usize {
        self.offsets[b]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_change(&self) -> Option<&ComplexMatrix> {
        self.basis_change.as_ref()
    }

    pub fn max_spin(&self) -> HalfInteger {
        self.blocks.iter().map(|b| b.j).max().unwrap()
    }

    /// Single multiplicity-free irrep, if that is what this is.
    pub fn as_single_spin(&self) -> Option<HalfInteger> {
        match (self.blocks.as_slice(), &self.basis_change) {
            ([b], None) if b.mult == 1 => Some(b.j),
            _ => None,
        }
    }

    /// Index of `|j_b, m; α⟩` in the standard basis.
    pub fn index(&self, block: usize, m: HalfInteger, alpha: usize) -> usize {
        let b = &self.blocks[block];
        self.offsets[block] + super::m_index(b.j, m) * b.mult + alpha
    }

    /// `W x W†`.
    pub fn to_standard(&self, x: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis_change {
            Some(w) => w * x * w.adjoint(),
            None => x.clone(),
        }
    }

    /// `W† y W`.
    pub fn from_standard(&self, y: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis_change {
            Some(w) => w.adjoint() * y * w,
            None => y.clone(),
        }
    }

    fn standard_block_sum(&self, f: impl Fn(HalfInteger) -> ComplexMatrix) -> ComplexMatrix {
        let mut u = ComplexMatrix::zeros(self.dim, self.dim);
        for (bi, b) in self.blocks.iter().enumerate() {
            let d = f(b.j);
            let n = b.j.dim();
            for r in 0..n {
                for c in 0..n {
                    for a in 0..b.mult {
                        let (i, k) = (self.offsets[bi] + r * b.mult + a, self.offsets[bi] + c * b.mult + a);
                        u[(i, k)] = d[(r, c)];
                    }
                }
            }
        }
        u
    }

    pub fn unitary(&self, g: EulerAngles) -> ComplexMatrix {
        let u = self.standard_block_sum(|j| wigner_d_matrix(j, g));
        self.from_standard(&u)
    }

    /// Total angular momentum `(L_x, L_y, L_z)` on this representation.
    pub fn generators(&self) -> [ComplexMatrix; 3] {
        let lx = self.standard_block_sum(|j| angular_momentum(j).lx());
        let ly = self.standard_block_sum(|j| angular_momentum(j).ly());
        let lz = self.standard_block_sum(|j| angular_momentum(j).lz);
        [self.from_standard(&lx), self.from_standard(&ly), self.from_standard(&lz)]
    }

    /// Representation on `H_self ⊗ H_other` (self is the slow index), reduced
    /// into irreps. The returned basis change maps the product basis onto the
    /// coupled basis through Clebsch–Gordan coefficients.
    pub fn tensor(&self, other: &Self) -> Self {
        // (block of self, copy, block of other, copy)
        type Source = (usize, usize, usize, usize);
        // (J, source tuples) in order of first appearance
        let mut coupled: Vec<(HalfInteger, Vec<Source>)> = Vec::new();
        for (ai, a) in self.blocks.iter().enumerate() {
            for (bi, b) in other.blocks.iter().enumerate() {
                let mut tj = (a.j.twice() - b.j.twice()).abs();
                while tj <= a.j.twice() + b.j.twice() {
                    let jj = HalfInteger::from_twice(tj);
                    let pos = match coupled.iter().position(|(x, _)| *x == jj) {
                        Some(p) => p,
                        None => {
                            coupled.push((jj, Vec::new()));
                            coupled.len() - 1
                        }
                    };
                    for alpha in 0..a.mult {
                        for beta in 0..b.mult {
                            coupled[pos].1.push((ai, alpha, bi, beta));
                        }
                    }
                    tj += 2;
                }
            }
        }
        coupled.sort_by_key(|(j, _)| *j);
        let blocks: Vec<Block> = coupled
            .iter()
            .map(|(j, src)| Block { j: *j, mult: src.len() })
            .collect();
        let out = Self::new(blocks).expect("coupled blocks are valid");
        let d2 = other.dim;
        let mut v = ComplexMatrix::from_element(out.dim, out.dim, ZERO);
        for (ci, (jj, sources)) in coupled.iter().enumerate() {
            for (gamma, &(ai, alpha, bi, beta)) in sources.iter().enumerate() {
                let (ja, jb) = (self.blocks[ai].j, other.blocks[bi].j);
                for big_m in jj.projections() {
                    let row = out.index(ci, big_m, gamma);
                    for ma in ja.projections() {
                        let mb = big_m - ma;
                        if mb.twice().abs() > jb.twice() {
                            continue;
                        }
                        let cg = clebsch_gordan(ja, ma, jb, mb, *jj, big_m);
                        if cg == 0.0 {
                            continue;
                        }
                        let col = self.index(ai, ma, alpha) * d2 + other.index(bi, mb, beta);
                        v[(row, col)] = cg.into();
                    }
                }
            }
        }
        let w_prod = match (&self.basis_change, &other.basis_change) {
            (None, None) => None,
            (a, b) => {
                let id = |n| ComplexMatrix::identity(n, n);
                let wa = a.clone().unwrap_or_else(|| id(self.dim));
                let wb = b.clone().unwrap_or_else(|| id(other.dim));
                Some(wa.kronecker(&wb))
            }
        };
        let w = match w_prod {
            Some(p) => v * p,
            None => v,
        };
        Self {
            basis_change: Some(w),
            ..out
        }
    }
}
