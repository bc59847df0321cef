use crate::linalg::{real, ComplexMatrix, I, ZERO};

use super::HalfInteger;

/// Angular momentum matrices for a spin-`j` irrep in the basis
/// `|j, j⟩, |j, j−1⟩, ..., |j, −j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularMomentumOps {
    pub j: HalfInteger,
    pub lz: ComplexMatrix,
    pub lplus: ComplexMatrix,
    pub lminus: ComplexMatrix,
    pub l2: ComplexMatrix,
}

/// Index of `|j, m⟩` in the descending-`m` basis.
pub fn m_index(j: HalfInteger, m: HalfInteger) -> usize {
    ((j.twice() - m.twice()) / 2) as usize
}

pub fn angular_momentum(j: HalfInteger) -> AngularMomentumOps {
    let d = j.dim();
    let jv = j.value();
    let m_of = |i: usize| jv - i as f64;
    let lz = ComplexMatrix::from_fn(d, d, |r, c| if r == c { real(m_of(r)) } else { ZERO });
    // <m+1| L+ |m> = sqrt(j(j+1) − m(m+1))
    let lplus = ComplexMatrix::from_fn(d, d, |r, c| {
        if r + 1 == c {
            let m = m_of(c);
            real((jv * (jv + 1.0) - m * (m + 1.0)).sqrt())
        } else {
            ZERO
        }
    });
    let lminus = lplus.adjoint();
    let l2 = ComplexMatrix::identity(d, d) * real(j.casimir());
    AngularMomentumOps {
        j,
        lz,
        lplus,
        lminus,
        l2,
    }
}

impl AngularMomentumOps {
    pub fn lx(&self) -> ComplexMatrix {
        (&self.lplus + &self.lminus) * real(0.5)
    }

    pub fn ly(&self) -> ComplexMatrix {
        (&self.lplus - &self.lminus) * (-I * 0.5)
    }

    /// `n̂ · L` for a (not necessarily normalized) direction.
    pub fn along(&self, n: [f64; 3]) -> ComplexMatrix {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        (self.lx() * real(n[0]) + self.ly() * real(n[1]) + &self.lz * real(n[2])) / real(norm)
    }
}
