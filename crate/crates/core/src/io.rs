//! JSON interchange formats.
//!
//! Complex matrices travel as `{"rows", "cols", "re", "im"}` with flat
//! row-major real and imaginary arrays. Parse errors carry the line and
//! column reported by `serde_json`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::channels::CovariantChannelCoefficients;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, DensityMatrix, Superoperator};
use crate::su2::{Block, HalfInteger, SU2Representation, TensorOperatorBasis};
use crate::u1::U1Representation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for ComplexMatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut re = Vec::with_capacity(rows * cols);
        let mut im = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self { rows, cols, re, im }
    }
}

impl ComplexMatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::InvalidInput(format!(
                "matrix {}x{} needs {n} entries, got re={} im={}",
                self.rows,
                self.cols,
                self.re.len(),
                self.im.len()
            )));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let k = i * self.cols + j;
            c(self.re[k], self.im[k])
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargesJson {
    pub charges: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    pub twice_j: i32,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepJson {
    pub blocks: Vec<BlockJson>,
}

impl From<&SU2Representation> for RepJson {
    fn from(rep: &SU2Representation) -> Self {
        Self {
            blocks: rep
                .blocks()
                .iter()
                .map(|b| BlockJson {
                    twice_j: b.j.twice(),
                    mult: b.mult,
                })
                .collect(),
        }
    }
}

impl RepJson {
    pub fn to_rep(&self) -> Result<SU2Representation> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                Ok(Block {
                    j: HalfInteger::spin(b.twice_j)?,
                    mult: b.mult,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SU2Representation::new(blocks)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelJson {
    Kraus { kraus: Vec<ComplexMatrixJson> },
    Liouville { liouville: ComplexMatrixJson },
}

impl ChannelJson {
    pub fn to_superoperator(&self) -> Result<Superoperator> {
        match self {
            Self::Kraus { kraus } => {
                let k = kraus.iter().map(|m| m.to_matrix()).collect::<Result<Vec<_>>>()?;
                Superoperator::from_kraus(&k)
            }
            Self::Liouville { liouville } => Superoperator::from_liouville(liouville.to_matrix()?),
        }
    }
}

impl From<&Superoperator> for ChannelJson {
    fn from(e: &Superoperator) -> Self {
        Self::Liouville {
            liouville: e.liouville().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorOperatorJson {
    pub mu: f64,
    pub m: f64,
    pub alpha: usize,
    pub matrix: ComplexMatrixJson,
}

pub fn basis_to_json(basis: &TensorOperatorBasis) -> Vec<TensorOperatorJson> {
    basis
        .ops()
        .iter()
        .map(|t| TensorOperatorJson {
            mu: t.mu.value(),
            m: t.m.value(),
            alpha: t.alpha,
            matrix: (&t.matrix).into(),
        })
        .collect()
}

/// Output of channel reduction. Keys of `coefficients` are ranks printed as
/// `"1"` or `"3/2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientsJson {
    pub residual: f64,
    pub coefficients: BTreeMap<String, ComplexMatrixJson>,
}

impl CoefficientsJson {
    pub fn new(c: &CovariantChannelCoefficients, residual: f64) -> Self {
        Self {
            residual,
            coefficients: c.mu_blocks.iter().map(|(mu, b)| (mu.to_string(), b.into())).collect(),
        }
    }

    pub fn blocks(&self) -> Result<BTreeMap<HalfInteger, ComplexMatrix>> {
        self.coefficients
            .iter()
            .map(|(k, v)| Ok((k.parse()?, v.to_matrix()?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum CoefficientValue {
    Real(f64),
    Matrix(ComplexMatrixJson),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct DegradationJson {
    coefficients: BTreeMap<String, CoefficientValue>,
}

/// Per-rank degradation coefficients. Accepts either plain reals
/// (`{"coefficients": {"1": 0.9}}`) or a reduction output whose blocks are
/// 1x1 with negligible imaginary part.
pub fn parse_degradation_coefficients(text: &str, tol: f64) -> Result<BTreeMap<HalfInteger, f64>> {
    let raw: DegradationJson = from_json_str(text)?;
    raw.coefficients
        .into_iter()
        .map(|(k, v)| {
            let mu: HalfInteger = k.parse()?;
            let value = match v {
                CoefficientValue::Real(x) => x,
                CoefficientValue::Matrix(m) => {
                    let m = m.to_matrix()?;
                    if m.shape() != (1, 1) {
                        return Err(Error::Unsupported(format!("rank {mu} block is {}x{}, need 1x1", m.nrows(), m.ncols())));
                    }
                    if m[(0, 0)].im.abs() > tol {
                        return Err(Error::InvalidInput(format!("rank {mu} coefficient is not real")));
                    }
                    m[(0, 0)].re
                }
            };
            Ok((mu, value))
        })
        .collect()
}

pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    // serde_json's message already ends with "at line L column C".
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    from_json_str(&text).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::InvalidInput(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    from_json_str::<ComplexMatrixJson>(text)?.to_matrix()
}

pub fn parse_state(text: &str, tol: f64) -> Result<DensityMatrix> {
    DensityMatrix::new(parse_matrix(text)?, tol)
}

pub fn parse_charges(text: &str) -> Result<U1Representation> {
    U1Representation::new(from_json_str::<ChargesJson>(text)?.charges)
}

pub fn parse_rep(text: &str) -> Result<SU2Representation> {
    from_json_str::<RepJson>(text)?.to_rep()
}

pub fn parse_channel(text: &str) -> Result<Superoperator> {
    from_json_str::<ChannelJson>(text)?.to_superoperator()
}

pub fn parse_basis(text: &str) -> Result<Vec<(HalfInteger, HalfInteger, usize, ComplexMatrix)>> {
    from_json_str::<Vec<TensorOperatorJson>>(text)?
        .into_iter()
        .map(|t| {
            Ok((
                HalfInteger::from_f64(t.mu)?,
                HalfInteger::from_f64(t.m)?,
                t.alpha,
                t.matrix.to_matrix()?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::su2::tensor_basis_general;

    #[test]
    fn matrix_round_trip_is_row_major() {
        let m = ComplexMatrix::from_fn(2, 3, |i, j| c(i as f64, j as f64 + 0.5));
        let j: ComplexMatrixJson = (&m).into();
        assert_eq!(j.re, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let back = parse_matrix(&to_json_string(&j)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_matrix("{\"rows\": 1,\n \"cols\": 1, \"re\": [1.0,, \"im\": [0]}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("column"), "{msg}");
    }

    #[test]
    fn wrong_entry_count_is_rejected() {
        assert!(parse_matrix(r#"{"rows":2,"cols":2,"re":[1,0,0],"im":[0,0,0,0]}"#).is_err());
    }

    #[test]
    fn channel_forms_agree() {
        let kraus = r#"{"kraus":[{"rows":2,"cols":2,"re":[0,1,1,0],"im":[0,0,0,0]}]}"#;
        let e = parse_channel(kraus).unwrap();
        let again = parse_channel(&to_json_string(&ChannelJson::from(&e))).unwrap();
        assert!(max_abs_diff(e.liouville(), again.liouville()) < 1e-15);
    }

    #[test]
    fn rep_and_basis_round_trip() {
        let rep = parse_rep(r#"{"blocks":[{"twice_j":1,"mult":2},{"twice_j":2,"mult":1}]}"#).unwrap();
        assert_eq!(RepJson::from(&rep).to_rep().unwrap(), rep);
        let basis = tensor_basis_general(&rep);
        let parsed = parse_basis(&to_json_string(&basis_to_json(&basis))).unwrap();
        assert_eq!(parsed.len(), basis.len());
        for ((mu, m, a, x), t) in parsed.iter().zip(basis.ops()) {
            assert_eq!((*mu, *m, *a), (t.mu, t.m, t.alpha));
            assert_eq!(x, &t.matrix);
        }
    }

    #[test]
    fn degradation_coefficients_from_either_form() {
        let plain = parse_degradation_coefficients(r#"{"coefficients":{"1":0.9,"0":1}}"#, 1e-12).unwrap();
        assert_eq!(plain[&HalfInteger::ONE], 0.9);
        let reduced = r#"{"residual":0,"coefficients":{"1/2":{"rows":1,"cols":1,"re":[0.5],"im":[0]}}}"#;
        let r = parse_degradation_coefficients(reduced, 1e-12).unwrap();
        assert_eq!(r[&HalfInteger::HALF], 0.5);
    }
}
