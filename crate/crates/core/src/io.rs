//! JSON file formats.
//!
//! * matrices: a list of `n×n` arrays whose entries are `[re, im]` pairs
//!   (plain numbers are accepted on input as purely real entries);
//! * vector pairs: `{"pairs": [[[a, b], ...], ...]}`, one list of `[a, b]`
//!   pairs per group element, each vector a list of entries as above;
//! * tables: see [`crate::group::TableFile`].

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::VectorPairs;
use crate::group::{MultiplicationTable, TableFile};
use crate::scalar::{CMatrix, CVector, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonComplex {
    Pair([f64; 2]),
    Real(f64),
}

impl JsonComplex {
    fn to_complex<T: Real>(self) -> Result<Complex<T>> {
        let (re, im) = match self {
            JsonComplex::Pair([re, im]) => (re, im),
            JsonComplex::Real(re) => (re, 0.0),
        };
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::Invalid("non-finite entry".into()));
        }
        Ok(Complex::new(T::lit(re), T::lit(im)))
    }

    fn from_complex<T: Real>(z: &Complex<T>) -> Self {
        JsonComplex::Pair([z.re.as_f64(), z.im.as_f64()])
    }
}

pub type JsonMatrix = Vec<Vec<JsonComplex>>;
pub type JsonVector = Vec<JsonComplex>;

pub fn matrix_to_json<T: Real>(m: &CMatrix<T>) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| JsonComplex::from_complex(&m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_json<T: Real>(rows: &JsonMatrix) -> Result<CMatrix<T>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Invalid("empty matrix".into()));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: r.len() });
    }
    let mut m = CMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            m[(i, j)] = z.to_complex()?;
        }
    }
    Ok(m)
}

fn vector_from_json<T: Real>(v: &JsonVector) -> Result<CVector<T>> {
    let entries = v.iter().map(|z| z.to_complex()).collect::<Result<Vec<_>>>()?;
    Ok(CVector::from_vec(entries))
}

fn vector_to_json<T: Real>(v: &CVector<T>) -> JsonVector {
    v.iter().map(JsonComplex::from_complex).collect()
}

pub fn matrices_to_json<T: Real>(ms: &[CMatrix<T>]) -> Vec<JsonMatrix> {
    ms.iter().map(matrix_to_json).collect()
}

pub fn parse_matrices<T: Real>(text: &str) -> Result<Vec<CMatrix<T>>> {
    let raw: Vec<JsonMatrix> = serde_json::from_str(text)?;
    if raw.is_empty() {
        return Err(Error::Invalid("no matrices".into()));
    }
    raw.iter().map(matrix_from_json).collect()
}

pub fn write_matrices<T: Real>(ms: &[CMatrix<T>]) -> Result<String> {
    Ok(serde_json::to_string_pretty(&matrices_to_json(ms))?)
}

pub fn parse_table(text: &str) -> Result<MultiplicationTable> {
    let f: TableFile = serde_json::from_str(text)?;
    f.try_into()
}

pub fn write_table(t: &MultiplicationTable) -> Result<String> {
    Ok(serde_json::to_string(&t.to_file())?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairsFile {
    pub pairs: Vec<Vec<[JsonVector; 2]>>,
}

pub fn parse_vector_pairs<T: Real>(text: &str) -> Result<VectorPairs<T>> {
    let f: PairsFile = serde_json::from_str(text)?;
    let dim = f
        .pairs
        .iter()
        .flatten()
        .next()
        .map(|[a, _]| a.len())
        .ok_or_else(|| Error::Invalid("no vector pairs".into()))?;
    let pairs = f
        .pairs
        .iter()
        .map(|el| {
            el.iter()
                .map(|[a, b]| Ok((vector_from_json(a)?, vector_from_json(b)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    VectorPairs::new(dim, pairs)
}

pub fn write_vector_pairs<T: Real>(v: &VectorPairs<T>) -> Result<String> {
    let f = PairsFile {
        pairs: v
            .iter()
            .map(|el| el.iter().map(|(a, b)| [vector_to_json(a), vector_to_json(b)]).collect())
            .collect(),
    };
    Ok(serde_json::to_string(&f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use proptest::prelude::*;

    #[test]
    fn matrices_accept_real_and_complex_entries() {
        let m: Vec<CMatrix<f64>> = parse_matrices("[[[1, [0, 2]], [[3, -1], 4.5]]]").unwrap();
        assert_eq!(m[0][(0, 1)], Complex::new(0.0, 2.0));
        assert_eq!(m[0][(1, 0)], Complex::new(3.0, -1.0));
        assert_eq!(m[0][(1, 1)], Complex::new(4.5, 0.0));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_matrices::<f64>("[[[1, 2]"), Err(Error::Json(_))));
        assert!(matches!(parse_matrices::<f64>("[[[1, 2]]]"), Err(Error::NotSquare { .. })));
        assert!(parse_matrices::<f64>("[]").is_err());
        assert!(parse_table(r#"{"order": 2, "table": [[0,1],[1,1]], "identity": 0}"#).is_err());
        assert!(parse_vector_pairs::<f64>(r#"{"pairs": [[[[1,0],[0,1,2]]]]}"#).is_err());
    }

    #[test]
    fn pairs_round_trip() {
        let text = r#"{"pairs": [[[[1, 0], [0, 1]]], [[[[0, 1], 0], [1, 1]], [[1, 1], [2, 2]]]]}"#;
        let v: VectorPairs<f64> = parse_vector_pairs(text).unwrap();
        assert_eq!(v.order(), 2);
        assert_eq!(v.element(1).len(), 2);
        assert_eq!(v.element(1)[0].0[0], Complex::new(0.0, 1.0));
        let back: VectorPairs<f64> = parse_vector_pairs(&write_vector_pairs(&v).unwrap()).unwrap();
        assert_eq!(back, v);
    }

    proptest! {
        #[test]
        fn matrix_json_round_trips(seed in any::<u64>(), n in 1usize..5) {
            let ms: Vec<CMatrix<f64>> = (0..3).map(|_| random_matrix(&mut rng(seed), n)).collect();
            let back: Vec<CMatrix<f64>> = parse_matrices(&write_matrices(&ms).unwrap()).unwrap();
            prop_assert_eq!(back, ms);
        }
    }
}
