//! Matrix exchange format.
//!
//! A matrix is serialized as `{"rows": r, "cols": c, "entries": [[i, j,
//! "decimal-string"], ...]}` with zero-based indices and entries sorted by
//! `(i, j)`. Decimal strings carry arbitrary precision bit-exactly; zero
//! entries are omitted.

use super::{ExactLinError, IntMatrix};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl From<&IntMatrix> for SparseMatrixJson {
    fn from(m: &IntMatrix) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.at(i, j);
                if !v.is_zero() {
                    entries.push((i, j, v.to_string()));
                }
            }
        }
        SparseMatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }
}

impl TryFrom<&SparseMatrixJson> for IntMatrix {
    type Error = ExactLinError;

    fn try_from(s: &SparseMatrixJson) -> Result<Self, Self::Error> {
        let mut m = IntMatrix::zero(s.rows, s.cols);
        for (i, j, val) in &s.entries {
            if *i >= s.rows || *j >= s.cols {
                return Err(ExactLinError::Malformed(format!(
                    "entry ({i}, {j}) outside {}x{}",
                    s.rows, s.cols
                )));
            }
            let v = BigInt::from_str(val)
                .map_err(|e| ExactLinError::Malformed(format!("bad integer {val:?}: {e}")))?;
            m.set(*i, *j, v);
        }
        Ok(m)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SparseMatrixJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = SparseMatrixJson::deserialize(deserializer)?;
        IntMatrix::try_from(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_sorted() {
        let m = IntMatrix::from_i64(&[&[0, -3], &[7, 0]]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"rows":2,"cols":2,"entries":[[0,1,"-3"],[1,0,"7"]]}"#
        );
        let back: IntMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = r#"{"rows":1,"cols":1,"entries":[[0,5,"1"]]}"#;
        assert!(serde_json::from_str::<IntMatrix>(bad).is_err());
    }
}
