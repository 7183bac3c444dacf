use serde::{Deserialize, Serialize};

use super::{flatten, unflatten, TensorOp};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `[row multi-index, column multi-index, "num/den"]`, indices 1-based.
pub type DumpEntry = (Vec<usize>, Vec<usize>, String);

/// Serialized form of a [`TensorOp`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub n: usize,
    pub k: usize,
    pub entries: Vec<DumpEntry>,
}

impl MatrixDump {
    pub fn from_op<S: Scalar>(op: &TensorOp<S>) -> Self {
        let (n, k) = (op.n(), op.k());
        let one_based = |i: usize| {
            unflatten(n, k, i)
                .into_iter()
                .map(|x| x + 1)
                .collect::<Vec<_>>()
        };
        MatrixDump {
            n,
            k,
            entries: op
                .entries()
                .map(|(r, c, v)| (one_based(r), one_based(c), v.to_ratio_string()))
                .collect(),
        }
    }

    pub fn to_op<S: Scalar>(&self) -> Result<TensorOp<S>> {
        let (n, k) = (self.n, self.k);
        let zero_based = |m: &[usize]| -> Result<usize> {
            if m.len() != k || m.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::IndexOutOfRange(format!("bad multi-index {m:?}")));
            }
            Ok(flatten(n, &m.iter().map(|i| i - 1).collect::<Vec<_>>()))
        };
        let entries = self
            .entries
            .iter()
            .map(|(r, c, v)| Ok((zero_based(r)?, zero_based(c)?, S::parse(v)?)))
            .collect::<Result<Vec<_>>>()?;
        TensorOp::from_entries(n, k, entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
