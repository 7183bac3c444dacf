//! Verification outcomes and machine-readable reports.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::WeightPoint;
use crate::scalar::{Backend, Scalar};
use crate::tensor::{DynOp, TensorOp};

pub const REPORT_SCHEMA: &str = "qdyb-report/1";

/// `None` when an identity holds, otherwise a description of the first
/// violating entry.
pub type Residual = Option<String>;

pub fn op_residual<S: Scalar>(lhs: &TensorOp<S>, rhs: &TensorOp<S>) -> Residual {
    lhs.first_difference(rhs).map(|w| w.describe())
}

pub fn scalar_residual<S: Scalar>(what: &str, lhs: &S, rhs: &S) -> Residual {
    (lhs != rhs).then(|| format!("{what}: lhs = {lhs}, rhs = {rhs}"))
}

pub fn dyn_residual<S: Scalar>(
    lhs: &DynOp<S>,
    rhs: &DynOp<S>,
    p: &WeightPoint,
) -> Result<Residual> {
    Ok(lhs.compare_at(rhs, p)?.map(|(shift, w)| {
        format!(
            "at p = {:?}, shift X^{:?}: {}",
            p.rel(),
            shift,
            w.describe()
        )
    }))
}

/// Named identity checks collected in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Checks {
    items: Vec<(String, Residual)>,
}

impl Checks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, residual: Residual) {
        self.items.push((name.into(), residual));
    }

    pub fn extend(&mut self, prefix: &str, other: Checks) {
        for (name, r) in other.items {
            self.items.push((format!("{prefix}{name}"), r));
        }
    }

    pub fn items(&self) -> &[(String, Residual)] {
        &self.items
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|(_, r)| r.is_none())
    }

    pub fn first_failure(&self) -> Option<String> {
        self.items
            .iter()
            .find_map(|(name, r)| r.as_ref().map(|w| format!("{name}: {w}")))
    }

    /// Collapses into one residual.
    pub fn residual(&self) -> Residual {
        self.first_failure()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub backend: Backend,
    pub probabilistic: bool,
    pub timing_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub suite: String,
    pub status: Status,
    pub records: Vec<Record>,
}

impl Report {
    /// Sorts records by id; overall status passes iff no non-skipped record fails.
    pub fn new(suite: impl Into<String>, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let status = if records.iter().any(|r| r.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        Report {
            schema: REPORT_SCHEMA.to_string(),
            suite: suite.into(),
            status,
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// JSON with every timing field zeroed, for determinism comparisons.
    pub fn to_json_without_timing(&self) -> String {
        let mut copy = self.clone();
        copy.records.iter_mut().for_each(|r| r.timing_ms = 0.0);
        copy.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {}: {:?}\n", self.suite, self.status);
        for r in &self.records {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            out.push_str(&format!("  {tag} {} [{}]", r.id, r.anchor));
            if let Some(w) = &r.witness {
                out.push_str(&format!("  -- {w}"));
            }
            out.push('\n');
        }
        out
    }
}
