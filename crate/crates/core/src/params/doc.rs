use serde::{Deserialize, Serialize};

use super::{BetaChain, GeomFn, PairTable, Regime, SLnParams};
use crate::error::{Error, Result};
use crate::scalar::{QContext, Scalar};

/// JSON form of a parameter set. Scalars are `"num/den"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub n: usize,
    pub q: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
    pub beta: BetaDoc,
    #[serde(default)]
    pub alpha: AlphaDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaDoc {
    Chain(Vec<String>),
    /// Only `"infinity"` is accepted.
    Limit(String),
}

/// Either a named preset (`standard`, `trivial`) or explicit `[c, w]` pairs
/// meaning α_ij(p) = c·w^p.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<[String; 2]>>>,
}

impl ParamsDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_params<S: Scalar>(&self) -> Result<SLnParams<S>> {
        let q = S::parse(&self.q)?;
        let ctx = match &self.root {
            Some(r) => QContext::with_checked_root(q, S::parse(r)?, self.n)?,
            None => QContext::new(q, self.n)?,
        };
        let chain = match &self.beta {
            BetaDoc::Chain(list) => BetaChain::Finite(
                list.iter()
                    .map(|s| S::parse(s))
                    .collect::<Result<Vec<_>>>()?,
            ),
            BetaDoc::Limit(word) if word == "infinity" => BetaChain::Infinite,
            BetaDoc::Limit(word) => {
                return Err(Error::Parse(format!(
                    "beta must be a list or \"infinity\", got {word:?}"
                )))
            }
        };
        let alpha = match (&self.alpha.preset, &self.alpha.entries) {
            (Some(_), Some(_)) => {
                return Err(Error::Invalid(
                    "alpha: give a preset or entries, not both".into(),
                ))
            }
            (Some(name), None) => preset(name, &ctx)?,
            (None, Some(rows)) => PairTable::new(
                rows.iter()
                    .map(|row| {
                        row.iter()
                            .map(|[c, w]| Ok(GeomFn::geometric(S::parse(c)?, S::parse(w)?)))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?,
            (None, None) => PairTable::trivial(self.n),
        };
        let params = SLnParams::new(ctx, chain, alpha)?;
        if let Some(claimed) = self.regime {
            if claimed != params.regime() {
                return Err(Error::RegimeMismatch(format!(
                    "document says {claimed:?}, parameters are {:?}",
                    params.regime()
                )));
            }
        }
        Ok(params)
    }

    pub fn from_params<S: Scalar>(params: &SLnParams<S>) -> Self {
        let ctx = params.ctx();
        let beta = match params.chain() {
            BetaChain::Finite(b) => BetaDoc::Chain(b.iter().map(S::to_ratio_string).collect()),
            BetaChain::Infinite => BetaDoc::Limit("infinity".into()),
        };
        let entries = params
            .alpha()
            .entries()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|g| [g.c.to_ratio_string(), g.w.to_ratio_string()])
                    .collect()
            })
            .collect();
        ParamsDoc {
            n: params.n(),
            q: ctx.q().to_ratio_string(),
            root: ctx.root().map(S::to_ratio_string),
            beta,
            alpha: AlphaDoc {
                preset: None,
                entries: Some(entries),
            },
            regime: Some(params.regime()),
        }
    }
}

pub fn preset<S: Scalar>(name: &str, ctx: &QContext<S>) -> Result<PairTable<S>> {
    match name {
        "standard" => Ok(PairTable::standard(ctx)),
        "trivial" => Ok(PairTable::trivial(ctx.n())),
        other => Err(Error::Invalid(format!("unknown alpha preset {other:?}"))),
    }
}
