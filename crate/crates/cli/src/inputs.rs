use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use qdyb_core::params::{AlphaDoc, BetaDoc};
use qdyb_core::scalar::DEFAULT_PRIME;
use qdyb_core::{AlphaDraw, Backend, ParamsDoc, QContext, Rational, SLnParams, Sampler, Scalar, WeightPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Constant point: every β equal to q − q̄ with the standard α.
    Dj,
}

/// `rational`, `prime`, or `prime:<modulus>` with the built-in modulus.
pub fn parse_backend(text: &str) -> std::result::Result<Backend, String> {
    match text {
        "rational" => Ok(Backend::Rational),
        "prime" => Ok(Backend::Prime),
        other => match other.strip_prefix("prime:") {
            Some(m) if m.trim().parse::<u64>() == Ok(DEFAULT_PRIME) => Ok(Backend::Prime),
            Some(m) => Err(format!("only the modulus {DEFAULT_PRIME} is built in, got {m}")),
            None => Err(format!("unknown backend {other:?}")),
        },
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Parameter document (JSON); overrides the inline options.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// q as "num/den".
    #[arg(long, default_value = "2/1")]
    pub q: String,
    /// q^(1/n) as "num/den", checked against q.
    #[arg(long)]
    pub root: Option<String>,
    /// Comma-separated β chain β_12,..,β_{n-1,n}, or "infinity".
    #[arg(long)]
    pub beta: Option<String>,
    /// α preset: trivial or standard.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Weight point, e.g. "p12=2,p23=-1". Drawn from the seed when absent.
    #[arg(long)]
    pub p: Option<String>,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "rational", value_parser = parse_backend)]
    pub backend: Backend,
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

impl ParamArgs {
    /// The parameter document named on the command line, if any.
    pub fn doc(&self) -> Result<Option<ParamsDoc>> {
        if let Some(path) = &self.params {
            return Ok(Some(ParamsDoc::from_json(&read(path)?)?));
        }
        if self.preset == Some(Preset::Dj) {
            let q = Rational::parse(&self.q)?;
            let ctx = match &self.root {
                Some(r) => QContext::with_checked_root(q, Rational::parse(r)?, self.n)?,
                None => QContext::new(q, self.n)?,
            };
            let mut doc = ParamsDoc::from_params(&SLnParams::standard(ctx)?);
            doc.alpha = AlphaDoc {
                preset: Some("standard".into()),
                entries: None,
            };
            return Ok(Some(doc));
        }
        let Some(beta) = &self.beta else {
            if self.alpha.is_some() || self.root.is_some() {
                bail!("--alpha and --root need --beta, --preset or --params");
            }
            return Ok(None);
        };
        let beta = if beta.trim() == "infinity" {
            BetaDoc::Limit("infinity".into())
        } else {
            BetaDoc::Chain(beta.split(',').map(|s| s.trim().to_string()).collect())
        };
        Ok(Some(ParamsDoc {
            n: self.n,
            q: self.q.clone(),
            root: self.root.clone(),
            beta,
            alpha: AlphaDoc {
                preset: Some(self.alpha.clone().unwrap_or_else(|| "trivial".into())),
                entries: None,
            },
            regime: None,
        }))
    }

    /// Parameters from the command line, or a generic draw with a root of q.
    pub fn resolve<S: Scalar>(&self, sampler: &mut Sampler) -> Result<SLnParams<S>> {
        match self.doc()? {
            Some(doc) => Ok(doc.to_params()?),
            None => {
                let ctx = sampler.q_context_with_root::<S>(self.n)?;
                Ok(sampler.generic_params_in(ctx, AlphaDraw::Random)?)
            }
        }
    }

    pub fn point<S: Scalar>(&self, params: &SLnParams<S>, sampler: &mut Sampler, margin: i64) -> Result<WeightPoint> {
        match &self.p {
            Some(text) => Ok(WeightPoint::parse_assignments(params.n(), text)?),
            None => Ok(sampler.pole_free_point(params, margin)?),
        }
    }
}
