//! `qdyb`: build quantum dynamical R-matrices, run verification suites and
//! replay derivation scripts. Exit codes: 0 pass, 1 verification failure,
//! 2 usage error or dynamical pole.

/// Writes a line to stdout; a closed pipe is not an error.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qdyb_core::{Backend, Corruption, ParamsDoc, Rational, Sampler, Suite, SuiteConfig};

use commands::Outcome;
use inputs::{parse_backend, read, Format, ParamArgs};

#[derive(Debug, Parser)]
#[command(name = "qdyb", version, about = "Exact checks for SL(n) quantum dynamical R-matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print R̂, R̂(p), its inverse, the ε-tensors and a projector.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of tensor factors for the projector (default n).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
    /// Replay derivation scripts in the quantum matrix algebra.
    Derive {
        /// JSON file with one derivation or an array of them.
        script: Option<PathBuf>,
        /// Replay the shipped derivations instead of a file.
        #[arg(long, conflicts_with = "script")]
        builtin: bool,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Conformal dimension data and the determinant normalization.
    Wznw {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Comma-separated weights p_1,..,p_n as "num/den"; centered before use.
        #[arg(long)]
        weights: Option<String>,
        /// Integral weight point, e.g. "p12=1".
        #[arg(long)]
        p: Option<String>,
        /// q^(1/n) used for the normalization; q is its n-th power.
        #[arg(long, default_value = "2/1")]
        root: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print a parameter document, a suite config or the shipped scripts.
    Dump {
        #[arg(value_enum)]
        what: DumpTarget,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sizes: SizeArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DumpTarget {
    Params,
    Config,
    Derivations,
}

#[derive(Debug, Clone, Args)]
struct SizeArgs {
    /// Parameter draws.
    #[arg(long, default_value_t = 3)]
    draws: usize,
    /// Weight points per draw.
    #[arg(long, default_value_t = 2)]
    points: usize,
    /// Size of the appendix brute force.
    #[arg(long, default_value_t = 4)]
    k: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// params, qdybe, hecke, epsilon, qmatrix, appendix, wznw or all.
    #[arg(value_parser = |s: &str| Suite::parse(s).map_err(|e| e.to_string()))]
    suite: Suite,
    /// Suite config (JSON); replaces the options below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    sizes: SizeArgs,
    #[arg(long, default_value = "rational", value_parser = parse_backend)]
    backend: Backend,
    /// Parameter document used for every draw.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Negative control: beta, eps-sign, non-unimodular or derivation.
    #[arg(long, value_parser = |s: &str| Corruption::parse(s).map_err(|e| e.to_string()))]
    corrupt: Option<Corruption>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl VerifyArgs {
    fn config(&self) -> Result<SuiteConfig> {
        if let Some(path) = &self.config {
            return Ok(SuiteConfig::from_json(&read(path)?)?);
        }
        let params = match &self.params {
            Some(path) => Some(ParamsDoc::from_json(&read(path)?)?),
            None => None,
        };
        Ok(SuiteConfig {
            n: params.as_ref().map_or(self.n, |d| d.n),
            seed: self.seed,
            draws: self.sizes.draws,
            points: self.sizes.points,
            k: self.sizes.k,
            backend: self.backend,
            params,
            corrupt: self.corrupt,
        })
    }
}

fn dump(what: DumpTarget, params: &ParamArgs, sizes: &SizeArgs) -> Result<Outcome> {
    let text = match what {
        DumpTarget::Params => {
            let doc = match params.doc()? {
                Some(doc) => {
                    doc.to_params::<Rational>()?;
                    doc
                }
                None => ParamsDoc::from_params(&params.resolve::<Rational>(&mut Sampler::new(params.seed))?),
            };
            doc.to_json()
        }
        DumpTarget::Config => {
            let doc = params.doc()?;
            SuiteConfig {
                n: doc.as_ref().map_or(params.n, |d| d.n),
                seed: params.seed,
                draws: sizes.draws,
                points: sizes.points,
                k: sizes.k,
                backend: params.backend,
                params: doc,
                corrupt: None,
            }
            .to_json()
        }
        DumpTarget::Derivations => serde_json::to_string_pretty(&commands::builtin_scripts(params.n))?,
    };
    out!("{text}");
    Ok(Outcome::Pass)
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Build { params, k, format } => commands::build(&params, k, format),
        Command::Verify(args) => commands::verify(args.suite, &args.config()?, args.format),
        Command::Derive {
            script,
            builtin,
            params,
            format,
        } => {
            let scripts = match (script, builtin) {
                (Some(path), false) => commands::parse_script(&read(&path)?)?,
                (None, true) => commands::builtin_scripts(params.doc()?.map_or(params.n, |d| d.n)),
                _ => bail!("give a script file or --builtin"),
            };
            commands::derive(&params, scripts, format)
        }
        Command::Wznw {
            n,
            weights,
            p,
            root,
            format,
        } => commands::wznw(n, weights.as_deref(), p.as_deref(), &root, format),
        Command::Dump { what, params, sizes } => dump(what, &params, &sizes),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
