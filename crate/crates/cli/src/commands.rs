use anyhow::{bail, Result};
use qdyb_core::levi::{build_eps_dyn, projector_from_eps};
use qdyb_core::qmatrix::replay;
use qdyb_core::report::{Record, Status};
use qdyb_core::rmatrix::build_const;
use qdyb_core::suites::builtin_derivations;
use qdyb_core::wznw::{casimir, det_normalization_check, dvec};
use qdyb_core::{
    build_dj, build_dyn, invert_dyn, Backend, Checks, Derivation, EpsSource, Fp64, MatrixDump, ParamsDoc,
    QContext, Rational, Regime, Report, Sampler, Scalar, TensorOp, Variance, WeightVector, Workspace,
};
use serde_json::{json, Value};

use crate::inputs::{Format, ParamArgs};

/// Verification outcome of a command that ran to completion.
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn emit_report(report: &Report, format: Format) -> Outcome {
    match format {
        Format::Json => out!("{}", report.to_json()),
        Format::Text => out!("{}", report.to_text().trim_end()),
    }
    Outcome::from_pass(report.passed())
}

fn dump_value<S: Scalar>(op: &TensorOp<S>) -> Value {
    serde_json::to_value(MatrixDump::from_op(op)).expect("dumps serialize")
}

fn dump_text(name: &str, v: &Value, out: &mut String) {
    out.push_str(&format!("{name}\n"));
    if let Some(entries) = v.get("entries").and_then(Value::as_array) {
        for e in entries {
            out.push_str(&format!("  {} {} = {}\n", e[0], e[1], e[2].as_str().unwrap_or("")));
        }
    } else if let Some(map) = v.as_object() {
        for (k, x) in map {
            out.push_str(&format!("  {k} = {}\n", x.as_str().map_or_else(|| x.to_string(), str::to_string)));
        }
    } else {
        out.push_str(&format!("  {v}\n"));
    }
}

fn print_object(obj: &Value, format: Format) {
    match format {
        Format::Json => out!("{}", serde_json::to_string_pretty(obj).expect("json")),
        Format::Text => {
            let mut out = String::new();
            if let Some(map) = obj.as_object() {
                for (k, v) in map {
                    dump_text(k, v, &mut out);
                }
            }
            out!("{}", out.trim_end());
        }
    }
}

pub fn build(args: &ParamArgs, k: Option<usize>, format: Format) -> Result<Outcome> {
    let obj = match args.backend {
        Backend::Rational => build_in::<Rational>(args, k)?,
        Backend::Prime => build_in::<Fp64>(args, k)?,
    };
    print_object(&obj, format);
    Ok(Outcome::Pass)
}

fn build_in<S: Scalar>(args: &ParamArgs, k: Option<usize>) -> Result<Value> {
    let mut s = Sampler::new(args.seed);
    let params = args.resolve::<S>(&mut s)?;
    let n = params.n();
    let p = args.point(&params, &mut s, 2)?;
    let k = k.unwrap_or(n);
    if k < n {
        bail!("projectors need k >= n, got k = {k}");
    }
    let rhat = if params.regime() == Regime::ConstantMultiparam {
        build_const(&params)?.op
    } else {
        build_dj(params.ctx()).op
    };
    let eps = |v| -> Result<Value> {
        Ok(serde_json::from_str(&build_eps_dyn(&params, &p, v)?.to_json())?)
    };
    Ok(json!({
        "params": serde_json::to_value(ParamsDoc::from_params(&params))?,
        "p": p.rel(),
        "rhat": dump_value(&rhat),
        "rhat_p": dump_value(&build_dyn(&params, &p)?),
        "rhat_p_inverse": dump_value(&invert_dyn(&params, &p)?),
        "eps_up": eps(Variance::Contra)?,
        "eps_down": eps(Variance::Co)?,
        "projector": dump_value(&projector_from_eps(EpsSource::Dynamic(&params, &p), 1, k)?),
    }))
}

pub fn verify(suite: qdyb_core::Suite, cfg: &qdyb_core::SuiteConfig, format: Format) -> Result<Outcome> {
    let report = qdyb_core::run_suite(suite, cfg)?;
    Ok(emit_report(&report, format))
}

/// A script file holds one derivation or an array of them; an empty file
/// holds none.
pub fn parse_script(text: &str) -> Result<Vec<Derivation>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    if trimmed.starts_with('[') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    Ok(vec![Derivation::from_json(trimmed)?])
}

pub fn derive(args: &ParamArgs, scripts: Vec<Derivation>, format: Format) -> Result<Outcome> {
    let report = match args.backend {
        Backend::Rational => derive_in::<Rational>(args, &scripts)?,
        Backend::Prime => derive_in::<Fp64>(args, &scripts)?,
    };
    Ok(emit_report(&report, format))
}

fn derive_in<S: Scalar>(args: &ParamArgs, scripts: &[Derivation]) -> Result<Report> {
    let backend = S::BACKEND;
    if scripts.is_empty() {
        return Ok(Report::new("derive", Vec::new()));
    }
    let mut s = Sampler::new(args.seed);
    let params = args.resolve::<S>(&mut s)?;
    let p = args.point(&params, &mut s, 2 * params.n() as i64 + 2)?;
    let ws = Workspace::new(&params, &p)?;
    let records = scripts
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let start = std::time::Instant::now();
            let witness = match replay(d, &ws) {
                Ok(out) => out.mismatch.map(|m| format!("end mismatch: {m}")),
                Err(e) => Some(e.to_string()),
            };
            Record {
                id: format!("{:02}.{}", i + 1, d.name),
                anchor: "derivation script".into(),
                status: if witness.is_some() { Status::Fail } else { Status::Pass },
                witness,
                backend,
                probabilistic: backend == Backend::Prime,
                timing_ms: start.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect();
    Ok(Report::new("derive", records))
}

pub fn builtin_scripts(n: usize) -> Vec<Derivation> {
    builtin_derivations(n)
}

fn checks_value(c: &Checks) -> Value {
    Value::Array(
        c.items()
            .iter()
            .map(|(name, r)| json!({ "name": name, "pass": r.is_none(), "witness": r }))
            .collect(),
    )
}

pub fn wznw(n: usize, weights: Option<&str>, p: Option<&str>, root: &str, format: Format) -> Result<Outcome> {
    let w = match (weights, p) {
        (Some(_), Some(_)) => bail!("give --weights or --p, not both"),
        (Some(text), None) => {
            let raw = text
                .split(',')
                .map(|x| Rational::parse(x.trim()))
                .collect::<qdyb_core::Result<Vec<_>>>()?;
            if raw.len() != n {
                bail!("expected {n} weights, got {}", raw.len());
            }
            let mean = raw.iter().fold(Rational::zero(), |a, x| a + x.clone()) * Rational::from_frac(1, n as i64)?;
            WeightVector::centered(raw.into_iter().map(|x| x - mean.clone()).collect())?
        }
        (None, Some(text)) => WeightVector::from_point(&qdyb_core::WeightPoint::parse_assignments(n, text)?),
        (None, None) => WeightVector::from_point(&qdyb_core::WeightPoint::zero(n)),
    };
    let ctx = QContext::with_root(Rational::parse(root)?, n)?;
    let (d, d_checks) = dvec(&w);
    let norm = det_normalization_check(&ctx)?;
    let text = |xs: &[Rational]| xs.iter().map(|x| x.to_ratio_string()).collect::<Vec<_>>();
    let shifted: Vec<String> = (0..n).map(|j| casimir(&w.plus_weight(j)).to_ratio_string()).collect();
    let ok = d_checks.passed() && norm.checks.passed();
    let obj = json!({
        "n": n,
        "p": text(w.p()),
        "casimir": casimir(&w).to_ratio_string(),
        "casimir_shifted": shifted,
        "d": text(&d),
        "d_checks": checks_value(&d_checks),
        "normalization": {
            "q": ctx.q().to_ratio_string(),
            "root": root,
            "multiplicity_q": norm.plus,
            "multiplicity_minus_qbar": norm.minus,
            "det": norm.det.to_ratio_string(),
            "checks": checks_value(&norm.checks),
        },
        "status": if ok { "pass" } else { "fail" },
    });
    match format {
        Format::Json => out!("{}", serde_json::to_string_pretty(&obj)?),
        Format::Text => {
            out!("p = ({})", text(w.p()).join(", "));
            out!("C2(p) = {}", obj["casimir"].as_str().unwrap_or(""));
            for (j, x) in text(&d).iter().enumerate() {
                out!("d_{} = {x}", j + 1);
            }
            out!(
                "det(r^-1 R) = {} with multiplicities {} and {}",
                obj["normalization"]["det"].as_str().unwrap_or(""),
                norm.plus,
                norm.minus
            );
            for (name, r) in d_checks.items().iter().chain(norm.checks.items()) {
                out!("  {} {name}{}", if r.is_none() { "PASS" } else { "FAIL" }, r.as_ref().map(|w| format!(" -- {w}")).unwrap_or_default());
            }
        }
    }
    Ok(Outcome::from_pass(ok))
}
