//! Verification suites. Each suite draws parameters and weight points from
//! a seed, runs a family of identity checks and collects one [`Record`] per
//! identity and draw.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{alternating_expansion, height, lemma11_battery, rank_formula, HeckeRep};
use crate::levi::{
    appendix_bruteforce, build_eps_const, build_eps_dyn, build_nk, build_nk_const, cycle_identity,
    eigencheck, inversions, nk_closed_form, permutations, pi_relation, projector_checks,
    relations_const, relations_dyn, xi_only_checks, EpsSource, EpsTensor, Variance, XiTable,
};
use crate::params::{BetaChain, GeomFn, PairTable, ParamsDoc, Regime, SLnParams, WeightPoint};
use crate::qmatrix::{self, membership, replay, Derivation, Factor, ScalarFn, SlotExpr, Verdict, Workspace};
use crate::report::{dyn_residual, op_residual, scalar_residual, Checks, Record, Report, Status};
use crate::rmatrix::{
    build_const, build_dj, build_dyn, build_shifted, invert_dyn, prop54_check, twist,
    verify_hecke_and_weight, verify_qdybe, CanonicalShift, QdybeForm, TwistSpec,
};
use crate::sampling::{AlphaDraw, Sampler};
use crate::scalar::{Backend, Fp64, QContext, Rational, Scalar};
use crate::tensor::{DiagOp, DynOp, ShiftMode, TensorOp};
use crate::wznw::{det_normalization_check, dvec, reconcile_d_with_prop54, WeightVector};

/// Coefficient budget for the membership oracle.
pub const ORACLE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Params,
    Qdybe,
    Hecke,
    Epsilon,
    Qmatrix,
    Appendix,
    Wznw,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Params,
        Suite::Qdybe,
        Suite::Hecke,
        Suite::Epsilon,
        Suite::Qmatrix,
        Suite::Appendix,
        Suite::Wznw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Params => "params",
            Suite::Qdybe => "qdybe",
            Suite::Hecke => "hecke",
            Suite::Epsilon => "epsilon",
            Suite::Qmatrix => "qmatrix",
            Suite::Appendix => "appendix",
            Suite::Wznw => "wznw",
            Suite::All => "all",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|s| s.name() == text)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {text:?}")))
    }

    /// Corruptions this suite is able to detect.
    pub fn detects(self) -> &'static [Corruption] {
        match self {
            Suite::Params | Suite::Hecke | Suite::Appendix | Suite::Wznw => &[Corruption::Beta],
            Suite::Qdybe => &[Corruption::Beta, Corruption::NonUnimodular],
            Suite::Epsilon => &[Corruption::EpsSign, Corruption::NonUnimodular],
            Suite::Qmatrix => &[Corruption::Derivation],
            Suite::All => &[
                Corruption::Beta,
                Corruption::EpsSign,
                Corruption::NonUnimodular,
                Corruption::Derivation,
            ],
        }
    }
}

/// A deliberately broken input used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corruption {
    /// β_21 moved off λ − β_12.
    Beta,
    /// One component of every contravariant ε-tensor negated.
    EpsSign,
    /// Shift operators without the relation X^1⋯X^n = 1.
    NonUnimodular,
    /// The claimed end of the exchange derivation loses its q-power.
    Derivation,
}

impl Corruption {
    pub const ALL: [Corruption; 4] = [
        Corruption::Beta,
        Corruption::EpsSign,
        Corruption::NonUnimodular,
        Corruption::Derivation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Corruption::Beta => "beta",
            Corruption::EpsSign => "eps-sign",
            Corruption::NonUnimodular => "non-unimodular",
            Corruption::Derivation => "derivation",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Corruption::ALL
            .into_iter()
            .find(|c| c.name() == text)
            .ok_or_else(|| Error::Invalid(format!("unknown corruption {text:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub seed: u64,
    /// Parameter draws.
    pub draws: usize,
    /// Weight points per draw.
    pub points: usize,
    /// Size of the appendix brute force.
    pub k: usize,
    pub backend: Backend,
    /// Fixed parameters instead of random draws.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrupt: Option<Corruption>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 2,
            seed: 0,
            draws: 3,
            points: 2,
            k: 4,
            backend: Backend::Rational,
            params: None,
            corrupt: None,
        }
    }
}

impl SuiteConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    fn validate(&self, suite: Suite) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Invalid(format!("suites need n >= 2, got {}", self.n)));
        }
        if self.draws == 0 || self.points == 0 {
            return Err(Error::Invalid("draws and points must be positive".into()));
        }
        if !(1..=8).contains(&self.k) {
            return Err(Error::Invalid(format!("k must lie in 1..=8, got {}", self.k)));
        }
        if let Some(doc) = &self.params {
            if doc.n != self.n {
                return Err(Error::Invalid(format!(
                    "parameter file has n = {}, config has n = {}",
                    doc.n, self.n
                )));
            }
        }
        if let Some(c) = self.corrupt {
            if !suite.detects().contains(&c) {
                return Err(Error::Invalid(format!(
                    "suite {} has no control for corruption {}",
                    suite.name(),
                    c.name()
                )));
            }
        }
        Ok(())
    }

    fn corrupted(&self, c: Corruption) -> bool {
        self.corrupt == Some(c)
    }
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate(suite)?;
    match cfg.backend {
        Backend::Rational => run_in::<Rational>(suite, cfg),
        Backend::Prime => run_in::<Fp64>(suite, cfg),
    }
}

fn run_in<S: Scalar>(suite: Suite, cfg: &SuiteConfig) -> Result<Report> {
    let mut rec = Recorder::new(S::BACKEND);
    let selected: Vec<Suite> = match suite {
        Suite::All => Suite::EACH
            .into_iter()
            .filter(|s| cfg.corrupt.is_none_or(|c| s.detects().contains(&c)))
            .collect(),
        one => vec![one],
    };
    for s in selected {
        rec.prefix = s.name();
        match s {
            Suite::Params => params_suite::<S>(cfg, &mut rec)?,
            Suite::Qdybe => qdybe_suite::<S>(cfg, &mut rec)?,
            Suite::Hecke => hecke_suite::<S>(cfg, &mut rec)?,
            Suite::Epsilon => epsilon_suite::<S>(cfg, &mut rec)?,
            Suite::Qmatrix => qmatrix_suite::<S>(cfg, &mut rec)?,
            Suite::Appendix => appendix_suite::<S>(cfg, &mut rec)?,
            Suite::Wznw => wznw_suite::<S>(cfg, &mut rec)?,
            Suite::All => unreachable!("expanded above"),
        }
    }
    Ok(Report::new(suite.name(), rec.records))
}

struct Recorder {
    prefix: &'static str,
    backend: Backend,
    records: Vec<Record>,
}

impl Recorder {
    fn new(backend: Backend) -> Self {
        Recorder {
            prefix: "",
            backend,
            records: Vec::new(),
        }
    }

    fn push(&mut self, id: &str, anchor: &str, status: Status, witness: Option<String>, ms: f64) {
        self.records.push(Record {
            id: format!("{}.{id}", self.prefix),
            anchor: anchor.to_string(),
            status,
            witness,
            backend: self.backend,
            probabilistic: self.backend == Backend::Prime,
            timing_ms: ms,
        });
    }

    /// Runs `f` and records pass, fail with the first residual, or fail
    /// with the error it raised.
    fn check(&mut self, id: &str, anchor: &str, f: impl FnOnce() -> Result<Checks>) {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let witness = match outcome {
            Ok(c) => c.first_failure(),
            Err(e) => Some(format!("error: {e}")),
        };
        let status = if witness.is_some() { Status::Fail } else { Status::Pass };
        self.push(id, anchor, status, witness, ms);
    }

    fn skip(&mut self, id: &str, anchor: &str, reason: String) {
        self.push(id, anchor, Status::Skip, Some(reason), 0.0);
    }
}

fn tag(d: usize) -> String {
    format!("d{d:02}")
}

/// One parameter draw and its weight points.
struct Draw<S: Scalar> {
    params: SLnParams<S>,
    points: Vec<WeightPoint>,
}

/// Seeded draws of rank `n`. The β corruption is applied before points are
/// chosen so that they avoid the poles of the corrupted parameters.
fn draws<S: Scalar>(cfg: &SuiteConfig, n: usize, margin: i64, root: bool) -> Result<Vec<Draw<S>>> {
    let mut s = Sampler::new(cfg.seed);
    (0..cfg.draws)
        .map(|_| {
            let mut params = match cfg.params.as_ref().filter(|doc| doc.n == n) {
                Some(doc) => doc.to_params::<S>()?,
                None => {
                    let ctx = if root {
                        s.q_context_with_root::<S>(n)?
                    } else {
                        s.q_context::<S>(n)?
                    };
                    s.generic_params_in(ctx, AlphaDraw::Random)?
                }
            };
            if cfg.corrupted(Corruption::Beta) {
                params = corrupt_beta(&params)?;
            }
            let points = (0..cfg.points)
                .map(|_| s.pole_free_point(&params, margin))
                .collect::<Result<_>>()?;
            Ok(Draw { params, points })
        })
        .collect()
}

/// β_21 → β_21 + 1.
pub fn corrupt_beta<S: Scalar>(params: &SLnParams<S>) -> Result<SLnParams<S>> {
    let good = params.beta(1, 0)?.clone();
    params.with_corrupted_beta(1, 0, good.add_ref(&S::one()))
}

/// Negates the component at the identity ordering.
pub fn corrupt_eps<S: Scalar>(eps: &EpsTensor<S>) -> EpsTensor<S> {
    let idx: Vec<usize> = (0..eps.n()).collect();
    eps.with_component(&idx, -eps.get(&idx))
}

fn over_points(points: &[WeightPoint], mut f: impl FnMut(&WeightPoint) -> Result<Checks>) -> Result<Checks> {
    let mut all = Checks::new();
    for p in points {
        all.extend(&format!("p={:?} ", p.rel()), f(p)?);
    }
    Ok(all)
}

fn single(name: &str, r: crate::report::Residual) -> Checks {
    let mut c = Checks::new();
    c.push(name, r);
    c
}

/// X_1⋯X_n = 1 on V^⊗n restricted to tuples of distinct indices, the
/// support of the ε-tensors, evaluated at `p`.
pub fn shift_product_check<S: Scalar>(n: usize, p: &WeightPoint, mode: ShiftMode) -> Result<Checks> {
    let sites: Vec<usize> = (0..n).collect();
    let distinct = DiagOp::from_fn(n, n, |m| {
        let all = (0..m.len()).all(|a| (a + 1..m.len()).all(|b| m[a] != m[b]));
        if all { S::one() } else { S::zero() }
    })
    .to_op();
    let support = DynOp::constant(distinct, mode);
    let prod = DynOp::<S>::x_sites(n, n, &sites, 1, mode)?.mul(&support);
    Ok(single("X_1...X_n on distinct tuples", dyn_residual(&prod, &support, p)?))
}

fn shift_mode(cfg: &SuiteConfig) -> ShiftMode {
    if cfg.corrupted(Corruption::NonUnimodular) {
        ShiftMode::Free
    } else {
        ShiftMode::Unimodular
    }
}

/// Scalar relations among β, π, ξ, a and b at one point.
pub fn scalar_identities<S: Scalar>(params: &SLnParams<S>, w: &WeightPoint) -> Result<Checks> {
    let n = params.n();
    let ctx = params.ctx();
    let lambda = ctx.lambda();
    let beta = if params.is_infinite() {
        None
    } else {
        Some(params.beta_matrix()?.clone())
    };
    let pi = params.pi_matrix().ok();
    let mut c = Checks::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let t = format!("{}{}", i + 1, j + 1);
            let pij = w.pdiff(i, j);
            let (aij, aji) = (params.a(i, j, pij)?, params.a(j, i, -pij)?);
            let (bij, bji) = (params.b(i, j, pij)?, params.b(j, i, -pij)?);
            if let Some(beta) = &beta {
                let sum = beta[i][j].add_ref(&beta[j][i]);
                c.push(format!("beta sum {t}"), scalar_residual("beta_ij + beta_ji", &sum, lambda));
            }
            c.push(
                format!("b sum {t}"),
                scalar_residual("b_ij + b_ji", &bij.add_ref(&bji), lambda),
            );
            let det = aij.mul_ref(&aji).sub_ref(&bij.mul_ref(&bji));
            c.push(format!("unimodular block {t}"), scalar_residual("a_ij a_ji - b_ij b_ji", &det, &S::one()));
            if let Some(pi) = &pi {
                c.push(
                    format!("pi inverse {t}"),
                    scalar_residual("pi_ij pi_ji", &pi[i][j].mul_ref(&pi[j][i]), &S::one()),
                );
                if !bij.is_zero() && params.regime() == Regime::Generic {
                    let ratio = bji.div_ref(&bij)?.neg().mul_ref(&ctx.qpow(2 * pij));
                    c.push(format!("pi from b {t}"), scalar_residual("-b_ji/b_ij q^2p", &ratio, &pi[i][j]));
                }
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let t = format!("{t}{}", k + 1);
                if let Some(pi) = &pi {
                    let cyc = pi[i][j].mul_ref(&pi[j][k]).mul_ref(&pi[k][i]);
                    c.push(format!("pi cocycle {t}"), scalar_residual("pi_ij pi_jk pi_ki", &cyc, &S::one()));
                }
                if let Some(b) = &beta {
                    let cyc = b[i][j]
                        .mul_ref(&b[j][k])
                        .mul_ref(&b[k][i])
                        .add_ref(&b[i][k].mul_ref(&b[k][j]).mul_ref(&b[j][i]));
                    c.push(format!("beta cycle {t}"), scalar_residual("cyclic beta sum", &cyc, &S::zero()));
                }
                let bb = |x: usize, y: usize| params.b(x, y, w.pdiff(x, y));
                let cyc = bb(i, j)?
                    .mul_ref(&bb(j, k)?)
                    .mul_ref(&bb(k, i)?)
                    .add_ref(&bb(i, k)?.mul_ref(&bb(k, j)?).mul_ref(&bb(j, i)?));
                c.push(format!("b cycle {t}"), scalar_residual("cyclic b sum", &cyc, &S::zero()));
            }
        }
    }
    Ok(c)
}

fn params_suite<S: Scalar>(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<()> {
    for (d, draw) in draws::<S>(cfg, cfg.n, 2, false)?.iter().enumerate() {
        let t = tag(d);
        rec.check(&format!("scalar-identities.{t}"), "beta, pi, xi and a/b relations", || {
            over_points(&draw.points, |p| scalar_identities(&draw.params, p))
        });
        rec.check(&format!("document-roundtrip.{t}"), "parameter document", || {
            let text = ParamsDoc::from_params(&draw.params).to_json();
            let back = ParamsDoc::from_json(&text)?.to_params::<S>()?;
            Ok(single("roundtrip", (back != draw.params).then(|| "parameters changed".to_string())))
        });
    }
    Ok(())
}

fn qdybe_suite<S: Scalar>(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<()> {
    let n = cfg.n;
    let mode = shift_mode(cfg);
    let mut sampler = Sampler::new(cfg.seed ^ 0x5eed);
    for (d, draw) in draws::<S>(cfg, n, 3, true)?.iter().enumerate() {
        let (params, points) = (&draw.params, &draw.points);
        let t = tag(d);
        for form in QdybeForm::ALL {
            rec.check(&format!("braid.{}.{t}", form.name()), "dynamical braid relation", || {
                over_points(points, |p| Ok(single(form.name(), verify_qdybe(params, p, form)?)))
            });
        }
        rec.check(&format!("hecke-weight.{t}"), "Hecke condition and weight zero", || {
            over_points(points, |p| verify_hecke_and_weight(params, p))
        });
        rec.check(&format!("inverse.{t}"), "closed-form inverse", || {
            over_points(points, |p| {
                let prod = build_dyn(params, p)?.matmul(&invert_dyn(params, p)?)?;
                Ok(single("R R^-1", op_residual(&prod, &TensorOp::identity(n, 2))))
            })
        });
        rec.check(&format!("unimodular-shift.{t}"), "unimodular shift operators", || {
            over_points(points, |p| shift_product_check::<S>(n, p, mode))
        });
        let diag = format!("diagonal-twist.{t}");
        match params.regime() {
            Regime::Generic | Regime::BetaInfinity => rec.check(&diag, "diagonal twist by D(p)", || {
                over_points(points, |p| {
                    let out = prop54_check(params, p)?;
                    let mut c = out.checks;
                    for i in 0..n {
                        for j in 0..n {
                            let want = params.ctx().qpow(if i == j { 2 } else { 0 });
                            c.push(format!("sigma {}{}", i + 1, j + 1), scalar_residual("sigma", &out.sigma[i][j], &want));
                        }
                    }
                    c.push("D_n", scalar_residual("D_n", &out.d[n - 1], &S::one()));
                    Ok(c)
                })
            }),
            other => rec.skip(&diag, "diagonal twist by D(p)", format!("needs pi_ij, regime is {other:?}")),
        }
        let psi = sampler.pair_table::<S>(n)?;
        let psi = PairTable::from_upper(n, |i, j| GeomFn::constant(psi.get(i, j).c.clone()))?;
        rec.check(&format!("twist.{t}"), "gauge twist of alpha", || {
            let spec = TwistSpec::new(psi.clone());
            let mut c = over_points(points, |p| crate::rmatrix::verify_twist(params, &spec, p))?;
            let twisted = twist(params, &spec)?;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let want = params.alpha().get(i, j).mul(&psi.get(j, i).square());
                    let got = twisted.alpha().get(i, j);
                    c.push(
                        format!("alpha {}{}", i + 1, j + 1),
                        (got != &want).then(|| format!("alpha_ij = {got:?}, expected {want:?}")),
                    );
                }
            }
            let same = twist(params, &TwistSpec::trivial(n))? == *params;
            c.push("trivial twist", (!same).then(|| "trivial twist changed the parameters".into()));
            Ok(c)
        });
        let shift_id = format!("canonical-shift.{t}");
        if params.regime() != Regime::Generic {
            rec.skip(&shift_id, "canonical shift removing beta", format!("needs generic beta, regime is {:?}", params.regime()));
            continue;
        }
        let inf = SLnParams::new(params.ctx().clone(), BetaChain::Infinite, params.alpha().clone())?;
        let shift_points = (0..points.len())
            .map(|_| sampler.pole_free_point_for(&[(params, n as i64 - 1), (&inf, 0)]))
            .collect::<Result<Vec<_>>>()?;
        rec.check(&shift_id, "canonical shift removing beta", || {
            over_points(&shift_points, |p| {
                let mut c = Checks::new();
                let moved = build_shifted(params, p, &CanonicalShift::PiSubstitution)?;
                c.push("pi substitution", op_residual(&moved, &build_dyn(&inf, p)?));
                let steps: Vec<i64> = (0..n as i64).map(|i| i - (n as i64 - 1) / 2).collect();
                let sum: i64 = steps.iter().sum();
                let mut steps = steps;
                steps[0] -= sum;
                let offsets = steps.iter().map(|&s| Rational::from_i64(s)).collect();
                let shifted = build_shifted(params, p, &CanonicalShift::Offsets(offsets))?;
                c.push("integer offsets", op_residual(&shifted, &build_dyn(params, &p.shifted_by(&steps))?));
                Ok(c)
            })
        });
    }
    let ctx = sampler.q_context::<S>(n)?;
    rec.check("constant-limit", "constant multiparameter limit", || {
        let std = SLnParams::standard(ctx.clone())?;
        let mut c = Checks::new();
        c.push(
            "regime",
            (std.regime() != Regime::ConstantMultiparam).then(|| format!("regime {:?}", std.regime())),
        );
        let dj = build_dj(&ctx).op;
        c.push("constant matrix", op_residual(&build_const(&std)?.op, &dj));
        let p = sampler.pole_free_point(&std, 2)?;
        c.push("p-independence", op_residual(&build_dyn(&std, &p)?, &dj));
        for form in QdybeForm::ALL {
            c.push(format!("braid {}", form.name()), verify_qdybe(&std, &p, form)?);
        }
        Ok(c)
    });
    Ok(())
}

fn hecke_suite<S: Scalar>(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<()> {
    let n = cfg.n;
    let k = n + 1;
    for (d, draw) in draws::<S>(cfg, n, k as i64 + 1, false)?.iter().enumerate() {
        let t = tag(d);
        let ctx = draw.params.ctx();
        let mut reps: Vec<(String, Result<HeckeRep<S>>)> =
            vec![("dj".into(), HeckeRep::constant(ctx, &build_dj(ctx).op, k))];
        for (m, p) in draw.points.iter().enumerate() {
            reps.push((format!("dynamic.p{m}"), HeckeRep::dynamic(&draw.params, p, k)));
        }
        for (flavor, rep) in &reps {
            let with = |f: &dyn Fn(&HeckeRep<S>) -> Result<Checks>| -> Result<Checks> {
                f(rep.as_ref().map_err(Clone::clone)?)
            };
            rec.check(&format!("{flavor}.relations.{t}"), "Hecke relations", || {
                with(&|r| r.relation_checks())
            });
            rec.check(&format!("{flavor}.height.{t}"), "height of the representation", || {
                with(&|r| {
                    let h = height(r)?;
                    let mut c = h.windows.clone();
                    c.push(
                        "height",
                        (h.height != Some(n)).then(|| format!("height {:?}, expected {n}", h.height)),
                    );
                    Ok(c)
                })
            });
            rec.check(&format!("{flavor}.lemma.{t}"), "antisymmetrizer recursions", || {
                with(&|r| lemma11_battery(r))
            });
            rec.check(&format!("{flavor}.alternating.{t}"), "alternating expansion", || {
                with(&|r| Ok(single("expansion", alternating_expansion(r, n)?)))
            });
            rec.check(&format!("{flavor}.ranks.{t}"), "antisymmetrizer ranks", || {
                with(&|r| {
                    let mut c = Checks::new();
                    for j in 1..=n {
                        c.push(format!("rank {j}"), rank_formula(r, j)?);
                    }
                    Ok(c)
                })
            });
        }
    }
    Ok(())
}

/// Σ_σ q^{2ℓ(σ) − n(n−1)/2} by enumeration of S_n.
pub fn eps_normalization_oracle<S: Scalar>(ctx: &QContext<S>) -> S {
    let n = ctx.n();
    let top = (n * (n - 1) / 2) as i64;
    permutations(&(0..n).collect::<Vec<_>>())
        .iter()
        .fold(S::zero(), |acc, s| acc.add_ref(&ctx.qpow(2 * inversions(s) as i64 - top)))
}

fn epsilon_suite<S: Scalar>(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<()> {
    let n = cfg.n;
    let mode = shift_mode(cfg);
    let wrong = cfg.corrupted(Corruption::EpsSign);
    let fix = |e: EpsTensor<S>| {
        if wrong && e.variance() == Variance::Contra {
            corrupt_eps(&e)
        } else {
            e
        }
    };
    for (d, draw) in draws::<S>(cfg, n, n as i64 + 2, false)?.iter().enumerate() {
        let (params, points) = (&draw.params, &draw.points);
        let ctx = params.ctx();
        let t = tag(d);
        rec.check(&format!("dj.eigen.{t}"), "epsilon eigenvectors", || {
            let rep = HeckeRep::constant(ctx, &build_dj(ctx).op, n)?;
            let mut c = Checks::new();
            for v in [Variance::Contra, Variance::Co] {
                c.extend(&format!("{v:?} "), eigencheck(&fix(build_eps_const(ctx, v)), &rep)?);
            }
            Ok(c)
        });
        rec.check(&format!("dynamic.eigen.{t}"), "epsilon eigenvectors", || {
            over_points(points, |p| {
                let rep = HeckeRep::dynamic(params, p, n)?;
                let mut c = Checks::new();
                for v in [Variance::Contra, Variance::Co] {
                    c.extend(&format!("{v:?} "), eigencheck(&fix(build_eps_dyn(params, p, v)?), &rep)?);
                }
                Ok(c)
            })
        });
        rec.check(&format!("normalization.{t}"), "epsilon normalization", || {
            let mut c = Checks::new();
            let qf = ctx.qfact(n);
            let contract = |co: EpsTensor<S>, contra: EpsTensor<S>| EpsTensor::contract(&fix(co), &fix(contra));
            let constant = contract(build_eps_const(ctx, Variance::Co), build_eps_const(ctx, Variance::Contra))?;
            c.push("constant", scalar_residual("E.E", &constant, &qf));
            c.push("enumeration", scalar_residual("sum over S_n", &eps_normalization_oracle(ctx), &qf));
            c.extend(
                "",
                over_points(points, |p| {
                    let v = contract(build_eps_dyn(params, p, Variance::Co)?, build_eps_dyn(params, p, Variance::Contra)?)?;
                    Ok(single("dynamic", scalar_residual("E(p).E(p)", &v, &qf)))
                })?,
            );
            Ok(c)
        });
        rec.check(&format!("standard-point.{t}"), "constant epsilon tensors", || {
            let std = SLnParams::standard(ctx.clone())?;
            over_points(points, |p| {
                let mut c = Checks::new();
                for v in [Variance::Contra, Variance::Co] {
                    let dynamic = build_eps_dyn(&std, p, v)?;
                    let constant = build_eps_const(ctx, v);
                    c.push(
                        format!("{v:?}"),
                        (dynamic.entries() != constant.entries()).then(|| format!("{v:?} tensors differ")),
                    );
                }
                Ok(c)
            })
        });
        rec.check(&format!("nk.{t}"), "N(p)K(p) and the closed form of N", || {
            over_points(points, |p| {
                let nk = build_nk(params, p)?;
                let mut c = nk.checks()?;
                for (i, v) in nk_closed_form(params, p)?.iter().enumerate() {
                    c.push(format!("closed form {}", i + 1), scalar_residual("N_ii", &nk.n_mat.get(i, i), v));
                }
                Ok(c)
            })
        });
        rec.check(&format!("nk-constant.{t}"), "constant N and K", || {
            let nk = build_nk_const(ctx)?;
            let id = TensorOp::identity(n, 1);
            let mut c = Checks::new();
            c.push("N", op_residual(&nk.n_mat, &id));
            c.push("K", op_residual(&nk.k_mat, &id));
            Ok(c)
        });
        rec.check(&format!("projectors.{t}"), "epsilon projectors", || {
            let rep = HeckeRep::constant(ctx, &build_dj(ctx).op, n)?;
            let mut c = projector_checks(EpsSource::Constant(ctx), &rep)?;
            c.extend(
                "",
                over_points(points, |p| {
                    let rep = HeckeRep::dynamic(params, p, n)?;
                    projector_checks(EpsSource::Dynamic(params, p), &rep)
                })?,
            );
            Ok(c)
        });
        rec.check(&format!("shift-relations.{t}"), "N and K exchange relations", || {
            let rep = HeckeRep::constant(ctx, &build_dj(ctx).op, n + 1)?;
            let mut c = relations_const(&rep)?;
            c.extend(
                "",
                over_points(points, |p| relations_dyn(params, &HeckeRep::dynamic(params, p, n + 1)?))?,
            );
            Ok(c)
        });
        rec.check(&format!("unimodular-shift.{t}"), "unimodular shift operators", || {
            over_points(points, |p| shift_product_check::<S>(n, p, mode))
        });
    }
    Ok(())
}

/// The shipped derivations for rank n, in replay order.
pub fn builtin_derivations(n: usize) -> Vec<Derivation> {
    let mut ds = vec![
        qmatrix::eps_bra(n),
        qmatrix::eps_ket(n),
        qmatrix::det_function(n, "q^p12", ScalarFn::QPow { i: 1, j: 2, e: 1 }),
        qmatrix::det_function(n, "f(p12)", ScalarFn::F { i: 1, j: 2 }),
        qmatrix::det_commute(n),
        qmatrix::left_inverse(n),
        qmatrix::right_inverse(n),
        qmatrix::central(n),
        qmatrix::m_commutes_with_d(n),
        qmatrix::m_exchange(n),
    ];
    if n == 2 {
        ds.push(qmatrix::reflection(n));
    }
    ds
}

/// Drops the q-power from the claimed end of the exchange derivation.
pub fn corrupt_derivation(mut d: Derivation) -> Derivation {
    if let Some(f) = d.end.factors.get_mut(1) {
        *f = Factor::Scalar {
            f: ScalarFn::RootPow { e: 0 },
        };
    }
    d
}

fn qmatrix_suite<S: Scalar>(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<()> {
    let n = cfg.n;
    let mut ds = builtin_derivations(n);
    if cfg.corrupted(Corruption::Derivation) {
        for d in ds.iter_mut().filter(|d| d.name.contains("exchange")) {
            *d = corrupt_derivation(d.clone());
        }
    }
    for (dn, draw) in draws::<S>(cfg, n, 2 * n as i64 + 2, true)?.iter().enumerate() {
        let t = tag(dn);
        let spaces = draw
            .points
            .iter()
            .map(|p| Workspace::new(&draw.params, p))
            .collect::<Result<Vec<_>>>()?;
        for d in &ds {
            rec.check(&format!("replay.{}.{t}", d.name), "quantum matrix algebra", || {
                let mut c = Checks::new();
                for (ws, p) in spaces.iter().zip(&draw.points) {
                    c.push(format!("p={:?}", p.rel()), replay(d, ws)?.mismatch);
                }
                Ok(c)
            });
        }
        if n != 2 {
            continue;
        }
        for d in &ds {
            rec.check(&format!("oracle.{}.{t}", d.name), "independent membership oracle", || {
                let mut c = Checks::new();
                for (ws, p) in spaces.iter().zip(&draw.points) {
                    let a = SlotExpr::compile(&d.start, ws)?;
                    let b = SlotExpr::compile(&d.end, ws)?;
                    let w = match membership(&a, &b, ws, ORACLE_LIMIT)? {
                        Verdict::Equal => None,
                        other => Some(format!("{other:?}")),
                    };
                    c.push(format!("p={:?}", p.rel()), w);
                }
                Ok(c)
            });
        }
    }
    Ok(())
}

fn distinct_points<S: Scalar>(s: &mut Sampler, k: usize) -> Vec<S> {
    let mut raw: Vec<i64> = Vec::new();
    while raw.len() < k {
        let x = s.int(-60, 60);
        if x != 0 && !raw.contains(&x) {
            raw.push(x);
        }
    }
    raw.into_iter().map(|x| S::from_i64(x)).collect()
}

fn appendix_suite<S: Scalar>(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<()> {
    let k = cfg.k;
    let mut s = Sampler::new(cfg.seed ^ 0xa11);
    for d in 0..cfg.draws {
        let t = tag(d);
        let ctx = s.q_context::<S>(k)?;
        let generic_d = s.scalar_nonzero::<S>();
        for (label, dv) in [("generic-d", generic_d), ("d-equals-q", ctx.q().clone())] {
            let table = (0..64)
                .map(|_| XiTable::from_points(&ctx, dv.clone(), &distinct_points::<S>(&mut s, k)))
                .find_map(|r| r.ok());
            rec.check(&format!("{label}.{t}"), "ordered product sums", || {
                let table = table.ok_or_else(|| Error::Invalid("no admissible points".into()))?;
                let mut c = appendix_bruteforce(&table, k)?;
                for len in 2..=k.min(5) {
                    c.extend(&format!("cycle {len} "), cycle_identity(&table, len)?);
                }
                Ok(c)
            });
        }
    }
    let sub = SuiteConfig {
        params: None,
        ..cfg.clone()
    };
    for (d, draw) in draws::<S>(&sub, k.max(2), 1, false)?.iter().enumerate() {
        let t = tag(d);
        rec.check(&format!("from-parameters.{t}"), "xi tables of the R-matrix", || {
            over_points(&draw.points, |p| {
                let table = XiTable::from_params(&draw.params, p)?;
                let kk = draw.params.n();
                let mut c = appendix_bruteforce(&table, kk)?;
                c.extend("xi only ", xi_only_checks(&table, kk)?);
                for len in 2..=kk.min(5) {
                    c.extend(&format!("cycle {len} "), cycle_identity(&table, len)?);
                }
                c.extend("pi ", pi_relation(&draw.params, p)?);
                Ok(c)
            })
        });
    }
    Ok(())
}

fn wznw_suite<S: Scalar>(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<()> {
    let n = cfg.n;
    let mut s = Sampler::new(cfg.seed ^ 0x3a);
    for d in 0..cfg.draws {
        let t = tag(d);
        let weights: Vec<WeightVector> = (0..cfg.points.max(4))
            .map(|_| {
                let raw: Vec<Rational> = (0..n)
                    .map(|_| Rational::from_frac(s.int(-40, 40), s.int(1, 6)))
                    .collect::<Result<_>>()?;
                let mean = raw.iter().fold(Rational::zero(), |a, x| a + x.clone()) * Rational::from_frac(1, n as i64)?;
                WeightVector::centered(raw.into_iter().map(|x| x - mean.clone()).collect())
            })
            .collect::<Result<_>>()?;
        rec.check(&format!("dvec.{t}"), "conformal dimension differences", || {
            let mut c = Checks::new();
            for (m, w) in weights.iter().enumerate() {
                c.extend(&format!("w{m} "), dvec(w).1);
            }
            Ok(c)
        });
    }
    let ctx = s.q_context_with_root::<S>(n)?;
    rec.check("det-normalization", "determinant of the normalized R-matrix", || {
        Ok(det_normalization_check(&ctx)?.checks)
    });
    for (d, draw) in draws::<S>(cfg, n, 2, true)?.iter().enumerate() {
        let t = tag(d);
        let id = format!("gauge.{t}");
        match draw.params.regime() {
            Regime::Generic | Regime::BetaInfinity => rec.check(&id, "gauge comparison with D(p)", || {
                over_points(&draw.points, |p| {
                    let out = reconcile_d_with_prop54(&draw.params, p)?;
                    let mut c = prop54_check(&draw.params, p)?.checks;
                    c.extend("", out.checks);
                    Ok(c)
                })
            }),
            other => rec.skip(&id, "gauge comparison with D(p)", format!("needs pi_ij, regime is {other:?}")),
        }
    }
    Ok(())
}
