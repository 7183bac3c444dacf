//! Casimir and conformal-dimension formulas, the unimodular normalization
//! of the Drinfeld–Jimbo braid operator, and the comparison of the
//! conformal-dimension gauge with the diagonal twist D.

use crate::error::{Error, Result};
use crate::hecke::{antisym_tower, symmetrizer_tower, HeckeRep};
use crate::params::{Regime, SLnParams, WeightPoint};
use crate::report::{op_residual, scalar_residual, Checks};
use crate::rmatrix::{build_dj, prop54_check};
use crate::scalar::{QContext, Rational, Scalar};
use crate::tensor::TensorOp;

/// Weights p_1..p_n centered so that Σp_i = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    p: Vec<Rational>,
}

fn rat(num: i64, den: i64) -> Rational {
    Rational::from_frac(num, den).expect("nonzero denominator")
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl WeightVector {
    pub fn from_point(w: &WeightPoint) -> Self {
        let n = w.n() as i64;
        let sum: i64 = w.rel().iter().sum();
        WeightVector {
            p: w.rel().iter().map(|&r| rat(n * r - sum, n)).collect(),
        }
    }

    /// Centers arbitrary rationals.
    pub fn centered(p: Vec<Rational>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Invalid("empty weight".into()));
        }
        let n = Rational::from_i64(p.len() as i64);
        let mean = p.iter().fold(Rational::zero(), |a, x| a.add_ref(x)).div_ref(&n)?;
        Ok(WeightVector {
            p: p.iter().map(|x| x.sub_ref(&mean)).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[Rational] {
        &self.p
    }

    pub fn pdiff(&self, i: usize, j: usize) -> Rational {
        self.p[i].sub_ref(&self.p[j])
    }

    /// p + v^(j): p_j gains 1 − 1/n, every other component loses 1/n.
    pub fn plus_weight(&self, j: usize) -> Self {
        let n = self.n() as i64;
        let p = self
            .p
            .iter()
            .enumerate()
            .map(|(i, x)| x.add_ref(&rat(if i == j { n - 1 } else { -1 }, n)))
            .collect();
        WeightVector { p }
    }
}

/// C₂(p) = (1/n)Σ_{i<k} p_ik² − n(n²−1)/12
pub fn casimir(w: &WeightVector) -> Rational {
    let n = w.n();
    let mut sum = Rational::zero();
    for i in 0..n {
        for k in i + 1..n {
            let d = w.pdiff(i, k);
            sum = sum.add_ref(&d.mul_ref(&d));
        }
    }
    let n = n as i64;
    sum.mul_ref(&rat(1, n)).sub_ref(&rat(n * (n * n - 1), 12))
}

/// d_j as the Casimir difference C₂(p) − C₂(p + v^(j)).
pub fn dvec_from_casimir(w: &WeightVector) -> Vec<Rational> {
    let c = casimir(w);
    (0..w.n()).map(|j| c.sub_ref(&casimir(&w.plus_weight(j)))).collect()
}

/// d_j = 1/n − 1 − 2p_j
pub fn dvec_closed(w: &WeightVector) -> Vec<Rational> {
    let n = w.n() as i64;
    let base = rat(1 - n, n);
    w.p.iter().map(|x| base.sub_ref(&x.add_ref(x))).collect()
}

/// Both routes, with a check that they agree entrywise.
pub fn dvec(w: &WeightVector) -> (Vec<Rational>, Checks) {
    let a = dvec_from_casimir(w);
    let b = dvec_closed(w);
    let mut checks = Checks::new();
    for (j, (x, y)) in a.iter().zip(&b).enumerate() {
        checks.push(format!("d{}", j + 1), scalar_residual("d", x, y));
    }
    (b, checks)
}

/// Sign of the flip permutation on V⊗V: n fixed points and C(n,2)
/// transpositions.
pub fn flip_sign(n: usize) -> i64 {
    let mut seen = vec![false; n * n];
    let mut transpositions = 0;
    for start in 0..n * n {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = (x % n) * n + x / n;
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetNormalization<S: Scalar> {
    /// Multiplicity of q·r^{-1}.
    pub plus: usize,
    /// Multiplicity of −q̄·r^{-1}.
    pub minus: usize,
    pub det: S,
    pub checks: Checks,
}

/// Eigenvalue multiplicities of r^{-1}R̂ from the ranks of the two Hecke
/// projectors on V⊗V, and the resulting determinant.
pub fn det_normalization_check<S: Scalar>(ctx: &QContext<S>) -> Result<DetNormalization<S>> {
    let n = ctx.n();
    let root = ctx.require_root()?;
    let rhat = build_dj(ctx).op;
    let rep = HeckeRep::constant(ctx, &rhat, 2)?;
    let anti = antisym_tower(&rep, 2)?.pop().expect("two levels").op;
    let sym = symmetrizer_tower(&rep, 2)?.pop().expect("two levels").op;
    let (plus, minus) = (sym.rank(), anti.rank());
    let up = ctx.q().div_ref(root)?;
    let down = ctx.qbar().clone().neg().div_ref(root)?;
    let scaled = rhat.scale(&root.inv()?);

    let mut checks = Checks::new();
    checks.push("eigen q", op_residual(&scaled.matmul(&sym)?, &sym.scale(&up)));
    checks.push("eigen -qbar", op_residual(&scaled.matmul(&anti)?, &anti.scale(&down)));
    checks.push(
        "projectors complete",
        op_residual(&sym.add(&anti)?, &TensorOp::identity(n, 2)),
    );
    let count = |what: &str, got: usize, want: usize| {
        (got != want).then(|| format!("{what}: rank {got}, expected {want}"))
    };
    checks.push("multiplicity q", count("symmetrizer", plus, binomial(n + 1, 2)));
    checks.push("multiplicity -qbar", count("antisymmetrizer", minus, binomial(n, 2)));
    let det = up.pow(plus as i64)?.mul_ref(&down.pow(minus as i64)?);
    let sign = if binomial(n, 2).is_multiple_of(2) { S::one() } else { S::one().neg() };
    checks.push("det", scalar_residual("det", &det, &sign));
    Ok(DetNormalization {
        plus,
        minus,
        det,
        checks,
    })
}

/// One pair (i, j) of the gauge comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugePair<S: Scalar> {
    pub i: usize,
    pub j: usize,
    /// q^{d_i − d_j}
    pub from_dimensions: S,
    /// D_i/D_j
    pub from_twist: S,
    /// from_twist / from_dimensions
    pub mismatch: S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconciliation<S: Scalar> {
    pub d: Vec<Rational>,
    pub pairs: Vec<GaugePair<S>>,
    /// Every mismatch factor equals 1.
    pub exact: bool,
    /// mismatch_ij = π_ij for every pair.
    pub checks: Checks,
}

fn q_power_of<S: Scalar>(ctx: &QContext<S>, e: &Rational) -> Result<S> {
    let n = ctx.n() as i64;
    let scaled = e.mul_ref(&Rational::from_i64(n));
    if !scaled.is_integer() {
        return Err(Error::Invalid(format!("{e} is not a multiple of 1/{n}")));
    }
    let k: i64 = scaled
        .numer()
        .try_into()
        .map_err(|_| Error::Invalid("exponent out of range".into()))?;
    ctx.require_root()?.pow(k)
}

/// Compares q^{d_i − d_j} with D_i/D_j. The ratio is reported for every
/// pair and checked against π_ij; it is 1 exactly when π ≡ 1.
pub fn reconcile_d_with_prop54<S: Scalar>(params: &SLnParams<S>, w: &WeightPoint) -> Result<Reconciliation<S>> {
    match params.regime() {
        Regime::Generic | Regime::BetaInfinity => {}
        other => {
            return Err(Error::RegimeMismatch(format!(
                "the gauge comparison needs generic or infinite beta, got {other:?}"
            )))
        }
    }
    let ctx = params.ctx();
    let n = params.n();
    let d = dvec_closed(&WeightVector::from_point(w));
    let twist = prop54_check(params, w)?;
    let mut pairs = Vec::new();
    let mut checks = Checks::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let from_dimensions = q_power_of(ctx, &d[i].sub_ref(&d[j]))?;
            let from_twist = twist.d[i].div_ref(&twist.d[j])?;
            let mismatch = from_twist.div_ref(&from_dimensions)?;
            checks.push(
                format!("mismatch {}{}", i + 1, j + 1),
                scalar_residual("mismatch vs pi", &mismatch, &params.pi(i, j)?),
            );
            pairs.push(GaugePair {
                i,
                j,
                from_dimensions,
                from_twist,
                mismatch,
            });
        }
    }
    let exact = pairs.iter().all(|p| p.mismatch.is_one());
    Ok(Reconciliation { d, pairs, exact, checks })
}
