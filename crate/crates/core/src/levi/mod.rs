//! q-deformed Levi-Civita tensors, constant and dynamical.

mod appendix;
mod nk;

pub use appendix::{appendix_bruteforce, cycle_identity, pi_relation, xi_only_checks, XiTable};
pub use nk::{build_nk, build_nk_const, nk_closed_form, relations_const, relations_dyn, NKMatrices};

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::hecke::HeckeRep;
use crate::params::{SLnParams, WeightPoint};
use crate::report::{op_residual, Checks};
use crate::scalar::{QContext, Scalar};
use crate::tensor::{dim, flatten, unflatten, TensorOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    /// Upper indices: a ket.
    Contra,
    /// Lower indices: a bra.
    Co,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpsKind {
    Constant,
    Dynamic { base: WeightPoint },
}

/// Components on tuples of n pairwise distinct 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsTensor<S: Scalar> {
    n: usize,
    variance: Variance,
    kind: EpsKind,
    entries: BTreeMap<Vec<usize>, S>,
}

/// All orderings of `items`, lexicographic in positions.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Number of inversions of a sequence.
pub fn inversions(seq: &[usize]) -> usize {
    (0..seq.len())
        .flat_map(|a| (a + 1..seq.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| seq[a] > seq[b])
        .count()
}

fn sign<S: Scalar>(len: usize) -> S {
    if len.is_multiple_of(2) {
        S::one()
    } else {
        S::one().neg()
    }
}

/// ε^{σ} = q̄^{n(n−1)/2}(−q)^{ℓ(σ)} and ε_{σ} = (−q)^{ℓ(σ)}.
pub fn build_eps_const<S: Scalar>(ctx: &QContext<S>, variance: Variance) -> EpsTensor<S> {
    let n = ctx.n();
    let minus_q = ctx.q().clone().neg();
    let prefactor = match variance {
        Variance::Contra => ctx.qpow(-((n * (n - 1) / 2) as i64)),
        Variance::Co => S::one(),
    };
    let entries = permutations(&(0..n).collect::<Vec<_>>())
        .into_iter()
        .map(|sigma| {
            let l = inversions(&sigma) as i64;
            let v = prefactor.mul_ref(&minus_q.pow(l).expect("q nonzero"));
            (sigma, v)
        })
        .collect();
    EpsTensor {
        n,
        variance,
        kind: EpsKind::Constant,
        entries,
    }
}

/// E^{σ}(p) = (−1)^ℓ ∏_{J(σ)} α_{ji}(p_{ji}) ∏_{a<b} ξ_{i_a i_b}(p_{i_a i_b})
/// and E_{σ}(p) = (−1)^ℓ ∏_{J(σ)} α_{ij}(p_{ij}), where J(σ) collects the
/// inverted pairs (j, i) = (i_a, i_b), a < b, i_a > i_b.
pub fn build_eps_dyn<S: Scalar>(
    params: &SLnParams<S>,
    p: &WeightPoint,
    variance: Variance,
) -> Result<EpsTensor<S>> {
    let n = params.n();
    if p.n() != n {
        return Err(Error::Dimension(format!("weight point of rank {}", p.n())));
    }
    let alpha = params.alpha();
    let mut entries = BTreeMap::new();
    for sigma in permutations(&(0..n).collect::<Vec<_>>()) {
        let mut v: S = sign(inversions(&sigma));
        for a in 0..n {
            for b in a + 1..n {
                let (ia, ib) = (sigma[a], sigma[b]);
                if ia > ib {
                    let (row, col) = match variance {
                        Variance::Contra => (ia, ib),
                        Variance::Co => (ib, ia),
                    };
                    v = v.mul_ref(&alpha.eval(row, col, p.pdiff(row, col))?);
                }
                if variance == Variance::Contra {
                    v = v.mul_ref(&params.xi(ia, ib, p.pdiff(ia, ib))?);
                }
            }
        }
        entries.insert(sigma, v);
    }
    Ok(EpsTensor {
        n,
        variance,
        kind: EpsKind::Dynamic { base: p.clone() },
        entries,
    })
}

impl<S: Scalar> EpsTensor<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn kind(&self) -> &EpsKind {
        &self.kind
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, S> {
        &self.entries
    }

    /// Component at a 0-based index tuple; zero off distinct tuples.
    pub fn get(&self, idx: &[usize]) -> S {
        self.entries.get(idx).cloned().unwrap_or_else(S::zero)
    }

    /// Copy with one component replaced.
    pub fn with_component(&self, idx: &[usize], value: S) -> Self {
        let mut out = self.clone();
        out.entries.insert(idx.to_vec(), value);
        out
    }

    /// Dense vector on V^⊗n.
    pub fn vector(&self) -> Vec<S> {
        let mut v = vec![S::zero(); dim(self.n, self.n)];
        for (idx, x) in &self.entries {
            v[flatten(self.n, idx)] = x.clone();
        }
        v
    }

    /// Σ_σ E_σ E^σ for a covariant and a contravariant tensor.
    pub fn contract(co: &Self, contra: &Self) -> Result<S> {
        if co.variance != Variance::Co || contra.variance != Variance::Contra || co.n != contra.n {
            return Err(Error::Invalid("contraction needs a bra and a ket of equal rank".into()));
        }
        Ok(co
            .entries
            .iter()
            .fold(S::zero(), |acc, (idx, x)| acc.add_ref(&x.mul_ref(&contra.get(idx)))))
    }

    /// JSON map from 1-based index strings to `num/den`.
    pub fn to_json(&self) -> String {
        let map: Map<String, Value> = self
            .entries
            .iter()
            .map(|(idx, v)| {
                let key: String = idx.iter().map(|i| (i + 1).to_string()).collect();
                (key, Value::String(v.to_ratio_string()))
            })
            .collect();
        serde_json::to_string_pretty(&Value::Object(map)).expect("json map")
    }
}

/// ρ(g_i)E = −q̄E (ket) or Eρ(g_i) = −q̄E (bra) for every generator, plus
/// the dimension of the joint (−q̄)-eigenspace.
pub fn eigencheck<S: Scalar>(eps: &EpsTensor<S>, rep: &HeckeRep<S>) -> Result<Checks> {
    if rep.k() != eps.n || rep.n() != eps.n {
        return Err(Error::Dimension(format!(
            "representation on {} sites of dimension {} for a rank {} tensor",
            rep.k(),
            rep.n(),
            eps.n
        )));
    }
    let v = eps.vector();
    let minus_qbar = rep.ctx().qbar().clone().neg();
    let expect: Vec<S> = v.iter().map(|x| x.mul_ref(&minus_qbar)).collect();
    let shifted_ops = (1..rep.k())
        .map(|i| {
            let g = rep.gen(i)?;
            let shifted = g.add(&TensorOp::scalar(rep.n(), rep.k(), rep.ctx().qbar().clone()))?;
            Ok(match eps.variance {
                Variance::Contra => shifted,
                Variance::Co => shifted.transpose(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Checks::new();
    for i in 1..rep.k() {
        let g = rep.gen(i)?;
        let got = match eps.variance {
            Variance::Contra => g.apply(&v),
            Variance::Co => g.apply_left(&v),
        };
        let residual = got
            .iter()
            .zip(&expect)
            .position(|(a, b)| a != b)
            .map(|pos| {
                format!(
                    "component {:?}: {} vs {}",
                    unflatten(eps.n, eps.n, pos).iter().map(|i| i + 1).collect::<Vec<_>>(),
                    got[pos],
                    expect[pos]
                )
            });
        checks.push(format!("eigen g{i}"), residual);
    }
    let kernel = TensorOp::joint_kernel_dim(&shifted_ops)?;
    checks.push(
        "joint eigenspace dimension",
        (kernel != 1).then(|| format!("dimension {kernel}")),
    );
    Ok(checks)
}

/// Where a projector takes its tensors from.
#[derive(Debug)]
pub enum EpsSource<'a, S: Scalar> {
    Constant(&'a QContext<S>),
    Dynamic(&'a SLnParams<S>, &'a WeightPoint),
}

impl<S: Scalar> Clone for EpsSource<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S: Scalar> Copy for EpsSource<'_, S> {}

impl<S: Scalar> EpsSource<'_, S> {
    fn ctx(&self) -> &QContext<S> {
        match self {
            EpsSource::Constant(ctx) => ctx,
            EpsSource::Dynamic(params, _) => params.ctx(),
        }
    }

    /// (ket, bra) for spectator indices `prefix` on the sites before the window.
    fn pair(&self, prefix: &[usize]) -> Result<(EpsTensor<S>, EpsTensor<S>)> {
        Ok(match self {
            EpsSource::Constant(ctx) => (
                build_eps_const(ctx, Variance::Contra),
                build_eps_const(ctx, Variance::Co),
            ),
            EpsSource::Dynamic(params, base) => {
                let p = base.minus_weights(prefix);
                (
                    build_eps_dyn(params, &p, Variance::Contra)?,
                    build_eps_dyn(params, &p, Variance::Co)?,
                )
            }
        })
    }
}

/// (1/[n]!) E^{|i..n+i−1⟩}E_{⟨i..n+i−1|} on V^⊗k, with the block for
/// indices I on sites 1..i−1 evaluated at p − Σ_a v^(I_a) for dynamic
/// tensors. `i` is 1-based.
pub fn projector_from_eps<S: Scalar>(source: EpsSource<'_, S>, i: usize, k: usize) -> Result<TensorOp<S>> {
    let ctx = source.ctx();
    let n = ctx.n();
    if i == 0 || n + i - 1 > k {
        return Err(Error::IndexOutOfRange(format!(
            "window {i} of width {n} on {k} sites"
        )));
    }
    let norm = ctx
        .qfact(n)
        .inv()
        .map_err(|_| Error::VanishingQInteger(n as i64))?;
    let pos = i - 1;
    let tail = k - pos - n;
    let mut entries = Vec::new();
    for pre in 0..dim(n, pos) {
        let (up, down) = source.pair(&unflatten(n, pos, pre))?;
        for (ri, rv) in up.entries() {
            for (ci, cv) in down.entries() {
                let v = rv.mul_ref(cv).mul_ref(&norm);
                for suf in 0..dim(n, tail) {
                    let at = |x: &[usize]| (pre * dim(n, n) + flatten(n, x)) * dim(n, tail) + suf;
                    entries.push((at(ri), at(ci), v.clone()));
                }
            }
        }
    }
    TensorOp::from_entries(n, k, entries)
}

/// Projector images against the antisymmetrizer windows A^(i, n+i−1).
pub fn projector_checks<S: Scalar>(source: EpsSource<'_, S>, rep: &HeckeRep<S>) -> Result<Checks> {
    let n = rep.n();
    let mut towers = crate::hecke::Towers::new(rep);
    let mut checks = Checks::new();
    for i in 1..=rep.k() + 1 - n {
        let proj = projector_from_eps(source, i, rep.k())?;
        checks.push(
            format!("window {i}"),
            op_residual(&proj, &towers.window(i, n + i - 1)?),
        );
    }
    Ok(checks)
}

#[cfg(test)]
mod tests;
