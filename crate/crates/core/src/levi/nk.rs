use super::{build_eps_const, build_eps_dyn, permutations, EpsTensor, Variance};
use crate::error::{Error, Result};
use crate::hecke::HeckeRep;
use crate::params::{SLnParams, WeightPoint};
use crate::report::{op_residual, Checks, Residual};
use crate::scalar::{QContext, Scalar};
use crate::tensor::{unflatten, TensorOp};

/// One-site matrices N and K, with `get(a, b)` = upper a, lower b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NKMatrices<S: Scalar> {
    pub n_mat: TensorOp<S>,
    pub k_mat: TensorOp<S>,
}

impl<S: Scalar> NKMatrices<S> {
    /// K·N = N·K = 𝟙 and diagonality.
    pub fn checks(&self) -> Result<Checks> {
        let id = TensorOp::identity(self.n_mat.n(), 1);
        let mut c = Checks::new();
        c.push("KN", op_residual(&self.k_mat.matmul(&self.n_mat)?, &id));
        c.push("NK", op_residual(&self.n_mat.matmul(&self.k_mat)?, &id));
        for (name, m) in [("N", &self.n_mat), ("K", &self.k_mat)] {
            let off = m.entries().find(|(r, c, _)| r != c);
            c.push(
                format!("{name} diagonal"),
                off.map(|(r, col, v)| format!("entry ({}, {}) = {v}", r + 1, col + 1)),
            );
        }
        Ok(c)
    }
}

fn prefactor<S: Scalar>(ctx: &QContext<S>) -> Result<S> {
    let n = ctx.n();
    let f = ctx
        .qfact(n - 1)
        .inv()
        .map_err(|_| Error::VanishingQInteger(n as i64 - 1))?;
    Ok(if n % 2 == 1 { f } else { f.neg() })
}

/// Tuples of n − 1 distinct indices, each paired with its missing index.
fn mids(n: usize) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..n).collect();
    permutations(&all)
        .into_iter()
        .map(|mut p| {
            p.pop();
            p
        })
        .collect()
}

fn with_last(mid: &[usize], x: usize) -> Vec<usize> {
    let mut v = mid.to_vec();
    v.push(x);
    v
}

fn with_first(x: usize, mid: &[usize]) -> Vec<usize> {
    let mut v = vec![x];
    v.extend_from_slice(mid);
    v
}

/// N^a_b = c Σ E_{(m,b)}(p_a) E^{(a,m)}(p) and K^a_b = c Σ E_{(b,m)}(p) E^{(m,a)}(p_b),
/// c = (−1)^{n−1}/[n−1]!, where `at(x)` supplies the tensors at p − v^(x).
fn contract_nk<S: Scalar>(
    ctx: &QContext<S>,
    here: &(EpsTensor<S>, EpsTensor<S>),
    at: impl Fn(usize) -> Result<(EpsTensor<S>, EpsTensor<S>)>,
) -> Result<NKMatrices<S>> {
    let n = ctx.n();
    let c = prefactor(ctx)?;
    let mids = mids(n);
    let (up, down) = here;
    let mut n_entries = Vec::new();
    let mut k_entries = Vec::new();
    for x in 0..n {
        let (up_x, down_x) = at(x)?;
        for y in 0..n {
            // N^x_y and K^y_x share the shifted tensors at p − v^(x).
            let mut nv = S::zero();
            let mut kv = S::zero();
            for m in &mids {
                nv = nv.add_ref(&down_x.get(&with_last(m, y)).mul_ref(&up.get(&with_first(x, m))));
                kv = kv.add_ref(&down.get(&with_first(x, m)).mul_ref(&up_x.get(&with_last(m, y))));
            }
            n_entries.push((x, y, nv.mul_ref(&c)));
            k_entries.push((y, x, kv.mul_ref(&c)));
        }
    }
    Ok(NKMatrices {
        n_mat: TensorOp::from_entries(n, 1, n_entries)?,
        k_mat: TensorOp::from_entries(n, 1, k_entries)?,
    })
}

/// N and K for the constant tensors.
pub fn build_nk_const<S: Scalar>(ctx: &QContext<S>) -> Result<NKMatrices<S>> {
    let pair = (
        build_eps_const(ctx, Variance::Contra),
        build_eps_const(ctx, Variance::Co),
    );
    contract_nk(ctx, &pair, |_| Ok(pair.clone()))
}

/// N(p) and K(p) by contraction of the dynamical tensors.
pub fn build_nk<S: Scalar>(params: &SLnParams<S>, p: &WeightPoint) -> Result<NKMatrices<S>> {
    let pair = |w: &WeightPoint| -> Result<_> {
        Ok((
            build_eps_dyn(params, w, Variance::Contra)?,
            build_eps_dyn(params, w, Variance::Co)?,
        ))
    };
    contract_nk(params.ctx(), &pair(p)?, |x| pair(&p.shifted(x, -1)))
}

/// N^i_i(p) = ∏_{j≠i} α_ij(p_ij − θ_ji) ξ_ij(p_ij), θ_ji = 1 when j > i.
pub fn nk_closed_form<S: Scalar>(params: &SLnParams<S>, p: &WeightPoint) -> Result<Vec<S>> {
    let n = params.n();
    (0..n)
        .map(|i| {
            (0..n).filter(|&j| j != i).try_fold(S::one(), |acc, j| {
                let pij = p.pdiff(i, j);
                let theta = i64::from(j > i);
                let a = params.alpha().eval(i, j, pij - theta)?;
                Ok(acc.mul_ref(&a).mul_ref(&params.xi(i, j, pij)?))
            })
        })
        .collect()
}

fn basis<S: Scalar>(n: usize, a: usize) -> Vec<S> {
    (0..n)
        .map(|i| if i == a { S::one() } else { S::zero() })
        .collect()
}

fn kronv<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.mul_ref(y)))
        .collect()
}

fn axpy<S: Scalar>(acc: &mut [S], c: &S, v: &[S]) {
    for (t, x) in acc.iter_mut().zip(v) {
        *t = t.add_ref(&c.mul_ref(x));
    }
}

fn vec_residual<S: Scalar>(n: usize, lhs: &[S], rhs: &[S]) -> Residual {
    let k = (lhs.len() as f64).log(n as f64).round() as usize;
    lhs.iter().zip(rhs).position(|(a, b)| a != b).map(|pos| {
        let idx: Vec<usize> = unflatten(n, k, pos).iter().map(|i| i + 1).collect();
        format!("component {idx:?}: {} vs {}", lhs[pos], rhs[pos])
    })
}

fn gens<S: Scalar>(rep: &HeckeRep<S>, up: bool) -> Result<TensorOp<S>> {
    let n = rep.k() - 1;
    let idx: Vec<usize> = if up {
        (1..=n).collect()
    } else {
        (1..=n).rev().collect()
    };
    rep.gens_product(&idx)
}

fn check_rep<S: Scalar>(rep: &HeckeRep<S>) -> Result<()> {
    if rep.k() != rep.n() + 1 {
        return Err(Error::Dimension(format!(
            "need n + 1 = {} sites, got {}",
            rep.n() + 1,
            rep.k()
        )));
    }
    Ok(())
}

/// ρ(g_1⋯g_n)ε^{|1..n⟩} = q ε^{|2..n+1⟩}N and ρ(g_n⋯g_1)ε^{|2..n+1⟩} =
/// q ε^{|1..n⟩}K for a constant representation on n + 1 sites.
pub fn relations_const<S: Scalar>(rep: &HeckeRep<S>) -> Result<Checks> {
    check_rep(rep)?;
    let ctx = rep.ctx();
    let n = rep.n();
    let up = build_eps_const(ctx, Variance::Contra).vector();
    let nk = build_nk_const(ctx)?;
    let (g_up, g_down) = (gens(rep, true)?, gens(rep, false)?);
    let mut checks = Checks::new();
    for b in 0..n {
        let lhs = g_up.apply(&kronv(&up, &basis(n, b)));
        let mut rhs = vec![S::zero(); lhs.len()];
        for a in 0..n {
            let c = ctx.q().mul_ref(&nk.n_mat.get(a, b));
            axpy(&mut rhs, &c, &kronv(&basis(n, a), &up));
        }
        checks.push(format!("shift up, lower index {}", b + 1), vec_residual(n, &lhs, &rhs));
        let lhs = g_down.apply(&kronv(&basis(n, b), &up));
        let mut rhs = vec![S::zero(); lhs.len()];
        for a in 0..n {
            let c = ctx.q().mul_ref(&nk.k_mat.get(a, b));
            axpy(&mut rhs, &c, &kronv(&up, &basis(n, a)));
        }
        checks.push(format!("shift down, lower index {}", b + 1), vec_residual(n, &lhs, &rhs));
    }
    checks.extend("", nk.checks()?);
    Ok(checks)
}

/// E_{⟨1..n|}(p)ρ(g_n⋯g_1) = q K(p) X_1E_{⟨2..n+1|}(p)X_1^{-1} and
/// X_1E_{⟨2..n+1|}(p)X_1^{-1}ρ(g_1⋯g_n) = q N(p)E_{⟨1..n|}(p), for the
/// dynamic representation at p on n + 1 sites.
pub fn relations_dyn<S: Scalar>(params: &SLnParams<S>, rep: &HeckeRep<S>) -> Result<Checks> {
    check_rep(rep)?;
    let crate::hecke::Flavor::Dynamic { base: p } = rep.flavor() else {
        return Err(Error::Invalid("expected a dynamic representation".into()));
    };
    let ctx = params.ctx();
    let n = params.n();
    let down = build_eps_dyn(params, p, Variance::Co)?.vector();
    let shifted: Vec<Vec<S>> = (0..n)
        .map(|x| Ok(build_eps_dyn(params, &p.shifted(x, -1), Variance::Co)?.vector()))
        .collect::<Result<_>>()?;
    let nk = build_nk(params, p)?;
    let (g_up, g_down) = (gens(rep, true)?, gens(rep, false)?);
    let mut checks = Checks::new();
    for a in 0..n {
        let lhs = g_down.apply_left(&kronv(&down, &basis(n, a)));
        let mut rhs = vec![S::zero(); lhs.len()];
        for b in 0..n {
            let c = ctx.q().mul_ref(&nk.k_mat.get(a, b));
            axpy(&mut rhs, &c, &kronv(&basis(n, b), &shifted[b]));
        }
        checks.push(format!("bra shift down, upper index {}", a + 1), vec_residual(n, &lhs, &rhs));
        let lhs = g_up.apply_left(&kronv(&basis(n, a), &shifted[a]));
        let mut rhs = vec![S::zero(); lhs.len()];
        for b in 0..n {
            let c = ctx.q().mul_ref(&nk.n_mat.get(a, b));
            axpy(&mut rhs, &c, &kronv(&down, &basis(n, b)));
        }
        checks.push(format!("bra shift up, upper index {}", a + 1), vec_residual(n, &lhs, &rhs));
    }
    checks.extend("", nk.checks()?);
    let closed = nk_closed_form(params, p)?;
    for (i, v) in closed.iter().enumerate() {
        let got = nk.n_mat.get(i, i);
        checks.push(
            format!("N{} closed form", i + 1),
            (got != *v).then(|| format!("contraction {got}, closed form {v}")),
        );
    }
    Ok(checks)
}
