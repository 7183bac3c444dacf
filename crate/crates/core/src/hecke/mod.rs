//! Hecke algebra words and their images on V^⊗k.

mod antisym;
mod word;

pub use antisym::{
    alternating_expansion, antisym_tower, height, inner_automorphism, lemma11_battery, local_rank,
    rank_formula, symmetrizer_tower, Antisym, Height, Towers,
};
pub use word::{HeckeWord, Letter};

use crate::error::{Error, Result};
use crate::params::{SLnParams, WeightPoint};
use crate::report::{op_residual, Checks};
use crate::rmatrix::DynRMatrix;
use crate::scalar::{QContext, Scalar};
use crate::tensor::{dim, flatten, unflatten, DynOp, ShiftMode, TensorOp};

/// Which construction produced the generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flavor {
    /// 𝟙 ⊗ R̂ ⊗ 𝟙 for a constant R̂.
    Constant,
    /// X-dressed R̂(p) blocks, localized at g_1.
    Dynamic { base: WeightPoint },
    /// Conjugate of the dynamic images by X_1⋯X_k, localized at g_{k−1}.
    LocalizedLast { base: WeightPoint },
}

/// Images ρ(g_1)..ρ(g_{k−1}) on V^⊗k.
#[derive(Debug, Clone)]
pub struct HeckeRep<S: Scalar> {
    ctx: QContext<S>,
    n: usize,
    k: usize,
    flavor: Flavor,
    images: Vec<TensorOp<S>>,
}

impl<S: Scalar> HeckeRep<S> {
    /// ρ(g_i) = 𝟙 ⊗ R̂_{i,i+1} ⊗ 𝟙.
    pub fn constant(ctx: &QContext<S>, r: &TensorOp<S>, k: usize) -> Result<Self> {
        if r.k() != 2 {
            return Err(Error::Dimension(format!(
                "braid operator acts on {} sites",
                r.k()
            )));
        }
        check_k(k)?;
        let images = (0..k - 1).map(|i| r.embed(i, k)).collect::<Result<_>>()?;
        Ok(HeckeRep {
            ctx: ctx.clone(),
            n: r.n(),
            k,
            flavor: Flavor::Constant,
            images,
        })
    }

    /// ρ(g_i) = (X_1⋯X_{i−1}) R̂_{i,i+1}(p) (X_1⋯X_{i−1})^{-1} at a fixed p.
    pub fn dynamic(params: &SLnParams<S>, base: &WeightPoint, k: usize) -> Result<Self> {
        check_k(k)?;
        let r = DynRMatrix::new(params.clone());
        let images = (0..k - 1)
            .map(|i| dressed_block(&r, i, k, |prefix, _| base.minus_weights(prefix)))
            .collect::<Result<_>>()?;
        Ok(HeckeRep {
            ctx: params.ctx().clone(),
            n: params.n(),
            k,
            flavor: Flavor::Dynamic { base: base.clone() },
            images,
        })
    }

    /// ρ̄(g_i) = (X_{i+2}⋯X_k)^{-1} R̂_{i,i+1}(p) (X_{i+2}⋯X_k).
    pub fn localized_last(params: &SLnParams<S>, base: &WeightPoint, k: usize) -> Result<Self> {
        check_k(k)?;
        let r = DynRMatrix::new(params.clone());
        let images = (0..k - 1)
            .map(|i| {
                dressed_block(&r, i, k, |_, suffix| {
                    suffix
                        .iter()
                        .fold(base.clone(), |acc, &s| acc.shifted(s, 1))
                })
            })
            .collect::<Result<_>>()?;
        Ok(HeckeRep {
            ctx: params.ctx().clone(),
            n: params.n(),
            k,
            flavor: Flavor::LocalizedLast { base: base.clone() },
            images,
        })
    }

    /// The same images over a different q, e.g. −q̄ for symmetrizers.
    pub(crate) fn with_ctx(&self, ctx: QContext<S>) -> Self {
        HeckeRep {
            ctx,
            ..self.clone()
        }
    }

    pub fn ctx(&self) -> &QContext<S> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn flavor(&self) -> &Flavor {
        &self.flavor
    }

    /// ρ(g_i), 1-based.
    pub fn gen(&self, i: usize) -> Result<&TensorOp<S>> {
        if i == 0 || i >= self.k {
            return Err(Error::IndexOutOfRange(format!("g_{i} in H_{}", self.k)));
        }
        Ok(&self.images[i - 1])
    }

    /// ρ(g_i)^{-1} = ρ(g_i) − λ.
    pub fn gen_inv(&self, i: usize) -> Result<TensorOp<S>> {
        let g = self.gen(i)?;
        g.sub(&TensorOp::scalar(self.n, self.k, self.ctx.lambda().clone()))
    }

    pub fn identity(&self) -> TensorOp<S> {
        TensorOp::identity(self.n, self.k)
    }

    /// ρ(g_{i_1} g_{i_2} ⋯).
    pub fn gens_product(&self, indices: &[usize]) -> Result<TensorOp<S>> {
        indices
            .iter()
            .try_fold(self.identity(), |acc, &i| acc.matmul(self.gen(i)?))
    }

    pub fn apply(&self, w: &HeckeWord<S>) -> Result<TensorOp<S>> {
        rep_apply(self, w)
    }

    /// Braid, Hecke and far-commutativity relations for all generators.
    pub fn relation_checks(&self) -> Result<Checks> {
        let mut checks = Checks::new();
        let lambda = self.ctx.lambda();
        for i in 1..self.k {
            let g = self.gen(i)?;
            let rhs = self.identity().add(&g.scale(lambda))?;
            checks.push(format!("hecke g{i}"), op_residual(&g.matmul(g)?, &rhs));
        }
        for i in 1..self.k.saturating_sub(1) {
            let lhs = self.gens_product(&[i, i + 1, i])?;
            let rhs = self.gens_product(&[i + 1, i, i + 1])?;
            checks.push(format!("braid g{i} g{}", i + 1), op_residual(&lhs, &rhs));
        }
        for i in 1..self.k {
            for j in i + 2..self.k {
                let lhs = self.gens_product(&[i, j])?;
                let rhs = self.gens_product(&[j, i])?;
                checks.push(format!("locality g{i} g{j}"), op_residual(&lhs, &rhs));
            }
        }
        Ok(checks)
    }

    /// Whether ρ(g_i) equals 𝟙 ⊗ M ⊗ 𝟙 with M read off the all-zero
    /// outer indices.
    pub fn is_localized(&self, i: usize) -> Result<bool> {
        let g = self.gen(i)?;
        let n = self.n;
        let (pos, k) = (i - 1, self.k);
        let pair = |a: usize| {
            let mut multi = vec![0; k];
            let ab = unflatten(n, 2, a);
            multi[pos] = ab[0];
            multi[pos + 1] = ab[1];
            flatten(n, &multi)
        };
        let block = TensorOp::from_row_fn(n, 2, |r| {
            let row = pair(r);
            Ok((0..n * n)
                .map(|c| (c, g.get(row, pair(c))))
                .filter(|(_, v)| !v.is_zero())
                .collect())
        })?;
        Ok(block.embed(pos, k)? == *g)
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Invalid(format!("need at least two sites, got {k}")));
    }
    Ok(())
}

/// Block operator on sites pos, pos+1 whose block for outer indices
/// (prefix, suffix) is R̂ evaluated at `point(prefix, suffix)`.
fn dressed_block<S: Scalar>(
    r: &DynRMatrix<S>,
    pos: usize,
    k: usize,
    point: impl Fn(&[usize], &[usize]) -> WeightPoint,
) -> Result<TensorOp<S>> {
    let n = r.n();
    let tail = k - pos - 2;
    let mut entries = Vec::new();
    for pre in 0..dim(n, pos) {
        let prefix = unflatten(n, pos, pre);
        for suf in 0..dim(n, tail) {
            let suffix = unflatten(n, tail, suf);
            let block = r.at(&point(&prefix, &suffix))?;
            for (row, col, v) in block.entries() {
                let at = |x: usize| (pre * n * n + x) * dim(n, tail) + suf;
                entries.push((at(row), at(col), v.clone()));
            }
        }
    }
    TensorOp::from_entries(n, k, entries)
}

/// Linear, multiplicative image of a word.
pub fn rep_apply<S: Scalar>(rep: &HeckeRep<S>, w: &HeckeWord<S>) -> Result<TensorOp<S>> {
    let mut out = TensorOp::zero(rep.n, rep.k);
    for (c, letters) in w.terms() {
        let mut acc = rep.identity();
        for l in letters {
            let img = if l.inverse {
                rep.gen_inv(l.index)?
            } else {
                rep.gen(l.index)?.clone()
            };
            acc = acc.matmul(&img)?;
        }
        out = out.add(&acc.scale(c))?;
    }
    Ok(out)
}

/// ρ(g_i) as a shift-operator expression (X_1⋯X_{i−1}) R̂_{i,i+1} (X_1⋯X_{i−1})^{-1}.
pub fn dynamic_generator<S: Scalar>(params: &SLnParams<S>, i: usize, k: usize) -> Result<DynOp<S>> {
    let n = params.n();
    let mode = ShiftMode::Unimodular;
    let sites: Vec<usize> = (0..i - 1).collect();
    let x = DynOp::x_sites(n, k, &sites, 1, mode)?;
    let x_inv = DynOp::x_sites(n, k, &sites, -1, mode)?;
    let r = DynRMatrix::new(params.clone()).site_op(i - 1, k, mode);
    DynOp::product(&[x, r, x_inv])
}

/// Checks ρ̄(g_i) = (X_1⋯X_k)^{-1} ρ(g_i) (X_1⋯X_k) at the base point of a
/// localized-last representation, with ρ taken as a shift-operator expression.
pub fn localized_equivalence<S: Scalar>(
    params: &SLnParams<S>,
    bar: &HeckeRep<S>,
) -> Result<Checks> {
    let Flavor::LocalizedLast { base } = bar.flavor() else {
        return Err(Error::Invalid(
            "expected a localized-last representation".into(),
        ));
    };
    let (n, k) = (bar.n(), bar.k());
    let mode = ShiftMode::Unimodular;
    let all: Vec<usize> = (0..k).collect();
    let x = DynOp::x_sites(n, k, &all, 1, mode)?;
    let x_inv = DynOp::x_sites(n, k, &all, -1, mode)?;
    let mut checks = Checks::new();
    for i in 1..k {
        let conj = DynOp::product(&[x_inv.clone(), dynamic_generator(params, i, k)?, x.clone()])?;
        let lhs = conj.eval_plain(base)?;
        checks.push(format!("conjugated g{i}"), op_residual(&lhs, bar.gen(i)?));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests;
