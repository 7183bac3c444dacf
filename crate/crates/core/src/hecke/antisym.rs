use std::collections::HashMap;

use super::HeckeRep;
use crate::error::{Error, Result};
use crate::report::{op_residual, Checks, Residual};
use crate::scalar::{QContext, Scalar};
use crate::tensor::TensorOp;

/// Image of the central idempotent of the subalgebra generated by
/// g_i..g_{j−1}; `window = (i, j)`, so A^(j) has window (1, j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Antisym<S: Scalar> {
    pub window: (usize, usize),
    pub op: TensorOp<S>,
}

/// Memoized antisymmetrizer images for one representation.
#[derive(Debug)]
pub struct Towers<'a, S: Scalar> {
    rep: &'a HeckeRep<S>,
    cache: HashMap<(usize, usize), TensorOp<S>>,
}

impl<'a, S: Scalar> Towers<'a, S> {
    pub fn new(rep: &'a HeckeRep<S>) -> Self {
        Towers {
            rep,
            cache: HashMap::new(),
        }
    }

    pub fn rep(&self) -> &HeckeRep<S> {
        self.rep
    }

    fn check_window(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || i > j || j > self.rep.k() {
            return Err(Error::IndexOutOfRange(format!(
                "window ({i}, {j}) in H_{}",
                self.rep.k()
            )));
        }
        Ok(())
    }

    fn step_factor(&self, m: usize) -> Result<(S, S, S)> {
        let ctx = self.rep.ctx();
        let qm = ctx.qnum(m as i64);
        let inv = qm.inv().map_err(|_| Error::VanishingQInteger(m as i64))?;
        Ok((inv, ctx.qpow(m as i64 - 1), ctx.qnum(m as i64 - 1)))
    }

    /// (1/[m]) B (q^{m−1} − [m−1] g) B.
    fn sandwich(&self, b: &TensorOp<S>, gen: usize, m: usize) -> Result<TensorOp<S>> {
        let (inv, qp, qn) = self.step_factor(m)?;
        let g = self.rep.gen(gen)?;
        let mid = TensorOp::scalar(b.n(), b.k(), qp).sub(&g.scale(&qn))?;
        Ok(b.matmul(&mid)?.matmul(b)?.scale(&inv))
    }

    /// A^(i,j) by the recursion that appends g_{j−1}.
    pub fn window(&mut self, i: usize, j: usize) -> Result<TensorOp<S>> {
        self.check_window(i, j)?;
        if let Some(op) = self.cache.get(&(i, j)) {
            return Ok(op.clone());
        }
        let op = if i == j {
            self.rep.identity()
        } else {
            let prev = self.window(i, j - 1)?;
            self.sandwich(&prev, j - 1, j - i + 1)?
        };
        self.cache.insert((i, j), op.clone());
        Ok(op)
    }

    /// A^(j).
    pub fn full(&mut self, j: usize) -> Result<TensorOp<S>> {
        self.window(1, j)
    }

    /// A^(i,j) by the recursion that prepends g_i.
    pub fn window_from_left(&mut self, i: usize, j: usize) -> Result<TensorOp<S>> {
        self.check_window(i, j)?;
        if i == j {
            return Ok(self.rep.identity());
        }
        let inner = self.window(i + 1, j)?;
        self.sandwich(&inner, i, j - i + 1)
    }

    /// Idempotency, the two recursions agreeing, absorption of g_i + q̄
    /// and of inner windows, for A^(j).
    pub fn property_checks(&mut self, j: usize) -> Result<Checks> {
        let mut checks = Checks::new();
        let a = self.full(j)?;
        checks.push(format!("A{j} idempotent"), op_residual(&a.matmul(&a)?, &a));
        checks.push(
            format!("A{j} left recursion"),
            op_residual(&self.window_from_left(1, j)?, &a),
        );
        let qbar = TensorOp::scalar(a.n(), a.k(), self.rep.ctx().qbar().clone());
        let zero = TensorOp::zero(a.n(), a.k());
        for i in 1..j {
            let shifted = self.rep.gen(i)?.add(&qbar)?;
            checks.push(
                format!("(g{i}+qbar)A{j}"),
                op_residual(&shifted.matmul(&a)?, &zero),
            );
            checks.push(
                format!("A{j}(g{i}+qbar)"),
                op_residual(&a.matmul(&shifted)?, &zero),
            );
        }
        for i in 1..=j {
            for l in i..=j {
                let w = self.window(i, l)?;
                checks.push(format!("A{j}A({i},{l})"), op_residual(&a.matmul(&w)?, &a));
                checks.push(format!("A({i},{l})A{j}"), op_residual(&w.matmul(&a)?, &a));
            }
        }
        Ok(checks)
    }
}

/// A^(1)..A^(upto).
pub fn antisym_tower<S: Scalar>(rep: &HeckeRep<S>, upto: usize) -> Result<Vec<Antisym<S>>> {
    let mut towers = Towers::new(rep);
    (1..=upto)
        .map(|j| {
            Ok(Antisym {
                window: (1, j),
                op: towers.full(j)?,
            })
        })
        .collect()
}

/// The same recursion with q replaced by −q̄.
pub fn symmetrizer_tower<S: Scalar>(rep: &HeckeRep<S>, upto: usize) -> Result<Vec<Antisym<S>>> {
    let flipped = rep.ctx().qbar().clone().neg();
    let swapped = rep.with_ctx(QContext::new(flipped, 1)?);
    antisym_tower(&swapped, upto)
}

/// Outcome of the height search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Height {
    pub height: Option<usize>,
    /// Vanishing and rank-one conditions on every shifted window.
    pub windows: Checks,
}

/// Rank of a window operator per value of the spectator sites: the matrix
/// rank divided by dim(V)^(k − width).
pub fn local_rank<S: Scalar>(op: &TensorOp<S>, width: usize) -> Option<usize> {
    let spectators = op.n().pow((op.k() - width) as u32);
    let r = op.rank();
    r.is_multiple_of(spectators).then_some(r / spectators)
}

/// Smallest n with ρ(A^(n+1)) = 0 and ρ(A^(n)) of local rank 1 (n < k), or
/// local rank 1 for ρ(A^(k)) at n = k.
pub fn height<S: Scalar>(rep: &HeckeRep<S>) -> Result<Height> {
    let k = rep.k();
    let mut towers = Towers::new(rep);
    let mut found = None;
    for m in 1..=k {
        let rank_one = local_rank(&towers.full(m)?, m) == Some(1);
        let next_zero = m == k || towers.full(m + 1)?.is_zero();
        if rank_one && next_zero {
            found = Some(m);
            break;
        }
    }
    let mut windows = Checks::new();
    if let Some(n) = found {
        for i in 1..=k - n {
            let w = towers.window(i, n + i)?;
            windows.push(
                format!("A({i},{}) = 0", n + i),
                (!w.is_zero()).then(|| "nonzero".into()),
            );
        }
        for j in 1..=k - n + 1 {
            let r = local_rank(&towers.window(j, n + j - 1)?, n);
            windows.push(
                format!("local rank A({j},{}) = 1", n + j - 1),
                (r != Some(1)).then(|| format!("local rank {r:?}")),
            );
        }
    }
    Ok(Height {
        height: found,
        windows,
    })
}

/// The six equivalent forms of A^(n+1) = 0 on k = n + 1 sites.
pub fn lemma11_battery<S: Scalar>(rep: &HeckeRep<S>) -> Result<Checks> {
    let n = rep.k() - 1;
    let ctx = rep.ctx();
    let mut towers = Towers::new(rep);
    let a = towers.full(n)?;
    let b = towers.window(2, n + 1)?;
    let sign = if n % 2 == 1 { S::one() } else { S::one().neg() };
    let c = sign.mul_ref(ctx.q()).mul_ref(&ctx.qnum(n as i64));
    let qn = ctx.qnum(n as i64);
    let inv_sq = qn
        .mul_ref(&qn)
        .inv()
        .map_err(|_| Error::VanishingQInteger(n as i64))?;
    let down: Vec<usize> = (1..=n).rev().collect();
    let up: Vec<usize> = (1..=n).collect();
    let g_down = rep.gens_product(&down)?;
    let g_up = rep.gens_product(&up)?;
    let ab = a.matmul(&b)?;
    let ba = b.matmul(&a)?;
    let mut checks = Checks::new();
    checks.push("a", op_residual(&a.matmul(&g_down)?, &ab.scale(&c)));
    checks.push("b", op_residual(&g_up.matmul(&a)?, &ba.scale(&c)));
    checks.push("c", op_residual(&g_down.matmul(&b)?, &ab.scale(&c)));
    checks.push("d", op_residual(&b.matmul(&g_up)?, &ba.scale(&c)));
    checks.push("e", op_residual(&ab.matmul(&a)?, &a.scale(&inv_sq)));
    checks.push("f", op_residual(&ba.matmul(&b)?, &b.scale(&inv_sq)));
    Ok(checks)
}

/// A^(n+1) against [n+1]^{-1} A^(n) Σ_m (−1)^m q^{n−m} g_n g_{n−1}⋯g_{n−m+1}.
pub fn alternating_expansion<S: Scalar>(rep: &HeckeRep<S>, n: usize) -> Result<Residual> {
    let ctx = rep.ctx();
    let mut towers = Towers::new(rep);
    let a = towers.full(n)?;
    let target = towers.full(n + 1)?;
    let mut sum = TensorOp::zero(rep.n(), rep.k());
    let mut chain = rep.identity();
    for m in 0..=n {
        if m > 0 {
            chain = chain.matmul(rep.gen(n + 1 - m)?)?;
        }
        let mut c = ctx.qpow((n - m) as i64);
        if m % 2 == 1 {
            c = c.neg();
        }
        sum = sum.add(&chain.scale(&c))?;
    }
    let inv = ctx
        .qnum(n as i64 + 1)
        .inv()
        .map_err(|_| Error::VanishingQInteger(n as i64 + 1))?;
    Ok(op_residual(&a.matmul(&sum)?.scale(&inv), &target))
}

/// φ_i(t) = (g_i⋯g_{r+i}) t (g_i⋯g_{r+i})^{-1} on the generators of the
/// window (i, r+i) and on its antisymmetrizer.
pub fn inner_automorphism<S: Scalar>(rep: &HeckeRep<S>, i: usize, r: usize) -> Result<Checks> {
    if i == 0 || r + i >= rep.k() {
        return Err(Error::IndexOutOfRange(format!(
            "window ({i}, {}) in H_{}",
            r + i,
            rep.k()
        )));
    }
    let idx: Vec<usize> = (i..=r + i).collect();
    let u = rep.gens_product(&idx)?;
    let u_inv = idx
        .iter()
        .rev()
        .try_fold(rep.identity(), |acc, &j| acc.matmul(&rep.gen_inv(j)?))?;
    let phi = |t: &TensorOp<S>| -> Result<TensorOp<S>> { u.matmul(t)?.matmul(&u_inv) };
    let mut checks = Checks::new();
    checks.push(
        "phi(1)",
        op_residual(&phi(&rep.identity())?, &rep.identity()),
    );
    for j in i..r + i {
        checks.push(
            format!("phi(g{j}) = g{}", j + 1),
            op_residual(&phi(rep.gen(j)?)?, rep.gen(j + 1)?),
        );
    }
    let mut towers = Towers::new(rep);
    let a = towers.window(i, r + i)?;
    let b = towers.window(i + 1, r + i + 1)?;
    checks.push(format!("phi(A({i},{}))", r + i), op_residual(&phi(&a)?, &b));
    Ok(checks)
}

/// rank ρ(A^(j)) against C(n, j)·n^{k−j}.
pub fn rank_formula<S: Scalar>(rep: &HeckeRep<S>, j: usize) -> Result<Residual> {
    let (n, k) = (rep.n(), rep.k());
    let expected = binomial(n, j) * n.pow((k - j) as u32);
    let got = Towers::new(rep).full(j)?.rank();
    Ok((got != expected).then(|| format!("rank A{j} = {got}, expected {expected}")))
}

fn binomial(n: usize, j: usize) -> usize {
    if j > n {
        return 0;
    }
    (0..j).fold(1, |acc, t| acc * (n - t) / (t + 1))
}
