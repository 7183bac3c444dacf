use super::permutations;
use crate::error::{Error, Result};
use crate::params::{SLnParams, WeightPoint};
use crate::report::{scalar_residual, Checks};
use crate::scalar::{QContext, Scalar};

/// A table ξ_ij = d − b_ij over n indices, decoupled from any R-matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiTable<S: Scalar> {
    ctx: QContext<S>,
    d: S,
    xi: Vec<Vec<S>>,
    b: Vec<Vec<S>>,
}

impl<S: Scalar> XiTable<S> {
    /// b_ij = q − ξ_ij(p_ij) from a parameter set, with d = q.
    pub fn from_params(params: &SLnParams<S>, p: &WeightPoint) -> Result<Self> {
        let n = params.n();
        let b = (0..n)
            .map(|i| (0..n).map(|j| params.b(i, j, p.pdiff(i, j))).collect())
            .collect::<Result<Vec<Vec<S>>>>()?;
        Ok(Self::from_b(params.ctx(), params.ctx().q().clone(), b))
    }

    pub fn from_b(ctx: &QContext<S>, d: S, b: Vec<Vec<S>>) -> Self {
        let xi = b
            .iter()
            .map(|row| row.iter().map(|x| d.sub_ref(x)).collect())
            .collect();
        XiTable {
            ctx: ctx.clone(),
            d,
            xi,
            b,
        }
    }

    /// b_ij = λx_i/(x_i − x_j) for pairwise distinct x.
    pub fn from_points(ctx: &QContext<S>, d: S, xs: &[S]) -> Result<Self> {
        let n = xs.len();
        let mut b = vec![vec![S::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let den = xs[i].sub_ref(&xs[j]);
                    if den.is_zero() {
                        return Err(Error::Invalid(format!("points {} and {} coincide", i + 1, j + 1)));
                    }
                    b[i][j] = ctx.lambda().mul_ref(&xs[i]).div_ref(&den)?;
                }
            }
        }
        Ok(Self::from_b(ctx, d, b))
    }

    /// A raw ξ table read against d = q.
    pub fn from_xi(ctx: &QContext<S>, xi: Vec<Vec<S>>) -> Self {
        let d = ctx.q().clone();
        let b = xi
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| if i == j { S::zero() } else { d.sub_ref(x) })
                    .collect()
            })
            .collect();
        XiTable {
            ctx: ctx.clone(),
            d,
            xi,
            b,
        }
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }

    pub fn d(&self) -> &S {
        &self.d
    }

    pub fn xi(&self, i: usize, j: usize) -> &S {
        &self.xi[i][j]
    }

    pub fn b(&self, i: usize, j: usize) -> &S {
        &self.b[i][j]
    }

    /// Σ_{orderings} ∏_{a<b} ξ_{i_a i_b} over the given indices.
    pub fn full_sum(&self, set: &[usize]) -> S {
        permutations(set).iter().fold(S::zero(), |acc, seq| {
            let mut prod = S::one();
            for a in 0..seq.len() {
                for b in a + 1..seq.len() {
                    prod = prod.mul_ref(&self.xi[seq[a]][seq[b]]);
                }
            }
            acc.add_ref(&prod)
        })
    }

    /// Σ_r ∏_{l≠r} t_{i_l i_r} for t = ξ or b.
    fn row_sum(&self, set: &[usize], use_b: bool) -> S {
        let t = if use_b { &self.b } else { &self.xi };
        set.iter().fold(S::zero(), |acc, &r| {
            let prod = set
                .iter()
                .filter(|&&l| l != r)
                .fold(S::one(), |p, &l| p.mul_ref(&t[l][r]));
            acc.add_ref(&prod)
        })
    }

    fn qnum_d(&self, k: usize) -> Result<S> {
        self.ctx.qnum_d(k as i64, &self.d)
    }

    fn qfact_d(&self, k: usize) -> Result<S> {
        (1..=k).try_fold(S::one(), |acc, m| Ok(acc.mul_ref(&self.qnum_d(m)?)))
    }
}

/// Increasing k-subsets of 0..n.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn label(set: &[usize]) -> String {
    set.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn check_k<S: Scalar>(table: &XiTable<S>, k: usize) -> Result<()> {
    if k == 0 || k > table.n() {
        return Err(Error::IndexOutOfRange(format!(
            "k = {k} for a table over {} indices",
            table.n()
        )));
    }
    Ok(())
}

/// Brute-force sums on every index subset up to size k: the full
/// ordered-product sum against [k]_d!, ξ row sums against [m]_d and b row
/// sums against λ^{m−1}, each checked on its own.
pub fn appendix_bruteforce<S: Scalar>(table: &XiTable<S>, k: usize) -> Result<Checks> {
    check_k(table, k)?;
    let lambda = table.ctx.lambda();
    let mut checks = Checks::new();
    for m in 2..=k {
        let xi_target = table.qnum_d(m)?;
        let b_target = lambda.pow(m as i64 - 1)?;
        for set in subsets(table.n(), m) {
            let l = label(&set);
            checks.push(
                format!("xi row sum {{{l}}}"),
                scalar_residual("row sum", &table.row_sum(&set, false), &xi_target),
            );
            checks.push(
                format!("b row sum {{{l}}}"),
                scalar_residual("row sum", &table.row_sum(&set, true), &b_target),
            );
        }
    }
    let target = table.qfact_d(k)?;
    for set in subsets(table.n(), k) {
        checks.push(
            format!("full sum {{{}}}", label(&set)),
            scalar_residual("full sum", &table.full_sum(&set), &target),
        );
    }
    Ok(checks)
}

/// The ξ-only variant: hypotheses ξ_ij + ξ_ji = [2] and the three-index
/// cycle sum = [2], then ξ row sums = [m] for m ≤ k and full sums = [k]!.
pub fn xi_only_checks<S: Scalar>(table: &XiTable<S>, k: usize) -> Result<Checks> {
    check_k(table, k)?;
    let ctx = &table.ctx;
    let xi = &table.xi;
    let two = ctx.qnum(2);
    let mut checks = Checks::new();
    for set in subsets(table.n(), 2) {
        let (i, j) = (set[0], set[1]);
        checks.push(
            format!("pair sum {{{}}}", label(&set)),
            scalar_residual("pair sum", &xi[i][j].add_ref(&xi[j][i]), &two),
        );
    }
    for set in subsets(table.n(), 3) {
        let (i, j, k) = (set[0], set[1], set[2]);
        let cyc = xi[i][j]
            .mul_ref(&xi[j][k])
            .mul_ref(&xi[k][i])
            .add_ref(&xi[i][k].mul_ref(&xi[k][j]).mul_ref(&xi[j][i]));
        checks.push(
            format!("cycle sum {{{}}}", label(&set)),
            scalar_residual("cycle sum", &cyc, &two),
        );
    }
    for m in 2..=k {
        let target = ctx.qnum(m as i64);
        for set in subsets(table.n(), m) {
            checks.push(
                format!("row sum {{{}}}", label(&set)),
                scalar_residual("row sum", &table.row_sum(&set, false), &target),
            );
        }
    }
    let target = ctx.qfact(k);
    for set in subsets(table.n(), k) {
        checks.push(
            format!("full sum {{{}}}", label(&set)),
            scalar_residual("full sum", &table.full_sum(&set), &target),
        );
    }
    Ok(checks)
}

/// b_{i1 i2}b_{i2 i3}⋯b_{ik i1} = (−1)^k b_{i1 ik}⋯b_{i2 i1} over all
/// sequences of `len` distinct indices.
pub fn cycle_identity<S: Scalar>(table: &XiTable<S>, len: usize) -> Result<Checks> {
    check_k(table, len)?;
    let mut checks = Checks::new();
    for set in subsets(table.n(), len) {
        for seq in permutations(&set) {
            let fwd = (0..len).fold(S::one(), |acc, a| acc.mul_ref(table.b(seq[a], seq[(a + 1) % len])));
            let bwd = (0..len).fold(S::one(), |acc, a| acc.mul_ref(table.b(seq[(a + 1) % len], seq[a])));
            let bwd = if len.is_multiple_of(2) { bwd } else { bwd.neg() };
            checks.push(format!("cycle ({})", label(&seq)), scalar_residual("cycle", &fwd, &bwd));
        }
    }
    Ok(checks)
}

/// −(b_ji(p)/b_ij(p))·q^{2p_ij} = π_ij for every ordered pair i ≠ j.
pub fn pi_relation<S: Scalar>(params: &SLnParams<S>, p: &WeightPoint) -> Result<Checks> {
    let n = params.n();
    let ctx = params.ctx();
    let mut checks = Checks::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let pij = p.pdiff(i, j);
            let bij = params.b(i, j, pij)?;
            let bji = params.b(j, i, -pij)?;
            let name = format!("pi {}{}", i + 1, j + 1);
            if bij.is_zero() {
                checks.push(name, Some(format!("b_{}{} vanishes", i + 1, j + 1)));
                continue;
            }
            let lhs = bji.div_ref(&bij)?.mul_ref(&ctx.qpow(2 * pij)).neg();
            checks.push(name, scalar_residual("pi", &lhs, &params.pi(i, j)?));
        }
    }
    Ok(checks)
}
