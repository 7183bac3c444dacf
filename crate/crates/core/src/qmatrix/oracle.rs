//! Decides equality of two expressions of equal degree by checking that
//! their difference lies in the span of the degree-k relations at p.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::context::Workspace;
use super::expr::SlotExpr;
use super::moves::shift_det;
use super::named::accumulate;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{dim, flatten, unflatten};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Unequal { witness: String },
    Inconclusive { reason: String },
}

/// Largest n^{2k} the oracle accepts by default.
pub const DEFAULT_LIMIT: usize = 729;

type Row<S> = BTreeMap<usize, S>;

/// Row echelon basis with pivot rows scaled to a leading 1.
struct Echelon<S: Scalar> {
    pivots: HashMap<usize, Row<S>>,
}

impl<S: Scalar> Echelon<S> {
    fn new() -> Self {
        Echelon {
            pivots: HashMap::new(),
        }
    }

    fn reduce(&self, mut row: Row<S>) -> Row<S> {
        let mut cursor = 0;
        while let Some((&col, _)) = row.range(cursor..).find(|(c, _)| self.pivots.contains_key(c)) {
            let c = row.remove(&col).expect("present");
            for (&j, v) in self.pivots[&col].range(col + 1..) {
                let x = row.get(&j).cloned().unwrap_or_else(S::zero).sub_ref(&c.mul_ref(v));
                if x.is_zero() {
                    row.remove(&j);
                } else {
                    row.insert(j, x);
                }
            }
            cursor = col + 1;
        }
        row
    }

    fn insert(&mut self, row: Row<S>) {
        let row = self.reduce(row);
        if let Some((&lead, v)) = row.iter().next() {
            let inv = v.inv().expect("nonzero lead");
            let scaled = row.iter().map(|(&j, x)| (j, x.mul_ref(&inv))).collect();
            self.pivots.insert(lead, scaled);
        }
    }
}

/// Span of ρ_p(g_i)[J,·]⊗e_β − e_J⊗ρ_c(g_i)[·,β] over (I, α), i < k.
fn relation_span<S: Scalar>(ws: &Workspace<S>, k: usize) -> Result<Echelon<S>> {
    let n = ws.n();
    let d = dim(n, k);
    let mut ech = Echelon::new();
    if k < 2 {
        return Ok(ech);
    }
    let reps = ws.reps(k)?;
    for i in 1..k {
        let g_p = reps.0.gen(i)?;
        let g_c = reps.1.gen(i)?;
        for j in 0..d {
            for beta in 0..d {
                let mut row = Row::new();
                for (ii, v) in &g_p.rows()[j] {
                    let c = ii * d + beta;
                    row.insert(c, row.get(&c).cloned().unwrap_or_else(S::zero).add_ref(v));
                }
                for (alpha, v) in g_c.entries().filter(|(_, c, _)| *c == beta).map(|(r, _, v)| (r, v.clone())) {
                    let c = j * d + alpha;
                    row.insert(c, row.get(&c).cloned().unwrap_or_else(S::zero).sub_ref(&v));
                }
                row.retain(|_, v| !v.is_zero());
                if !row.is_empty() {
                    ech.insert(row);
                }
            }
        }
    }
    Ok(ech)
}

/// Moves every det power to the far right, then writes positive powers as
/// [n]!^{-1}E(p)a⋯aε^ blocks. Returns the expression and the remaining
/// (non-positive) det power.
fn expand<S: Scalar>(e: &SlotExpr<S>, ws: &Workspace<S>, strip: i64) -> Result<SlotExpr<S>> {
    let mut e = e.clone();
    e.normalize(ws)?;
    let k = e.k();
    for from in 0..k {
        if e.dets[from] != 0 {
            e = shift_det(&e, ws, from, from + 1)?;
            e.normalize(ws)?;
        }
    }
    let n = ws.n();
    let power = e.dets[k] - strip;
    if power < 0 {
        return Err(Error::Invalid("negative det powers remain after stripping".into()));
    }
    e.dets[k] = 0;
    let qf = ws.params().ctx().qfact(n).inv()?;
    let (eps_up, perms) = {
        let up = &ws.eps_const().1;
        let perms: Vec<Vec<usize>> = up.entries().keys().cloned().collect();
        (up.clone(), perms)
    };
    for block in 0..power {
        let k = e.k();
        let fr = e.free_rows.len();
        let mut coef = HashMap::new();
        for (key, v) in &e.coef {
            let rows = &key[fr..fr + k];
            let w = ws.point().minus_weights(rows);
            let eps = ws.eps_dyn(&w)?;
            for (j, ej) in eps.0.entries() {
                for beta in &perms {
                    let mut nk = key[..fr + k].to_vec();
                    nk.extend_from_slice(j);
                    nk.extend_from_slice(&key[fr + k..fr + 2 * k]);
                    nk.extend_from_slice(beta);
                    nk.extend_from_slice(&key[fr + 2 * k..]);
                    let x = v.mul_ref(ej).mul_ref(&eps_up.get(beta)).mul_ref(&qf);
                    accumulate(&mut coef, nk, x);
                }
            }
        }
        e.coef = coef;
        for i in 0..n {
            e.rows.push(format!("#det{block}r{i}"));
            e.cols.push(format!("#det{block}c{i}"));
            e.dets.push(0);
        }
    }
    Ok(e)
}

/// Compares two expressions modulo the relations. The det law used to
/// move dets is the one with N/K built from the ε-tensors.
pub fn membership<S: Scalar>(a: &SlotExpr<S>, b: &SlotExpr<S>, ws: &Workspace<S>, limit: usize) -> Result<Verdict> {
    if (a.free_rows.len(), a.free_cols.len()) != (b.free_rows.len(), b.free_cols.len()) {
        return Err(Error::Dimension("free index counts differ".into()));
    }
    let strip = a.det_total().min(b.det_total()).min(0);
    let a = expand(a, ws, strip)?;
    let b = expand(b, ws, strip)?;
    let n = ws.n();
    let mut results = Vec::new();
    let ks: Vec<usize> = if a.k() == b.k() { vec![a.k()] } else { vec![a.k(), b.k()] };
    for &k in &ks {
        let width = dim(n, k) * dim(n, k);
        if width > limit {
            return Ok(Verdict::Inconclusive {
                reason: format!("{width} coefficients at degree {k} exceed the limit {limit}"),
            });
        }
        let span = relation_span(ws, k)?;
        // Difference vectors per free index assignment.
        let mut diffs: HashMap<Vec<usize>, Row<S>> = HashMap::new();
        for (sign, e) in [(S::one(), &a), (S::one().neg(), &b)] {
            if e.k() != k {
                continue;
            }
            let fr = e.free_rows.len();
            for (key, v) in &e.coef {
                let rows = flatten(n, &key[fr..fr + k]);
                let cols = flatten(n, &key[fr + k..fr + 2 * k]);
                let mut free = key[..fr].to_vec();
                free.extend_from_slice(&key[fr + 2 * k..]);
                let row = diffs.entry(free).or_default();
                let c = rows * dim(n, k) + cols;
                let x = row.get(&c).cloned().unwrap_or_else(S::zero).add_ref(&v.mul_ref(&sign));
                if x.is_zero() {
                    row.remove(&c);
                } else {
                    row.insert(c, x);
                }
            }
        }
        for (free, row) in diffs {
            let rest = span.reduce(row);
            if let Some((&c, v)) = rest.iter().next() {
                let d = dim(n, k);
                let i: Vec<usize> = unflatten(n, k, c / d).iter().map(|x| x + 1).collect();
                let al: Vec<usize> = unflatten(n, k, c % d).iter().map(|x| x + 1).collect();
                let f: Vec<usize> = free.iter().map(|x| x + 1).collect();
                results.push(format!("free {f:?}: residue {v} at rows {i:?}, cols {al:?}"));
                break;
            }
        }
    }
    Ok(match results.into_iter().next() {
        None => Verdict::Equal,
        Some(witness) => Verdict::Unequal { witness },
    })
}
