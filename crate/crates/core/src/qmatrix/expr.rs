use std::collections::{BTreeSet, HashMap};

use super::context::Workspace;
use super::named::{accumulate, NamedTensor};
use super::script::{DiagKind, ExprSpec, Factor, ScalarFn};
use crate::error::{Error, Result};
use crate::params::WeightPoint;
use crate::scalar::Scalar;

/// A p-dependent factor sitting to the right of some slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowFactor {
    Scalar(ScalarFn),
    EpsLo(Vec<String>),
    EpsUp(Vec<String>),
    Diag(Vec<String>, DiagKind),
}

impl RowFactor {
    pub fn names(&self) -> Vec<String> {
        match self {
            RowFactor::Scalar(_) => Vec::new(),
            RowFactor::EpsLo(v) | RowFactor::EpsUp(v) | RowFactor::Diag(v, _) => v.clone(),
        }
    }

    pub fn eval<S: Scalar>(&self, ws: &Workspace<S>, w: &WeightPoint) -> Result<NamedTensor<S>> {
        Ok(match self {
            RowFactor::Scalar(f) => NamedTensor::scalar(ws.scalar(f, w)?),
            RowFactor::EpsLo(names) => Workspace::eps_tensor(&ws.eps_dyn(w)?.0, names),
            RowFactor::EpsUp(names) => Workspace::eps_tensor(&ws.eps_dyn(w)?.1, names),
            RowFactor::Diag(names, kind) => {
                let d = ws.diag(*kind, w)?;
                diag_tensor(names, d)
            }
        })
    }
}

fn diag_tensor<S: Scalar>(names: &[String], d: Vec<S>) -> NamedTensor<S> {
    let width = names.len();
    NamedTensor::from_positional(
        names,
        d.into_iter().enumerate().map(|(i, v)| (vec![i; width], v)),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pending {
    /// Number of slots to the left of the factors.
    pub pos: usize,
    pub factors: Vec<RowFactor>,
}

/// T_{rows, cols}(p) a^{I_1}_{α_1}⋯a^{I_k}_{α_k} at one point p, with det
/// powers between slots and pending p-functions not yet moved left.
///
/// Coefficient keys are laid out as [free rows, slot rows, slot cols, free cols].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotExpr<S: Scalar> {
    pub n: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub free_rows: Vec<String>,
    pub free_cols: Vec<String>,
    /// dets[j] is the det power after j slots.
    pub dets: Vec<i64>,
    pub coef: HashMap<Vec<usize>, S>,
    pub pending: Vec<Pending>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Row,
    Col,
}

fn factor_side(f: &Factor) -> Option<Side> {
    match f {
        Factor::EpsLoDyn { .. } | Factor::EpsUpDyn { .. } | Factor::Diag { .. } => Some(Side::Row),
        Factor::EpsLo { .. } | Factor::EpsUp { .. } | Factor::Rhat { .. } | Factor::ConstDiag { .. } => {
            Some(Side::Col)
        }
        _ => None,
    }
}

fn factor_names(f: &Factor) -> Vec<String> {
    match f {
        Factor::A { row, col } => vec![row.clone(), col.clone()],
        Factor::Det { .. } | Factor::Scalar { .. } => Vec::new(),
        Factor::EpsLoDyn { idx } | Factor::EpsUpDyn { idx } | Factor::EpsLo { idx } | Factor::EpsUp { idx } => {
            idx.clone()
        }
        Factor::Rhat { up, lo, .. } => vec![up[0].clone(), up[1].clone(), lo[0].clone(), lo[1].clone()],
        Factor::Diag { up, lo, .. } | Factor::ConstDiag { up, lo, .. } | Factor::Delta { up, lo } => {
            vec![up.clone(), lo.clone()]
        }
    }
}

fn rename_factor(f: &mut Factor, from: &str, to: &str) {
    let fix = |s: &mut String| {
        if s == from {
            *s = to.to_string();
        }
    };
    match f {
        Factor::A { row, col } => {
            fix(row);
            fix(col);
        }
        Factor::Det { .. } | Factor::Scalar { .. } => {}
        Factor::EpsLoDyn { idx } | Factor::EpsUpDyn { idx } | Factor::EpsLo { idx } | Factor::EpsUp { idx } => {
            idx.iter_mut().for_each(fix)
        }
        Factor::Rhat { up, lo, .. } => up.iter_mut().chain(lo.iter_mut()).for_each(fix),
        Factor::Diag { up, lo, .. } | Factor::ConstDiag { up, lo, .. } | Factor::Delta { up, lo } => {
            fix(up);
            fix(lo);
        }
    }
}

/// Identifies the two names of δ-like factors when one of them is summed
/// over, so that diagonal factors act on a single index.
fn unify(spec: &ExprSpec) -> Vec<Factor> {
    let mut factors = spec.factors.clone();
    loop {
        let external: BTreeSet<String> = factors
            .iter()
            .filter_map(|f| match f {
                Factor::A { row, col } => Some([row.clone(), col.clone()]),
                _ => None,
            })
            .flatten()
            .chain(spec.free_rows.iter().cloned())
            .chain(spec.free_cols.iter().cloned())
            .collect();
        let found = factors.iter().find_map(|f| match f {
            Factor::Diag { up, lo, .. } | Factor::ConstDiag { up, lo, .. } | Factor::Delta { up, lo } if up != lo => {
                if !external.contains(lo) {
                    Some((lo.clone(), up.clone()))
                } else if !external.contains(up) {
                    Some((up.clone(), lo.clone()))
                } else {
                    None
                }
            }
            _ => None,
        });
        let Some((from, to)) = found else { break };
        factors.iter_mut().for_each(|f| rename_factor(f, &from, &to));
    }
    factors.retain(|f| !matches!(f, Factor::Delta { up, lo } if up == lo));
    factors
}

fn const_factor<S: Scalar>(ws: &Workspace<S>, f: &Factor) -> Result<NamedTensor<S>> {
    let n = ws.n();
    Ok(match f {
        Factor::EpsLo { idx } => Workspace::eps_tensor(&ws.eps_const().0, idx),
        Factor::EpsUp { idx } => Workspace::eps_tensor(&ws.eps_const().1, idx),
        Factor::Rhat { up, lo, inverse } => {
            let op = if *inverse {
                ws.rhat().inverse()?
            } else {
                ws.rhat().clone()
            };
            let names = [up[0].clone(), up[1].clone(), lo[0].clone(), lo[1].clone()];
            let entries = op.entries().map(|(r, c, v)| {
                (vec![r / n, r % n, c / n, c % n], v.clone())
            });
            NamedTensor::from_positional(&names, entries.collect::<Vec<_>>())
        }
        Factor::ConstDiag { up, lo, of } => diag_tensor(&[up.clone(), lo.clone()], ws.const_diag(*of)?),
        Factor::Delta { up, lo } => NamedTensor::delta(up, lo, n),
        _ => unreachable!("not a constant factor"),
    })
}

fn row_factor(f: &Factor) -> Option<RowFactor> {
    Some(match f {
        Factor::Scalar { f } => RowFactor::Scalar(f.clone()),
        Factor::EpsLoDyn { idx } => RowFactor::EpsLo(idx.clone()),
        Factor::EpsUpDyn { idx } => RowFactor::EpsUp(idx.clone()),
        Factor::Diag { up, lo, of } => {
            let names = if up == lo {
                vec![up.clone()]
            } else {
                vec![up.clone(), lo.clone()]
            };
            RowFactor::Diag(names, *of)
        }
        _ => return None,
    })
}

impl<S: Scalar> SlotExpr<S> {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Names in key order.
    pub fn layout(&self) -> Vec<String> {
        self.free_rows
            .iter()
            .chain(&self.rows)
            .chain(&self.cols)
            .chain(&self.free_cols)
            .cloned()
            .collect()
    }

    pub fn row_offset(&self) -> usize {
        self.free_rows.len()
    }

    pub fn col_offset(&self) -> usize {
        self.free_rows.len() + self.k()
    }

    /// Key position carrying a row-side name.
    pub fn row_position(&self, name: &str) -> Option<usize> {
        self.free_rows
            .iter()
            .chain(&self.rows)
            .position(|x| x == name)
    }

    pub fn det_total(&self) -> i64 {
        self.dets.iter().sum()
    }

    pub fn nnz(&self) -> usize {
        self.coef.len()
    }

    pub fn compile(spec: &ExprSpec, ws: &Workspace<S>) -> Result<Self> {
        let n = ws.n();
        let mut factors = unify(spec);
        // Slot indices that are also free get their own name, tied to the
        // free one by δ, so that later moves can tell them apart.
        for name in spec.free_rows.iter().chain(&spec.free_cols) {
            if factors.iter().any(|f| matches!(f, Factor::A { row, col } if row == name || col == name)) {
                let fresh = format!("{name}'");
                factors.iter_mut().for_each(|f| rename_factor(f, name, &fresh));
                factors.push(Factor::Delta {
                    up: name.clone(),
                    lo: fresh,
                });
            }
        }
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        for f in &factors {
            if let Factor::A { row, col } = f {
                rows.push(row.clone());
                cols.push(col.clone());
            }
        }
        let mut side: HashMap<String, Side> = HashMap::new();
        let mut assign = |name: &String, s: Side| -> Result<()> {
            match side.insert(name.clone(), s) {
                Some(old) if old != s => Err(Error::Invalid(format!(
                    "index {name} used on both the row and the column side"
                ))),
                _ => Ok(()),
            }
        };
        for name in rows.iter().chain(&spec.free_rows) {
            assign(name, Side::Row)?;
        }
        for name in cols.iter().chain(&spec.free_cols) {
            assign(name, Side::Col)?;
        }
        for f in &factors {
            if let Some(s) = factor_side(f) {
                for name in factor_names(f) {
                    assign(&name, s)?;
                }
            }
        }

        let k = rows.len();
        let mut dets = vec![0i64; k + 1];
        let mut now: Vec<NamedTensor<S>> = Vec::new();
        let mut pending: Vec<Pending> = Vec::new();
        let mut slot = 0;
        for f in &factors {
            match f {
                Factor::A { .. } => slot += 1,
                Factor::Det { power } => dets[slot] += power,
                Factor::Scalar { f } if f.is_constant() => now.push(NamedTensor::scalar(ws.scalar(f, ws.point())?)),
                _ => match row_factor(f) {
                    Some(rf) if slot > 0 => {
                        let allowed: Vec<&String> = rows[slot..].iter().chain(&spec.free_rows).collect();
                        if let Some(bad) = rf.names().iter().find(|x| !allowed.contains(x)) {
                            return Err(Error::Invalid(format!(
                                "function after slot {slot} carries index {bad}, which is not a later row index"
                            )));
                        }
                        match pending.iter_mut().find(|p| p.pos == slot) {
                            Some(p) => p.factors.push(rf),
                            None => pending.push(Pending {
                                pos: slot,
                                factors: vec![rf],
                            }),
                        }
                    }
                    Some(rf) => now.push(rf.eval(ws, ws.point())?),
                    None => now.push(const_factor(ws, f)?),
                },
            }
        }

        let layout: Vec<String> = spec
            .free_rows
            .iter()
            .chain(&rows)
            .chain(&cols)
            .chain(&spec.free_cols)
            .cloned()
            .collect();
        let mut coef = NamedTensor::scalar(S::one());
        for i in 0..now.len() {
            let keep: Vec<String> = layout
                .iter()
                .cloned()
                .chain(now[i + 1..].iter().flat_map(|t| t.names().to_vec()))
                .collect();
            coef = coef.contract(&now[i], &keep);
        }
        let mut seen = BTreeSet::new();
        for name in &layout {
            if seen.insert(name.clone()) {
                coef = coef.broadcast(name, n);
            }
        }
        let coef = coef
            .positional(&layout)
            .ok_or_else(|| Error::Invalid("coefficient carries an index outside the layout".into()))?;
        pending.sort_by_key(|p| p.pos);
        Ok(SlotExpr {
            n,
            rows,
            cols,
            free_rows: spec.free_rows.clone(),
            free_cols: spec.free_cols.clone(),
            dets,
            coef,
            pending,
        })
    }

    /// Moves the pending factors at list index `which` to the far left.
    pub fn merge_pending(&mut self, which: usize, ws: &Workspace<S>) -> Result<()> {
        if which >= self.pending.len() {
            return Err(Error::IndexOutOfRange(format!("pending function {which}")));
        }
        let pend = self.pending.remove(which);
        let off = self.row_offset();
        let mut value: HashMap<Vec<usize>, (NamedTensor<S>, Vec<usize>)> = HashMap::new();
        let mut out = HashMap::new();
        for (key, v) in &self.coef {
            let prefix = key[off..off + pend.pos].to_vec();
            if !value.contains_key(&prefix) {
                let w = ws.point().minus_weights(&prefix);
                let t = pend
                    .factors
                    .iter()
                    .try_fold(NamedTensor::scalar(S::one()), |acc, f| Ok::<_, Error>(acc.mul(&f.eval(ws, &w)?)))?;
                let map = t
                    .names()
                    .iter()
                    .map(|name| {
                        self.row_position(name)
                            .ok_or_else(|| Error::Invalid(format!("pending function refers to a removed index {name}")))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                value.insert(prefix.clone(), (t, map));
            }
            let (t, map) = &value[&prefix];
            let at: Vec<usize> = map.iter().map(|&i| key[i]).collect();
            let f = t.get(&at);
            accumulate(&mut out, key.clone(), v.mul_ref(&f));
        }
        self.coef = out;
        Ok(())
    }

    /// Merges every pending function.
    pub fn normalize(&mut self, ws: &Workspace<S>) -> Result<()> {
        while !self.pending.is_empty() {
            self.merge_pending(0, ws)?;
        }
        Ok(())
    }

    /// First difference from `other`, compared position by position.
    pub fn difference(&self, other: &Self) -> Option<String> {
        let shape = |e: &Self| (e.k(), e.free_rows.len(), e.free_cols.len());
        if shape(self) != shape(other) {
            return Some(format!(
                "shapes differ: (slots, free rows, free cols) {:?} vs {:?}",
                shape(self),
                shape(other)
            ));
        }
        if self.dets != other.dets {
            return Some(format!("det powers differ: {:?} vs {:?}", self.dets, other.dets));
        }
        if !self.pending.is_empty() || !other.pending.is_empty() {
            return Some("pending functions remain".into());
        }
        let mut keys: Vec<&Vec<usize>> = self.coef.keys().chain(other.coef.keys()).collect();
        keys.sort();
        keys.dedup();
        for key in keys {
            let a = self.coef.get(key).cloned().unwrap_or_else(S::zero);
            let b = other.coef.get(key).cloned().unwrap_or_else(S::zero);
            if a != b {
                let idx: Vec<usize> = key.iter().map(|i| i + 1).collect();
                return Some(format!("coefficient {idx:?}: {a} vs {b}"));
            }
        }
        None
    }
}

