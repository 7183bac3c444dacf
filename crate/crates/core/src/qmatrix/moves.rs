use std::collections::HashMap;

use super::context::Workspace;
use super::expr::{Pending, RowFactor, SlotExpr};
use super::named::accumulate;
use super::script::{CollapseMode, ConstDiagKind, DiagKind, Move, WordSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{flatten, unflatten, TensorOp};

type Coef<S> = HashMap<Vec<usize>, S>;

/// new[.., J, ..] = Σ_I T[.., I, ..]·op[I, J] on the slot rows.
fn act_rows<S: Scalar>(e: &SlotExpr<S>, op: &TensorOp<S>) -> Coef<S> {
    let (off, k, n) = (e.row_offset(), e.k(), e.n);
    let mut out = HashMap::new();
    for (key, v) in &e.coef {
        let i = flatten(n, &key[off..off + k]);
        for (j, x) in &op.rows()[i] {
            let mut nk = key.clone();
            nk[off..off + k].copy_from_slice(&unflatten(n, k, *j));
            accumulate(&mut out, nk, v.mul_ref(x));
        }
    }
    out
}

/// new[.., β, ..] = Σ_α op[β, α]·T[.., α, ..] on the slot columns.
fn act_cols<S: Scalar>(e: &SlotExpr<S>, op: &TensorOp<S>) -> Coef<S> {
    let (off, k, n) = (e.col_offset(), e.k(), e.n);
    let t = op.transpose();
    let mut out = HashMap::new();
    for (key, v) in &e.coef {
        let a = flatten(n, &key[off..off + k]);
        for (b, x) in &t.rows()[a] {
            let mut nk = key.clone();
            nk[off..off + k].copy_from_slice(&unflatten(n, k, *b));
            accumulate(&mut out, nk, v.mul_ref(x));
        }
    }
    out
}

fn same<S: Scalar>(a: &Coef<S>, b: &Coef<S>) -> Option<String> {
    for (key, v) in a {
        if b.get(key) != Some(v) {
            return Some(format!("component {:?}", key.iter().map(|i| i + 1).collect::<Vec<_>>()));
        }
    }
    b.keys()
        .find(|key| !a.contains_key(*key))
        .map(|key| format!("component {:?}", key.iter().map(|i| i + 1).collect::<Vec<_>>()))
}

fn fail(reason: impl Into<String>) -> Error {
    Error::Invalid(reason.into())
}

fn intertwine<S: Scalar>(e: &SlotExpr<S>, ws: &Workspace<S>, word: &WordSpec, left_to_right: bool) -> Result<SlotExpr<S>> {
    let k = e.k();
    if matches!(word, WordSpec::Gens(l) if l.is_empty()) || matches!(word, WordSpec::Antisym(i, j) if i == j) {
        return Ok(e.clone());
    }
    if k < 2 {
        return Err(fail("intertwining needs at least two slots"));
    }
    let top = match word {
        WordSpec::Gens(l) => l.iter().map(|x| x.unsigned_abs() as usize + 1).max().unwrap_or(0),
        WordSpec::Antisym(_, j) => *j,
    };
    if top > k {
        return Err(fail(format!("word reaches slot {top} of {k}")));
    }
    if let Some(p) = e.pending.iter().find(|p| p.pos >= 1 && p.pos < top) {
        return Err(fail(format!("a function sits after slot {} inside the word", p.pos)));
    }
    if let Some(j) = (1..top).find(|&j| e.dets[j] != 0) {
        return Err(fail(format!("a det power sits after slot {j} inside the word")));
    }
    let mut out = e.clone();
    match word {
        WordSpec::Gens(_) => {
            let (dyn_w, const_w, _) = ws.word_images(word, k, false)?;
            let (dyn_inv, const_inv, _) = ws.word_images(word, k, true)?;
            if left_to_right {
                out.coef = act_rows(e, &dyn_inv);
                out.coef = act_cols(&out, &const_w);
            } else {
                out.coef = act_rows(e, &dyn_w);
                out.coef = act_cols(&out, &const_inv);
            }
        }
        WordSpec::Antisym(..) => {
            let (dyn_a, const_a, _) = ws.word_images(word, k, false)?;
            if left_to_right {
                if let Some(w) = same(&act_rows(e, &dyn_a), &e.coef) {
                    return Err(fail(format!("row side is not invariant under the projector: {w}")));
                }
                out.coef = act_cols(e, &const_a);
            } else {
                if let Some(w) = same(&act_cols(e, &const_a), &e.coef) {
                    return Err(fail(format!("column side is not invariant under the projector: {w}")));
                }
                out.coef = act_rows(e, &dyn_a);
            }
        }
    }
    Ok(out)
}

/// Splits a key into the window part and the rest.
fn split_key(key: &[usize], pos: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let win = pos.iter().map(|&i| key[i]).collect();
    let rest = (0..key.len()).filter(|i| !pos.contains(i)).map(|i| key[i]).collect();
    (win, rest)
}

fn collapse<S: Scalar>(e: &SlotExpr<S>, ws: &Workspace<S>, mode: CollapseMode, start: usize) -> Result<SlotExpr<S>> {
    let n = e.n;
    let k = e.k();
    match mode {
        CollapseMode::Bra => ws.require("eps-bra")?,
        CollapseMode::Ket => ws.require("eps-ket")?,
        CollapseMode::Definition => {}
    }
    if start == 0 || start + n - 1 > k {
        return Err(fail(format!("window {start}..{} on {k} slots", start + n - 1)));
    }
    let s0 = start - 1;
    let (roff, coff) = (e.row_offset(), e.col_offset());
    if let Some(j) = (s0 + 1..s0 + n).find(|&j| e.dets[j] != 0) {
        return Err(fail(format!("a det power sits after slot {j} inside the window")));
    }
    if let Some(p) = e.pending.iter().find(|p| p.pos > s0 && p.pos < s0 + n) {
        return Err(fail(format!("a function sits after slot {} inside the window", p.pos)));
    }
    let win_rows: Vec<usize> = (0..n).map(|i| roff + s0 + i).collect();
    let win_cols: Vec<usize> = (0..n).map(|i| coff + s0 + i).collect();
    let removed: Vec<&String> = e.rows[s0..s0 + n].iter().collect();
    for p in &e.pending {
        for f in &p.factors {
            if let Some(x) = f.names().iter().find(|x| removed.contains(x) && !e.free_rows.contains(x)) {
                return Err(fail(format!("a pending function still carries the window index {x}")));
            }
        }
    }
    let (eps_lo, eps_up) = ws.eps_const();
    let prefix_point = |key: &[usize]| ws.point().minus_weights(&key[roff..roff + s0]);

    // Group the coefficient by everything the pattern does not touch.
    let varying: Vec<usize> = match mode {
        CollapseMode::Definition => [win_rows.clone(), win_cols.clone()].concat(),
        CollapseMode::Bra => win_rows.clone(),
        CollapseMode::Ket => win_cols.clone(),
    };
    let mut groups: HashMap<Vec<usize>, Vec<(Vec<usize>, S)>> = HashMap::new();
    for (key, v) in &e.coef {
        let (win, rest) = split_key(key, &varying);
        groups.entry(rest).or_default().push((win, v.clone()));
    }
    let rest_positions: Vec<usize> = (0..e.layout().len()).filter(|i| !varying.contains(i)).collect();
    let full_key = |rest: &[usize], win: &[usize]| -> Vec<usize> {
        let mut key = vec![0; rest.len() + win.len()];
        for (i, &p) in rest_positions.iter().enumerate() {
            key[p] = rest[i];
        }
        for (i, &p) in varying.iter().enumerate() {
            key[p] = win[i];
        }
        key
    };

    let mut out = HashMap::new();
    let keep: Vec<usize> = (0..e.layout().len())
        .filter(|i| !win_rows.contains(i) && !win_cols.contains(i))
        .collect();
    for (rest, list) in &groups {
        let key0 = full_key(rest, &list[0].0);
        let w = prefix_point(&key0);
        let eps_dyn = ws.eps_dyn(&w)?;
        let pattern = |win: &[usize]| -> S {
            match mode {
                CollapseMode::Definition => eps_dyn.0.get(&win[..n]).mul_ref(&eps_up.get(&win[n..])),
                CollapseMode::Bra => eps_dyn.0.get(win),
                CollapseMode::Ket => eps_up.get(win),
            }
        };
        let (win0, v0) = &list[0];
        let p0 = pattern(win0);
        if p0.is_zero() {
            return Err(fail(format!(
                "component {:?} lies outside the ε pattern",
                key0.iter().map(|i| i + 1).collect::<Vec<_>>()
            )));
        }
        let z = v0.div_ref(&p0)?;
        let support = match mode {
            CollapseMode::Definition => factorial(n) * factorial(n),
            _ => factorial(n),
        };
        if list.len() != support {
            return Err(fail(format!(
                "window components do not follow the ε pattern ({} of {support} present)",
                list.len()
            )));
        }
        for (win, v) in list {
            if pattern(win).mul_ref(&z) != *v {
                let key = full_key(rest, win);
                return Err(fail(format!(
                    "component {:?} is not proportional to the ε pattern",
                    key.iter().map(|i| i + 1).collect::<Vec<_>>()
                )));
            }
        }
        match mode {
            CollapseMode::Definition => {
                let key: Vec<usize> = keep.iter().map(|&i| key0[i]).collect();
                accumulate(&mut out, key, z.mul_ref(&ws.params().ctx().qfact(n)));
            }
            CollapseMode::Bra => {
                let alpha: Vec<usize> = win_cols.iter().map(|&p| key0[p]).collect();
                let key: Vec<usize> = keep.iter().map(|&i| key0[i]).collect();
                accumulate(&mut out, key, z.mul_ref(&eps_lo.get(&alpha)));
            }
            CollapseMode::Ket => {
                let up = eps_dyn.1.get(&win_rows.iter().map(|&p| key0[p]).collect::<Vec<_>>());
                let key: Vec<usize> = keep.iter().map(|&i| key0[i]).collect();
                accumulate(&mut out, key, z.mul_ref(&up));
            }
        }
    }
    let mut result = e.clone();
    result.coef = out;
    result.rows.drain(s0..s0 + n);
    result.cols.drain(s0..s0 + n);
    let mut dets = e.dets[..s0].to_vec();
    dets.push(e.dets[s0] + e.dets[s0 + n] + 1);
    dets.extend_from_slice(&e.dets[s0 + n + 1..]);
    result.dets = dets;
    for p in &mut result.pending {
        if p.pos >= s0 + n {
            p.pos -= n;
        }
    }
    Ok(result)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn det_commute<S: Scalar>(e: &SlotExpr<S>, ws: &Workspace<S>, from: usize, to: usize) -> Result<SlotExpr<S>> {
    ws.require("det-commute")?;
    shift_det(e, ws, from, to)
}

/// det^d a = K(p)^d a K^{-d} det^d without checking for a certificate.
pub(crate) fn shift_det<S: Scalar>(e: &SlotExpr<S>, ws: &Workspace<S>, from: usize, to: usize) -> Result<SlotExpr<S>> {
    let k = e.k();
    if from > k || to > k || from.abs_diff(to) != 1 {
        return Err(fail(format!("det positions {from} → {to} on {k} slots")));
    }
    let d = e.dets[from];
    let mut out = e.clone();
    if d == 0 {
        return Ok(out);
    }
    let (slot, fpos, row_pow, col_pow) = if to == from + 1 {
        (from, from, d, -d)
    } else {
        (to, to, -d, d)
    };
    let kc = ws.const_diag(if col_pow > 0 { ConstDiagKind::K } else { ConstDiagKind::KInv })?;
    let cpos = e.col_offset() + slot;
    let mut coef = HashMap::new();
    for (key, v) in &out.coef {
        let x = kc[key[cpos]].pow(col_pow.abs())?;
        accumulate(&mut coef, key.clone(), v.mul_ref(&x));
    }
    out.coef = coef;
    let kind = if row_pow > 0 { DiagKind::K } else { DiagKind::KInv };
    let name = e.rows[slot].clone();
    let factors = vec![RowFactor::Diag(vec![name], kind); row_pow.unsigned_abs() as usize];
    out.pending.push(Pending { pos: fpos, factors });
    if fpos == 0 {
        let idx = out.pending.len() - 1;
        out.merge_pending(idx, ws)?;
    }
    out.pending.sort_by_key(|p| p.pos);
    out.dets[from] = 0;
    out.dets[to] += d;
    Ok(out)
}

/// Applies one move.
pub fn apply_move<S: Scalar>(e: &SlotExpr<S>, ws: &Workspace<S>, mv: &Move) -> Result<SlotExpr<S>> {
    match mv {
        Move::IntertwineLr { word } => intertwine(e, ws, word, true),
        Move::IntertwineRl { word } => intertwine(e, ws, word, false),
        Move::ScalarShift { pending } => {
            let mut out = e.clone();
            match pending {
                Some(i) => out.merge_pending(*i, ws)?,
                None => out.normalize(ws)?,
            }
            Ok(out)
        }
        Move::EpsCollapse { mode, start } => collapse(e, ws, *mode, *start),
        Move::DetCommute { from, to } => det_commute(e, ws, *from, *to),
        Move::Simplify => {
            let mut out = e.clone();
            out.coef.retain(|_, v| !v.is_zero());
            Ok(out)
        }
    }
}
