use serde::Serialize;

use super::context::Workspace;
use super::expr::SlotExpr;
use super::moves::apply_move;
use super::script::{Derivation, Move};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayOutcome {
    pub name: String,
    pub moves: usize,
    /// Coefficient size after each move.
    pub sizes: Vec<usize>,
    pub mismatch: Option<String>,
}

impl ReplayOutcome {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Runs the moves of a derivation from its start expression. Move errors
/// other than poles are reported as `MoveFailed` with a 1-based index.
pub fn run_moves<S: Scalar>(d: &Derivation, ws: &Workspace<S>) -> Result<(SlotExpr<S>, Vec<usize>)> {
    for cert in &d.requires {
        ws.require(cert)?;
    }
    if d.needs_root {
        ws.params().ctx().require_root()?;
    }
    apply_moves(SlotExpr::compile(&d.start, ws)?, &d.moves, 0, ws)
}

fn apply_moves<S: Scalar>(
    mut expr: SlotExpr<S>,
    moves: &[Move],
    offset: usize,
    ws: &Workspace<S>,
) -> Result<(SlotExpr<S>, Vec<usize>)> {
    let mut sizes = Vec::with_capacity(moves.len());
    for (i, mv) in moves.iter().enumerate() {
        expr = apply_move(&expr, ws, mv).map_err(|e| match e {
            e if e.is_pole() => e,
            Error::MissingCertificate(c) => Error::MissingCertificate(c),
            e => Error::MoveFailed {
                index: offset + i + 1,
                kind: mv.kind().to_string(),
                reason: e.to_string(),
            },
        })?;
        sizes.push(expr.nnz());
    }
    Ok((expr, sizes))
}

/// Replays a derivation and compares with its claimed end after both
/// sides are normalized. A successful replay certifies what it provides.
pub fn replay<S: Scalar>(d: &Derivation, ws: &Workspace<S>) -> Result<ReplayOutcome> {
    let (mut got, sizes) = run_moves(d, ws)?;
    got.normalize(ws)?;
    let (mut want, _) = apply_moves(SlotExpr::compile(&d.end, ws)?, &d.end_moves, d.moves.len(), ws)?;
    want.normalize(ws)?;
    let mismatch = got.difference(&want);
    if mismatch.is_none() {
        for cert in &d.provides {
            ws.certify(cert);
        }
    }
    Ok(ReplayOutcome {
        name: d.name.clone(),
        moves: d.moves.len() + d.end_moves.len(),
        sizes,
        mismatch,
    })
}

/// Replays derivations in order in one workspace, so that later ones can
/// use the certificates of earlier ones.
pub fn replay_all<S: Scalar>(ds: &[Derivation], ws: &Workspace<S>) -> Result<Vec<ReplayOutcome>> {
    ds.iter().map(|d| replay(d, ws)).collect()
}
