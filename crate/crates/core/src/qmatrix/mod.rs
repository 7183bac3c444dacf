//! The quantum matrix algebra generated by a^i_α and functions of p, with
//! relations R̂(p)_{12}a_1a_2 = a_1a_2R̂_{12} and a f(p) = f(p − v^(i))a.
//!
//! Expressions are kept in a normal form at a concrete point p: a numeric
//! coefficient tensor in front of a product of slots. Rewrite moves change
//! the coefficient in ways licensed by the relations, and derivations are
//! scripts of moves checked against a claimed end.

mod builtin;
mod context;
mod expr;
mod moves;
mod named;
mod oracle;
mod replay;
mod script;

pub use builtin::{
    central, det_commute, det_function, eps_bra, eps_ket, left_inverse, m_commutes_with_d, m_exchange,
    reflection, right_inverse,
};
pub use context::Workspace;
pub use expr::{Pending, RowFactor, SlotExpr};
pub use moves::apply_move;
pub use named::NamedTensor;
pub use oracle::{membership, Verdict, DEFAULT_LIMIT};
pub use replay::{replay, replay_all, run_moves, ReplayOutcome};
pub use script::{
    CollapseMode, ConstDiagKind, Derivation, DiagKind, ExprSpec, Factor, Move, ScalarFn, WordSpec,
};

#[cfg(test)]
mod tests;
