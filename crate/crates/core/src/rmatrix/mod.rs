//! Constant and dynamical R-matrices and the identities they satisfy.

mod build;
mod shift;
mod twist;
mod verify;

pub use build::{build_const, build_dj, build_dyn, invert_dyn, ConstRMatrix, DynRMatrix};
pub use shift::{build_shifted, CanonicalShift};
pub use twist::{factorization_sides, twist, verify_twist, TwistSpec};
pub use verify::{
    hecke_residual, prop54_check, verify_hecke_and_weight, verify_qdybe, Prop54, QdybeForm,
};
