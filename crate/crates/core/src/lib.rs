//! Exact construction and verification of SL(n)-type quantum dynamical
//! R-matrices, Hecke algebra representations, quantum Levi-Civita tensors
//! and the quantum matrix algebra built on them.

pub mod error;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Backend, Fp, Fp64, QContext, Rational, Scalar};
pub mod params;
pub mod sampling;

pub use params::{
    AlphaSpec, BetaChain, GeomFn, PairTable, ParamsDoc, Regime, SLnParams, WeightPoint,
};
pub use sampling::{AlphaDraw, Sampler};
pub mod tensor;

pub use tensor::{DiagOp, DynOp, MatrixDump, ShiftMode, ShiftOp, TensorOp, Witness};
pub mod report;
pub mod rmatrix;

pub use report::{Checks, Record, Report, Residual, Status};
pub use rmatrix::{
    build_dj, build_dyn, invert_dyn, CanonicalShift, DynRMatrix, QdybeForm, TwistSpec,
};
pub mod hecke;
pub use hecke::{HeckeRep, HeckeWord};
pub mod levi;
pub use levi::{EpsSource, EpsTensor, NKMatrices, Variance, XiTable};
pub mod qmatrix;
pub use qmatrix::{Derivation, ReplayOutcome, SlotExpr, Workspace};
pub mod wznw;
pub use wznw::{casimir, dvec, WeightVector};
pub mod suites;
pub use suites::{run as run_suite, Corruption, Suite, SuiteConfig};
