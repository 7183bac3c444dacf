use super::build::{build_dyn, DynRMatrix};
use super::verify::{verify_qdybe, QdybeForm};
use crate::error::Result;
use crate::params::{PairTable, SLnParams, WeightPoint};
use crate::report::{dyn_residual, op_residual, Checks};
use crate::scalar::Scalar;
use crate::tensor::{DiagOp, DynOp, ShiftMode, TensorOp};

/// Twist functions ψ_ij(p_ij) with ψ_ij ψ_ji = 1 and ψ_ii = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistSpec<S: Scalar> {
    pub psi: PairTable<S>,
}

impl<S: Scalar> TwistSpec<S> {
    pub fn new(psi: PairTable<S>) -> Self {
        TwistSpec { psi }
    }

    pub fn trivial(n: usize) -> Self {
        TwistSpec {
            psi: PairTable::trivial(n),
        }
    }

    /// The twist that cancels α = γ² entrywise: ψ = γ.
    pub fn cancelling(gamma: &PairTable<S>) -> Self {
        TwistSpec { psi: gamma.clone() }
    }

    /// F(p): diagonal ψ_{i1 i2}(p_{i1 i2}) on V⊗V.
    pub fn f_diag(&self, p: &WeightPoint) -> Result<DiagOp<S>> {
        let n = self.psi.n();
        let mut diag = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                diag.push(self.psi.eval(i, j, p.pdiff(i, j))?);
            }
        }
        DiagOp::new(n, 2, diag)
    }

    /// Â(p) = A(p)P_23P_12 on V^⊗3.
    pub fn a_hat(&self, p: &WeightPoint) -> Result<TensorOp<S>> {
        let n = self.psi.n();
        let mut diag = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = if i != j {
                        self.psi.eval(i, k, p.pdiff(i, k))?.mul_ref(&self.psi.eval(
                            j,
                            k,
                            p.pdiff(j, k),
                        )?)
                    } else {
                        let s = self.psi.eval(i, k, p.pdiff(i, k) + 1)?;
                        s.mul_ref(&s)
                    };
                    diag.push(v);
                }
            }
        }
        let a = DiagOp::new(n, 3, diag)?;
        let p23 = TensorOp::swap(n).embed(1, 3)?;
        let p12 = TensorOp::swap(n).embed(0, 3)?;
        a.mul_left(&p23.matmul(&p12)?)
    }
}

/// Parameters after the twist: α_ij → α_ij ψ_ji², β unchanged.
pub fn twist<S: Scalar>(params: &SLnParams<S>, spec: &TwistSpec<S>) -> Result<SLnParams<S>> {
    params.with_alpha(params.alpha().twisted_by(&spec.psi)?)
}

/// Matrix-level checks of the twist at p.
pub fn verify_twist<S: Scalar>(
    params: &SLnParams<S>,
    spec: &TwistSpec<S>,
    p: &WeightPoint,
) -> Result<Checks> {
    let n = params.n();
    let mode = ShiftMode::Unimodular;
    let twisted = twist(params, spec)?;
    let mut checks = Checks::new();

    // F̂R̂F̂^{-1} with F̂ = F P equals the flipped twisted matrix P R̂'(p) P.
    let swap = TensorOp::swap(n);
    let f = spec.f_diag(p)?;
    let f_hat = f.mul_left(&swap)?;
    let f_hat_inv = swap.matmul(&f.inverse()?.to_op())?;
    let lhs = TensorOp::product([&f_hat, &build_dyn(params, p)?, &f_hat_inv])?;
    let rhs = TensorOp::product([&swap, &build_dyn(&twisted, p)?, &swap])?;
    checks.push("conjugation", op_residual(&lhs, &rhs));

    let (lhs, rhs) = factorization_sides(spec)?;
    checks.push("shift-factorization", dyn_residual(&lhs, &rhs, p)?);

    // R̂(p)_12 Â = Â R̂(p)_23.
    let spec_b = spec.clone();
    let a_hat = DynOp::from_fn(n, 3, mode, move |p| spec_b.a_hat(p));
    let r = DynRMatrix::new(params.clone());
    let lhs = r.site_op(0, 3, mode).mul(&a_hat);
    let rhs = a_hat.mul(&r.site_op(1, 3, mode));
    checks.push("intertwiner", dyn_residual(&lhs, &rhs, p)?);

    checks.push(
        "twisted-qdybe",
        verify_qdybe(&twisted, p, QdybeForm::XConjugated)?,
    );
    checks.push("twisted-hecke", {
        let rt = build_dyn(&twisted, p)?;
        super::verify::hecke_residual(&rt, params.ctx().lambda())?
    });
    let same_beta = params.chain() == twisted.chain();
    checks.push(
        "beta-unchanged",
        (!same_beta).then(|| "beta chain changed".to_string()),
    );
    let pattern = |op: &TensorOp<S>| op.entries().map(|(r, c, _)| (r, c)).collect::<Vec<_>>();
    let before = build_dyn(params, p)?;
    let after = build_dyn(&twisted, p)?;
    checks.push(
        "pattern-unchanged",
        (pattern(&before) != pattern(&after)).then(|| "nonzero pattern changed".to_string()),
    );
    Ok(checks)
}

/// The two sides of F̂_12^{-1} X_1^{-1} F̂_23 = Â X_3^{-1} Â.
pub fn factorization_sides<S: Scalar>(spec: &TwistSpec<S>) -> Result<(DynOp<S>, DynOp<S>)> {
    let n = spec.psi.n();
    let mode = ShiftMode::Unimodular;
    let fhat = |pos: usize, inverse: bool| -> DynOp<S> {
        let s = spec.clone();
        DynOp::from_fn(n, 3, mode, move |p| {
            let f = s.f_diag(p)?;
            let swap = TensorOp::swap(n);
            let op = if inverse {
                swap.matmul(&f.inverse()?.to_op())?
            } else {
                f.mul_left(&swap)?
            };
            op.embed(pos, 3)
        })
    };
    let s = spec.clone();
    let a_hat = DynOp::from_fn(n, 3, mode, move |p| s.a_hat(p));
    let lhs = DynOp::product(&[
        fhat(0, true),
        DynOp::x_site(n, 3, 0, -1, mode)?,
        fhat(1, false),
    ])?;
    let rhs = DynOp::product(&[a_hat.clone(), DynOp::x_site(n, 3, 2, -1, mode)?, a_hat])?;
    Ok((lhs, rhs))
}
