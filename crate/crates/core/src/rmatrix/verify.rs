use super::build::{build_dyn, invert_dyn, DynRMatrix};
use crate::error::{Error, Result};
use crate::params::{SLnParams, WeightPoint};
use crate::report::{dyn_residual, op_residual, Checks, Residual};
use crate::scalar::Scalar;
use crate::tensor::{DiagOp, DynOp, ShiftMode, TensorOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QdybeForm {
    /// Braid relation with R̂_23 evaluated at p − v_1.
    Shifted,
    /// Braid relation with R̂_23 conjugated by X_1.
    XConjugated,
    /// Variant conjugated by X_3 acting on R̂_12.
    ConjugatedThird,
    /// The previous variant with sites 1 and 3 exchanged.
    Flipped,
    /// R̂_23(p − v_1) coincides with X_1 R̂_23(p) X_1^{-1}.
    ShiftEquivalence,
}

impl QdybeForm {
    pub const ALL: [QdybeForm; 5] = [
        QdybeForm::Shifted,
        QdybeForm::XConjugated,
        QdybeForm::ConjugatedThird,
        QdybeForm::Flipped,
        QdybeForm::ShiftEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QdybeForm::Shifted => "shifted",
            QdybeForm::XConjugated => "x-conjugated",
            QdybeForm::ConjugatedThird => "x3-conjugated",
            QdybeForm::Flipped => "flipped",
            QdybeForm::ShiftEquivalence => "shift-equivalence",
        }
    }
}

/// Residual of one form of the dynamical braid relation at p.
pub fn verify_qdybe<S: Scalar>(
    params: &SLnParams<S>,
    p: &WeightPoint,
    form: QdybeForm,
) -> Result<Residual> {
    let r = DynRMatrix::new(params.clone());
    let n = params.n();
    let mode = ShiftMode::Unimodular;
    match form {
        QdybeForm::Shifted => {
            let r12 = r.at(p)?.embed(0, 3)?;
            let r23 = r.shifted_23(p)?;
            let lhs = TensorOp::product([&r12, &r23, &r12])?;
            let rhs = TensorOp::product([&r23, &r12, &r23])?;
            Ok(op_residual(&lhs, &rhs))
        }
        QdybeForm::XConjugated => {
            let r12 = r.site_op(0, 3, mode);
            let c23 = conjugated(&r.site_op(1, 3, mode), 0, 1, n)?;
            let lhs = DynOp::product(&[r12.clone(), c23.clone(), r12.clone()])?;
            let rhs = DynOp::product(&[c23.clone(), r12, c23])?;
            dyn_residual(&lhs, &rhs, p)
        }
        QdybeForm::ConjugatedThird => {
            let r23 = r.site_op(1, 3, mode);
            let c12 = conjugated(&r.site_op(0, 3, mode), 2, -1, n)?;
            let lhs = DynOp::product(&[r23.clone(), c12.clone(), r23.clone()])?;
            let rhs = DynOp::product(&[c12.clone(), r23, c12])?;
            dyn_residual(&lhs, &rhs, p)
        }
        QdybeForm::Flipped => {
            let p12 = DynOp::constant(TensorOp::swap(n).embed(0, 3)?, mode);
            let p23 = DynOp::constant(TensorOp::swap(n).embed(1, 3)?, mode);
            let r21 = DynOp::product(&[p12.clone(), r.site_op(0, 3, mode), p12])?;
            let r32 = DynOp::product(&[p23.clone(), r.site_op(1, 3, mode), p23])?;
            let c32 = conjugated(&r32, 0, -1, n)?;
            let lhs = DynOp::product(&[r21.clone(), c32.clone(), r21.clone()])?;
            let rhs = DynOp::product(&[c32.clone(), r21, c32])?;
            dyn_residual(&lhs, &rhs, p)
        }
        QdybeForm::ShiftEquivalence => {
            let c23 = conjugated(&r.site_op(1, 3, mode), 0, 1, n)?;
            let direct = DynOp::constant(r.shifted_23(p)?, mode);
            dyn_residual(&c23, &direct, p)
        }
    }
}

/// X_site^power · op · X_site^{−power}.
fn conjugated<S: Scalar>(op: &DynOp<S>, site: usize, power: i64, n: usize) -> Result<DynOp<S>> {
    let k = op.k();
    let mode = op.mode();
    let x = DynOp::x_site(n, k, site, power, mode)?;
    let xi = DynOp::x_site(n, k, site, -power, mode)?;
    DynOp::product(&[x, op.clone(), xi])
}

/// R̂² − 𝟙 − (q − q̄)R̂.
pub fn hecke_residual<S: Scalar>(r: &TensorOp<S>, lambda: &S) -> Result<Residual> {
    let lhs = r.matmul(r)?;
    let rhs = TensorOp::identity(r.n(), r.k()).add(&r.scale(lambda))?;
    Ok(op_residual(&lhs, &rhs))
}

/// Hecke condition, closed-form inverse, and [R̂(p), X_1X_2] = 0 at p.
pub fn verify_hecke_and_weight<S: Scalar>(
    params: &SLnParams<S>,
    p: &WeightPoint,
) -> Result<Checks> {
    let mut checks = Checks::new();
    let r = build_dyn(params, p)?;
    checks.push("hecke", hecke_residual(&r, params.ctx().lambda())?);
    let inv = invert_dyn(params, p)?;
    checks.push(
        "inverse",
        op_residual(&r.matmul(&inv)?, &TensorOp::identity(params.n(), 2)),
    );
    checks.push(
        "inverse-hecke",
        op_residual(
            &inv,
            &r.sub(&TensorOp::scalar(
                params.n(),
                2,
                params.ctx().lambda().clone(),
            ))?,
        ),
    );
    let n = params.n();
    let mode = ShiftMode::Unimodular;
    let rr = DynRMatrix::new(params.clone()).site_op(0, 2, mode);
    let x12 = DynOp::x_sites(n, 2, &[0, 1], 1, mode)?;
    checks.push(
        "weight-zero",
        dyn_residual(&rr.mul(&x12), &x12.mul(&rr), p)?,
    );
    let multiset_ok = r.entries().all(|(row, col, _)| {
        let mut a = crate::tensor::unflatten(n, 2, row);
        let mut b = crate::tensor::unflatten(n, 2, col);
        a.sort_unstable();
        b.sort_unstable();
        a == b
    });
    checks.push(
        "weight-pattern",
        (!multiset_ok).then(|| "entry connects index pairs with different multisets".to_string()),
    );
    Ok(checks)
}

/// Output of the diagonal-conjugation identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop54<S: Scalar> {
    /// D_i = q^{−2p_in}π_in, so D_n = 1.
    pub d: Vec<S>,
    /// σ_ij = q^{2δ_ij}.
    pub sigma: Vec<Vec<S>>,
    pub checks: Checks,
}

/// D_1 R̂(p) D_2^{-1} = R̂(p)^{-1} σ_12, checked entrywise and through the
/// scalar relations a_ij = (a_ij − λδ_ij)σ_ji and D_i/D_j · b_ij = −b_ji σ_ij.
pub fn prop54_check<S: Scalar>(params: &SLnParams<S>, p: &WeightPoint) -> Result<Prop54<S>> {
    let n = params.n();
    let ctx = params.ctx();
    let pi = params.pi_matrix().map_err(|e| {
        Error::RegimeMismatch(format!("the diagonal twist identity needs pi_ij: {e}"))
    })?;
    let d: Vec<S> = (0..n)
        .map(|i| ctx.qpow(-2 * p.pdiff(i, n - 1)).mul_ref(&pi[i][n - 1]))
        .collect();
    let sigma: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ctx.qpow(2) } else { S::one() })
                .collect()
        })
        .collect();
    let r = build_dyn(params, p)?;
    let rinv = invert_dyn(params, p)?;
    let d1 = DiagOp::at_site(&d, 0, 2);
    let d2inv = DiagOp::at_site(&d, 1, 2).inverse()?;
    let sig = DiagOp::from_fn(n, 2, |m| sigma[m[0]][m[1]].clone());
    let lhs = d2inv.mul_right(&d1.mul_left(&r)?)?;
    let rhs = sig.mul_right(&rinv)?;
    let mut checks = Checks::new();
    checks.push("matrix", op_residual(&lhs, &rhs));
    let lambda = ctx.lambda();
    for i in 0..n {
        for j in 0..n {
            let pij = p.pdiff(i, j);
            let a = params.a(i, j, pij)?;
            let shifted = if i == j { a.sub_ref(lambda) } else { a.clone() };
            checks.push(
                format!("swap-{}{}", i + 1, j + 1),
                crate::report::scalar_residual("a", &a, &shifted.mul_ref(&sigma[j][i])),
            );
            let lhs = d[i].div_ref(&d[j])?.mul_ref(&params.b(i, j, pij)?);
            let rhs = params.b(j, i, -pij)?.neg().mul_ref(&sigma[i][j]);
            checks.push(
                format!("diag-{}{}", i + 1, j + 1),
                crate::report::scalar_residual("b", &lhs, &rhs),
            );
        }
    }
    Ok(Prop54 { d, sigma, checks })
}
