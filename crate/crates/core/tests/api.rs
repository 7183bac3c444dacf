use proptest::prelude::*;
use qdyb_core::rmatrix::{hecke_residual, verify_qdybe};
use qdyb_core::{
    build_dyn, invert_dyn, AlphaDraw, Fp64, MatrixDump, ParamsDoc, QdybeForm, Rational, Report, SLnParams,
    Sampler, Scalar, Suite, SuiteConfig, TensorOp,
};

fn draw(seed: u64, n: usize) -> (SLnParams<Rational>, qdyb_core::WeightPoint) {
    let mut s = Sampler::new(seed);
    let ctx = s.q_context::<Rational>(n).unwrap();
    let params = s.generic_params_in(ctx, AlphaDraw::Random).unwrap();
    let p = s.pole_free_point(&params, 3).unwrap();
    (params, p)
}

#[test]
fn document_survives_json_and_rebuilds_the_same_matrix() {
    let (params, p) = draw(3, 3);
    let doc = ParamsDoc::from_params(&params);
    let back = ParamsDoc::from_json(&doc.to_json()).unwrap();
    assert_eq!(back, doc);
    let rebuilt: SLnParams<Rational> = back.to_params().unwrap();
    assert_eq!(build_dyn(&rebuilt, &p).unwrap(), build_dyn(&params, &p).unwrap());
}

#[test]
fn dump_roundtrip() {
    let (params, p) = draw(5, 2);
    let op = build_dyn(&params, &p).unwrap();
    let dump = MatrixDump::from_op(&op);
    let text = serde_json::to_string(&dump).unwrap();
    let back: MatrixDump = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_op::<Rational>().unwrap(), op);
}

#[test]
fn prime_reduction_agrees_with_rationals() {
    let (params, p) = draw(8, 3);
    let doc = ParamsDoc::from_params(&params);
    let modp: SLnParams<Fp64> = doc.to_params().unwrap();
    let exact = MatrixDump::from_op(&build_dyn(&params, &p).unwrap());
    let reduced = build_dyn(&modp, &p).unwrap();
    let lifted: TensorOp<Fp64> = exact.to_op().unwrap();
    assert_eq!(lifted, reduced);
}

#[test]
fn inverse_and_hecke_condition() {
    let (params, p) = draw(13, 3);
    let r = build_dyn(&params, &p).unwrap();
    let prod = r.matmul(&invert_dyn(&params, &p).unwrap()).unwrap();
    assert_eq!(prod, TensorOp::identity(3, 2));
    assert_eq!(hecke_residual(&r, params.ctx().lambda()).unwrap(), None);
}

#[test]
fn reports_serialize_back() {
    let cfg = SuiteConfig {
        draws: 1,
        points: 1,
        ..SuiteConfig::default()
    };
    let r = qdyb_core::run_suite(Suite::Params, &cfg).unwrap();
    let back: Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert!(r.passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generic_draws_satisfy_the_braid_relation(seed in any::<u64>()) {
        let (params, p) = draw(seed, 2);
        for form in QdybeForm::ALL {
            prop_assert_eq!(verify_qdybe(&params, &p, form).unwrap(), None);
        }
    }

    #[test]
    fn weight_zero_pattern(seed in any::<u64>()) {
        let (params, p) = draw(seed, 3);
        let r = build_dyn(&params, &p).unwrap();
        let n = params.n();
        for (row, col, v) in r.entries() {
            let (a, b) = (row / n, row % n);
            let (c, d) = (col / n, col % n);
            prop_assert!(!v.is_zero());
            let mut lhs = [a, b];
            let mut rhs = [c, d];
            lhs.sort();
            rhs.sort();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
