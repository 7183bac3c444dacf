use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::params::{SLnParams, WeightPoint};
use crate::sampling::{AlphaDraw, Sampler};
use crate::scalar::{Fp64, Rational, Scalar};

fn draws<S: Scalar>(seed: u64, n: usize, points: usize) -> (SLnParams<S>, Vec<WeightPoint>) {
    let mut s = Sampler::new(seed);
    let ctx = s.q_context_with_root::<S>(n).unwrap();
    let params = s.generic_params_in(ctx, AlphaDraw::Random).unwrap();
    let ps = (0..points)
        .map(|_| s.pole_free_point(&params, 2 * n as i64 + 2).unwrap())
        .collect();
    (params, ps)
}

fn basic(n: usize) -> Vec<Derivation> {
    vec![
        eps_bra(n),
        eps_ket(n),
        det_function(n, "q^p12", ScalarFn::QPow { i: 1, j: 2, e: 1 }),
        det_function(n, "f(p12)", ScalarFn::F { i: 1, j: 2 }),
        det_commute(n),
        left_inverse(n),
        right_inverse(n),
        central(n),
        m_commutes_with_d(n),
    ]
}

fn certified<S: Scalar>(params: &SLnParams<S>, p: &WeightPoint) -> Workspace<S> {
    let ws = Workspace::new(params, p).unwrap();
    for d in [eps_bra(params.n()), eps_ket(params.n()), det_commute(params.n())] {
        assert!(replay(&d, &ws).unwrap().passed(), "{}", d.name);
    }
    ws
}

fn ends<S: Scalar>(d: &Derivation, ws: &Workspace<S>) -> (SlotExpr<S>, SlotExpr<S>) {
    (SlotExpr::compile(&d.start, ws).unwrap(), SlotExpr::compile(&d.end, ws).unwrap())
}

fn assert_all_pass<S: Scalar>(ds: &[Derivation], params: &SLnParams<S>, points: &[WeightPoint]) {
    for p in points {
        let ws = Workspace::new(params, p).unwrap();
        for out in replay_all(ds, &ws).unwrap() {
            assert!(out.passed(), "{} at {:?}: {:?}", out.name, p, out.mismatch);
        }
    }
}

#[test]
fn basic_derivations_rank_two() {
    for seed in 0..5 {
        let (params, points) = draws::<Rational>(seed, 2, 5);
        assert_all_pass(&basic(2), &params, &points);
    }
}

#[test]
fn basic_derivations_rank_three() {
    for seed in 0..5 {
        let (params, points) = draws::<Fp64>(100 + seed, 3, 5);
        assert_all_pass(&basic(3), &params, &points);
    }
}

#[test]
fn basic_derivations_rank_three_rational() {
    let (params, points) = draws::<Rational>(7, 3, 1);
    assert_all_pass(&basic(3), &params, &points);
}

#[test]
fn exchange_and_reflection_rank_two() {
    let mut ds = basic(2);
    ds.push(m_exchange(2));
    ds.push(reflection(2));
    for seed in 0..5 {
        let (params, points) = draws::<Fp64>(200 + seed, 2, 5);
        assert_all_pass(&ds, &params, &points);
    }
    let (params, points) = draws::<Rational>(7, 2, 1);
    assert_all_pass(&ds, &params, &points);
}

#[test]
fn exchange_rank_three() {
    let mut ds = basic(3);
    ds.push(m_exchange(3));
    for seed in 0..2 {
        let (params, points) = draws::<Fp64>(300 + seed, 3, 2);
        assert_all_pass(&ds, &params, &points);
    }
}

#[test]
fn replay_certifies_what_it_provides() {
    let (params, points) = draws::<Rational>(1, 2, 1);
    let ws = Workspace::new(&params, &points[0]).unwrap();
    assert!(!ws.has("eps-ket"));
    replay(&eps_ket(2), &ws).unwrap();
    assert!(ws.has("eps-ket"));
    assert!(!ws.has("det-commute"));
    replay(&det_commute(2), &ws).unwrap();
    assert!(ws.has("det-commute"));
}

#[test]
fn missing_certificate_is_reported() {
    let (params, points) = draws::<Rational>(2, 2, 1);
    let ws = Workspace::new(&params, &points[0]).unwrap();
    assert_eq!(replay(&det_commute(2), &ws), Err(Error::MissingCertificate("eps-ket".into())));
    assert_eq!(replay(&left_inverse(2), &ws), Err(Error::MissingCertificate("eps-bra".into())));
    replay(&eps_ket(2), &ws).unwrap();
    assert_eq!(replay(&central(2), &ws), Err(Error::MissingCertificate("det-commute".into())));
}

#[test]
fn failed_move_reports_its_index() {
    let (params, points) = draws::<Rational>(3, 2, 1);
    let ws = Workspace::new(&params, &points[0]).unwrap();
    let mut d = eps_bra(2);
    d.moves.swap(0, 1);
    match replay(&d, &ws) {
        Err(Error::MoveFailed { index, kind, .. }) => {
            assert_eq!(index, 1);
            assert_eq!(kind, "EpsCollapse");
        }
        other => panic!("expected a failed move, got {other:?}"),
    }
    let ws = certified(&params, &points[0]);
    let mut d = m_exchange(2);
    d.end_moves.remove(0);
    match replay(&d, &ws) {
        Err(Error::MoveFailed { index, kind, .. }) => {
            assert_eq!(index, d.moves.len() + 3);
            assert_eq!(kind, "EpsCollapse");
        }
        other => panic!("expected a failed move, got {other:?}"),
    }
}

#[test]
fn root_is_required_for_m_identities() {
    let mut s = Sampler::new(4);
    let ctx = s.q_context::<Rational>(2).unwrap();
    let params = s.generic_params_in(ctx, AlphaDraw::Random).unwrap();
    let p = s.pole_free_point(&params, 6).unwrap();
    let ws = certified(&params, &p);
    assert_eq!(replay(&m_exchange(2), &ws), Err(Error::MissingRoot));
    assert_eq!(replay(&m_commutes_with_d(2), &ws), Err(Error::MissingRoot));
}

#[test]
fn wrong_ends_do_not_replay() {
    let (params, points) = draws::<Rational>(5, 2, 1);
    let ws = certified(&params, &points[0]);
    let mut d = m_exchange(2);
    d.end.factors[1] = Factor::Scalar {
        f: ScalarFn::RootPow { e: 0 },
    };
    assert!(!replay(&d, &ws).unwrap().passed());
    let mut d = central(2);
    d.start.factors[0] = Factor::Scalar {
        f: ScalarFn::constant("1"),
    };
    d.end.factors[1] = Factor::Scalar {
        f: ScalarFn::constant("1"),
    };
    assert!(!replay(&d, &ws).unwrap().passed());
    let mut d = left_inverse(2);
    d.provides.push("bogus".into());
    d.end.factors[0] = Factor::Delta {
        up: "u".into(),
        lo: "y".into(),
    };
    let out = replay(&d, &ws).unwrap();
    assert_eq!(out.passed(), ws.const_diag(ConstDiagKind::N).unwrap().iter().all(|x| x.is_one()));
    assert_eq!(ws.has("bogus"), out.passed());
}

#[test]
fn oracle_confirms_every_shipped_identity() {
    let (params, points) = draws::<Rational>(7, 2, 2);
    for p in &points {
        let ws = certified(&params, p);
        for d in basic(2).into_iter().chain([m_exchange(2), reflection(2)]) {
            let (a, b) = ends(&d, &ws);
            assert_eq!(membership(&a, &b, &ws, 4096).unwrap(), Verdict::Equal, "{}", d.name);
        }
    }
}

#[test]
fn oracle_rejects_corrupted_identities() {
    let (params, points) = draws::<Rational>(7, 2, 1);
    let ws = certified(&params, &points[0]);
    let unequal = |d: &Derivation| {
        let (a, b) = ends(d, &ws);
        matches!(membership(&a, &b, &ws, 4096).unwrap(), Verdict::Unequal { .. })
    };
    let mut d = m_exchange(2);
    d.end.factors[1] = Factor::Scalar {
        f: ScalarFn::RootPow { e: 0 },
    };
    assert!(unequal(&d));
    let mut d = reflection(2);
    let Factor::Rhat { inverse, .. } = &mut d.end.factors[2] else {
        panic!("R̂ expected")
    };
    *inverse = false;
    assert!(unequal(&d));
    let mut d = central(2);
    d.start.factors[0] = Factor::Scalar {
        f: ScalarFn::constant("1"),
    };
    d.end.factors[1] = Factor::Scalar {
        f: ScalarFn::constant("1"),
    };
    assert!(unequal(&d));
}

#[test]
fn oracle_respects_the_size_limit() {
    let (params, points) = draws::<Rational>(7, 2, 1);
    let ws = certified(&params, &points[0]);
    let (a, b) = ends(&reflection(2), &ws);
    assert!(matches!(membership(&a, &b, &ws, 16).unwrap(), Verdict::Inconclusive { .. }));
}

#[test]
fn derivations_roundtrip_through_json() {
    let mut ds = basic(3);
    ds.push(m_exchange(3));
    ds.push(reflection(2));
    for d in ds {
        let back = Derivation::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }
    assert!(matches!(Derivation::from_json("{\"name\": 1}"), Err(Error::Parse(_))));
}

#[test]
fn script_json_uses_snake_case_tags() {
    let text = eps_bra(2).to_json();
    assert!(text.contains("\"move\": \"intertwine_lr\""));
    assert!(text.contains("\"kind\": \"eps_lo_dyn\""));
    assert!(text.contains("\"mode\": \"definition\""));
}

#[test]
fn compile_rejects_mixed_sides() {
    let (params, points) = draws::<Rational>(7, 2, 1);
    let ws = Workspace::new(&params, &points[0]).unwrap();
    let spec = ExprSpec {
        factors: vec![Factor::A {
            row: "i".into(),
            col: "i".into(),
        }],
        free_rows: vec![],
        free_cols: vec![],
    };
    assert!(matches!(SlotExpr::compile(&spec, &ws), Err(Error::Invalid(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn inverses_replay_at_random_draws(seed in 0u64..10_000) {
        let (params, points) = draws::<Fp64>(seed, 2, 1);
        let ws = certified(&params, &points[0]);
        for d in [left_inverse(2), right_inverse(2), central(2)] {
            prop_assert!(replay(&d, &ws).unwrap().passed());
        }
    }

    #[test]
    fn det_commutes_with_powers_of_q(seed in 0u64..10_000, e in -3i64..=3) {
        let (params, points) = draws::<Fp64>(seed, 3, 1);
        let ws = Workspace::new(&params, &points[0]).unwrap();
        let d = det_function(3, "q^p", ScalarFn::QPow { i: 1, j: 3, e });
        prop_assert!(replay(&d, &ws).unwrap().passed());
    }
}
