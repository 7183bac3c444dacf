use proptest::prelude::*;

use super::*;
use crate::hecke::HeckeRep;
use crate::params::{BetaChain, PairTable, SLnParams, WeightPoint};
use crate::rmatrix::build_dj;
use crate::sampling::Sampler;
use crate::scalar::{QContext, Rational, Scalar};

fn r(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d).unwrap()
}

fn ctx(q: Rational, n: usize) -> QContext<Rational> {
    QContext::new(q, n).unwrap()
}

fn generic(seed: u64, n: usize, margin: i64) -> (SLnParams<Rational>, WeightPoint) {
    let mut s = Sampler::new(seed);
    let params = s.generic_params::<Rational>(n, &r(3, 1)).unwrap();
    let p = s.pole_free_point(&params, margin).unwrap();
    (params, p)
}

fn assert_pass(c: &Checks) {
    assert!(c.passed(), "{:?}", c.first_failure());
}

#[test]
fn constant_components_for_two() {
    let c = ctx(r(2, 1), 2);
    let up = build_eps_const(&c, Variance::Contra);
    let down = build_eps_const(&c, Variance::Co);
    assert_eq!(up.get(&[0, 1]), r(1, 2));
    assert_eq!(up.get(&[1, 0]), r(-1, 1));
    assert_eq!(down.get(&[0, 1]), r(1, 1));
    assert_eq!(down.get(&[1, 0]), r(-2, 1));
    assert_eq!(up.get(&[0, 0]), r(0, 1));
    assert_eq!(up.to_json().replace([' ', '\n'], ""), r#"{"12":"1/2","21":"-1/1"}"#);
}

#[test]
fn rank_one_tensor_is_one() {
    let c = ctx(r(5, 3), 1);
    assert_eq!(build_eps_const(&c, Variance::Contra).get(&[0]), r(1, 1));
    assert_eq!(build_eps_const(&c, Variance::Co).get(&[0]), r(1, 1));
}

#[test]
fn permutation_helpers() {
    assert_eq!(permutations(&[0, 1, 2]).len(), 6);
    assert_eq!(inversions(&[2, 0, 1]), 2);
    assert_eq!(inversions(&[3, 2, 1, 0]), 6);
}

#[test]
fn constant_normalization() {
    for n in 1..=5 {
        let c = ctx(r(3, 2), n);
        let v = EpsTensor::contract(
            &build_eps_const(&c, Variance::Co),
            &build_eps_const(&c, Variance::Contra),
        )
        .unwrap();
        // Σ_σ q^{2ℓ(σ)} q̄^{n(n−1)/2} by direct enumeration.
        let oracle = permutations(&(0..n).collect::<Vec<_>>())
            .iter()
            .fold(r(0, 1), |acc, s| {
                acc.add_ref(&c.qpow(2 * inversions(s) as i64 - (n * (n - 1) / 2) as i64))
            });
        assert_eq!(v, oracle);
        assert_eq!(v, c.qfact(n), "n = {n}");
    }
}

#[test]
fn dynamic_example_components() {
    let c = ctx(r(2, 1), 2);
    let params = SLnParams::new(c, BetaChain::Finite(vec![r(1, 1)]), PairTable::trivial(2)).unwrap();
    let p = WeightPoint::from_pdiff(2, &[2]).unwrap();
    let up = build_eps_dyn(&params, &p, Variance::Contra).unwrap();
    assert_eq!(up.get(&[0, 1]), r(6, 11));
    // π_21 = 1/π_12 = −2 gives β_21 = 1/2, so ξ_21(−2) = f(−3, 1/2)/f(−2, 1/2).
    assert_eq!(params.beta(1, 0).unwrap(), &r(1, 2));
    assert_eq!(up.get(&[1, 0]), r(-43, 22));
    let down = build_eps_dyn(&params, &p, Variance::Co).unwrap();
    assert_eq!(down.get(&[0, 1]), r(1, 1));
    assert_eq!(down.get(&[1, 0]), r(-1, 1));
}

#[test]
fn dynamic_normalization_and_products() {
    for n in 2..=5 {
        let (params, p) = generic(10 + n as u64, n, 1);
        let up = build_eps_dyn(&params, &p, Variance::Contra).unwrap();
        let down = build_eps_dyn(&params, &p, Variance::Co).unwrap();
        assert_eq!(EpsTensor::contract(&down, &up).unwrap(), params.ctx().qfact(n));
        for (idx, x) in down.entries() {
            let mut prod = r(1, 1);
            for a in 0..n {
                for b in a + 1..n {
                    prod = prod.mul_ref(&params.xi(idx[a], idx[b], p.pdiff(idx[a], idx[b])).unwrap());
                }
            }
            assert_eq!(x.mul_ref(&up.get(idx)), prod);
        }
    }
}

#[test]
fn standard_point_reproduces_constant_tensors() {
    for n in 2..=4 {
        let c = ctx(r(3, 1), n);
        let params = SLnParams::standard(c.clone()).unwrap();
        let p = WeightPoint::new(vec![4, -1, 7, 2][..n].to_vec()).unwrap();
        for v in [Variance::Contra, Variance::Co] {
            let d = build_eps_dyn(&params, &p, v).unwrap();
            assert_eq!(d.entries(), build_eps_const(&c, v).entries(), "n = {n}");
        }
    }
}

#[test]
fn eigenvectors_constant() {
    for n in 2..=3 {
        let c = ctx(r(2, 1), n);
        let rep = HeckeRep::constant(&c, &build_dj(&c).op, n).unwrap();
        for v in [Variance::Contra, Variance::Co] {
            assert_pass(&eigencheck(&build_eps_const(&c, v), &rep).unwrap());
        }
    }
}

#[test]
fn eigenvectors_dynamic() {
    for n in 2..=3 {
        let (params, p) = generic(40 + n as u64, n, n as i64);
        let rep = HeckeRep::dynamic(&params, &p, n).unwrap();
        for v in [Variance::Contra, Variance::Co] {
            let e = build_eps_dyn(&params, &p, v).unwrap();
            let checks = eigencheck(&e, &rep).unwrap();
            assert_pass(&checks);
            assert!(checks.items().iter().any(|(n, _)| n == "joint eigenspace dimension"));
        }
    }
}

#[test]
fn eigencheck_rejects_wrong_vector() {
    let c = ctx(r(2, 1), 2);
    let rep = HeckeRep::constant(&c, &build_dj(&c).op, 2).unwrap();
    let mut e = build_eps_const(&c, Variance::Contra);
    e.entries.insert(vec![0, 1], r(1, 1));
    assert!(!eigencheck(&e, &rep).unwrap().passed());
    let wrong_sites = HeckeRep::constant(&c, &build_dj(&c).op, 3).unwrap();
    assert!(eigencheck(&e, &wrong_sites).is_err());
}

#[test]
fn projectors_constant() {
    for (n, k) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
        let c = ctx(r(2, 1), n);
        let rep = HeckeRep::constant(&c, &build_dj(&c).op, k).unwrap();
        let checks = projector_checks(EpsSource::Constant(&c), &rep).unwrap();
        assert_pass(&checks);
        let p = projector_from_eps(EpsSource::Constant(&c), 1, k).unwrap();
        assert_eq!(p.matmul(&p).unwrap(), p);
    }
}

#[test]
fn projectors_dynamic() {
    for (n, k) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
        let (params, p) = generic(70 + (n * k) as u64, n, k as i64 + 1);
        let rep = HeckeRep::dynamic(&params, &p, k).unwrap();
        let source = EpsSource::Dynamic(&params, &p);
        assert_pass(&projector_checks(source, &rep).unwrap());
        let last = projector_from_eps(source, k + 1 - n, k).unwrap();
        assert_eq!(last.matmul(&last).unwrap(), last);
    }
}

#[test]
fn projector_window_bounds() {
    let c = ctx(r(2, 1), 2);
    assert!(projector_from_eps(EpsSource::Constant(&c), 0, 3).is_err());
    assert!(projector_from_eps(EpsSource::Constant(&c), 3, 3).is_err());
}

#[test]
fn constant_n_and_k_are_identity() {
    for n in 1..=4 {
        let c = ctx(r(5, 2), n);
        let nk = build_nk_const(&c).unwrap();
        let id = crate::tensor::TensorOp::identity(n, 1);
        assert_eq!(nk.n_mat, id);
        assert_eq!(nk.k_mat, id);
    }
}

#[test]
fn constant_shift_relations() {
    for n in 2..=3 {
        let c = ctx(r(2, 1), n);
        let rep = HeckeRep::constant(&c, &build_dj(&c).op, n + 1).unwrap();
        assert_pass(&relations_const(&rep).unwrap());
    }
}

#[test]
fn dynamic_two_closed_form() {
    let (params, p) = generic(91, 2, 3);
    let nk = build_nk(&params, &p).unwrap();
    let p12 = p.pdiff(0, 1);
    let expect = params
        .alpha()
        .eval(0, 1, p12 - 1)
        .unwrap()
        .mul_ref(&params.xi(0, 1, p12).unwrap());
    assert_eq!(nk.n_mat.get(0, 0), expect);
    assert_eq!(nk.n_mat.get(0, 0), nk_closed_form(&params, &p).unwrap()[0]);
    assert_pass(&nk.checks().unwrap());
}

#[test]
fn dynamic_shift_relations() {
    for n in 2..=3 {
        for seed in 0..3 {
            let (params, p) = generic(100 + 7 * seed + n as u64, n, n as i64 + 2);
            let rep = HeckeRep::dynamic(&params, &p, n + 1).unwrap();
            assert_pass(&relations_dyn(&params, &rep).unwrap());
        }
    }
}

#[test]
fn relations_need_extra_site() {
    let (params, p) = generic(5, 2, 3);
    let rep = HeckeRep::dynamic(&params, &p, 2).unwrap();
    assert!(relations_dyn(&params, &rep).is_err());
}

#[test]
fn two_index_sum_is_two_d_minus_lambda() {
    let c = ctx(r(3, 1), 3);
    let d = r(7, 5);
    let t = XiTable::from_points(&c, d.clone(), &[r(1, 1), r(2, 1), r(-3, 4)]).unwrap();
    let two_d_minus_lambda = d.add_ref(&d).sub_ref(c.lambda());
    assert_eq!(t.full_sum(&[0, 2]), two_d_minus_lambda);
    assert_eq!(t.full_sum(&[1]), r(1, 1));
    assert_pass(&appendix_bruteforce(&t, 1).unwrap());
}

#[test]
fn appendix_generic_d() {
    let c = ctx(r(5, 2), 6);
    let xs: Vec<Rational> = [2, -1, 5, 3, -7, 11].iter().map(|&x| r(x, 3)).collect();
    let t = XiTable::from_points(&c, r(-4, 9), &xs).unwrap();
    assert_pass(&appendix_bruteforce(&t, 6).unwrap());
    assert_pass(&cycle_identity(&t, 5).unwrap());
}

#[test]
fn appendix_from_parameters() {
    let (params, p) = generic(3, 5, 1);
    let t = XiTable::from_params(&params, &p).unwrap();
    let checks = appendix_bruteforce(&t, 5).unwrap();
    assert_pass(&checks);
    assert_eq!(t.full_sum(&[0, 1, 2, 3, 4]), params.ctx().qfact(5));
    assert_pass(&xi_only_checks(&t, 5).unwrap());
    for len in 2..=5 {
        assert_pass(&cycle_identity(&t, len).unwrap());
    }
    assert_pass(&pi_relation(&params, &p).unwrap());
}

#[test]
fn appendix_reports_broken_table() {
    let c = ctx(r(2, 1), 3);
    let mut xi = vec![vec![r(2, 1); 3]; 3];
    xi[0][1] = r(1, 1);
    let t = XiTable::from_xi(&c, xi);
    let checks = xi_only_checks(&t, 3).unwrap();
    assert!(!checks.passed());
    assert!(checks.first_failure().unwrap().contains("pair sum"));
    assert!(appendix_bruteforce(&t, 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn b_row_sums_hold_for_random_points(
        xs in proptest::collection::btree_set(-40i64..40, 6),
        qn in 2i64..9,
        d in -9i64..9,
    ) {
        let c = ctx(r(qn, 3), 6);
        let xs: Vec<Rational> = xs.into_iter().map(|x| r(x, 1)).collect();
        prop_assume!(xs.iter().all(|x| !x.is_zero()));
        let t = XiTable::from_points(&c, r(d, 2), &xs).unwrap();
        let checks = appendix_bruteforce(&t, 6).unwrap();
        prop_assert!(checks.passed(), "{:?}", checks.first_failure());
    }

    #[test]
    fn dynamic_normalization_random(seed in 0u64..1000, n in 2usize..5) {
        let (params, p) = generic(seed, n, 1);
        let up = build_eps_dyn(&params, &p, Variance::Contra).unwrap();
        let down = build_eps_dyn(&params, &p, Variance::Co).unwrap();
        prop_assert_eq!(EpsTensor::contract(&down, &up).unwrap(), params.ctx().qfact(n));
    }

    #[test]
    fn n_times_k_is_identity(seed in 0u64..1000, n in 2usize..5) {
        let (params, p) = generic(seed, n, 2);
        let checks = build_nk(&params, &p).unwrap().checks().unwrap();
        prop_assert!(checks.passed(), "{:?}", checks.first_failure());
        let closed = nk_closed_form(&params, &p).unwrap();
        let nk = build_nk(&params, &p).unwrap();
        for (i, v) in closed.iter().enumerate() {
            prop_assert_eq!(&nk.n_mat.get(i, i), v);
        }
    }
}
