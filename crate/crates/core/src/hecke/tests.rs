use proptest::prelude::*;

use super::*;
use crate::params::SLnParams;
use crate::rmatrix::build_dj;
use crate::sampling::Sampler;
use crate::scalar::{Fp64, QContext, Rational, Scalar};
use crate::tensor::TensorOp;

fn r(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d).unwrap()
}

fn dj_rep(q: Rational, n: usize, k: usize) -> HeckeRep<Rational> {
    let c = QContext::new(q, n).unwrap();
    HeckeRep::constant(&c, &build_dj(&c).op, k).unwrap()
}

fn dyn_rep(seed: u64, n: usize, k: usize) -> (SLnParams<Rational>, HeckeRep<Rational>) {
    let mut s = Sampler::new(seed);
    let params = s.generic_params::<Rational>(n, &r(3, 1)).unwrap();
    let p = s.pole_free_point(&params, k as i64).unwrap();
    let rep = HeckeRep::dynamic(&params, &p, k).unwrap();
    (params, rep)
}

/// Σ_σ sign(σ) σ / j! on the first j sites, built from site permutations.
fn classical_antisym(n: usize, k: usize, j: usize) -> TensorOp<Rational> {
    let mut perms = vec![vec![]];
    for m in 0..j {
        perms = perms
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=m).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, m);
                    q
                })
            })
            .collect();
    }
    let mut sum = TensorOp::zero(n, k);
    for p in &perms {
        let inversions = (0..j)
            .flat_map(|a| (a + 1..j).map(move |b| (a, b)))
            .filter(|&(a, b)| p[a] > p[b])
            .count();
        let mut full: Vec<usize> = p.clone();
        full.extend(j..k);
        let op = TensorOp::site_permutation(n, &full);
        let sign = if inversions % 2 == 0 {
            r(1, 1)
        } else {
            r(-1, 1)
        };
        sum = sum.add(&op.scale(&sign)).unwrap();
    }
    let fact: i64 = (1..=j as i64).product();
    sum.scale(&r(1, fact))
}

#[test]
fn word_images() {
    let rep = dj_rep(r(2, 1), 2, 3);
    assert!(rep.apply(&HeckeWord::one()).unwrap().is_identity());
    let g1 = rep.gen(1).unwrap();
    let gg = rep.apply(&HeckeWord::product_of(&[1, 1])).unwrap();
    let expect = rep.identity().add(&g1.scale(&r(3, 2))).unwrap();
    assert_eq!(gg, expect);
    let w = HeckeWord::gen(2).mul(&HeckeWord::gen_inv(2));
    assert!(rep.apply(&w).unwrap().is_identity());
    assert!(matches!(rep.gen(3), Err(crate::Error::IndexOutOfRange(_))));
    assert_eq!(
        format!("{}", HeckeWord::<Rational>::gen_inv(2)),
        "(1/1) g2^-1"
    );
}

#[test]
fn first_dynamic_generator_is_plain_r() {
    let (params, rep) = dyn_rep(3, 3, 3);
    let Flavor::Dynamic { base } = rep.flavor().clone() else {
        panic!()
    };
    let r12 = crate::rmatrix::build_dyn(&params, &base)
        .unwrap()
        .embed(0, 3)
        .unwrap();
    assert_eq!(rep.gen(1).unwrap(), &r12);
}

#[test]
fn relations_hold_for_all_flavors() {
    for n in 2..=3 {
        let c = QContext::new(r(3, 1), n).unwrap();
        let cst = HeckeRep::constant(&c, &build_dj(&c).op, 4).unwrap();
        assert!(cst.relation_checks().unwrap().passed());
        let (params, dynamic) = dyn_rep(10 + n as u64, n, 4);
        let checks = dynamic.relation_checks().unwrap();
        assert!(checks.passed(), "{:?}", checks.first_failure());
        let Flavor::Dynamic { base } = dynamic.flavor().clone() else {
            panic!()
        };
        let bar = HeckeRep::localized_last(&params, &base, 4).unwrap();
        let checks = bar.relation_checks().unwrap();
        assert!(checks.passed(), "{:?}", checks.first_failure());
    }
}

#[test]
fn dressing_matches_shift_operator_expression() {
    let (params, rep) = dyn_rep(21, 3, 4);
    let Flavor::Dynamic { base } = rep.flavor().clone() else {
        panic!()
    };
    for i in 1..4 {
        let op = dynamic_generator(&params, i, 4)
            .unwrap()
            .eval_plain(&base)
            .unwrap();
        assert_eq!(&op, rep.gen(i).unwrap(), "g{i}");
    }
}

#[test]
fn localized_last_is_conjugate() {
    let (params, rep) = dyn_rep(22, 3, 4);
    let Flavor::Dynamic { base } = rep.flavor().clone() else {
        panic!()
    };
    let bar = HeckeRep::localized_last(&params, &base, 4).unwrap();
    let checks = localized_equivalence(&params, &bar).unwrap();
    assert!(checks.passed(), "{:?}", checks.first_failure());
    assert!(bar.is_localized(3).unwrap());
    assert!(!bar.is_localized(1).unwrap());
}

#[test]
fn dynamic_images_are_nonlocal() {
    for n in 2..=3 {
        let (_, rep) = dyn_rep(30 + n as u64, n, 4);
        assert!(rep.is_localized(1).unwrap());
        assert!(!rep.is_localized(2).unwrap());
        assert!(!rep.is_localized(3).unwrap());
    }
    let cst = dj_rep(r(2, 1), 3, 4);
    assert!((1..4).all(|i| cst.is_localized(i).unwrap()));
}

#[test]
fn second_antisymmetrizer_unfolds() {
    let rep = dj_rep(r(2, 1), 2, 3);
    let a2 = antisym_tower(&rep, 2).unwrap().pop().unwrap();
    assert_eq!(a2.window, (1, 2));
    let c = rep.ctx();
    let expect = TensorOp::scalar(2, 3, c.q().clone())
        .sub(rep.gen(1).unwrap())
        .unwrap()
        .scale(&c.qnum(2).inv().unwrap());
    assert_eq!(a2.op, expect);
}

#[test]
fn tower_properties() {
    let rep = dj_rep(r(2, 1), 3, 4);
    let mut t = Towers::new(&rep);
    for j in 1..=4 {
        let checks = t.property_checks(j).unwrap();
        assert!(checks.passed(), "{:?}", checks.first_failure());
    }
    let (_, rep) = dyn_rep(40, 3, 4);
    let mut t = Towers::new(&rep);
    for j in 1..=4 {
        let checks = t.property_checks(j).unwrap();
        assert!(checks.passed(), "{:?}", checks.first_failure());
    }
}

#[test]
fn windowed_form_needs_full_inner_window() {
    let rep = dj_rep(r(2, 1), 2, 3);
    let mut t = Towers::new(&rep);
    let a3 = t.full(3).unwrap();
    assert_eq!(t.window_from_left(1, 3).unwrap(), a3);
    // Sandwiching with A^(2,2) = 1 instead of A^(2,3) does not give A^(3).
    let c = rep.ctx();
    let literal = TensorOp::scalar(2, 3, c.qpow(2))
        .sub(&rep.gen(1).unwrap().scale(&c.qnum(2)))
        .unwrap()
        .scale(&c.qnum(3).inv().unwrap());
    assert_ne!(literal, a3);
}

#[test]
fn heights() {
    let h = height(&dj_rep(r(2, 1), 2, 3)).unwrap();
    assert_eq!(h.height, Some(2));
    assert!(h.windows.passed());
    let (_, rep) = dyn_rep(50, 3, 4);
    let h = height(&rep).unwrap();
    assert_eq!(h.height, Some(3));
    assert!(h.windows.passed(), "{:?}", h.windows.first_failure());
    let (_, rep) = dyn_rep(51, 3, 3);
    assert_eq!(height(&rep).unwrap().height, Some(3));
    for k in 2..=4 {
        let h = height(&dj_rep(r(1, 1), 1, k)).unwrap();
        assert_eq!(h.height, Some(1));
        assert!(h.windows.passed());
    }
}

#[test]
fn heights_with_windows_up_to_four() {
    for n in 2..=4 {
        let k = n + 1;
        let (_, rep) = dyn_rep(60 + n as u64, n, k);
        let h = height(&rep).unwrap();
        assert_eq!(h.height, Some(n));
        assert!(h.windows.passed(), "{:?}", h.windows.first_failure());
    }
    let (_, rep) = dyn_rep(70, 2, 4);
    let h = height(&rep).unwrap();
    assert_eq!(h.height, Some(2));
    assert!(h.windows.passed(), "{:?}", h.windows.first_failure());
}

#[test]
fn lemma_battery() {
    let one = lemma11_battery(&dj_rep(r(1, 1), 1, 2)).unwrap();
    assert!(one.passed());
    let dj = lemma11_battery(&dj_rep(r(2, 1), 2, 3)).unwrap();
    assert!(dj.passed(), "{:?}", dj.first_failure());
    let (_, rep) = dyn_rep(80, 3, 4);
    let checks = lemma11_battery(&rep).unwrap();
    assert_eq!(checks.items().len(), 6);
    assert!(checks.passed(), "{:?}", checks.first_failure());
}

#[test]
fn lemma_battery_fails_above_height() {
    // On V⊗V⊗V with n = 3 the condition A^(3) = 0 is false.
    let c = QContext::new(r(2, 1), 3).unwrap();
    let rep = HeckeRep::constant(&c, &build_dj(&c).op, 3).unwrap();
    assert!(!lemma11_battery(&rep).unwrap().passed());
}

#[test]
fn alternating_expansion_holds() {
    let rep = dj_rep(r(2, 1), 3, 4);
    for n in 1..=3 {
        assert!(alternating_expansion(&rep, n).unwrap().is_none(), "n={n}");
    }
    let (_, rep) = dyn_rep(90, 3, 4);
    assert!(alternating_expansion(&rep, 3).unwrap().is_none());
}

#[test]
fn inner_automorphisms() {
    let rep = dj_rep(r(2, 1), 2, 4);
    for (i, r_) in [(1, 0), (1, 1), (2, 1), (1, 2)] {
        let c = inner_automorphism(&rep, i, r_).unwrap();
        assert!(c.passed(), "{:?}", c.first_failure());
    }
    let (_, rep) = dyn_rep(91, 3, 4);
    let c = inner_automorphism(&rep, 1, 2).unwrap();
    assert!(c.passed(), "{:?}", c.first_failure());
    assert!(inner_automorphism(&rep, 2, 2).is_err());
}

#[test]
fn ranks_match_classical_oracle() {
    for n in 2..=3 {
        let k = 3;
        let classical = dj_rep(r(1, 1), n, k);
        let generic = dj_rep(r(5, 2), n, k);
        let (_, dynamic) = dyn_rep(100 + n as u64, n, k);
        let mut tc = Towers::new(&classical);
        for j in 1..=n.min(k) {
            let oracle = classical_antisym(n, k, j);
            assert_eq!(tc.full(j).unwrap(), oracle);
            let expect = oracle.rank();
            assert_eq!(Towers::new(&generic).full(j).unwrap().rank(), expect);
            assert_eq!(Towers::new(&dynamic).full(j).unwrap().rank(), expect);
            assert!(rank_formula(&dynamic, j).unwrap().is_none());
        }
    }
}

#[test]
fn symmetrizers() {
    let rep = dj_rep(r(2, 1), 2, 3);
    let tower = symmetrizer_tower(&rep, 3).unwrap();
    let ranks: Vec<usize> = tower.iter().map(|a| a.op.rank()).collect();
    assert_eq!(ranks, vec![8, 6, 4]);
    for a in &tower {
        assert_eq!(a.op.matmul(&a.op).unwrap(), a.op);
    }
}

#[test]
fn prime_backend_height() {
    let c = QContext::new(Fp64::from_i64(7), 3).unwrap();
    let rep = HeckeRep::constant(&c, &build_dj(&c).op, 4).unwrap();
    assert_eq!(height(&rep).unwrap().height, Some(3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn dynamic_reps_have_height_n(seed in 0u64..1000, n in 2usize..=3) {
        let (_, rep) = dyn_rep(seed, n, n + 1);
        prop_assert!(rep.relation_checks().unwrap().passed());
        let h = height(&rep).unwrap();
        prop_assert_eq!(h.height, Some(n));
        prop_assert!(lemma11_battery(&rep).unwrap().passed());
    }
}
