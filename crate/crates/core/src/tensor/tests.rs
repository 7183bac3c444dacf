use super::*;
use crate::params::WeightPoint;
use crate::sampling::Sampler;
use crate::scalar::Rational;
use proptest::prelude::*;

type Op = TensorOp<Rational>;

fn r(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn random_op(s: &mut Sampler, n: usize, k: usize, density: i64) -> Op {
    let d = dim(n, k);
    let mut entries = Vec::new();
    for row in 0..d {
        for col in 0..d {
            if s.int(0, 9) < density {
                entries.push((row, col, s.small_rational_nonzero()));
            }
        }
    }
    Op::from_entries(n, k, entries).unwrap()
}

#[test]
fn index_convention() {
    assert_eq!(flatten(3, &[1, 0, 2]), 11);
    assert_eq!(unflatten(3, 3, 11), vec![1, 0, 2]);
    let p = Op::swap(2);
    assert_eq!(p.get_multi(&[0, 1], &[1, 0]), r(1));
    assert_eq!(p.get_multi(&[0, 1], &[0, 1]), r(0));
}

#[test]
fn embed_identity_and_s3_cycle() {
    assert!(Op::identity(3, 1).embed(1, 3).unwrap().is_identity());
    let p12 = Op::swap(2).embed(0, 3).unwrap();
    let p23 = Op::swap(2).embed(1, 3).unwrap();
    let c = p12.matmul(&p23).unwrap();
    let c3 = Op::product([&c, &c, &c]).unwrap();
    assert!(c3.is_identity());
    assert!(!c.is_identity());
    assert!(Op::swap(2).embed(2, 3).is_err());
}

#[test]
fn site_permutation_matches_swaps() {
    // Sites 1→2, 2→3, 3→1.
    let cyc = Op::site_permutation(2, &[1, 2, 0]);
    let p12 = Op::swap(2).embed(0, 3).unwrap();
    let p23 = Op::swap(2).embed(1, 3).unwrap();
    // x⊗y⊗z ↦ z⊗x⊗y equals P12·P23.
    let via_swaps = p12.matmul(&p23).unwrap();
    assert_eq!(cyc, via_swaps);
}

#[test]
fn rank_examples() {
    assert_eq!(Op::zero(2, 2).rank(), 0);
    assert_eq!(Op::identity(3, 2).rank(), 9);
    // Classical antisymmetrizer (1 − P)/2 on V⊗V for n = 3 has rank C(3,2).
    let anti = Op::identity(3, 2)
        .sub(&Op::swap(3))
        .unwrap()
        .scale(&Rational::from_frac(1, 2).unwrap());
    assert_eq!(anti.rank(), 3);
    assert_eq!(anti.kernel_dim(), 6);
}

#[test]
fn rank_of_idempotent_complements() {
    let sym = Op::identity(3, 2)
        .add(&Op::swap(3))
        .unwrap()
        .scale(&Rational::from_frac(1, 2).unwrap());
    let comp = Op::identity(3, 2).sub(&sym).unwrap();
    assert_eq!(sym.rank() + comp.rank(), 9);
}

#[test]
fn inverse_and_dress() {
    let mut s = Sampler::new(9);
    let a = Op::identity(2, 2).add(&random_op(&mut s, 2, 2, 3)).unwrap();
    if a.rank() == 4 {
        let inv = a.inverse().unwrap();
        assert!(a.matmul(&inv).unwrap().is_identity());
    }
    let d = DiagOp::from_fn(2, 2, |m| r(1 + m[0] as i64 + 3 * m[1] as i64));
    assert_eq!(a.dress(&DiagOp::identity(2, 2)).unwrap(), a);
    let diag = d.to_op();
    assert_eq!(diag.dress(&d).unwrap(), diag);
    let back = a.dress(&d).unwrap().dress(&d.inverse().unwrap()).unwrap();
    assert_eq!(back, a);
    assert!(Op::swap(2).sub(&Op::swap(2)).unwrap().inverse().is_err());
}

#[test]
fn dump_round_trip() {
    let mut s = Sampler::new(4);
    let a = random_op(&mut s, 3, 2, 2);
    let text = MatrixDump::from_op(&a).to_json();
    let back: Op = MatrixDump::from_json(&text).unwrap().to_op().unwrap();
    assert_eq!(back, a);
    assert_eq!(MatrixDump::from_op(&back).to_json(), text);
    let p = MatrixDump::from_op(&Op::swap(2));
    assert_eq!(p.entries[1], (vec![1, 2], vec![2, 1], "1/1".to_string()));
}

#[test]
fn witness_reports_first_entry() {
    let a = Op::identity(2, 1);
    let b = Op::swap(2);
    assert!(a.first_difference(&a).is_none());
    let w = Op::identity(2, 2).first_difference(&b).unwrap();
    assert_eq!((w.row, w.col), (vec![0, 1], vec![0, 1]));
}

#[test]
fn x_conjugation_shifts_argument() {
    // X_1 M(p) X_1^{-1} has entries M(p − v^(i_1)) in block i_1.
    let n = 2;
    let mode = ShiftMode::Unimodular;
    let m = DynOp::from_fn(n, 2, mode, |p: &WeightPoint| {
        Op::from_entries(2, 2, [(0, 0, Rational::from_i64(p.pdiff(0, 1)))])
    });
    let x1 = DynOp::<Rational>::x_site(n, 2, 0, 1, mode).unwrap();
    let x1i = DynOp::<Rational>::x_site(n, 2, 0, -1, mode).unwrap();
    let conj = DynOp::product(&[x1, m, x1i]).unwrap();
    let p = WeightPoint::new(vec![5, 0]).unwrap();
    let got = conj.eval_plain(&p).unwrap();
    // Entry (11,11) sits in block i_1 = 1: p_12 − 1 = 4.
    assert_eq!(got.get(0, 0), r(4));
}

#[test]
fn unimodular_product_is_trivial() {
    let n = 3;
    let prod = DynOp::<Rational>::x_sites(n, 3, &[0, 1, 2], 1, ShiftMode::Unimodular).unwrap();
    let p = WeightPoint::new(vec![1, 2, 3]).unwrap();
    let ev = prod.eval(&p).unwrap();
    // On indices with all three values distinct, X^1X^2X^3 = 1.
    let key = vec![0, 0, 0];
    let coeff = ev.terms().get(&key).unwrap();
    assert_eq!(coeff.get_multi(&[0, 1, 2], &[0, 1, 2]), r(1));
    let free = DynOp::<Rational>::x_sites(n, 3, &[0, 1, 2], 1, ShiftMode::Free).unwrap();
    assert!(free.eval(&p).unwrap().terms().get(&key).is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn matmul_associative(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let a = random_op(&mut s, 2, 2, 3);
        let b = random_op(&mut s, 2, 2, 3);
        let c = random_op(&mut s, 2, 2, 3);
        let l = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let rr = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, rr);
    }

    #[test]
    fn embed_respects_composition(seed in any::<u64>(), pos in 0usize..2) {
        let mut s = Sampler::new(seed);
        let a = random_op(&mut s, 2, 2, 4);
        let b = random_op(&mut s, 2, 2, 4);
        let lhs = a.matmul(&b).unwrap().embed(pos, 3).unwrap();
        let rhs = a.embed(pos, 3).unwrap().matmul(&b.embed(pos, 3).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_matches_dense(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let a = random_op(&mut s, 2, 2, 2);
        let dense: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| a.get(i, j)).collect()).collect();
        prop_assert_eq!(a.rank(), Rational::dense_rank(dense));
        prop_assert_eq!(a.transpose().rank(), a.rank());
    }
}
