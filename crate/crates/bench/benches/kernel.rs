use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qdyb_core::hecke::{height, HeckeRep};
use qdyb_core::levi::build_eps_dyn;
use qdyb_core::qmatrix::{eps_bra, replay};
use qdyb_core::rmatrix::verify_qdybe;
use qdyb_core::{
    build_dyn, AlphaDraw, EpsTensor, Fp64, QdybeForm, Rational, SLnParams, Sampler, Scalar, Variance, WeightPoint,
    Workspace,
};

fn setup<S: Scalar>(n: usize, seed: u64, root: bool) -> (SLnParams<S>, WeightPoint) {
    let mut s = Sampler::new(seed);
    let ctx = if root {
        s.q_context_with_root::<S>(n).unwrap()
    } else {
        s.q_context::<S>(n).unwrap()
    };
    let params = s.generic_params_in(ctx, AlphaDraw::Random).unwrap();
    let p = s.pole_free_point(&params, 2 * n as i64 + 2).unwrap();
    (params, p)
}

fn rmatrix(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_dyn");
    for n in [2, 3, 4] {
        let (params, p) = setup::<Rational>(n, 1, false);
        g.bench_with_input(BenchmarkId::new("rational", n), &n, |b, _| b.iter(|| build_dyn(&params, &p).unwrap()));
        let (params, p) = setup::<Fp64>(n, 1, false);
        g.bench_with_input(BenchmarkId::new("prime", n), &n, |b, _| b.iter(|| build_dyn(&params, &p).unwrap()));
    }
    g.finish();
}

fn qdybe(c: &mut Criterion) {
    let mut g = c.benchmark_group("qdybe");
    g.sample_size(10);
    for n in [2, 3, 4] {
        let (params, p) = setup::<Rational>(n, 2, false);
        for form in [QdybeForm::Shifted, QdybeForm::XConjugated] {
            g.bench_with_input(BenchmarkId::new(form.name(), n), &n, |b, _| {
                b.iter(|| verify_qdybe(&params, &p, form).unwrap())
            });
        }
    }
    g.finish();
}

fn hecke(c: &mut Criterion) {
    let mut g = c.benchmark_group("height");
    g.sample_size(10);
    for n in [2, 3] {
        let (params, p) = setup::<Rational>(n, 3, false);
        let rep = HeckeRep::dynamic(&params, &p, n + 1).unwrap();
        g.bench_with_input(BenchmarkId::new("dynamic", n), &n, |b, _| b.iter(|| height(&rep).unwrap()));
    }
    g.finish();
}

fn epsilon(c: &mut Criterion) {
    let mut g = c.benchmark_group("eps_contraction");
    for n in [3, 4, 5] {
        let (params, p) = setup::<Rational>(n, 4, false);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| {
                let up = build_eps_dyn(&params, &p, Variance::Contra).unwrap();
                let down = build_eps_dyn(&params, &p, Variance::Co).unwrap();
                EpsTensor::contract(&down, &up).unwrap()
            })
        });
    }
    g.finish();
}

fn derivation(c: &mut Criterion) {
    let (params, p) = setup::<Rational>(2, 5, true);
    let ws = Workspace::new(&params, &p).unwrap();
    let d = eps_bra(2);
    c.bench_function("replay eps bra n=2", |b| b.iter(|| replay(&d, &ws).unwrap()));
}

criterion_group!(benches, rmatrix, qdybe, hecke, epsilon, derivation);
criterion_main!(benches);
