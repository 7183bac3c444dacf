//! Deterministic random draws of parameters and weight points.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::params::{BetaChain, GeomFn, PairTable, SLnParams, WeightPoint};
use crate::scalar::{Backend, QContext, Scalar};

const MAX_TRIES: usize = 500;

/// How α is chosen in a random draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaDraw {
    Trivial,
    Standard,
    /// Random c_ij and w_ij (half of the pairs get w = 1).
    Random,
}

/// Seeded source of all random choices. The same seed gives the same draws.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// ±a/b with 1 ≤ a ≤ 9, 1 ≤ b ≤ 5.
    pub fn small_rational_nonzero<S: Scalar>(&mut self) -> S {
        let a = self.rng.gen_range(1..=9i64);
        let b = self.rng.gen_range(1..=5i64);
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        S::from_frac(sign * a, b).expect("nonzero denominator")
    }

    /// A nonzero scalar. On the prime backend this is a uniform residue,
    /// which is what makes identity checks there meaningful.
    pub fn scalar_nonzero<S: Scalar>(&mut self) -> S {
        match S::BACKEND {
            Backend::Rational => self.small_rational_nonzero(),
            Backend::Prime => loop {
                let v: u64 = self.rng.gen();
                let s =
                    S::from_ratio(&BigInt::from(v), &BigInt::from(1)).expect("unit denominator");
                if !s.is_zero() {
                    break s;
                }
            },
        }
    }

    /// q for a rank-n context: a random value with q² ≠ 1 passing the genericity guard.
    pub fn q_context<S: Scalar>(&mut self, n: usize) -> Result<QContext<S>> {
        for _ in 0..MAX_TRIES {
            if let Ok(ctx) = QContext::<S>::new(self.scalar_nonzero(), n) {
                if ctx.lambda().is_zero() {
                    continue;
                }
                return Ok(ctx);
            }
        }
        Err(Error::Invalid("could not draw a generic q".into()))
    }

    /// Context with q = r^n for a random r.
    pub fn q_context_with_root<S: Scalar>(&mut self, n: usize) -> Result<QContext<S>> {
        for _ in 0..MAX_TRIES {
            if let Ok(ctx) = QContext::<S>::with_root(self.scalar_nonzero(), n) {
                if ctx.lambda().is_zero() {
                    continue;
                }
                return Ok(ctx);
            }
        }
        Err(Error::Invalid("could not draw a generic root".into()))
    }

    pub fn alpha<S: Scalar>(&mut self, ctx: &QContext<S>, draw: AlphaDraw) -> Result<PairTable<S>> {
        match draw {
            AlphaDraw::Trivial => Ok(PairTable::trivial(ctx.n())),
            AlphaDraw::Standard => Ok(PairTable::standard(ctx)),
            AlphaDraw::Random => self.pair_table(ctx.n()),
        }
    }

    /// Random table c·w^p obeying the pairing constraint.
    pub fn pair_table<S: Scalar>(&mut self, n: usize) -> Result<PairTable<S>> {
        let mut upper = vec![vec![GeomFn::one(); n]; n];
        for row in upper.iter_mut().take(n) {
            for e in row.iter_mut() {
                let c = self.scalar_nonzero();
                let w = if self.rng.gen_bool(0.5) {
                    S::one()
                } else {
                    self.scalar_nonzero()
                };
                *e = GeomFn::geometric(c, w);
            }
        }
        PairTable::from_upper(n, |i, j| upper[i][j].clone())
    }

    /// Generic β chain (every β_ij off the diagonal avoids 0 and λ) with a
    /// random α table.
    pub fn generic_params<S: Scalar>(&mut self, n: usize, q: &S) -> Result<SLnParams<S>> {
        let ctx = QContext::new(q.clone(), n)?;
        self.generic_params_in(ctx, AlphaDraw::Random)
    }

    pub fn generic_params_in<S: Scalar>(
        &mut self,
        ctx: QContext<S>,
        draw: AlphaDraw,
    ) -> Result<SLnParams<S>> {
        let n = ctx.n();
        let lambda = ctx.lambda().clone();
        for _ in 0..MAX_TRIES {
            let chain: Vec<S> = (0..n.saturating_sub(1))
                .map(|_| self.scalar_nonzero())
                .collect();
            let alpha = self.alpha(&ctx, draw)?;
            let Ok(params) = SLnParams::new(ctx.clone(), BetaChain::Finite(chain), alpha) else {
                continue;
            };
            let m = params.beta_matrix()?;
            let ok =
                (0..n).all(|i| (0..n).all(|j| i == j || (!m[i][j].is_zero() && m[i][j] != lambda)));
            if ok {
                return Ok(params);
            }
        }
        Err(Error::Invalid(
            "could not draw generic beta parameters".into(),
        ))
    }

    /// p with every ξ_ij(p_ij + t), |t| ≤ margin, finite and nonzero. Small
    /// weights are tried first.
    pub fn pole_free_point<S: Scalar>(
        &mut self,
        params: &SLnParams<S>,
        margin: i64,
    ) -> Result<WeightPoint> {
        self.pole_free_point_for(&[(params, margin)])
    }

    /// A point that is pole free for every parameter set in `all`, each with
    /// its own margin.
    pub fn pole_free_point_for<S: Scalar>(&mut self, all: &[(&SLnParams<S>, i64)]) -> Result<WeightPoint> {
        let n = all.first().map_or(0, |(p, _)| p.n());
        let margin = all.iter().map(|&(_, m)| m).max().unwrap_or(0);
        let widest = 6 + 2 * margin * n as i64;
        for attempt in 0..MAX_TRIES {
            let spread = (1 + attempt as i64 / 8).min(widest);
            let p: Vec<i64> = (0..n).map(|_| self.int(-spread, spread)).collect();
            let w = WeightPoint::new(p)?;
            if all.iter().all(|&(params, m)| is_pole_free(params, &w, m)) {
                return Ok(w);
            }
        }
        Err(Error::DynamicalPole(
            "no pole-free weight point found".into(),
        ))
    }
}

/// True when ξ_ij(p_ij + t) is defined and nonzero for all i ≠ j, |t| ≤ margin.
pub fn is_pole_free<S: Scalar>(params: &SLnParams<S>, w: &WeightPoint, margin: i64) -> bool {
    let n = params.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            i == j
                || (-margin..=margin)
                    .all(|t| matches!(params.xi(i, j, w.pdiff(i, j) + t), Ok(v) if !v.is_zero()))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp64, Rational};

    #[test]
    fn deterministic() {
        let q = Rational::from_i64(2);
        let a = Sampler::new(5).generic_params(3, &q).unwrap();
        let b = Sampler::new(5).generic_params(3, &q).unwrap();
        assert_eq!(a, b);
        let mut s = Sampler::new(5);
        let p1 = s.pole_free_point(&a, 2).unwrap();
        let mut s2 = Sampler::new(5);
        assert_eq!(p1, s2.pole_free_point(&a, 2).unwrap());
    }

    #[test]
    fn prime_draws_are_generic() {
        let mut s = Sampler::new(1);
        let ctx: QContext<Fp64> = s.q_context_with_root(3).unwrap();
        assert_eq!(ctx.root().unwrap().pow(3).unwrap(), *ctx.q());
        let p = s.generic_params_in(ctx, AlphaDraw::Random).unwrap();
        let w = s.pole_free_point(&p, 2).unwrap();
        assert!(is_pole_free(&p, &w, 2));
    }
}
