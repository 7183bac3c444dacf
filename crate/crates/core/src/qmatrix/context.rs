use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::named::NamedTensor;
use super::script::{ConstDiagKind, DiagKind, ScalarFn, WordSpec};
use crate::error::{Error, Result};
use crate::hecke::{HeckeRep, Towers};
use crate::levi::{build_eps_const, build_eps_dyn, build_nk, build_nk_const, EpsTensor, NKMatrices, Variance};
use crate::params::{SLnParams, WeightPoint};
use crate::rmatrix::build_dj;
use crate::scalar::Scalar;
use crate::tensor::TensorOp;

type EpsPair<S> = Rc<(EpsTensor<S>, EpsTensor<S>)>;

/// Everything a replay needs at one parameter draw and one point p:
/// representations, ε-tensors, N/K, and the certificates verified so far.
pub struct Workspace<S: Scalar> {
    params: SLnParams<S>,
    p: WeightPoint,
    rhat: TensorOp<S>,
    eps_const: (EpsTensor<S>, EpsTensor<S>),
    nk_const: NKMatrices<S>,
    eps_dyn: RefCell<HashMap<WeightPoint, EpsPair<S>>>,
    nk_dyn: RefCell<HashMap<WeightPoint, Rc<NKMatrices<S>>>>,
    reps: RefCell<HashMap<usize, Rc<(HeckeRep<S>, HeckeRep<S>)>>>,
    certificates: RefCell<BTreeSet<String>>,
}

fn word_letters(letters: &[i64], k: usize) -> Result<()> {
    for &l in letters {
        let i = l.unsigned_abs() as usize;
        if l == 0 || i >= k {
            return Err(Error::IndexOutOfRange(format!("g_{i} on {k} slots")));
        }
    }
    Ok(())
}

impl<S: Scalar> Workspace<S> {
    pub fn new(params: &SLnParams<S>, p: &WeightPoint) -> Result<Self> {
        let ctx = params.ctx();
        Ok(Workspace {
            params: params.clone(),
            p: p.clone(),
            rhat: build_dj(ctx).op,
            eps_const: (
                build_eps_const(ctx, Variance::Co),
                build_eps_const(ctx, Variance::Contra),
            ),
            nk_const: build_nk_const(ctx)?,
            eps_dyn: RefCell::default(),
            nk_dyn: RefCell::default(),
            reps: RefCell::default(),
            certificates: RefCell::default(),
        })
    }

    pub fn params(&self) -> &SLnParams<S> {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn point(&self) -> &WeightPoint {
        &self.p
    }

    pub fn rhat(&self) -> &TensorOp<S> {
        &self.rhat
    }

    pub fn certify(&self, name: &str) {
        self.certificates.borrow_mut().insert(name.to_string());
    }

    pub fn has(&self, name: &str) -> bool {
        self.certificates.borrow().contains(name)
    }

    pub fn require(&self, name: &str) -> Result<()> {
        if self.has(name) {
            Ok(())
        } else {
            Err(Error::MissingCertificate(name.to_string()))
        }
    }

    pub fn certificates(&self) -> Vec<String> {
        self.certificates.borrow().iter().cloned().collect()
    }

    /// (E_, E^) at a point.
    pub fn eps_dyn(&self, w: &WeightPoint) -> Result<EpsPair<S>> {
        if let Some(e) = self.eps_dyn.borrow().get(w) {
            return Ok(e.clone());
        }
        let pair = Rc::new((
            build_eps_dyn(&self.params, w, Variance::Co)?,
            build_eps_dyn(&self.params, w, Variance::Contra)?,
        ));
        self.eps_dyn.borrow_mut().insert(w.clone(), pair.clone());
        Ok(pair)
    }

    /// (ε_, ε^)
    pub fn eps_const(&self) -> &(EpsTensor<S>, EpsTensor<S>) {
        &self.eps_const
    }

    pub fn nk_dyn(&self, w: &WeightPoint) -> Result<Rc<NKMatrices<S>>> {
        if let Some(m) = self.nk_dyn.borrow().get(w) {
            return Ok(m.clone());
        }
        let m = Rc::new(build_nk(&self.params, w)?);
        self.nk_dyn.borrow_mut().insert(w.clone(), m.clone());
        Ok(m)
    }

    /// Dynamic representation at p and constant representation, both on k
    /// slots. Their Hecke relations are verified on first use.
    pub fn reps(&self, k: usize) -> Result<Rc<(HeckeRep<S>, HeckeRep<S>)>> {
        if let Some(r) = self.reps.borrow().get(&k) {
            return Ok(r.clone());
        }
        let dynamic = HeckeRep::dynamic(&self.params, &self.p, k)?;
        let constant = HeckeRep::constant(self.params.ctx(), &self.rhat, k)?;
        for (label, rep) in [("dynamic", &dynamic), ("constant", &constant)] {
            let checks = rep.relation_checks()?;
            if let Some(why) = checks.first_failure() {
                return Err(Error::Invalid(format!("{label} representation on {k} slots: {why}")));
            }
        }
        self.certify(&format!("hecke k={k}"));
        let pair = Rc::new((dynamic, constant));
        self.reps.borrow_mut().insert(k, pair.clone());
        Ok(pair)
    }

    /// Images (dynamic, constant) of a word on k slots, plus the highest
    /// slot it touches.
    pub fn word_images(&self, word: &WordSpec, k: usize, inverse: bool) -> Result<(TensorOp<S>, TensorOp<S>, usize)> {
        let pair = self.reps(k)?;
        let (dynamic, constant) = (&pair.0, &pair.1);
        match word {
            WordSpec::Gens(letters) => {
                word_letters(letters, k)?;
                let mut seq: Vec<i64> = letters.clone();
                if inverse {
                    seq = seq.iter().rev().map(|l| -l).collect();
                }
                let image = |rep: &HeckeRep<S>| -> Result<TensorOp<S>> {
                    seq.iter().try_fold(rep.identity(), |acc, &l| {
                        let i = l.unsigned_abs() as usize;
                        let g = if l > 0 { rep.gen(i)?.clone() } else { rep.gen_inv(i)? };
                        acc.matmul(&g)
                    })
                };
                let top = letters.iter().map(|l| l.unsigned_abs() as usize + 1).max().unwrap_or(0);
                Ok((image(dynamic)?, image(constant)?, top))
            }
            WordSpec::Antisym(i, j) => {
                if inverse {
                    return Err(Error::Invalid("antisymmetrizers have no inverse".into()));
                }
                if *i == 0 || i > j || *j > k {
                    return Err(Error::IndexOutOfRange(format!("window {i}..{j} on {k} slots")));
                }
                let a = Towers::new(dynamic).window(*i, *j)?;
                let b = Towers::new(constant).window(*i, *j)?;
                Ok((a, b, *j))
            }
        }
    }

    pub fn scalar(&self, f: &ScalarFn, w: &WeightPoint) -> Result<S> {
        let ctx = self.params.ctx();
        let n = self.n();
        let pair = |i: usize, j: usize| -> Result<(usize, usize)> {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::IndexOutOfRange(format!("pair ({i}, {j}) for n = {n}")));
            }
            Ok((i - 1, j - 1))
        };
        Ok(match f {
            ScalarFn::Const { value } => S::parse(value)?,
            ScalarFn::QFact { m } => ctx.qfact(*m),
            ScalarFn::RootPow { e } => ctx.require_root()?.pow(*e)?,
            ScalarFn::QPow { i, j, e } => {
                let (i, j) = pair(*i, *j)?;
                ctx.qpow(e * w.pdiff(i, j))
            }
            ScalarFn::F { i, j } => {
                let (i, j) = pair(*i, *j)?;
                self.f_value(i, j, w)?
            }
            ScalarFn::Alpha { i, j } => {
                let (i, j) = pair(*i, *j)?;
                self.params.alpha().eval(i, j, w.pdiff(i, j))?
            }
            ScalarFn::Xi { i, j } => {
                let (i, j) = pair(*i, *j)?;
                self.params.xi(i, j, w.pdiff(i, j))?
            }
            ScalarFn::Phi { i, j } => {
                let (i, j) = pair(*i, *j)?;
                self.phi(i, j, w)?
            }
            ScalarFn::U => {
                let mut acc = S::one();
                for i in 0..n {
                    for j in i + 1..n {
                        acc = acc.mul_ref(&self.phi(i, j, w)?).div_ref(&self.f_value(i, j, w)?)?;
                    }
                }
                acc
            }
            ScalarFn::Product { factors } => factors
                .iter()
                .try_fold(S::one(), |acc, g| Ok::<_, Error>(acc.mul_ref(&self.scalar(g, w)?)))?,
            ScalarFn::Inverse { of } => {
                let v = self.scalar(of, w)?;
                v.inv().map_err(|_| Error::DynamicalPole(format!("inverse of a vanishing function at {w:?}")))?
            }
        })
    }

    /// f(p_ij, β_ij); [p_ij] when β is infinite.
    fn f_value(&self, i: usize, j: usize, w: &WeightPoint) -> Result<S> {
        let ctx = self.params.ctx();
        let p = w.pdiff(i, j);
        if self.params.is_infinite() {
            return Ok(ctx.qnum(p));
        }
        Ok(ctx.f_func(p, self.params.beta(i, j)?))
    }

    fn phi(&self, i: usize, j: usize, w: &WeightPoint) -> Result<S> {
        let g = self.params.alpha().get(i, j);
        let p = w.pdiff(i, j);
        Ok(g.c.pow(p)?.mul_ref(&g.w.pow(p * (p - 1) / 2)?))
    }

    /// Diagonal entries of a row-side matrix at a point.
    pub fn diag(&self, kind: DiagKind, w: &WeightPoint) -> Result<Vec<S>> {
        let n = self.n();
        let invert = |v: Vec<S>| -> Result<Vec<S>> { v.iter().map(|x| x.inv()).collect() };
        match kind {
            DiagKind::D | DiagKind::DInv => {
                let root = self.params.ctx().require_root()?;
                let rel = w.rel();
                let sum: i64 = rel.iter().sum();
                let d = (0..n)
                    .map(|i| {
                        let np = n as i64 * rel[i] - sum + w.total();
                        let pi = if i + 1 == n { S::one() } else { self.params.pi(i, n - 1)? };
                        Ok(root.pow(-2 * np)?.mul_ref(&pi))
                    })
                    .collect::<Result<Vec<S>>>()?;
                if kind == DiagKind::D {
                    Ok(d)
                } else {
                    invert(d)
                }
            }
            DiagKind::K | DiagKind::KInv | DiagKind::N | DiagKind::NInv => {
                let m = self.nk_dyn(w)?;
                let op = if matches!(kind, DiagKind::K | DiagKind::KInv) {
                    &m.k_mat
                } else {
                    &m.n_mat
                };
                let d = (0..n).map(|i| op.get(i, i)).collect();
                if matches!(kind, DiagKind::K | DiagKind::N) {
                    Ok(d)
                } else {
                    invert(d)
                }
            }
        }
    }

    pub fn const_diag(&self, kind: ConstDiagKind) -> Result<Vec<S>> {
        let n = self.n();
        let m = &self.nk_const;
        let op = if matches!(kind, ConstDiagKind::K | ConstDiagKind::KInv) {
            &m.k_mat
        } else {
            &m.n_mat
        };
        let d: Vec<S> = (0..n).map(|i| op.get(i, i)).collect();
        if matches!(kind, ConstDiagKind::K | ConstDiagKind::N) {
            Ok(d)
        } else {
            d.iter().map(|x| x.inv()).collect()
        }
    }

    pub fn eps_tensor(eps: &EpsTensor<S>, names: &[String]) -> NamedTensor<S> {
        NamedTensor::from_positional(names, eps.entries().iter().map(|(k, v)| (k.clone(), v.clone())))
    }
}
