//! Exact sparse operators on V^⊗k.
//!
//! Basis vectors of V^⊗k are multi-indices (i_1, .., i_k) with 0 ≤ i_s < n,
//! ordered lexicographically with site 1 most significant:
//! idx = Σ_s i_s·n^{k−s}.

mod diag;
mod dump;
mod dynop;
mod rank;

pub use diag::DiagOp;
pub use dump::{DumpEntry, MatrixDump};
pub use dynop::{DynOp, ShiftMode, ShiftOp};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Position where two operators differ: (row, col, left value, right value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<S> {
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub lhs: S,
    pub rhs: S,
}

impl<S: Scalar> Witness<S> {
    /// Multi-indices printed 1-based.
    pub fn describe(&self) -> String {
        let fmt = |v: &[usize]| {
            v.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join("")
        };
        format!(
            "entry [{}][{}]: lhs = {}, rhs = {}",
            fmt(&self.row),
            fmt(&self.col),
            self.lhs,
            self.rhs
        )
    }
}

/// Square operator on V^⊗k with V = S^n, stored as sorted sparse rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorOp<S: Scalar> {
    n: usize,
    k: usize,
    rows: Vec<Vec<(usize, S)>>,
}

pub fn dim(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

/// Multi-index of a flat index.
pub fn unflatten(n: usize, k: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for s in (0..k).rev() {
        out[s] = idx % n;
        idx /= n;
    }
    out
}

pub fn flatten(n: usize, multi: &[usize]) -> usize {
    multi.iter().fold(0, |acc, &i| acc * n + i)
}

impl<S: Scalar> TensorOp<S> {
    pub fn zero(n: usize, k: usize) -> Self {
        TensorOp {
            n,
            k,
            rows: vec![Vec::new(); dim(n, k)],
        }
    }

    pub fn identity(n: usize, k: usize) -> Self {
        Self::scalar(n, k, S::one())
    }

    pub fn scalar(n: usize, k: usize, c: S) -> Self {
        if c.is_zero() {
            return Self::zero(n, k);
        }
        TensorOp {
            n,
            k,
            rows: (0..dim(n, k)).map(|i| vec![(i, c.clone())]).collect(),
        }
    }

    /// Sums duplicate coordinates and drops zeros.
    pub fn from_entries(
        n: usize,
        k: usize,
        entries: impl IntoIterator<Item = (usize, usize, S)>,
    ) -> Result<Self> {
        let d = dim(n, k);
        let mut rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); d];
        for (r, c, v) in entries {
            if r >= d || c >= d {
                return Err(Error::IndexOutOfRange(format!(
                    "({r}, {c}) outside {d}x{d}"
                )));
            }
            rows[r].push((c, v));
        }
        for row in rows.iter_mut() {
            *row = normalize_row(std::mem::take(row));
        }
        Ok(TensorOp { n, k, rows })
    }

    /// Entries given by multi-indices.
    pub fn from_multi(
        n: usize,
        k: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Vec<usize>, S)>,
    ) -> Result<Self> {
        Self::from_entries(
            n,
            k,
            entries
                .into_iter()
                .map(|(r, c, v)| (flatten(n, &r), flatten(n, &c), v)),
        )
    }

    /// Builds row by row from a function returning the nonzero columns.
    pub fn from_row_fn(
        n: usize,
        k: usize,
        mut f: impl FnMut(usize) -> Result<Vec<(usize, S)>>,
    ) -> Result<Self> {
        let rows = (0..dim(n, k))
            .map(|r| f(r).map(normalize_row))
            .collect::<Result<Vec<_>>>()?;
        Ok(TensorOp { n, k, rows })
    }

    /// Operator permuting tensor sites: the factor at site s moves to site perm[s].
    pub fn site_permutation(n: usize, perm: &[usize]) -> Self {
        let k = perm.len();
        let rows = (0..dim(n, k))
            .map(|r| {
                let out = unflatten(n, k, r);
                let mut input = vec![0; k];
                for (s, &t) in perm.iter().enumerate() {
                    input[s] = out[t];
                }
                vec![(flatten(n, &input), S::one())]
            })
            .collect();
        TensorOp { n, k, rows }
    }

    /// P: x ⊗ y ↦ y ⊗ x on V^⊗2.
    pub fn swap(n: usize) -> Self {
        Self::site_permutation(n, &[1, 0])
    }

    /// Diagonal matrix unit E_ii acting on one site.
    pub fn site_projector(n: usize, i: usize) -> Self {
        TensorOp {
            n,
            k: 1,
            rows: (0..n)
                .map(|r| {
                    if r == i {
                        vec![(i, S::one())]
                    } else {
                        Vec::new()
                    }
                })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, S)>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        match self.rows[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(pos) => self.rows[r][pos].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn get_multi(&self, r: &[usize], c: &[usize]) -> S {
        self.get(flatten(self.n, r), flatten(self.n, c))
    }

    /// Iterates (row, col, value) over stored nonzeros in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(r, row)| row.len() == 1 && row[0].0 == r && row[0].1.is_one())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::Dimension(format!(
                "operators on (n={}, k={}) and (n={}, k={})",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let d = self.dim();
        let mut acc: Vec<Option<S>> = vec![None; d];
        let mut touched: Vec<usize> = Vec::new();
        let mut rows = Vec::with_capacity(d);
        for row in &self.rows {
            for (mid, a) in row {
                for (c, b) in &other.rows[*mid] {
                    let t = a.mul_ref(b);
                    match &mut acc[*c] {
                        Some(v) => *v = v.add_ref(&t),
                        slot @ None => {
                            *slot = Some(t);
                            touched.push(*c);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &c in &touched {
                let v = acc[c].take().expect("touched slot is set");
                if !v.is_zero() {
                    out.push((c, v));
                }
            }
            touched.clear();
            rows.push(out);
        }
        Ok(TensorOp {
            n: self.n,
            k: self.k,
            rows,
        })
    }

    /// Left-to-right product of a nonempty list.
    pub fn product<'a>(ops: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut it = ops.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::Invalid("empty operator product".into()))?
            .clone();
        it.try_fold(first, |acc, op| acc.matmul(op))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.add_ref(b), |b| b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.sub_ref(b), |b| b.clone().neg())
    }

    fn combine(
        &self,
        other: &Self,
        both: impl Fn(&S, &S) -> S,
        right_only: impl Fn(&S) -> S,
    ) -> Result<Self> {
        self.check_same_shape(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
                    let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
                    let (c, v) = match ca.cmp(&cb) {
                        std::cmp::Ordering::Less => {
                            i += 1;
                            (ca, a[i - 1].1.clone())
                        }
                        std::cmp::Ordering::Greater => {
                            j += 1;
                            (cb, right_only(&b[j - 1].1))
                        }
                        std::cmp::Ordering::Equal => {
                            i += 1;
                            j += 1;
                            (ca, both(&a[i - 1].1, &b[j - 1].1))
                        }
                    };
                    if !v.is_zero() {
                        out.push((c, v));
                    }
                }
                out
            })
            .collect();
        Ok(TensorOp {
            n: self.n,
            k: self.k,
            rows,
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.k);
        }
        TensorOp {
            n: self.n,
            k: self.k,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(col, v)| (*col, v.mul_ref(c))).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::one().neg())
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); self.dim()];
        for (r, c, v) in self.entries() {
            rows[c].push((r, v.clone()));
        }
        TensorOp {
            n: self.n,
            k: self.k,
            rows,
        }
    }

    pub fn trace(&self) -> S {
        (0..self.dim()).fold(S::zero(), |acc, i| acc.add_ref(&self.get(i, i)))
    }

    /// self ⊗ other, with self on the leading sites.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension("kron of different site dimensions".into()));
        }
        let db = other.dim();
        let mut rows = Vec::with_capacity(self.dim() * db);
        for ra in &self.rows {
            for rb in &other.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for (ca, va) in ra {
                    for (cb, vb) in rb {
                        row.push((ca * db + cb, va.mul_ref(vb)));
                    }
                }
                rows.push(row);
            }
        }
        Ok(TensorOp {
            n: self.n,
            k: self.k + other.k,
            rows,
        })
    }

    /// Acts with `self` on sites pos..pos+m (0-based) of V^⊗total.
    pub fn embed(&self, pos: usize, total: usize) -> Result<Self> {
        if pos + self.k > total {
            return Err(Error::IndexOutOfRange(format!(
                "cannot place a {}-site operator at site {} of {}",
                self.k,
                pos + 1,
                total
            )));
        }
        let left = TensorOp::identity(self.n, pos);
        let right = TensorOp::identity(self.n, total - pos - self.k);
        left.kron(self)?.kron(&right)
    }

    /// Scalar conjugation D·self·D^{-1}.
    pub fn dress(&self, d: &DiagOp<S>) -> Result<Self> {
        d.conjugate(self)
    }

    /// First coordinate where the two operators differ, in row-major order.
    pub fn first_difference(&self, other: &Self) -> Option<Witness<S>> {
        if self.n != other.n || self.k != other.k {
            return Some(Witness {
                row: vec![],
                col: vec![],
                lhs: S::zero(),
                rhs: S::zero(),
            });
        }
        for r in 0..self.dim() {
            if self.rows[r] == other.rows[r] {
                continue;
            }
            let diff = TensorOp::<S>::row_difference(&self.rows[r], &other.rows[r]);
            if let Some(c) = diff {
                return Some(Witness {
                    row: unflatten(self.n, self.k, r),
                    col: unflatten(self.n, self.k, c),
                    lhs: self.get(r, c),
                    rhs: other.get(r, c),
                });
            }
        }
        None
    }

    fn row_difference(a: &[(usize, S)], b: &[(usize, S)]) -> Option<usize> {
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return None,
                (Some((c, _)), None) | (None, Some((c, _))) => return Some(*c),
                (Some((ca, va)), Some((cb, vb))) => {
                    if ca != cb {
                        return Some(*ca.min(cb));
                    }
                    if va != vb {
                        return Some(*ca);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }

    /// self·v for a column vector.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(S::zero(), |acc, (c, a)| acc.add_ref(&a.mul_ref(&v[*c])))
            })
            .collect()
    }

    /// v·self for a row vector.
    pub fn apply_left(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        for (r, row) in self.rows.iter().enumerate() {
            if v[r].is_zero() {
                continue;
            }
            for (c, a) in row {
                out[*c] = out[*c].add_ref(&v[r].mul_ref(a));
            }
        }
        out
    }

    /// Rank-one operator |ket⟩⟨bra|.
    pub fn outer(n: usize, k: usize, ket: &[S], bra: &[S]) -> Self {
        let cols: Vec<(usize, S)> = bra
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        TensorOp {
            n,
            k,
            rows: ket
                .iter()
                .map(|a| {
                    if a.is_zero() {
                        Vec::new()
                    } else {
                        cols.iter().map(|(c, b)| (*c, a.mul_ref(b))).collect()
                    }
                })
                .collect(),
        }
    }

    /// Inverse by exact Gauss–Jordan elimination on each connected block.
    pub fn inverse(&self) -> Result<Self> {
        rank::inverse(self)
    }
}

fn normalize_row<S: Scalar>(mut row: Vec<(usize, S)>) -> Vec<(usize, S)> {
    row.sort_by_key(|(c, _)| *c);
    let mut out: Vec<(usize, S)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = lv.add_ref(&v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

#[cfg(test)]
mod tests;
