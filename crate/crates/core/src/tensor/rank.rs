use super::TensorOp;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Index sets of the diagonal blocks under the finest simultaneous
/// row/column permutation that block-diagonalizes the operator.
pub(crate) fn blocks<S: Scalar>(op: &TensorOp<S>) -> Vec<Vec<usize>> {
    let d = op.dim();
    let mut uf = UnionFind::new(d);
    for (r, c, _) in op.entries() {
        uf.union(r, c);
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); d];
    for i in 0..d {
        let root = uf.find(i);
        groups[root].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

fn dense_block<S: Scalar>(op: &TensorOp<S>, block: &[usize]) -> Vec<Vec<S>> {
    let mut pos = std::collections::HashMap::with_capacity(block.len());
    for (i, &b) in block.iter().enumerate() {
        pos.insert(b, i);
    }
    block
        .iter()
        .map(|&r| {
            let mut row = vec![S::zero(); block.len()];
            for (c, v) in &op.rows()[r] {
                row[pos[c]] = v.clone();
            }
            row
        })
        .collect()
}

impl<S: Scalar> TensorOp<S> {
    /// Exact rank: sum of block ranks, each computed by the backend's
    /// elimination (fraction-free on rationals).
    pub fn rank(&self) -> usize {
        blocks(self)
            .iter()
            .map(|b| {
                if b.len() == 1 {
                    usize::from(!self.get(b[0], b[0]).is_zero())
                } else {
                    S::dense_rank(dense_block(self, b))
                }
            })
            .sum()
    }

    pub fn kernel_dim(&self) -> usize {
        self.dim() - self.rank()
    }

    /// Dimension of the common kernel of several operators.
    pub fn joint_kernel_dim(ops: &[Self]) -> Result<usize> {
        let Some(first) = ops.first() else {
            return Err(Error::Invalid("no operators given".into()));
        };
        let d = first.dim();
        if ops.iter().any(|o| o.n != first.n || o.k != first.k) {
            return Err(Error::Dimension("operators act on different spaces".into()));
        }
        let mut uf = UnionFind::new(d);
        for op in ops {
            for (r, c, _) in op.entries() {
                uf.union(r, c);
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); d];
        for i in 0..d {
            let root = uf.find(i);
            groups[root].push(i);
        }
        let mut rank = 0;
        for block in groups.into_iter().filter(|g| !g.is_empty()) {
            let mut rows = Vec::new();
            for op in ops {
                rows.extend(dense_block(op, &block));
            }
            rank += S::dense_rank(rows);
        }
        Ok(d - rank)
    }
}

pub(crate) fn inverse<S: Scalar>(op: &TensorOp<S>) -> Result<TensorOp<S>> {
    let mut entries = Vec::new();
    for block in blocks(op) {
        let m = block.len();
        let mut a = dense_block(op, &block);
        let mut inv: Vec<Vec<S>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { S::one() } else { S::zero() })
                    .collect()
            })
            .collect();
        for col in 0..m {
            let piv = (col..m)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::Singular("operator is not invertible".into()))?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].inv()?;
            for j in 0..m {
                a[col][j] = a[col][j].mul_ref(&p);
                inv[col][j] = inv[col][j].mul_ref(&p);
            }
            for r in 0..m {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..m {
                    if !a[col][j].is_zero() {
                        let t = f.mul_ref(&a[col][j]);
                        a[r][j] = a[r][j].sub_ref(&t);
                    }
                    if !inv[col][j].is_zero() {
                        let t = f.mul_ref(&inv[col][j]);
                        inv[r][j] = inv[r][j].sub_ref(&t);
                    }
                }
            }
        }
        for (i, row) in inv.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                if !v.is_zero() {
                    entries.push((block[i], block[j], v));
                }
            }
        }
    }
    TensorOp::from_entries(op.n(), op.k(), entries)
}
