use std::collections::HashMap;

use crate::scalar::Scalar;

/// A sparse tensor whose axes carry index names. Every axis ranges over 0..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedTensor<S: Scalar> {
    names: Vec<String>,
    entries: HashMap<Vec<usize>, S>,
}

fn odometer(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(len as u32);
    (0..total).map(move |mut x| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = x % n;
            x /= n;
        }
        v
    })
}

impl<S: Scalar> NamedTensor<S> {
    pub fn scalar(c: S) -> Self {
        let mut entries = HashMap::new();
        if !c.is_zero() {
            entries.insert(Vec::new(), c);
        }
        NamedTensor {
            names: Vec::new(),
            entries,
        }
    }

    /// Builds from entries keyed by positions of `names`, which may repeat;
    /// entries whose repeated positions disagree are dropped.
    pub fn from_positional<I>(names: &[String], entries: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, S)>,
    {
        let mut uniq: Vec<String> = Vec::new();
        let mut slot = Vec::with_capacity(names.len());
        for name in names {
            match uniq.iter().position(|u| u == name) {
                Some(i) => slot.push(i),
                None => {
                    slot.push(uniq.len());
                    uniq.push(name.clone());
                }
            }
        }
        let mut out = HashMap::new();
        'outer: for (key, v) in entries {
            if v.is_zero() {
                continue;
            }
            let mut k = vec![usize::MAX; uniq.len()];
            for (pos, &s) in slot.iter().enumerate() {
                if k[s] == usize::MAX {
                    k[s] = key[pos];
                } else if k[s] != key[pos] {
                    continue 'outer;
                }
            }
            accumulate(&mut out, k, v);
        }
        NamedTensor {
            names: uniq,
            entries: out,
        }
    }

    /// Dense construction over distinct names.
    pub fn from_fn(names: &[String], n: usize, mut f: impl FnMut(&[usize]) -> S) -> Self {
        let entries = odometer(n, names.len()).map(|k| {
            let v = f(&k);
            (k, v)
        });
        Self::from_positional(names, entries.collect::<Vec<_>>())
    }

    /// δ over a pair of names.
    pub fn delta(a: &str, b: &str, n: usize) -> Self {
        let names = [a.to_string(), b.to_string()];
        Self::from_positional(&names, (0..n).map(|i| (vec![i, i], S::one())))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn entries(&self) -> &HashMap<Vec<usize>, S> {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, key: &[usize]) -> S {
        self.entries.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return NamedTensor {
                names: self.names.clone(),
                entries: HashMap::new(),
            };
        }
        NamedTensor {
            names: self.names.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v.mul_ref(c)))
                .collect(),
        }
    }

    /// Pointwise product; shared names are identified.
    pub fn mul(&self, other: &Self) -> Self {
        let shared: Vec<(usize, usize)> = other
            .names
            .iter()
            .enumerate()
            .filter_map(|(j, name)| self.position(name).map(|i| (i, j)))
            .collect();
        let fresh: Vec<usize> = (0..other.names.len())
            .filter(|j| !shared.iter().any(|&(_, s)| s == *j))
            .collect();
        let mut index: HashMap<Vec<usize>, Vec<(Vec<usize>, &S)>> = HashMap::new();
        for (k, v) in &other.entries {
            let sk = shared.iter().map(|&(_, j)| k[j]).collect();
            let rest = fresh.iter().map(|&j| k[j]).collect();
            index.entry(sk).or_default().push((rest, v));
        }
        let mut names = self.names.clone();
        names.extend(fresh.iter().map(|&j| other.names[j].clone()));
        let mut entries = HashMap::new();
        for (k, v) in &self.entries {
            let sk: Vec<usize> = shared.iter().map(|&(i, _)| k[i]).collect();
            if let Some(list) = index.get(&sk) {
                for (rest, w) in list {
                    let mut key = k.clone();
                    key.extend_from_slice(rest);
                    accumulate(&mut entries, key, v.mul_ref(w));
                }
            }
        }
        NamedTensor { names, entries }
    }

    /// Sums over every name not in `keep`.
    pub fn marginal(&self, keep: &[String]) -> Self {
        let kept: Vec<usize> = (0..self.names.len())
            .filter(|&i| keep.contains(&self.names[i]))
            .collect();
        if kept.len() == self.names.len() {
            return self.clone();
        }
        let mut entries = HashMap::new();
        for (k, v) in &self.entries {
            accumulate(&mut entries, kept.iter().map(|&i| k[i]).collect(), v.clone());
        }
        NamedTensor {
            names: kept.iter().map(|&i| self.names[i].clone()).collect(),
            entries,
        }
    }

    /// Contraction: product followed by summing out names outside `keep`.
    pub fn contract(&self, other: &Self, keep: &[String]) -> Self {
        self.mul(other).marginal(keep)
    }

    /// Adds a name the tensor does not depend on.
    pub fn broadcast(&self, name: &str, n: usize) -> Self {
        if self.position(name).is_some() {
            return self.clone();
        }
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut entries = HashMap::with_capacity(self.entries.len() * n);
        for (k, v) in &self.entries {
            for i in 0..n {
                let mut key = k.clone();
                key.push(i);
                entries.insert(key, v.clone());
            }
        }
        NamedTensor { names, entries }
    }

    /// Entries re-keyed by `order`, which may repeat names; every name of
    /// the tensor must appear in `order`.
    pub fn positional(&self, order: &[String]) -> Option<HashMap<Vec<usize>, S>> {
        let map: Vec<usize> = order
            .iter()
            .map(|name| self.position(name))
            .collect::<Option<_>>()?;
        if self.names.iter().any(|name| !order.contains(name)) {
            return None;
        }
        Some(
            self.entries
                .iter()
                .map(|(k, v)| (map.iter().map(|&i| k[i]).collect(), v.clone()))
                .collect(),
        )
    }

    pub fn rename(&mut self, from: &str, to: &str) {
        for name in &mut self.names {
            if name == from {
                *name = to.to_string();
            }
        }
    }
}

pub(crate) fn accumulate<S: Scalar>(map: &mut HashMap<Vec<usize>, S>, key: Vec<usize>, v: S) {
    if v.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            let s = e.get().add_ref(&v);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(v);
        }
    }
}
