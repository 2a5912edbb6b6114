use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exact_algebra::{Scalar, SparseMap};

fn parity(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// Sparse multilinear map `A^{⊗m} → B` of a fixed degree.
///
/// Keys are `[input_1, …, input_m, output]` basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor<F> {
    arity: usize,
    degree: i32,
    entries: BTreeMap<Vec<usize>, F>,
}

impl<F: Scalar> Tensor<F> {
    pub fn zero(arity: usize, degree: i32) -> Self {
        Tensor { arity, degree, entries: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim).map(|i| (vec![i, i], F::one())).collect();
        Tensor { arity: 1, degree: 0, entries }
    }

    /// Arity-one tensor of a linear map given as a matrix (rows = outputs).
    pub fn from_map(m: &SparseMap<F>, degree: i32) -> Self {
        let mut t = Tensor::zero(1, degree);
        for (r, c, v) in m.entries() {
            t.add_term(vec![*c, *r], v);
        }
        t
    }

    pub fn to_map(&self, rows: usize, cols: usize) -> Result<SparseMap<F>> {
        if self.arity != 1 {
            return Err(Error::contract("only arity-one tensors convert to matrices"));
        }
        SparseMap::from_triplets(rows, cols, self.entries.iter().map(|(k, v)| (k[1], k[0], v.clone())))
    }

    pub fn from_entries(arity: usize, degree: i32, entries: impl IntoIterator<Item = (Vec<usize>, F)>) -> Result<Self> {
        let mut t = Tensor::zero(arity, degree);
        for (k, v) in entries {
            if k.len() != arity + 1 {
                return Err(Error::contract(format!("tensor key {k:?} does not have {} indices", arity + 1)));
            }
            t.add_term(k, &v);
        }
        Ok(t)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, F> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &[usize]) -> F {
        self.entries.get(key).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, key: Vec<usize>, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&key) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.entries.remove(&key);
                }
            }
            None => {
                self.entries.insert(key, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor<F>, c: &F) {
        debug_assert!(other.is_zero() || (self.arity == other.arity));
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.entries {
            self.add_term(k.clone(), &(v.clone() * c.clone()));
        }
    }

    pub fn scale(&self, c: &F) -> Tensor<F> {
        let mut t = Tensor::zero(self.arity, self.degree);
        t.add_scaled(self, c);
        t
    }

    /// Checks that every entry respects the degree: `|out| - Σ|in| = degree`.
    pub fn check_degrees(&self, src: &[i32], tgt: &[i32]) -> Result<()> {
        for k in self.entries.keys() {
            let (ins, out) = k.split_at(self.arity);
            if ins.iter().any(|i| *i >= src.len()) || out[0] >= tgt.len() {
                return Err(Error::contract(format!("tensor index {k:?} out of range")));
            }
            let d = tgt[out[0]] - ins.iter().map(|i| src[*i]).sum::<i32>();
            if d != self.degree {
                return Err(Error::contract(format!(
                    "tensor entry {k:?} has degree {d}, expected {}",
                    self.degree
                )));
            }
        }
        Ok(())
    }

    /// `self ∘_j g` (slot `j` zero-based) with sign `(-1)^{|g| (|x_1| + … + |x_{j-1}|)}`;
    /// `src` gives the degrees of the inputs of the result.
    pub fn partial(&self, j: usize, g: &Tensor<F>, src: &[i32]) -> Tensor<F> {
        let arity = self.arity + g.arity - 1;
        let mut out = Tensor::zero(arity, self.degree + g.degree);
        if self.is_zero() || g.is_zero() {
            return out;
        }
        let mut by_output: HashMap<usize, Vec<(&[usize], &F)>> = HashMap::new();
        for (k, v) in &g.entries {
            by_output.entry(k[g.arity]).or_default().push((&k[..g.arity], v));
        }
        let g_odd = g.degree % 2 != 0;
        for (k, v) in &self.entries {
            let Some(list) = by_output.get(&k[j]) else { continue };
            let before: i64 = k[..j].iter().map(|i| src[*i] as i64).sum();
            let neg = g_odd && parity(before);
            for (gin, gv) in list {
                let mut key = Vec::with_capacity(arity + 1);
                key.extend_from_slice(&k[..j]);
                key.extend_from_slice(gin);
                key.extend_from_slice(&k[j + 1..]);
                let c = v.clone() * (*gv).clone();
                out.add_term(key, &if neg { -c } else { c });
            }
        }
        out
    }

    /// `self ∘ (g_1 ⊗ … ⊗ g_m)` with Koszul signs; `src` gives the degrees of the result's inputs.
    pub fn compose(&self, gs: &[&Tensor<F>], src: &[i32]) -> Tensor<F> {
        debug_assert_eq!(gs.len(), self.arity);
        let mut acc = self.clone();
        let mut pos = 0;
        for g in gs {
            if acc.is_zero() {
                let arity = self.arity + gs.iter().map(|g| g.arity).sum::<usize>() - gs.len();
                let degree = self.degree + gs.iter().map(|g| g.degree).sum::<i32>();
                return Tensor::zero(arity, degree);
            }
            acc = acc.partial(pos, g, src);
            pos += g.arity;
        }
        acc
    }

    /// Evaluates on vectors given densely.
    pub fn apply(&self, inputs: &[&[F]], out_dim: usize) -> Vec<F> {
        let mut out = vec![F::zero(); out_dim];
        for (k, v) in &self.entries {
            let mut c = v.clone();
            for (slot, x) in inputs.iter().enumerate() {
                c *= &x[k[slot]];
                if c.is_zero() {
                    break;
                }
            }
            out[k[self.arity]] += &c;
        }
        out
    }
}

impl<F: Scalar> std::ops::Add for &Tensor<F> {
    type Output = Tensor<F>;

    fn add(self, o: &Tensor<F>) -> Tensor<F> {
        let mut t = self.clone();
        t.add_scaled(o, &F::one());
        t
    }
}
