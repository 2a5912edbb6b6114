use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact_algebra::Scalar;

/// Basis element of a cooperad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoopElement {
    pub name: String,
    pub weight: usize,
    pub arity: usize,
    pub degree: i32,
}

/// One term `coeff · root ⊗ (leaves…)` of the full decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompTerm<F> {
    pub root: usize,
    pub leaves: Vec<usize>,
    pub coeff: F,
}

/// One term `coeff · root ∘_slot leaf` of the partial decomposition (slot zero-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTerm<F> {
    pub root: usize,
    pub slot: usize,
    pub leaf: usize,
    pub coeff: F,
}

/// Reduced weight-graded non-symmetric dg cooperad truncated at a weight cap.
///
/// Element 0 is the counit `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NsCooperad<F> {
    weight_cap: usize,
    elements: Vec<CoopElement>,
    decomp: Vec<Vec<DecompTerm<F>>>,
    partial: Vec<Vec<PartialTerm<F>>>,
    diff: Vec<Vec<(usize, F)>>,
}

pub const COUNIT: usize = 0;

/// Collects non-counit structure constants; `build` adds counit terms and validates.
#[derive(Clone, Debug)]
pub struct NsCooperadBuilder<F> {
    weight_cap: usize,
    elements: Vec<CoopElement>,
    decomp: Vec<Vec<DecompTerm<F>>>,
    diff: Vec<Vec<(usize, F)>>,
}

impl<F: Scalar> NsCooperadBuilder<F> {
    pub fn new(weight_cap: usize) -> Self {
        let unit = CoopElement { name: "I".into(), weight: 0, arity: 1, degree: 0 };
        NsCooperadBuilder { weight_cap, elements: vec![unit], decomp: vec![vec![]], diff: vec![vec![]] }
    }

    pub fn add_element(&mut self, name: impl Into<String>, weight: usize, arity: usize, degree: i32) -> usize {
        self.elements.push(CoopElement { name: name.into(), weight, arity, degree });
        self.decomp.push(vec![]);
        self.diff.push(vec![]);
        self.elements.len() - 1
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.len() <= 1
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    pub fn add_decomposition(&mut self, c: usize, root: usize, leaves: Vec<usize>, coeff: F) -> Result<()> {
        if c >= self.elements.len() || root >= self.elements.len() || leaves.iter().any(|l| *l >= self.elements.len()) {
            return Err(Error::contract("decomposition refers to an unknown element"));
        }
        if !coeff.is_zero() {
            self.decomp[c].push(DecompTerm { root, leaves, coeff });
        }
        Ok(())
    }

    pub fn set_differential(&mut self, c: usize, terms: Vec<(usize, F)>) -> Result<()> {
        if c >= self.elements.len() || terms.iter().any(|(t, _)| *t >= self.elements.len()) {
            return Err(Error::contract("differential refers to an unknown element"));
        }
        self.diff[c] = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(())
    }

    pub fn build(self) -> Result<NsCooperad<F>> {
        let NsCooperadBuilder { weight_cap, elements, mut decomp, diff } = self;
        let bad = |c: usize, reason: String| Error::InvalidCooperad { element: elements[c].name.clone(), reason };
        for (c, e) in elements.iter().enumerate().skip(1) {
            if e.weight == 0 || e.weight > weight_cap {
                return Err(bad(c, format!("weight {} outside 1..={weight_cap}", e.weight)));
            }
            if e.arity == 0 {
                return Err(bad(c, "arity 0 in a reduced cooperad".into()));
            }
            for t in &decomp[c] {
                if t.root == COUNIT || t.leaves.iter().all(|l| *l == COUNIT) {
                    return Err(bad(c, "counit terms are added automatically".into()));
                }
            }
        }
        for c in 0..elements.len() {
            let m = elements[c].arity;
            let mut full = vec![DecompTerm { root: c, leaves: vec![COUNIT; m], coeff: F::one() }];
            if c != COUNIT {
                full.push(DecompTerm { root: COUNIT, leaves: vec![c], coeff: F::one() });
            }
            full.append(&mut decomp[c]);
            decomp[c] = merge_terms(full);
        }
        let partial = decomp.iter().map(|ts| derive_partial(ts, &elements)).collect();
        let coop = NsCooperad { weight_cap, elements, decomp, partial, diff };
        coop.validate()?;
        Ok(coop)
    }
}

fn merge_terms<F: Scalar>(terms: Vec<DecompTerm<F>>) -> Vec<DecompTerm<F>> {
    let mut acc: BTreeMap<(usize, Vec<usize>), F> = BTreeMap::new();
    for t in terms {
        let e = acc.entry((t.root, t.leaves)).or_insert_with(F::zero);
        *e += &t.coeff;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((root, leaves), coeff)| DecompTerm { root, leaves, coeff }).collect()
}

fn derive_partial<F: Scalar>(terms: &[DecompTerm<F>], elements: &[CoopElement]) -> Vec<PartialTerm<F>> {
    let mut out = Vec::new();
    for t in terms {
        let non_unit: Vec<usize> = (0..t.leaves.len()).filter(|&j| t.leaves[j] != COUNIT).collect();
        match non_unit.as_slice() {
            [] => out.extend((0..elements[t.root].arity).map(|slot| PartialTerm {
                root: t.root,
                slot,
                leaf: COUNIT,
                coeff: t.coeff.clone(),
            })),
            [j] => out.push(PartialTerm { root: t.root, slot: *j, leaf: t.leaves[*j], coeff: t.coeff.clone() }),
            _ => {}
        }
    }
    out
}

type Tree3 = (usize, Vec<usize>, Vec<usize>);

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

impl<F: Scalar> NsCooperad<F> {
    pub fn weight_cap(&self) -> usize {
        self.weight_cap
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.len() <= 1
    }

    pub fn element(&self, c: usize) -> &CoopElement {
        &self.elements[c]
    }

    pub fn elements(&self) -> &[CoopElement] {
        &self.elements
    }

    pub fn weight(&self, c: usize) -> usize {
        self.elements[c].weight
    }

    pub fn arity(&self, c: usize) -> usize {
        self.elements[c].arity
    }

    pub fn degree(&self, c: usize) -> i32 {
        self.elements[c].degree
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    pub fn decomposition(&self, c: usize) -> &[DecompTerm<F>] {
        &self.decomp[c]
    }

    pub fn partial_decomposition(&self, c: usize) -> &[PartialTerm<F>] {
        &self.partial[c]
    }

    pub fn differential(&self, c: usize) -> &[(usize, F)] {
        &self.diff[c]
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().all(|d| d.is_empty())
    }

    /// Elements of weight `w`, in index order.
    pub fn of_weight(&self, w: usize) -> Vec<usize> {
        (0..self.elements.len()).filter(|&c| self.elements[c].weight == w).collect()
    }

    /// Elements ordered by weight, counit first.
    pub fn by_weight(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.elements.len()).collect();
        ids.sort_by_key(|&c| (self.elements[c].weight, c));
        ids
    }

    /// Builder pre-filled with this cooperad's non-counit data.
    pub fn to_builder(&self) -> NsCooperadBuilder<F> {
        let decomp = self
            .decomp
            .iter()
            .enumerate()
            .map(|(c, ts)| {
                ts.iter()
                    .filter(|t| {
                        !((t.root == c && t.leaves.iter().all(|l| *l == COUNIT)) || (t.root == COUNIT && t.leaves == [c]))
                    })
                    .cloned()
                    .collect()
            })
            .collect();
        NsCooperadBuilder {
            weight_cap: self.weight_cap,
            elements: self.elements.clone(),
            decomp,
            diff: self.diff.clone(),
        }
    }

    fn invalid(&self, c: usize, reason: impl Into<String>) -> Error {
        Error::InvalidCooperad { element: self.elements[c].name.clone(), reason: reason.into() }
    }

    /// Structural bookkeeping, coassociativity, `d² = 0` and co-Leibniz.
    pub fn validate(&self) -> Result<()> {
        let unit = &self.elements[COUNIT];
        if unit.weight != 0 || unit.arity != 1 || unit.degree != 0 {
            return Err(self.invalid(COUNIT, "element 0 must be the counit"));
        }
        if self.decomp[COUNIT].len() != 1 {
            return Err(self.invalid(COUNIT, "the counit must decompose as I ⊗ I only"));
        }
        for c in 0..self.elements.len() {
            self.check_terms(c)?;
            self.check_differential(c)?;
        }
        for c in 0..self.elements.len() {
            self.check_coassociative(c)?;
            self.check_d_squared(c)?;
            self.check_co_leibniz(c)?;
        }
        Ok(())
    }

    fn check_terms(&self, c: usize) -> Result<()> {
        let e = &self.elements[c];
        for t in &self.decomp[c] {
            let r = &self.elements[t.root];
            if t.leaves.len() != r.arity {
                return Err(self.invalid(c, format!("term with root {} has {} leaves", r.name, t.leaves.len())));
            }
            let arity: usize = t.leaves.iter().map(|l| self.arity(*l)).sum();
            let weight: usize = r.weight + t.leaves.iter().map(|l| self.weight(*l)).sum::<usize>();
            let degree: i32 = r.degree + t.leaves.iter().map(|l| self.degree(*l)).sum::<i32>();
            if arity != e.arity || weight != e.weight || degree != e.degree {
                return Err(self.invalid(c, format!("term with root {} is not homogeneous", r.name)));
            }
        }
        Ok(())
    }

    fn check_differential(&self, c: usize) -> Result<()> {
        let e = &self.elements[c];
        for (t, _) in &self.diff[c] {
            let x = &self.elements[*t];
            if *t == COUNIT || x.weight + 1 != e.weight || x.degree + 1 != e.degree || x.arity != e.arity {
                return Err(self.invalid(c, format!("differential term {} has the wrong grading", x.name)));
            }
        }
        Ok(())
    }

    fn check_coassociative(&self, c: usize) -> Result<()> {
        let mut acc: BTreeMap<Tree3, F> = BTreeMap::new();
        let mut push = |k: Tree3, v: F| {
            let e = acc.entry(k).or_insert_with(F::zero);
            *e += &v;
        };
        for t in &self.decomp[c] {
            // Decompose every leaf.
            let mut partial: Vec<(Vec<usize>, Vec<usize>, F, i64)> = vec![(vec![], vec![], t.coeff.clone(), 0)];
            for l in &t.leaves {
                let mut next = Vec::new();
                for (mids, tops, coeff, prev_deg) in &partial {
                    for s in &self.decomp[*l] {
                        let mut mids = mids.clone();
                        mids.push(s.root);
                        let mut tops = tops.clone();
                        tops.extend_from_slice(&s.leaves);
                        let moved = self.degree(s.root) as i64 * prev_deg;
                        let v = coeff.clone() * s.coeff.clone();
                        let v = if odd(moved) { -v } else { v };
                        let block: i64 = s.leaves.iter().map(|x| self.degree(*x) as i64).sum();
                        next.push((mids, tops, v, prev_deg + block));
                    }
                }
                partial = next;
            }
            for (mids, tops, v, _) in partial {
                push((t.root, mids, tops), v);
            }
            // Decompose the root.
            for s in &self.decomp[t.root] {
                push((s.root, s.leaves.clone(), t.leaves.clone()), -(t.coeff.clone() * s.coeff.clone()));
            }
        }
        match acc.into_iter().find(|(_, v)| !v.is_zero()) {
            Some(((r, mids, _), _)) => Err(self.invalid(
                c,
                format!(
                    "coassociativity fails on trees rooted at {} over {:?}",
                    self.elements[r].name,
                    mids.iter().map(|m| self.elements[*m].name.as_str()).collect::<Vec<_>>()
                ),
            )),
            None => Ok(()),
        }
    }

    fn check_d_squared(&self, c: usize) -> Result<()> {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (x, a) in &self.diff[c] {
            for (y, b) in &self.diff[*x] {
                *acc.entry(*y).or_insert_with(F::zero) += &(a.clone() * b.clone());
            }
        }
        if acc.values().any(|v| !v.is_zero()) {
            return Err(self.invalid(c, "differential does not square to zero"));
        }
        Ok(())
    }

    fn check_co_leibniz(&self, c: usize) -> Result<()> {
        let mut acc: BTreeMap<(usize, Vec<usize>), F> = BTreeMap::new();
        let mut push = |k: (usize, Vec<usize>), v: F| {
            let e = acc.entry(k).or_insert_with(F::zero);
            *e += &v;
        };
        for (x, a) in &self.diff[c] {
            for t in &self.decomp[*x] {
                push((t.root, t.leaves.clone()), a.clone() * t.coeff.clone());
            }
        }
        for t in &self.decomp[c] {
            for (r, a) in &self.diff[t.root] {
                push((*r, t.leaves.clone()), -(a.clone() * t.coeff.clone()));
            }
            let mut before = self.degree(t.root) as i64;
            for (i, l) in t.leaves.iter().enumerate() {
                for (y, a) in &self.diff[*l] {
                    let mut leaves = t.leaves.clone();
                    leaves[i] = *y;
                    let v = a.clone() * t.coeff.clone();
                    push((t.root, leaves), if odd(before) { v } else { -v });
                }
                before += self.degree(*l) as i64;
            }
        }
        if acc.values().any(|v| !v.is_zero()) {
            return Err(self.invalid(c, "differential is not a coderivation of the decomposition"));
        }
        Ok(())
    }
}
