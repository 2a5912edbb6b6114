use std::collections::BTreeMap;
use std::sync::Arc;

use super::cooperad::{NsCooperad, COUNIT};
use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::exact_algebra::{ChainComplex, Scalar};

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

pub(crate) fn same_space<F: PartialEq>(a: &Arc<ChainComplex<F>>, b: &Arc<ChainComplex<F>>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Element of `Hom(C, End(A, B))`: one multilinear map per cooperad basis element.
///
/// The component at `c` has arity `arity(c)` and degree `degree + |c|`.
#[derive(Clone, Debug)]
pub struct ConvElement<F> {
    coop: Arc<NsCooperad<F>>,
    src: Arc<ChainComplex<F>>,
    tgt: Arc<ChainComplex<F>>,
    degree: i32,
    maps: BTreeMap<usize, Tensor<F>>,
}

impl<F: Scalar> PartialEq for ConvElement<F> {
    fn eq(&self, o: &Self) -> bool {
        self.degree == o.degree
            && self.maps == o.maps
            && (Arc::ptr_eq(&self.coop, &o.coop) || self.coop == o.coop)
            && same_space(&self.src, &o.src)
            && same_space(&self.tgt, &o.tgt)
    }
}

impl<F: Scalar> ConvElement<F> {
    pub fn zero(coop: Arc<NsCooperad<F>>, src: Arc<ChainComplex<F>>, tgt: Arc<ChainComplex<F>>, degree: i32) -> Self {
        ConvElement { coop, src, tgt, degree, maps: BTreeMap::new() }
    }

    /// The strict identity morphism of `space`.
    pub fn identity(coop: Arc<NsCooperad<F>>, space: Arc<ChainComplex<F>>) -> Self {
        let mut maps = BTreeMap::new();
        maps.insert(COUNIT, Tensor::identity(space.dim()));
        ConvElement { coop, src: space.clone(), tgt: space, degree: 0, maps }
    }

    /// Same spaces and cooperad, new degree, no components.
    pub fn zero_like(&self, degree: i32) -> Self {
        ConvElement::zero(self.coop.clone(), self.src.clone(), self.tgt.clone(), degree)
    }

    pub fn cooperad(&self) -> &Arc<NsCooperad<F>> {
        &self.coop
    }

    pub fn source(&self) -> &Arc<ChainComplex<F>> {
        &self.src
    }

    pub fn target(&self) -> &Arc<ChainComplex<F>> {
        &self.tgt
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn get(&self, c: usize) -> Option<&Tensor<F>> {
        self.maps.get(&c)
    }

    pub fn component(&self, c: usize) -> Tensor<F> {
        self.maps.get(&c).cloned().unwrap_or_else(|| self.empty_component(c))
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Tensor<F>)> {
        self.maps.iter().map(|(c, t)| (*c, t))
    }

    fn empty_component(&self, c: usize) -> Tensor<F> {
        Tensor::zero(self.coop.arity(c), self.degree + self.coop.degree(c))
    }

    /// Installs the component at `c` after checking arity and degrees.
    pub fn set(&mut self, c: usize, t: Tensor<F>) -> Result<()> {
        if c >= self.coop.len() {
            return Err(Error::contract(format!("no cooperad element {c}")));
        }
        let want = self.degree + self.coop.degree(c);
        if t.arity() != self.coop.arity(c) || (!t.is_zero() && t.degree() != want) {
            return Err(Error::contract(format!(
                "component at {} must have arity {} and degree {want}",
                self.coop.element(c).name,
                self.coop.arity(c)
            )));
        }
        t.check_degrees(self.src.degrees(), self.tgt.degrees())?;
        self.put(c, t);
        Ok(())
    }

    pub(crate) fn put(&mut self, c: usize, t: Tensor<F>) {
        if t.is_zero() {
            self.maps.remove(&c);
        } else {
            self.maps.insert(c, t);
        }
    }

    pub fn remove(&mut self, c: usize) -> Option<Tensor<F>> {
        self.maps.remove(&c)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(Tensor::is_zero)
    }

    fn require_same_shape(&self, o: &Self) -> Result<()> {
        if self.degree != o.degree || !same_space(&self.src, &o.src) || !same_space(&self.tgt, &o.tgt) {
            return Err(Error::contract("convolution elements live in different spaces or degrees"));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.require_same_shape(o)?;
        Ok(self.add_scaled_unchecked(o, &F::one()))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.require_same_shape(o)?;
        Ok(self.add_scaled_unchecked(o, &-F::one()))
    }

    pub(crate) fn add_scaled_unchecked(&self, o: &Self, s: &F) -> Self {
        let mut out = self.clone();
        for (c, t) in &o.maps {
            let mut cur = out.component(*c);
            cur.add_scaled(t, s);
            out.put(*c, cur);
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = self.zero_like(self.degree);
        for (c, t) in &self.maps {
            out.put(*c, t.scale(s));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn weight_part(&self, w: usize) -> Self {
        self.filter(|c| self.coop.weight(c) == w)
    }

    pub fn truncate(&self, cap: usize) -> Self {
        self.filter(|c| self.coop.weight(c) <= cap)
    }

    fn filter(&self, keep: impl Fn(usize) -> bool) -> Self {
        let mut out = self.zero_like(self.degree);
        out.maps = self.maps.iter().filter(|(c, _)| keep(**c)).map(|(c, t)| (*c, t.clone())).collect();
        out
    }

    /// Sorted weights carrying a nonzero component.
    pub fn support(&self) -> Vec<usize> {
        let mut ws: Vec<usize> =
            self.maps.iter().filter(|(_, t)| !t.is_zero()).map(|(c, _)| self.coop.weight(*c)).collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }

    /// `(self ⋆ g)(c) = Σ ± self(c₁) ∘_j g(c₂)` over the partial decomposition of `c`.
    pub fn star_at(&self, g: &Self, c: usize) -> Tensor<F> {
        let src = g.src.degrees();
        let mut out = Tensor::zero(self.coop.arity(c), self.degree + g.degree + self.coop.degree(c));
        for t in self.coop.partial_decomposition(c) {
            let (Some(f1), Some(g2)) = (self.maps.get(&t.root), g.maps.get(&t.leaf)) else { continue };
            let sign = odd(g.degree as i64 * self.coop.degree(t.root) as i64);
            let coeff = if sign { -t.coeff.clone() } else { t.coeff.clone() };
            out.add_scaled(&f1.partial(t.slot, g2, src), &coeff);
        }
        out
    }

    /// Pre-Lie product; `g` must be an endomorphism-type element whose target is `self`'s source.
    pub fn star(&self, g: &Self) -> Result<Self> {
        if !same_space(&self.src, &g.tgt) || !same_space(&g.src, &g.tgt) {
            return Err(Error::contract("pre-Lie product of incompatible elements"));
        }
        Ok(self.star_unchecked(g))
    }

    pub(crate) fn star_unchecked(&self, g: &Self) -> Self {
        let mut out = ConvElement::zero(self.coop.clone(), g.src.clone(), self.tgt.clone(), self.degree + g.degree);
        for c in 0..self.coop.len() {
            out.put(c, self.star_at(g, c));
        }
        out
    }

    /// `(self ⊚ inner)(c) = Σ self(c₀) ∘ (inner(c₁) ⊗ … ⊗ inner(c_m))` over the full decomposition.
    pub fn circ_at(&self, inner: &Self, c: usize) -> Tensor<F> {
        let src = inner.src.degrees();
        let mut out = Tensor::zero(self.coop.arity(c), self.degree + self.coop.degree(c));
        'terms: for t in self.coop.decomposition(c) {
            let Some(root) = self.maps.get(&t.root) else { continue };
            let mut args = Vec::with_capacity(t.leaves.len());
            for l in &t.leaves {
                match inner.maps.get(l) {
                    Some(x) => args.push(x),
                    None => continue 'terms,
                }
            }
            out.add_scaled(&root.compose(&args, src), &t.coeff);
        }
        out
    }

    /// Composition with a degree-0 `inner` whose target is `self`'s source.
    pub fn circ(&self, inner: &Self) -> Result<Self> {
        if inner.degree != 0 {
            return Err(Error::contract("the inner factor of a composition must have degree 0"));
        }
        if !same_space(&self.src, &inner.tgt) {
            return Err(Error::contract("composition of incompatible elements"));
        }
        Ok(self.circ_unchecked(inner))
    }

    pub(crate) fn circ_unchecked(&self, inner: &Self) -> Self {
        let mut out = ConvElement::zero(self.coop.clone(), inner.src.clone(), self.tgt.clone(), self.degree);
        for c in 0..self.coop.len() {
            out.put(c, self.circ_at(inner, c));
        }
        out
    }

    /// `self ⊚ (g; h)`: the full decomposition with `h` in exactly one leaf slot and `g` in the others.
    pub fn circ_inf(&self, g: &Self, h: &Self) -> Result<Self> {
        if g.degree != 0 || !same_space(&self.src, &g.tgt) || !same_space(&g.src, &h.src) || !same_space(&g.tgt, &h.tgt) {
            return Err(Error::contract("infinitesimal composition of incompatible elements"));
        }
        let src = g.src.degrees();
        let mut out = ConvElement::zero(self.coop.clone(), g.src.clone(), self.tgt.clone(), self.degree + h.degree);
        for c in 0..self.coop.len() {
            let mut acc = Tensor::zero(self.coop.arity(c), out.degree + self.coop.degree(c));
            for t in self.coop.decomposition(c) {
                let Some(root) = self.maps.get(&t.root) else { continue };
                let mut before = self.coop.degree(t.root) as i64;
                for j in 0..t.leaves.len() {
                    let args: Option<Vec<&Tensor<F>>> = t
                        .leaves
                        .iter()
                        .enumerate()
                        .map(|(i, l)| if i == j { h.maps.get(l) } else { g.maps.get(l) })
                        .collect();
                    if let Some(args) = args {
                        let neg = odd(h.degree as i64 * before);
                        let coeff = if neg { -t.coeff.clone() } else { t.coeff.clone() };
                        acc.add_scaled(&root.compose(&args, src), &coeff);
                    }
                    before += self.coop.degree(t.leaves[j]) as i64;
                }
            }
            out.put(c, acc);
        }
        Ok(out)
    }

    /// `d_B ∘ f(c) - (-1)^{|f(c)|} f(c) ∘ Σ_j ∘_j d_A - (-1)^{|f|} f(d_C c)`.
    pub fn differential_at(&self, c: usize) -> Tensor<F> {
        let mut out = Tensor::zero(self.coop.arity(c), self.degree - 1 + self.coop.degree(c));
        if let Some(fc) = self.maps.get(&c) {
            let src = self.src.degrees();
            if !self.tgt.has_zero_differential() {
                let d = Tensor::from_map(self.tgt.differential(), -1);
                out.add_scaled(&d.partial(0, fc, src), &F::one());
            }
            if !self.src.has_zero_differential() {
                let d = Tensor::from_map(self.src.differential(), -1);
                let s = if odd(fc.degree() as i64) { F::one() } else { -F::one() };
                for j in 0..fc.arity() {
                    out.add_scaled(&fc.partial(j, &d, src), &s);
                }
            }
        }
        let s = if odd(self.degree as i64) { F::one() } else { -F::one() };
        for (x, a) in self.coop.differential(c) {
            if let Some(fx) = self.maps.get(x) {
                out.add_scaled(fx, &(a.clone() * s.clone()));
            }
        }
        out
    }

    pub fn differential(&self) -> Self {
        let mut out = self.zero_like(self.degree - 1);
        for c in 0..self.coop.len() {
            out.put(c, self.differential_at(c));
        }
        out
    }

    /// `∂φ + φ ⋆ φ`.
    pub fn curvature(&self) -> Result<Self> {
        let sq = self.star(self)?;
        Ok(self.differential().add_scaled_unchecked(&sq, &F::one()))
    }

    pub fn is_maurer_cartan(&self) -> Result<bool> {
        Ok(self.degree == -1 && self.curvature()?.is_zero())
    }

    /// Lowest weight where the curvature is nonzero.
    pub fn mc_defect(&self) -> Result<Option<usize>> {
        Ok(self.curvature()?.support().first().copied())
    }
}
