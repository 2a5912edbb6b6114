use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exact_algebra::{inverse, ChainComplex, Scalar, SparseMap};
use crate::ns_operadic::{ConvElement, NsCooperad, Tensor, COUNIT};

/// A degree-preserving linear automorphism `u` of a graded space `H`, stored blockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyAutomorphism<F> {
    space: Arc<ChainComplex<F>>,
    map: SparseMap<F>,
    inv: SparseMap<F>,
}

impl<F: Scalar> HomologyAutomorphism<F> {
    /// From a full matrix on `H`; must be block diagonal for the grading and invertible.
    pub fn from_matrix(space: Arc<ChainComplex<F>>, map: SparseMap<F>) -> Result<Self> {
        let n = space.dim();
        if map.rows() != n || map.cols() != n {
            return Err(Error::contract(format!("automorphism of a {n}-dimensional space must be {n}x{n}")));
        }
        let deg = space.degrees();
        if let Some((r, c, _)) = map.entries().iter().find(|(r, c, _)| deg[*r] != deg[*c]) {
            return Err(Error::contract(format!("entry ({r}, {c}) mixes degrees {} and {}", deg[*r], deg[*c])));
        }
        let inv = inverse(&map).ok_or_else(|| Error::NotInvertible("u is not invertible".into()))?;
        Ok(HomologyAutomorphism { space, map, inv })
    }

    /// From per-degree blocks `u_k` in the local basis order of `H_k`.
    pub fn from_blocks(space: Arc<ChainComplex<F>>, blocks: &BTreeMap<i32, Vec<Vec<F>>>) -> Result<Self> {
        let mut trip = Vec::new();
        for (k, dim) in space.module().dims() {
            let b = blocks.get(&k).ok_or_else(|| Error::contract(format!("missing block for degree {k}")))?;
            if b.len() != dim || b.iter().any(|row| row.len() != dim) {
                return Err(Error::contract(format!("block for degree {k} must be {dim}x{dim}")));
            }
            let idx = space.module().basis_in_degree(k);
            for (r, row) in b.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    trip.push((idx[r], idx[c], v.clone()));
                }
            }
        }
        if let Some(k) = blocks.keys().find(|k| space.module().dim_in_degree(**k) == 0) {
            return Err(Error::contract(format!("block for degree {k} where H is zero")));
        }
        let n = space.dim();
        Self::from_matrix(space, SparseMap::from_triplets(n, n, trip)?)
    }

    pub fn identity(space: Arc<ChainComplex<F>>) -> Self {
        let n = space.dim();
        Self::from_matrix(space, SparseMap::identity(n)).expect("identity is an automorphism")
    }

    /// `σ_{(α,ϑ)}`: multiplication by `α^{ϑk}` on `H_k`.
    pub fn grading(space: Arc<ChainComplex<F>>, alpha: &F, theta: Ratio<i64>) -> Result<Self> {
        if alpha.inv().is_none() {
            return Err(Error::contract("α must be a unit"));
        }
        let mut trip = Vec::new();
        for (i, k) in space.degrees().iter().enumerate() {
            let e = integral_exponent(theta, *k as i64)?;
            trip.push((i, i, alpha.pow_i64(e).expect("α is a unit")));
        }
        let n = space.dim();
        Self::from_matrix(space, SparseMap::from_triplets(n, n, trip)?)
    }

    pub fn space(&self) -> &Arc<ChainComplex<F>> {
        &self.space
    }

    pub fn matrix(&self) -> &SparseMap<F> {
        &self.map
    }

    /// `u_k` as a dense matrix in the local basis of `H_k`.
    pub fn block(&self, k: i32) -> Vec<Vec<F>> {
        let idx = self.space.module().basis_in_degree(k);
        idx.iter().map(|r| idx.iter().map(|c| self.map.get(*r, *c)).collect()).collect()
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.space.module().dims().into_keys().collect()
    }

    /// `u` as a strict ∞-morphism.
    pub fn as_morphism(&self, coop: &Arc<NsCooperad<F>>) -> ConvElement<F> {
        let mut f = ConvElement::zero(coop.clone(), self.space.clone(), self.space.clone(), 0);
        f.set(COUNIT, Tensor::from_map(&self.map, 0)).expect("u preserves degrees");
        f
    }

    /// `Ad_u(x) = (u ∘ x) ⊚ u⁻¹`, computed componentwise as `u ∘ x(c) ∘ (u⁻¹)^{⊗m}`.
    pub fn adjoint(&self, x: &ConvElement<F>) -> Result<ConvElement<F>> {
        if **x.source() != *self.space || **x.target() != *self.space {
            return Err(Error::contract("element lives on a different space"));
        }
        let deg = self.space.degrees();
        let u = Tensor::from_map(&self.map, 0);
        let v = Tensor::from_map(&self.inv, 0);
        let mut out = x.zero_like(x.degree());
        for (c, t) in x.components() {
            let inner = vec![&v; t.arity()];
            let r = u.compose(&[t], deg).compose(&inner, deg);
            out.set(c, r)?;
        }
        Ok(out)
    }

    /// Whether `u ∘ φ_* = φ_* ∘ u^{⊗}` on every component.
    pub fn preserves(&self, phi_star: &ConvElement<F>) -> Result<bool> {
        Ok(self.adjoint(phi_star)? == *phi_star)
    }
}

pub(crate) fn integral_exponent(theta: Ratio<i64>, k: i64) -> Result<i64> {
    let e = theta * Ratio::from_integer(k);
    if !e.is_integer() {
        return Err(Error::contract(format!("ϑ·{k} = {e} is not an integer")));
    }
    Ok(e.to_integer())
}
