use std::collections::BTreeMap;
use std::sync::Arc;

use super::koszul::mu_name;
use crate::error::{Error, Result};
use crate::exact_algebra::{ChainComplex, Scalar};
use crate::ns_operadic::{ConvElement, NsCooperad, Tensor, COUNIT};

/// Operations `m_n : A^{⊗n} → A` of degree `n - 2` for `n ≥ 2`; `m_1` is the differential of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct AInfinityStructure<F> {
    space: Arc<ChainComplex<F>>,
    ops: BTreeMap<usize, Tensor<F>>,
}

impl<F: Scalar> AInfinityStructure<F> {
    pub fn new(space: Arc<ChainComplex<F>>) -> Self {
        AInfinityStructure { space, ops: BTreeMap::new() }
    }

    pub fn space(&self) -> &Arc<ChainComplex<F>> {
        &self.space
    }

    pub fn set_operation(&mut self, n: usize, m: Tensor<F>) -> Result<()> {
        if n < 2 {
            return Err(Error::contract("m_1 is the differential of the underlying complex"));
        }
        if m.arity() != n || (!m.is_zero() && m.degree() != n as i32 - 2) {
            return Err(Error::contract(format!("m_{n} must have arity {n} and degree {}", n as i32 - 2)));
        }
        m.check_degrees(self.space.degrees(), self.space.degrees())?;
        if m.is_zero() {
            self.ops.remove(&n);
        } else {
            self.ops.insert(n, m);
        }
        Ok(())
    }

    /// `m_n`; `m_1` is the differential.
    pub fn operation(&self, n: usize) -> Tensor<F> {
        match n {
            1 => Tensor::from_map(self.space.differential(), -1),
            _ => self.ops.get(&n).cloned().unwrap_or_else(|| Tensor::zero(n, n as i32 - 2)),
        }
    }

    pub fn operations(&self) -> &BTreeMap<usize, Tensor<F>> {
        &self.ops
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(1)
    }

    /// `Σ_{r+s+t=n} (-1)^{r+st} m_{r+1+t} ∘_r m_s`.
    pub fn stasheff_defect(&self, n: usize) -> Tensor<F> {
        let degrees = self.space.degrees();
        let mut out = Tensor::zero(n, n as i32 - 3);
        for s in 1..=n {
            let inner = self.operation(s);
            if inner.is_zero() {
                continue;
            }
            for r in 0..=n - s {
                let t = n - r - s;
                let outer = self.operation(r + 1 + t);
                let sign = if (r + s * t) % 2 == 1 { -F::one() } else { F::one() };
                out.add_scaled(&outer.partial(r, &inner, degrees), &sign);
            }
        }
        out
    }

    /// First arity `≤ up_to` where the Stasheff identity fails.
    pub fn first_stasheff_failure(&self, up_to: usize) -> Option<usize> {
        (1..=up_to).find(|n| !self.stasheff_defect(*n).is_zero())
    }

    pub fn is_ainfinity(&self, up_to: usize) -> bool {
        self.first_stasheff_failure(up_to).is_none()
    }
}

fn mu<F: Scalar>(coop: &NsCooperad<F>, n: usize) -> Result<usize> {
    coop.find(&mu_name(n)).ok_or_else(|| Error::contract(format!("cooperad has no generator {}", mu_name(n))))
}

/// `φ(μ_n) = m_n` for `2 ≤ n ≤ W + 1`.
pub fn ainf_to_conv<F: Scalar>(a: &AInfinityStructure<F>, coop: &Arc<NsCooperad<F>>) -> Result<ConvElement<F>> {
    let top = coop.weight_cap() + 1;
    if a.max_arity() > top {
        return Err(Error::contract(format!("operation m_{} exceeds the weight cap", a.max_arity())));
    }
    let mut phi = ConvElement::zero(coop.clone(), a.space.clone(), a.space.clone(), -1);
    for (n, m) in &a.ops {
        phi.set(mu(coop, *n)?, m.clone())?;
    }
    Ok(phi)
}

pub fn conv_to_ainf<F: Scalar>(phi: &ConvElement<F>) -> Result<AInfinityStructure<F>> {
    if phi.degree() != -1 {
        return Err(Error::contract("structures have degree -1"));
    }
    let coop = phi.cooperad();
    let mut a = AInfinityStructure::new(phi.source().clone());
    for (c, t) in phi.components() {
        if c == COUNIT {
            return Err(Error::contract("structure has a counit component"));
        }
        let n = coop.arity(c);
        if coop.element(c).name != mu_name(n) {
            return Err(Error::contract("element does not live on the associative Koszul dual"));
        }
        a.set_operation(n, t.clone())?;
    }
    Ok(a)
}

/// `f_n = f(μ_n)`, with `f_1 = f(I)`.
pub fn morphism_components<F: Scalar>(f: &ConvElement<F>) -> BTreeMap<usize, Tensor<F>> {
    let coop = f.cooperad();
    f.components().map(|(c, t)| (coop.arity(c), t.clone())).collect()
}

/// Degree-0 element with `f(I) = f_1` and `f(μ_n) = f_n`.
pub fn morphism_from_components<F: Scalar>(
    coop: &Arc<NsCooperad<F>>,
    src: &Arc<ChainComplex<F>>,
    tgt: &Arc<ChainComplex<F>>,
    comps: &BTreeMap<usize, Tensor<F>>,
) -> Result<ConvElement<F>> {
    let mut f = ConvElement::zero(coop.clone(), src.clone(), tgt.clone(), 0);
    for (n, t) in comps {
        let c = if *n == 1 { COUNIT } else { mu(coop, *n)? };
        f.set(c, t.clone())?;
    }
    Ok(f)
}
