use std::sync::Arc;

use super::contraction::Contraction;
use super::structure::{ainf_to_conv, AInfinityStructure};
use crate::error::{Error, Result};
use crate::exact_algebra::{image_membership, Scalar};
use crate::ns_operadic::{ConvElement, NsCooperad, Tensor, COUNIT};

/// Output of the transfer: `φ_t` on `H` and the ∞-quasi-isomorphisms `i∞: H ⇝ A`, `p∞: A ⇝ H`.
#[derive(Clone, Debug)]
pub struct Transferred<F> {
    pub structure: ConvElement<F>,
    pub inclusion: ConvElement<F>,
    pub projection: ConvElement<F>,
}

/// Transfers `a` along `c` over the cooperad `coop` (which fixes the weight cap).
pub fn homotopy_transfer<F: Scalar>(
    a: &AInfinityStructure<F>,
    c: &Contraction<F>,
    coop: &Arc<NsCooperad<F>>,
) -> Result<Transferred<F>> {
    if **a.space() != *c.complex {
        return Err(Error::contract("contraction and structure live on different complexes"));
    }
    if !c.homology.has_zero_differential() {
        return Err(Error::contract("transfer targets a space with zero differential"));
    }
    c.validate()?;
    let phi = ainf_to_conv(a, coop)?;
    let (big, small) = (c.complex.clone(), c.homology.clone());
    let small_deg = small.degrees().to_vec();
    let big_deg = big.degrees().to_vec();
    let i = Tensor::from_map(&c.i, 0);
    let p = Tensor::from_map(&c.p, 0);
    let h = Tensor::from_map(&c.h, 1);
    let ip = Tensor::from_map(&c.i.mul(&c.p)?, 0);
    let id = Tensor::identity(big.dim());

    let mut phi_t = ConvElement::zero(coop.clone(), small.clone(), small.clone(), -1);
    let mut inc = ConvElement::zero(coop.clone(), small.clone(), big.clone(), 0);
    inc.set(COUNIT, i)?;
    let mut proj = ConvElement::zero(coop.clone(), big.clone(), small.clone(), 0);
    proj.set(COUNIT, p.clone())?;
    let order: Vec<usize> = coop.by_weight().into_iter().filter(|&x| x != COUNIT).collect();

    for &x in &order {
        let mut r = phi.circ_at(&inc, x);
        r.add_scaled(&inc.star_at(&phi_t, x), &-F::one());
        for (y, coeff) in coop.differential(x) {
            r.add_scaled(&inc.component(*y), &-coeff.clone());
        }
        phi_t.set(x, p.partial(0, &r, &small_deg))?;
        inc.set(x, h.partial(0, &r, &small_deg))?;
    }

    for &x in &order {
        let mut s = phi_t.circ_at(&proj, x);
        s.add_scaled(&proj.star_at(&phi, x), &-F::one());
        for (y, coeff) in coop.differential(x) {
            s.add_scaled(&proj.component(*y), &-coeff.clone());
        }
        if coop.degree(x) % 2 != 0 {
            s = s.scale(&-F::one());
        }
        let m = coop.arity(x);
        let mut g = Tensor::zero(m, coop.degree(x));
        for j in 0..m {
            let args: Vec<&Tensor<F>> = (0..m)
                .map(|k| match k.cmp(&j) {
                    std::cmp::Ordering::Less => &id,
                    std::cmp::Ordering::Equal => &h,
                    std::cmp::Ordering::Greater => &ip,
                })
                .collect();
            g.add_scaled(&s.compose(&args, &big_deg), &-F::one());
        }
        proj.set(x, g)?;
    }
    Ok(Transferred { structure: phi_t, inclusion: inc, projection: proj })
}

/// The weight-1 part `φ_*`.
pub fn induced_structure<F: Scalar>(phi_t: &ConvElement<F>) -> ConvElement<F> {
    phi_t.weight_part(1)
}

/// `m₃(a, b, c)` modulo `m₂(a, H) + m₂(H, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MasseyCoset<F> {
    pub value: Vec<F>,
    pub indeterminacy: Vec<Vec<F>>,
}

impl<F: Scalar> MasseyCoset<F> {
    pub fn is_zero(&self) -> Result<bool> {
        contains(&self.indeterminacy, &self.value)
    }

    /// Whether `v` represents the same class.
    pub fn contains(&self, v: &[F]) -> Result<bool> {
        let diff: Vec<F> = self.value.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect();
        contains(&self.indeterminacy, &diff)
    }
}

fn contains<F: Scalar>(span: &[Vec<F>], v: &[F]) -> Result<bool> {
    if v.iter().all(|x| x.is_zero()) {
        return Ok(true);
    }
    let cols: Vec<_> = span.iter().map(|s| crate::exact_algebra::to_sparse(s)).collect();
    let a = crate::exact_algebra::SparseMap::from_columns(v.len(), &cols)?;
    Ok(image_membership(&a, v)?.0)
}

/// Triple product of homology classes given as coordinate vectors.
pub fn triple_massey<F: Scalar>(phi_t: &ConvElement<F>, a: &[F], b: &[F], c: &[F]) -> Result<MasseyCoset<F>> {
    let coop = phi_t.cooperad();
    let (mu2, mu3) = match (coop.find("mu2"), coop.find("mu3")) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::contract("triple products need weights 1 and 2 of the associative Koszul dual")),
    };
    let n = phi_t.source().dim();
    if a.len() != n || b.len() != n || c.len() != n {
        return Err(Error::contract("classes must have one coordinate per basis element of H"));
    }
    let m2 = phi_t.component(mu2);
    let m3 = phi_t.component(mu3);
    let zero = |v: &[F]| v.iter().all(|x| x.is_zero());
    if !zero(&m2.apply(&[a, b], n)) || !zero(&m2.apply(&[b, c], n)) {
        return Err(Error::UndefinedProduct("m2(a, b) and m2(b, c) must vanish".into()));
    }
    let value = m3.apply(&[a, b, c], n);
    let mut indeterminacy = Vec::new();
    for j in 0..n {
        let mut e = vec![F::zero(); n];
        e[j] = F::one();
        indeterminacy.push(m2.apply(&[a, &e], n));
        indeterminacy.push(m2.apply(&[&e, c], n));
    }
    indeterminacy.retain(|v| !zero(v));
    Ok(MasseyCoset { value, indeterminacy })
}
