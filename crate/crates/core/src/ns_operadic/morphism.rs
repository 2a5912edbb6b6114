use super::conv::{same_space, ConvElement};
use super::cooperad::COUNIT;
use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::exact_algebra::{inverse, Scalar};

/// `f ⋆ φ_A - φ_B ⊚ f - ∂f`; zero exactly when `f` is an ∞-morphism.
pub fn infinity_morphism_defect<F: Scalar>(
    f: &ConvElement<F>,
    phi_a: &ConvElement<F>,
    phi_b: &ConvElement<F>,
) -> Result<ConvElement<F>> {
    if f.degree() != 0 {
        return Err(Error::contract("an ∞-morphism has degree 0"));
    }
    let lhs = f.star(phi_a)?;
    let rhs = phi_b.circ(f)?;
    lhs.sub(&rhs)?.sub(&f.differential())
}

pub fn check_infinity_morphism<F: Scalar>(
    f: &ConvElement<F>,
    phi_a: &ConvElement<F>,
    phi_b: &ConvElement<F>,
) -> Result<bool> {
    Ok(infinity_morphism_defect(f, phi_a, phi_b)?.is_zero())
}

/// Inverse for `⊚` of a degree-0 element whose counit component is invertible.
pub fn invert_infinity_iso<F: Scalar>(f: &ConvElement<F>) -> Result<ConvElement<F>> {
    if f.degree() != 0 {
        return Err(Error::contract("only degree-0 elements can be inverted"));
    }
    let (n_src, n_tgt) = (f.source().dim(), f.target().dim());
    let f0 = f.component(COUNIT).to_map(n_tgt, n_src)?;
    let g0 = match (n_src == n_tgt).then(|| inverse(&f0)).flatten() {
        Some(m) => m,
        None => return Err(Error::NotInvertible("linear part is not invertible".into())),
    };
    let g0 = Tensor::from_map(&g0, 0);
    let coop = f.cooperad().clone();
    let mut g = ConvElement::zero(coop.clone(), f.target().clone(), f.source().clone(), 0);
    g.put(COUNIT, g0.clone());
    let tgt_degrees = f.target().degrees().to_vec();
    for c in coop.by_weight().into_iter().filter(|&c| c != COUNIT) {
        let rest = g.circ_at(f, c);
        if rest.is_zero() {
            continue;
        }
        let args = vec![&g0; coop.arity(c)];
        g.put(c, rest.compose(&args, &tgt_degrees).scale(&-F::one()));
    }
    Ok(g)
}

/// `(f ⋆ x) ⊚ f⁻¹`.
pub fn adjoint<F: Scalar>(f: &ConvElement<F>, x: &ConvElement<F>) -> Result<ConvElement<F>> {
    let inv = invert_infinity_iso(f)?;
    f.star(x)?.circ(&inv)
}

/// Transports the structure `φ` on the source of `f` to its target: `(f ⋆ φ - ∂f) ⊚ f⁻¹`.
pub fn act_on_structure<F: Scalar>(f: &ConvElement<F>, phi: &ConvElement<F>) -> Result<ConvElement<F>> {
    if !same_space(f.source(), phi.target()) {
        return Err(Error::contract("structure lives on a different space"));
    }
    let inv = invert_infinity_iso(f)?;
    f.star(phi)?.sub(&f.differential())?.circ(&inv)
}

/// `f(I) = id`.
pub fn is_isotopy<F: Scalar>(f: &ConvElement<F>) -> bool {
    same_space(f.source(), f.target())
        && f.degree() == 0
        && f.component(COUNIT) == Tensor::identity(f.source().dim())
}
