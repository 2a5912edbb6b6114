use super::conv::{same_space, ConvElement};
use super::lie::ConvLie;
use super::morphism::act_on_structure;
use crate::ainf::build_as_koszul_cooperad;
use crate::error::{require_factorial, Error, Result};
use crate::exact_algebra::Scalar;
use crate::wg_dglie::{class_rank_data, class_vanishes, first_mc_defect, truncated_kaledin_class, KaledinClassRep, LieModel};

/// An ∞-isotopy `f` with `ψ = f·φ` vanishing in weights `2..=n+1`.
#[derive(Clone, Debug)]
pub struct IsotopyCertificate<F> {
    pub truncation: usize,
    pub isotopy: ConvElement<F>,
    pub trivialized: ConvElement<F>,
}

/// A truncated class with no preimage: `rank` of the twisted differential versus `augmented_rank`.
#[derive(Clone, Debug)]
pub struct ObstructionCertificate<F> {
    pub truncation: usize,
    pub class: KaledinClassRep<ConvElement<F>>,
    pub rank: usize,
    pub augmented_rank: usize,
}

#[derive(Clone, Debug)]
pub enum FormalityVerdict<F> {
    Formal(IsotopyCertificate<F>),
    NotFormal(ObstructionCertificate<F>),
}

impl<F> FormalityVerdict<F> {
    pub fn is_formal(&self) -> bool {
        matches!(self, FormalityVerdict::Formal(_))
    }
}

fn algebra_of<F: Scalar>(phi: &ConvElement<F>) -> Result<ConvLie<F>> {
    if !same_space(phi.source(), phi.target()) {
        return Err(Error::contract("a structure maps a space to itself"));
    }
    if phi.degree() != -1 {
        return Err(Error::contract("structures have degree -1"));
    }
    ConvLie::new(phi.cooperad().clone(), phi.source().clone())
}

fn require_structure<F: Scalar>(g: &ConvLie<F>, phi: &ConvElement<F>) -> Result<()> {
    if phi.get(super::cooperad::COUNIT).is_some() {
        return Err(Error::contract("structures have no weight-0 component"));
    }
    match first_mc_defect(g, phi, g.weight_cap())? {
        Some(weight) => Err(Error::NotMaurerCartan { weight }),
        None => Ok(()),
    }
}

/// `K^n`: the cycle `φ^(2) + 2φ^(3)ħ + … + nφ^(n+1)ħ^{n-1}` twisted by `φ^(1) + … + φ^(n)ħ^{n-1}`.
pub fn operadic_truncated_kaledin<F: Scalar>(
    phi: &ConvElement<F>,
    n: usize,
) -> Result<KaledinClassRep<ConvElement<F>>> {
    let g = algebra_of(phi)?;
    truncated_kaledin_class(&g, phi, n)
}

/// Composite of isotopies `1 + λ_k` killing weights `2..=n+1`, or `None` when some `K^k`, `k ≤ n`, is nonzero.
pub fn operadic_trivialize<F: Scalar>(
    phi: &ConvElement<F>,
    n: usize,
) -> Result<Option<(ConvElement<F>, ConvElement<F>)>> {
    require_factorial(F::field(), n as u64)?;
    let g = algebra_of(phi)?;
    if n == 0 || n + 1 > g.weight_cap() {
        return Err(Error::contract(format!("truncation {n} needs 1 <= n <= weight cap - 1")));
    }
    require_structure(&g, phi)?;
    let one = ConvElement::identity(phi.cooperad().clone(), phi.source().clone());
    let mut total = one.clone();
    let mut psi = phi.clone();
    for k in 1..=n {
        let rep = truncated_kaledin_class(&g, &psi, k)?;
        let (ok, witness) = class_vanishes(&g, &rep)?;
        if !ok {
            return Ok(None);
        }
        let top = witness.expect("witness accompanies a vanishing class")[k - 1].weight_part(k);
        if top.is_zero() {
            continue;
        }
        let inv_k = F::from_i64(k as i64).inv().ok_or(Error::FactorialGate { k: k as u64, field: F::field() })?;
        let step = one.add(&top.scale(&inv_k))?;
        psi = act_on_structure(&step, &psi)?;
        total = step.circ(&total)?;
    }
    if (2..=n + 1).any(|w| !psi.weight_part(w).is_zero()) {
        return Err(Error::InvalidStructure("trivialization left a nonzero middle weight".into()));
    }
    Ok(Some((total, psi)))
}

/// Gauge `n`-formality of a transferred structure, with a certificate either way.
pub fn decide_gauge_n_formal<F: Scalar>(phi_t: &ConvElement<F>, n: usize) -> Result<FormalityVerdict<F>> {
    require_factorial(F::field(), n as u64)?;
    let g = algebra_of(phi_t)?;
    require_structure(&g, phi_t)?;
    let class = truncated_kaledin_class(&g, phi_t, n)?;
    let (vanishes, _) = class_vanishes(&g, &class)?;
    if !vanishes {
        let (rank, augmented_rank) = class_rank_data(&g, &class)?;
        return Ok(FormalityVerdict::NotFormal(ObstructionCertificate { truncation: n, class, rank, augmented_rank }));
    }
    match operadic_trivialize(phi_t, n)? {
        Some((isotopy, trivialized)) => {
            Ok(FormalityVerdict::Formal(IsotopyCertificate { truncation: n, isotopy, trivialized }))
        }
        None => Err(Error::InvalidStructure("vanishing class but no trivializing isotopy".into())),
    }
}

/// Largest weight `w` with a possibly nonzero degree -1 component on the associative Koszul dual,
/// or `None` when the degrees of `H` allow every weight.
pub fn as_vanishing_bound(degrees: &[i32]) -> Option<usize> {
    let (Some(lo), Some(hi)) = (degrees.iter().min(), degrees.iter().max()) else { return Some(0) };
    if *lo < 0 {
        return None;
    }
    Some(((hi - lo + 1) / (lo + 1)).max(0) as usize)
}

/// Full gauge formality over characteristic 0 on the associative Koszul dual, decided at `W₀ - 1`.
pub fn decide_gauge_formal_bounded<F: Scalar>(phi_t: &ConvElement<F>) -> Result<FormalityVerdict<F>> {
    if F::characteristic() != 0 {
        return Err(Error::UnsupportedCharacteristic(format!(
            "the bounded decider needs characteristic 0, got {}",
            F::field()
        )));
    }
    let coop = phi_t.cooperad();
    if **coop != *build_as_koszul_cooperad::<F>(coop.weight_cap())? {
        return Err(Error::contract("the bounded decider is available for the associative Koszul dual only"));
    }
    let w0 = as_vanishing_bound(phi_t.source().degrees())
        .ok_or_else(|| Error::Undecided("unbounded weight support".into()))?;
    if w0 > coop.weight_cap() {
        return Err(Error::contract(format!("full decision needs weight cap >= {w0}")));
    }
    if w0 <= 1 {
        let g = algebra_of(phi_t)?;
        require_structure(&g, phi_t)?;
        let one = ConvElement::identity(coop.clone(), phi_t.source().clone());
        return Ok(FormalityVerdict::Formal(IsotopyCertificate {
            truncation: 0,
            isotopy: one,
            trivialized: phi_t.clone(),
        }));
    }
    decide_gauge_n_formal(phi_t, w0 - 1)
}

/// Weight cap a full decision needs for a structure on a space with these degrees.
pub fn bounded_weight_cap(degrees: &[i32]) -> Option<usize> {
    as_vanishing_bound(degrees).map(|w| w.max(1))
}
