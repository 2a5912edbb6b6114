//! Sufficient formality criteria on homology: purity, automorphism lifts, spectra, rigidity.

mod automorphism;
mod poly;
mod report;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

pub use automorphism::HomologyAutomorphism;
pub use poly::{charpoly, kronecker, Poly};
pub use report::{Conclusion, CriterionReport, HypothesisCheck};

use crate::error::{Error, Result};
use crate::exact_algebra::{rank, ExactField, Scalar, SparseMap};
use crate::ns_operadic::{decide_gauge_n_formal, ConvElement, ConvLie, COUNIT};
use crate::wg_dglie::{twisted_block, LieModel};

/// True iff every `k <= n` is a unit.
pub fn factorial_gate(field: ExactField, n: u64) -> bool {
    field.first_non_unit_up_to(n).is_none()
}

/// Degree -1 blocks in weights `2..=n+1` and degree 0 blocks in weights `1..=n`, where nonzero.
pub fn relevant_blocks<F: Scalar>(g: &ConvLie<F>, n: usize) -> Vec<(usize, i32)> {
    let cap = g.weight_cap();
    (2..=n + 1)
        .map(|w| (w, -1))
        .chain((1..=n).map(|w| (w, 0)))
        .filter(|&(w, d)| w <= cap && g.dim(w, d) > 0)
        .collect()
}

struct Setup<F> {
    g: ConvLie<F>,
    phi_star: ConvElement<F>,
}

fn setup<F: Scalar>(phi: &ConvElement<F>, n: usize, report: &mut CriterionReport) -> Result<Setup<F>> {
    if n == 0 {
        return Err(Error::contract("truncation must be at least 1"));
    }
    if phi.degree() != -1 || **phi.source() != **phi.target() {
        return Err(Error::contract("a structure is a degree -1 element on a single space"));
    }
    if phi.get(COUNIT).is_some() {
        return Err(Error::contract("structures have no weight-0 component"));
    }
    let phi_star = phi.weight_part(1);
    if !phi_star.is_maurer_cartan()? {
        return Err(Error::contract("the weight-1 part is not a Maurer-Cartan element"));
    }
    let g = ConvLie::new(phi.cooperad().clone(), phi.source().clone())?;
    report.check(format!("{n}! is a unit in {}", F::field()), factorial_gate(F::field(), n as u64));
    report.check(format!("weight cap {} reaches weight {}", g.weight_cap(), n + 1), g.weight_cap() > n);
    Ok(Setup { g, phi_star })
}

fn block_name(w: usize, d: i32) -> String {
    format!("weight {w}, degree {d}")
}

/// Grading automorphism `σ_{(α,ϑ)}` criterion; requires weight equal to homological degree on the cooperad.
pub fn purity_criterion<F: Scalar>(alpha: &F, theta: Ratio<i64>, phi: &ConvElement<F>, n: usize) -> Result<CriterionReport> {
    if theta == Ratio::from_integer(0) {
        return Err(Error::contract("ϑ must be a non-zero rational number"));
    }
    let coop = phi.cooperad();
    if let Some(c) = (0..coop.len()).find(|&c| c != COUNIT && coop.degree(c) != coop.weight(c) as i32) {
        return Err(Error::contract(format!(
            "purity needs weight = homological degree; {} has weight {} and degree {}",
            coop.element(c).name,
            coop.weight(c),
            coop.degree(c)
        )));
    }
    HomologyAutomorphism::grading(phi.source().clone(), alpha, theta)?;
    let mut report = CriterionReport::new("purity", n);
    let s = setup(phi, n, &mut report)?;
    let ks: BTreeSet<i64> = relevant_blocks(&s.g, n).into_iter().map(|(w, d)| w as i64 + d as i64).collect();
    for k in ks {
        let e = automorphism::integral_exponent(theta, k)?;
        let value = alpha.pow_i64(e).expect("α is a unit") - F::one();
        report.check(format!("α^(ϑ·{k}) - 1 = {value} is a unit"), !value.is_zero());
    }
    report.assumption = Some(format!("σ(α={alpha}, ϑ={theta}) admits a chain level lift"));
    let unbounded = F::characteristic() == 0 && *alpha != F::one() && *alpha != -F::one();
    if unbounded && report.passed() {
        report.notes.push("α^(ϑk) - 1 is a unit for every k ≠ 0, so the conclusion holds in every weight".into());
        report.conclude(Conclusion::Formal);
    } else {
        report.conclude(Conclusion::GaugeNFormal { n });
    }
    Ok(report)
}

/// Matrix of `Ad_u - id` on the block `(w, d)` in the basis of the convolution algebra.
pub fn ad_minus_id_block<F: Scalar>(g: &ConvLie<F>, u: &HomologyAutomorphism<F>, w: usize, d: i32) -> Result<SparseMap<F>> {
    let dim = g.dim(w, d);
    let mut trip = Vec::new();
    for i in 0..dim {
        let x = g.basis_vector(w, d, i);
        let y = g.sub(&u.adjoint(&x)?, &x);
        trip.extend(g.coordinates(&y, w).into_iter().map(|(r, v)| (r, i, v)));
    }
    SparseMap::from_triplets(dim, dim, trip)
}

fn require_automorphism<F: Scalar>(u: &HomologyAutomorphism<F>, s: &Setup<F>) -> Result<()> {
    if **u.space() != **s.phi_star.source() {
        return Err(Error::contract("automorphism acts on a different space"));
    }
    if !u.preserves(&s.phi_star)? {
        return Err(Error::contract("u does not preserve the induced structure"));
    }
    Ok(())
}

/// `Ad_u - id` invertible on every relevant block up to weight `n+1`.
pub fn aut_lift_criterion<F: Scalar>(u: &HomologyAutomorphism<F>, phi: &ConvElement<F>, n: usize) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("aut-lift", n);
    let s = setup(phi, n, &mut report)?;
    require_automorphism(u, &s)?;
    for (w, d) in relevant_blocks(&s.g, n) {
        let m = ad_minus_id_block(&s.g, u, w, d)?;
        report.check(format!("Ad_u - id is invertible on {}", block_name(w, d)), rank(&m) == m.cols());
    }
    report.assumption = Some("u admits a chain level lift".into());
    if F::characteristic() == 0 {
        report.notes.push(
            "if Ad_u - id is invertible in every weight, the structure is gauge formal and every automorphism of the induced structure lifts".into(),
        );
    }
    report.conclude(Conclusion::GaugeNFormal { n });
    Ok(report)
}

/// Disjointness of `Spec(u_{a_1} ⊗ … ⊗ u_{a_m})` and `Spec(u_b)` for every input/output degree pattern
/// of the relevant blocks, via gcd of characteristic polynomials.
pub fn spectrum_criterion<F: Scalar>(u: &HomologyAutomorphism<F>, phi: &ConvElement<F>, n: usize) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("spectrum", n);
    let s = setup(phi, n, &mut report)?;
    require_automorphism(u, &s)?;
    let coop = phi.cooperad();
    let degrees: BTreeSet<i32> = u.degrees().into_iter().collect();
    let mut patterns: BTreeSet<(Vec<i32>, i32)> = BTreeSet::new();
    for (w, d) in relevant_blocks(&s.g, n) {
        for c in coop.of_weight(w) {
            let k = coop.degree(c) + d;
            for inputs in tuples(&degrees, coop.arity(c)) {
                let out = k + inputs.iter().sum::<i32>();
                if degrees.contains(&out) {
                    patterns.insert((inputs, out));
                }
            }
        }
    }
    let mut cache: BTreeMap<Vec<i32>, Poly<F>> = BTreeMap::new();
    let mut poly_of = |ks: &[i32]| -> Poly<F> {
        cache
            .entry(ks.to_vec())
            .or_insert_with(|| {
                let m = ks[1..].iter().fold(u.block(ks[0]), |acc, k| kronecker(&acc, &u.block(*k)));
                charpoly(&m)
            })
            .clone()
    };
    for (inputs, out) in patterns {
        let gcd = poly_of(&inputs).gcd(&poly_of(&[out]));
        let label = inputs.iter().map(|a| format!("u_{a}")).collect::<Vec<_>>().join(" ⊗ ");
        report.check(format!("Spec({label}) and Spec(u_{out}) are disjoint"), gcd.degree() == Some(0));
    }
    report.assumption = Some("u admits a chain level lift".into());
    if F::characteristic() != 0 {
        report.notes.push("spectral test in positive characteristic is experimental".into());
    }
    report.conclude(Conclusion::GaugeNFormal { n });
    Ok(report)
}

fn tuples(degrees: &BTreeSet<i32>, m: usize) -> Vec<Vec<i32>> {
    (0..m).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                degrees.iter().map(move |a| {
                    let mut t = t.clone();
                    t.push(*a);
                    t
                })
            })
            .collect()
    })
}

/// Degree -1 homology of `𝔤^{φ_*}` vanishing in weights `2..=n+1` (weights above `n+1` truncated away).
/// Applies to every structure with weight-1 part `φ_*`.
pub fn intrinsic_criterion<F: Scalar>(phi: &ConvElement<F>, n: usize) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("intrinsic", n);
    let s = setup(phi, n, &mut report)?;
    let top = (n + 1).min(s.g.weight_cap());
    for w in 2..=top {
        let dim = s.g.dim(w, -1);
        if dim == 0 {
            continue;
        }
        let out_rank = if w < top { rank(&twisted_block(&s.g, &s.phi_star, w, -1)) } else { 0 };
        let in_rank = rank(&twisted_block(&s.g, &s.phi_star, w - 1, 0));
        report.check(format!("H_-1 vanishes in weight {w}"), dim - out_rank == in_rank);
    }
    report.conclude(Conclusion::GaugeNFormal { n });
    Ok(report)
}

/// Runs the obstruction decider on `phi_t` at the report's truncation and records its verdict.
pub fn cross_check<F: Scalar>(report: &mut CriterionReport, phi_t: &ConvElement<F>) -> Result<()> {
    report.cross_check = Some(decide_gauge_n_formal(phi_t, report.truncation)?.is_formal());
    Ok(())
}
