use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::lie::LieModel;
use crate::error::{require_factorial, Error, Result};
use crate::exact_algebra::Scalar;

fn require_degree<F: Scalar, L: LieModel<F>>(g: &L, x: &L::Elem, degree: i32, what: &str) -> Result<()> {
    if !g.is_zero(x) && g.degree_of(x) != degree {
        return Err(Error::contract(format!("{what} must have degree {degree}, found {}", g.degree_of(x))));
    }
    Ok(())
}

/// Lowest weight `<= cap` where `dφ + ½[φ,φ]` is nonzero.
pub fn first_mc_defect<F: Scalar, L: LieModel<F>>(g: &L, phi: &L::Elem, cap: usize) -> Result<Option<usize>> {
    require_degree(g, phi, -1, "Maurer-Cartan candidate")?;
    let curv = g.curvature(phi)?;
    Ok(g.support(&curv).into_iter().find(|w| *w <= cap))
}

pub fn check_maurer_cartan<F: Scalar, L: LieModel<F>>(g: &L, phi: &L::Elem, cap: usize) -> Result<bool> {
    Ok(first_mc_defect(g, phi, cap)?.is_none())
}

pub(crate) fn require_mc<F: Scalar, L: LieModel<F>>(g: &L, phi: &L::Elem) -> Result<()> {
    match first_mc_defect(g, phi, g.weight_cap())? {
        Some(weight) => Err(Error::NotMaurerCartan { weight }),
        None => Ok(()),
    }
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub(crate) fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn rational_to<F: Scalar>(r: &BigRational) -> Option<F> {
    F::from_ratio(r.numer(), r.denom())
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `log(e^x e^y)` modulo weights above `cap`.
pub fn bch_to<F: Scalar, L: LieModel<F>>(g: &L, x: &L::Elem, y: &L::Elem, cap: usize) -> Result<L::Elem> {
    require_degree(g, x, 0, "BCH argument")?;
    require_degree(g, y, 0, "BCH argument")?;
    let x = g.truncate(x, cap);
    let y = g.truncate(y, cap);
    let low = [g.lowest_weight(&x), g.lowest_weight(&y)].into_iter().flatten().min();
    let Some(low) = low else { return Ok(g.zero(0)) };
    if low == 0 {
        return Err(Error::contract("BCH arguments must lie in weights >= 1"));
    }
    let terms = cap / low;
    require_factorial(F::field(), terms as u64)?;
    let b = bernoulli(terms);
    let sum = g.add(&x, &y);
    let diff = g.sub(&x, &y);
    let half = F::from_i64(2).inv();
    // z[n] is the part of word length n + 1.
    let mut z: Vec<L::Elem> = vec![sum.clone()];
    for n in 1..terms {
        let mut next = match &half {
            Some(h) => g.scale(&g.truncate(&g.bracket(&diff, &z[n - 1]), cap), h),
            None => g.zero(0),
        };
        for p in 1..=n / 2 {
            let kp = &b[2 * p] / BigRational::from_integer((1..=2 * p).map(BigInt::from).product());
            if kp.is_zero() {
                continue;
            }
            let kp: F = rational_to(&kp).ok_or(Error::FactorialGate { k: (2 * p) as u64, field: F::field() })?;
            for comp in compositions(n, 2 * p) {
                let mut acc = sum.clone();
                for k in comp.iter().rev() {
                    acc = g.truncate(&g.bracket(&z[k - 1], &acc), cap);
                    if g.is_zero(&acc) {
                        break;
                    }
                }
                next = g.add(&next, &g.scale(&acc, &kp));
            }
        }
        let inv = F::from_i64(n as i64 + 1).inv().ok_or(Error::FactorialGate { k: n as u64 + 1, field: F::field() })?;
        z.push(g.scale(&next, &inv));
    }
    Ok(g.sum(0, z.iter()))
}

pub fn truncated_bch<F: Scalar, L: LieModel<F>>(g: &L, x: &L::Elem, y: &L::Elem) -> Result<L::Elem> {
    bch_to(g, x, y, g.weight_cap())
}

/// `Σ_j c_j ad_λ^j(x)` truncated at `cap`, with `c_j = 1/(j + shift)!`.
fn ad_series<F: Scalar, L: LieModel<F>>(
    g: &L,
    lam: &L::Elem,
    x: &L::Elem,
    cap: usize,
    shift: u64,
) -> Result<L::Elem> {
    let mut term = g.truncate(x, cap);
    let mut acc = g.zero(g.degree_of(x));
    let mut fact = F::one();
    for k in 2..=shift {
        fact *= &F::from_i64(k as i64);
    }
    let mut j = 0u64;
    while !g.is_zero(&term) {
        let inv = fact.inv().ok_or(Error::FactorialGate { k: j + shift, field: F::field() })?;
        acc = g.add(&acc, &g.scale(&term, &inv));
        j += 1;
        fact *= &F::from_i64((j + shift) as i64);
        term = g.truncate(&g.bracket(lam, &term), cap);
    }
    Ok(acc)
}

/// Largest factorial index the series `Σ ad_λ^j(x)/(j+shift)!` can reach below `cap`.
fn series_gate<F: Scalar, L: LieModel<F>>(g: &L, lam: &L::Elem, x: &L::Elem, cap: usize, shift: u64) -> u64 {
    match (g.lowest_weight(lam), g.lowest_weight(x)) {
        (Some(wl), Some(wx)) if wx <= cap => ((cap - wx) / wl.max(1)) as u64 + shift,
        _ => 0,
    }
}

/// `e^{ad_λ}(x)` modulo weights above `cap`.
pub fn exp_ad_to<F: Scalar, L: LieModel<F>>(g: &L, lam: &L::Elem, x: &L::Elem, cap: usize) -> Result<L::Elem> {
    require_degree(g, lam, 0, "gauge parameter")?;
    require_factorial(F::field(), series_gate(g, lam, x, cap, 0))?;
    ad_series(g, lam, x, cap, 0)
}

pub fn exp_ad<F: Scalar, L: LieModel<F>>(g: &L, lam: &L::Elem, x: &L::Elem) -> Result<L::Elem> {
    exp_ad_to(g, lam, x, g.weight_cap())
}

/// `λ·φ = e^{ad_λ}φ - ((e^{ad_λ} - 1)/ad_λ)(dλ)` modulo weights above `cap`; no MC check.
pub fn gauge_action_to<F: Scalar, L: LieModel<F>>(
    g: &L,
    lam: &L::Elem,
    phi: &L::Elem,
    cap: usize,
) -> Result<L::Elem> {
    require_degree(g, lam, 0, "gauge parameter")?;
    require_degree(g, phi, -1, "Maurer-Cartan element")?;
    let dlam = g.differential(lam);
    let gate = series_gate(g, lam, phi, cap, 0).max(series_gate(g, lam, &dlam, cap, 1));
    require_factorial(F::field(), gate)?;
    let a = ad_series(g, lam, phi, cap, 0)?;
    let b = ad_series(g, lam, &dlam, cap, 1)?;
    Ok(g.sub(&a, &b))
}

pub fn gauge_action<F: Scalar, L: LieModel<F>>(g: &L, lam: &L::Elem, phi: &L::Elem) -> Result<L::Elem> {
    require_mc(g, phi)?;
    gauge_action_to(g, lam, phi, g.weight_cap())
}

/// The twisted differential `d + ad_ψ` of a Maurer-Cartan element.
pub struct Twisted<'a, F: Scalar, L: LieModel<F>> {
    g: &'a L,
    psi: L::Elem,
    _field: std::marker::PhantomData<F>,
}

impl<'a, F: Scalar, L: LieModel<F>> Twisted<'a, F, L> {
    pub fn apply(&self, x: &L::Elem) -> L::Elem {
        self.g.add(&self.g.differential(x), &self.g.bracket(&self.psi, x))
    }

    pub fn twisting_element(&self) -> &L::Elem {
        &self.psi
    }
}

pub fn twist<'a, F: Scalar, L: LieModel<F>>(g: &'a L, psi: &L::Elem) -> Result<Twisted<'a, F, L>> {
    require_mc(g, psi)?;
    Ok(Twisted { g, psi: psi.clone(), _field: std::marker::PhantomData })
}
