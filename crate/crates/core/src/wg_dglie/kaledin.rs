use super::lie::{series_bracket, series_is_zero, series_twisted_diff, HbarSeries, LieModel};
use super::mc::{bch_to, gauge_action_to, require_mc};
use crate::error::{require_factorial, Error, Result};
use crate::exact_algebra::{image_membership, rank, Scalar, SparseMap};

/// `φ_0 + φ_1 ħ + … + φ_N ħ^N`, all of degree -1.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalDeformation<E> {
    pub base: E,
    pub coeffs: Vec<E>,
}

impl<E: Clone> FormalDeformation<E> {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `[φ_0, φ_1, …, φ_N]`.
    pub fn series(&self) -> Vec<E> {
        std::iter::once(self.base.clone()).chain(self.coeffs.iter().cloned()).collect()
    }
}

/// A truncated class: the cycle `cycle` in the complex `𝔤[ħ]/(ħⁿ)` twisted by `twist`.
#[derive(Clone, Debug, PartialEq)]
pub struct KaledinClassRep<E> {
    pub truncation: usize,
    pub delta: usize,
    pub twist: HbarSeries<E>,
    pub cycle: HbarSeries<E>,
}

/// Low-weight part check shared by the decomposition and the class builders.
fn require_support_from<F: Scalar, L: LieModel<F>>(g: &L, phi: &L::Elem, lo: usize) -> Result<()> {
    match g.lowest_weight(phi) {
        Some(w) if w < lo => Err(Error::contract(format!("element has a component in weight {w} < {lo}"))),
        _ => Ok(()),
    }
}

/// Repackages weights `δ, δ+1, …, W` of `φ` as the coefficients of `1, ħ, …, ħ^{W-δ}`.
pub fn prismatic<F: Scalar, L: LieModel<F>>(g: &L, phi: &L::Elem) -> Result<FormalDeformation<L::Elem>> {
    let delta = g.delta();
    require_support_from(g, phi, delta)?;
    let base = g.weight_part(phi, delta);
    let coeffs = (delta + 1..=g.weight_cap()).map(|w| g.weight_part(phi, w)).collect();
    Ok(FormalDeformation { base, coeffs })
}

/// `λ ↦ λ^(1) ħ + λ^(2) ħ² + …`; entry 0 is zero.
pub fn prismatic_gauge<F: Scalar, L: LieModel<F>>(g: &L, lam: &L::Elem) -> Result<HbarSeries<L::Elem>> {
    require_support_from(g, lam, 1)?;
    Ok((0..=g.weight_cap()).map(|w| if w == 0 { g.zero(0) } else { g.weight_part(lam, w) }).collect())
}

/// Lowest `ħ` order where the series fails the Maurer-Cartan equation.
pub fn series_mc_defect<F: Scalar, L: LieModel<F>>(g: &L, phi: &[L::Elem]) -> Result<Option<usize>> {
    for k in 0..phi.len() {
        let mut acc = g.differential(&phi[k]);
        for a in 0..k {
            let b = k - a;
            if a < b {
                acc = g.add(&acc, &g.bracket(&phi[a], &phi[b]));
            }
        }
        if k % 2 == 0 {
            acc = g.add(&acc, &g.half_square(&phi[k / 2])?);
        }
        if !g.is_zero(&acc) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `∂_ħ Φ = Σ i φ_i ħ^{i-1}`, checked to be a cycle for `d^Φ` modulo `ħ^N`.
pub fn kaledin_cycle<F: Scalar, L: LieModel<F>>(
    g: &L,
    def: &FormalDeformation<L::Elem>,
) -> Result<HbarSeries<L::Elem>> {
    let full = def.series();
    if let Some(order) = series_mc_defect(g, &full)? {
        return Err(Error::NotMaurerCartan { weight: g.delta() + order });
    }
    let cycle: Vec<_> =
        def.coeffs.iter().enumerate().map(|(i, c)| g.scale(c, &F::from_i64(i as i64 + 1))).collect();
    let n = cycle.len();
    if !series_is_zero(g, &series_twisted_diff(g, &full, &cycle, n)) {
        return Err(Error::InvalidStructure("derivative of the deformation is not a twisted cycle".into()));
    }
    Ok(cycle)
}

/// `[φ^(δ+1) + 2φ^(δ+2)ħ + … + nφ^(δ+n)ħ^{n-1}]` twisted by `φ^(δ) + … + φ^(δ+n-1)ħ^{n-1}`.
pub fn truncated_kaledin_class<F: Scalar, L: LieModel<F>>(
    g: &L,
    phi: &L::Elem,
    n: usize,
) -> Result<KaledinClassRep<L::Elem>> {
    let delta = g.delta();
    if n == 0 {
        return Err(Error::contract("truncation must be at least 1"));
    }
    if delta + n > g.weight_cap() {
        return Err(Error::contract(format!("truncation {n} needs weight cap >= {}", delta + n)));
    }
    require_support_from(g, phi, delta)?;
    let twist = (0..n).map(|i| g.weight_part(phi, delta + i)).collect();
    let cycle = (0..n).map(|i| g.scale(&g.weight_part(phi, delta + i + 1), &F::from_i64(i as i64 + 1))).collect();
    Ok(KaledinClassRep { truncation: n, delta, twist, cycle })
}

/// The flattened twisted differential from degree 0 (weights `1..=n`) to degree -1 (weights `δ+1..=δ+n`).
pub(crate) fn flattened_system<F: Scalar, L: LieModel<F>>(
    g: &L,
    rep: &KaledinClassRep<L::Elem>,
) -> (SparseMap<F>, Vec<F>, Vec<(usize, usize)>) {
    let n = rep.truncation;
    let delta = rep.delta;
    let row_offsets: Vec<usize> = (0..n)
        .scan(0, |acc, j| {
            let o = *acc;
            *acc += g.dim(delta + 1 + j, -1);
            Some(o)
        })
        .collect();
    let rows = row_offsets.last().map_or(0, |o| o + g.dim(delta + n, -1));
    let mut unknowns = Vec::new();
    let mut triplets = Vec::new();
    for b in 0..n {
        for idx in 0..g.dim(1 + b, 0) {
            let col = unknowns.len();
            unknowns.push((b, idx));
            let mut x: Vec<L::Elem> = (0..n).map(|_| g.zero(0)).collect();
            x[b] = g.basis_vector(1 + b, 0, idx);
            let image = series_twisted_diff(g, &rep.twist, &x, n);
            for (j, e) in image.iter().enumerate() {
                for (r, c) in g.coordinates(e, delta + 1 + j) {
                    triplets.push((row_offsets[j] + r, col, c));
                }
            }
        }
    }
    let mut rhs = vec![F::zero(); rows];
    for (j, e) in rep.cycle.iter().enumerate() {
        for (r, c) in g.coordinates(e, delta + 1 + j) {
            rhs[row_offsets[j] + r] = c;
        }
    }
    let a = SparseMap::from_triplets(rows, unknowns.len(), triplets).expect("indices in range");
    (a, rhs, unknowns)
}

/// Solves `d^{Φ̄} x = cycle` over the flattened complex; the witness has degree 0.
pub fn class_vanishes<F: Scalar, L: LieModel<F>>(
    g: &L,
    rep: &KaledinClassRep<L::Elem>,
) -> Result<(bool, Option<HbarSeries<L::Elem>>)> {
    let (a, rhs, unknowns) = flattened_system(g, rep);
    let (ok, sol) = image_membership(&a, &rhs)?;
    if !ok {
        return Ok((false, None));
    }
    let sol = sol.expect("witness accompanies membership");
    let mut x: Vec<L::Elem> = (0..rep.truncation).map(|_| g.zero(0)).collect();
    for ((b, idx), c) in unknowns.iter().zip(sol) {
        if !c.is_zero() {
            x[*b] = g.add(&x[*b], &g.scale(&g.basis_vector(1 + b, 0, *idx), &c));
        }
    }
    Ok((true, Some(x)))
}

/// Rank data of the flattened system: (rank of the twisted differential, rank with the cycle appended).
pub fn class_rank_data<F: Scalar, L: LieModel<F>>(g: &L, rep: &KaledinClassRep<L::Elem>) -> Result<(usize, usize)> {
    let (a, rhs, _) = flattened_system(g, rep);
    crate::exact_algebra::augmented_ranks(&a, &rhs)
}

/// Gauge killing weights `δ+1..=δ+n`, or `None` when some class `K^k`, `k <= n`, is nonzero.
pub fn trivializing_gauge<F: Scalar, L: LieModel<F>>(g: &L, phi: &L::Elem, n: usize) -> Result<Option<L::Elem>> {
    require_factorial(F::field(), n as u64)?;
    let delta = g.delta();
    if delta + n > g.weight_cap() {
        return Err(Error::contract(format!("truncation {n} needs weight cap >= {}", delta + n)));
    }
    require_support_from(g, phi, delta)?;
    require_mc(g, phi)?;
    let cap = delta + n;
    let mut psi = g.truncate(phi, cap);
    let mut total = g.zero(0);
    if g.support(&psi).iter().all(|w| *w == delta) {
        return Ok(Some(total));
    }
    for k in 1..=n {
        let rep = truncated_kaledin_class(g, &psi, k)?;
        let (ok, witness) = class_vanishes(g, &rep)?;
        if !ok {
            return Ok(None);
        }
        let top = g.weight_part(&witness.expect("witness")[k - 1], k);
        let inv_k = F::from_i64(k as i64).inv().ok_or(Error::FactorialGate { k: k as u64, field: F::field() })?;
        let lam = g.scale(&top, &inv_k);
        if g.is_zero(&lam) {
            continue;
        }
        psi = gauge_action_to(g, &lam, &psi, cap)?;
        total = bch_to(g, &lam, &total, n)?;
    }
    Ok(Some(total))
}

/// Matrix of `x ↦ d x + [ψ, x]` from block `(w, d)` into block `(w + δ, d - 1)`.
pub(crate) fn twisted_block<F: Scalar, L: LieModel<F>>(g: &L, psi: &L::Elem, w: usize, d: i32) -> SparseMap<F> {
    let tw = w + g.delta();
    let rows = if tw <= g.weight_cap() { g.dim(tw, d - 1) } else { 0 };
    let cols = g.dim(w, d);
    let mut trip = Vec::new();
    if rows > 0 {
        for c in 0..cols {
            let x = g.basis_vector(w, d, c);
            let y = g.add(&g.differential(&x), &g.bracket(psi, &x));
            for (r, v) in g.coordinates(&y, tw) {
                trip.push((r, c, v));
            }
        }
    }
    SparseMap::from_triplets(rows, cols, trip).expect("indices in range")
}

/// True iff degree -1 homology of `𝔤/ℱⁿ` twisted by the weight-δ element `ψ` vanishes.
pub fn rigidity_check<F: Scalar, L: LieModel<F>>(g: &L, psi: &L::Elem, n: usize) -> Result<bool> {
    let delta = g.delta();
    if g.support(psi).iter().any(|w| *w != delta) {
        return Err(Error::contract("rigidity needs an element concentrated in weight δ"));
    }
    require_mc(g, psi)?;
    for w in 1..n.min(g.weight_cap() + 1) {
        let dim = g.dim(w, -1);
        if dim == 0 {
            continue;
        }
        let out_rank = if w + delta < n { rank(&twisted_block(g, psi, w, -1)) } else { 0 };
        let in_rank = if w > delta { rank(&twisted_block(g, psi, w - delta, 0)) } else { 0 };
        if dim - out_rank != in_rank {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_j [a_j] ħ^j` bracket of two series, exposed for series-level checks.
pub fn hbar_bracket<F: Scalar, L: LieModel<F>>(g: &L, x: &[L::Elem], y: &[L::Elem], len: usize) -> HbarSeries<L::Elem> {
    let deg = match (x.first(), y.first()) {
        (Some(a), Some(b)) => g.degree_of(a) + g.degree_of(b),
        _ => 0,
    };
    series_bracket(g, x, y, len, deg)
}

/// `d x + [t, x]` on series modulo `ħ^len`.
pub fn hbar_twisted_differential<F: Scalar, L: LieModel<F>>(
    g: &L,
    t: &[L::Elem],
    x: &[L::Elem],
    len: usize,
) -> HbarSeries<L::Elem> {
    series_twisted_diff(g, t, x, len)
}
