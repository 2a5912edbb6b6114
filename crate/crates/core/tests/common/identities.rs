//! Randomized identity checks shared by the property tests and the acceptance suite.
//! Each check returns `Err` with the failing identity.

use std::sync::Arc;

use gauge_formality::ainf::{ainf_to_conv, build_as_koszul_cooperad, AInfinityStructure};
use gauge_formality::exact_algebra::{ChainComplex, Scalar};
use gauge_formality::ns_operadic::{
    act_on_structure, adjoint, check_infinity_morphism, invert_infinity_iso, operadic_truncated_kaledin, ConvElement,
    ConvLie, NsCooperad, Tensor, COUNIT,
};
use gauge_formality::wg_dglie::{
    bch_to, class_vanishes, gauge_action, hbar_twisted_differential, kaledin_cycle, prismatic, KaledinClassRep,
    LieModel,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{complex, exterior_algebra, random_conv, random_graded_automorphism, rng};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn ok<T>(r: gauge_formality::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn sign<F: Scalar>(odd: bool) -> F {
    if odd {
        -F::one()
    } else {
        F::one()
    }
}

/// Associative Koszul dual plus a primitive `y` with `d y = μ₂`.
pub fn cooperad_with_differential<F: Scalar>(cap: usize) -> Arc<NsCooperad<F>> {
    let mut b = build_as_koszul_cooperad::<F>(cap).unwrap().to_builder();
    let y = b.add_element("y", 2, 2, 2);
    let mu2 = b.find("mu2").unwrap();
    b.set_differential(y, vec![(mu2, F::one())]).unwrap();
    Arc::new(b.build().unwrap())
}

pub fn space_with_differential<F: Scalar>() -> Arc<ChainComplex<F>> {
    complex(&[0, 1, 1, 2], &[(0, 1, 1), (2, 3, 2)])
}

/// `f⁽⁰⁾ + λ` with `f⁽⁰⁾` a random graded automorphism and `λ` in weights `1..=hi`.
pub fn random_iso<F: Scalar>(
    r: &mut ChaCha8Rng,
    coop: &Arc<NsCooperad<F>>,
    space: &Arc<ChainComplex<F>>,
    hi: usize,
) -> ConvElement<F> {
    let mut f = random_conv(r, coop, space, space, 0, 1, hi);
    let g = if space.differential().is_zero() {
        random_graded_automorphism::<F>(r, space.degrees())
    } else {
        gauge_formality::exact_algebra::SparseMap::identity(space.dim())
    };
    f.set(COUNIT, Tensor::from_map(&g, 0)).unwrap();
    f
}

fn random_degree(r: &mut ChaCha8Rng) -> i32 {
    r.gen_range(-1..=1)
}

fn with_unit<F: Scalar>(degrees: &[i32], products: &[(usize, usize, usize)]) -> AInfinityStructure<F> {
    let space = complex::<F>(degrees, &[]);
    let mut m2 = Tensor::zero(2, 0);
    for i in 0..degrees.len() {
        m2.add_term(vec![0, i, i], &F::one());
        if i != 0 {
            m2.add_term(vec![i, 0, i], &F::one());
        }
    }
    for (a, b, c) in products {
        m2.add_term(vec![*a, *b, *c], &F::one());
    }
    let mut s = AInfinityStructure::new(space);
    s.set_operation(2, m2).unwrap();
    s
}

/// A Maurer-Cartan element on a space of dimension at most four with zero differential,
/// moved by a random ∞-isomorphism.
pub fn random_structure<F: Scalar>(r: &mut ChaCha8Rng, cap: usize) -> (Arc<NsCooperad<F>>, ConvElement<F>) {
    let coop = build_as_koszul_cooperad::<F>(cap).unwrap();
    let base = match r.gen_range(0..5) {
        0 => exterior_algebra::<F>(),
        1 => {
            let mut s = AInfinityStructure::new(complex::<F>(&[1, 1, 1, 4], &[]));
            let mut m3 = Tensor::zero(3, 1);
            m3.add_term(vec![0, 1, 2, 3], &F::one());
            s.set_operation(3, m3).unwrap();
            s
        }
        2 => with_unit(&[0, 2], &[]),
        3 => with_unit(&[0, 2, 4], &[(1, 1, 2)]),
        _ => {
            let n = r.gen_range(1..=4);
            let degrees: Vec<i32> = (0..n).map(|_| r.gen_range(-1..=2)).collect();
            AInfinityStructure::new(complex::<F>(&degrees, &[]))
        }
    };
    let base = ainf_to_conv(&base, &coop).unwrap();
    let f = random_iso(r, &coop, base.source(), cap);
    let phi = act_on_structure(&f, &base).unwrap();
    (coop, phi)
}

pub fn pre_lie<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let coop = cooperad_with_differential::<F>(r.gen_range(2..=3));
    let s = space_with_differential::<F>();
    let cap = coop.weight_cap();
    let [x, y, z] = [0, 1, 2].map(|_| {
        let d = random_degree(&mut r);
        random_conv(&mut r, &coop, &s, &s, d, 0, cap)
    });
    let assoc = |a: &ConvElement<F>, b: &ConvElement<F>, c: &ConvElement<F>| -> Result<ConvElement<F>, String> {
        ok(a.star(b).and_then(|ab| ab.star(c)).and_then(|l| l.sub(&a.star(&b.star(c)?)?)), "associator")
    };
    let rhs = assoc(&x, &z, &y)?.scale(&sign(y.degree() * z.degree() % 2 != 0));
    ensure!(assoc(&x, &y, &z)? == rhs, "pre-Lie identity fails");
    Ok(())
}

pub fn circ_associative_unital<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let coop = build_as_koszul_cooperad::<F>(r.gen_range(2..=4)).unwrap();
    let cap = coop.weight_cap();
    let a = complex::<F>(&[0, 1, 1], &[]);
    let b = complex::<F>(&[0, 1], &[]);
    let c = space_with_differential::<F>();
    let f = random_conv(&mut r, &coop, &a, &b, 0, 0, cap);
    let g = random_conv(&mut r, &coop, &b, &c, 0, 0, cap);
    let dh = random_degree(&mut r);
    let h = random_conv(&mut r, &coop, &c, &c, dh, 0, cap);
    let left = ok(h.circ(&g).and_then(|hg| hg.circ(&f)), "(h⊚g)⊚f")?;
    let right = ok(g.circ(&f).and_then(|gf| h.circ(&gf)), "h⊚(g⊚f)")?;
    ensure!(left == right, "⊚ is not associative");
    let one_b = ConvElement::identity(coop.clone(), b.clone());
    let one_a = ConvElement::identity(coop.clone(), a.clone());
    ensure!(ok(one_b.circ(&f), "1⊚f")? == f, "left unit fails");
    ensure!(ok(f.circ(&one_a), "f⊚1")? == f, "right unit fails");
    Ok(())
}

pub fn compatibility<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let coop = cooperad_with_differential::<F>(r.gen_range(2..=3));
    let cap = coop.weight_cap();
    let s = space_with_differential::<F>();
    let df = random_degree(&mut r);
    let dh = random_degree(&mut r);
    let f = random_conv(&mut r, &coop, &s, &s, df, 0, cap);
    let g = random_iso(&mut r, &coop, &s, cap);
    let h = random_conv(&mut r, &coop, &s, &s, dh, 0, cap);
    let k = random_conv(&mut r, &coop, &s, &s, 0, 0, cap);
    let one = ConvElement::identity(coop.clone(), s.clone());
    let g_inv = ok(invert_infinity_iso(&g), "g⁻¹")?;
    let e = |x| ok(x, "compatibility");
    let fg = e(f.circ(&g))?;
    ensure!(e(fg.star(&h))? == e(f.circ_inf(&g, &e(g.star(&h))?))?, "(a) (f⊚g)⋆h = f⊚(g; g⋆h) fails");
    let lhs = e(e(f.circ_inf(&g, &h))?.circ(&k))?;
    let rhs = e(f.circ_inf(&e(g.circ(&k))?, &e(h.circ(&k))?))?;
    ensure!(lhs == rhs, "(b) (f⊚(g;h))⊚k = f⊚(g⊚k; h⊚k) fails");
    ensure!(e(f.star(&h))? == e(f.circ_inf(&one, &h))?, "(c) f⋆h = f⊚(1;h) fails");
    let rhs = e(e(f.star(&e(h.circ(&g_inv))?))?.circ(&g))?;
    ensure!(e(f.circ_inf(&g, &h))? == rhs, "(d) f⊚(g;h) = (f⋆(h⊚g⁻¹))⊚g fails");
    let lhs = e(e(fg.star(&h))?.circ(&g_inv))?;
    let rhs = e(f.star(&e(e(g.star(&h))?.circ(&g_inv))?))?;
    ensure!(lhs == rhs, "(e) ((f⊚g)⋆h)⊚g⁻¹ = f⋆((g⋆h)⊚g⁻¹) fails");
    Ok(())
}

pub fn differentials<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let coop = cooperad_with_differential::<F>(r.gen_range(2..=3));
    let cap = coop.weight_cap();
    let s = space_with_differential::<F>();
    let e = |x| ok(x, "differentials");
    let (df, dg) = (random_degree(&mut r), random_degree(&mut r));
    let f = random_conv(&mut r, &coop, &s, &s, df, 0, cap);
    let g = random_conv(&mut r, &coop, &s, &s, dg, 0, cap);
    let eps = sign::<F>(df % 2 != 0);
    let lhs = e(f.star(&g))?.differential();
    let rhs = e(e(f.differential().star(&g))?.add(&e(f.star(&g.differential()))?.scale(&eps)))?;
    ensure!(lhs == rhs, "(i) d(f⋆g) = d(f)⋆g + (-1)^|f| f⋆d(g) fails");
    let g0 = random_conv(&mut r, &coop, &s, &s, 0, 0, cap);
    let lhs = e(f.circ(&g0))?.differential();
    let rhs = e(e(f.differential().circ(&g0))?.add(&e(f.circ_inf(&g0, &g0.differential()))?.scale(&eps)))?;
    ensure!(lhs == rhs, "(j) d(f⊚g) = d(f)⊚g + (-1)^|f| f⊚(g; d(g)) fails");
    ensure!(ConvElement::identity(coop.clone(), s.clone()).differential().is_zero(), "(k) d(1) = 0 fails");
    let g = random_iso(&mut r, &coop, &s, cap);
    let inv = e(invert_infinity_iso(&g))?;
    let rhs = e(inv.star(&e(g.differential().circ(&inv))?))?.neg();
    ensure!(inv.differential() == rhs, "(l) d(g⁻¹) = -g⁻¹⋆(d(g)⊚g⁻¹) fails");
    Ok(())
}

pub fn gauge_group_law<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let cap = r.gen_range(2..=4);
    let (coop, phi) = random_structure::<F>(&mut r, cap);
    let s = phi.source().clone();
    let g = ok(ConvLie::new(coop.clone(), s.clone()), "ConvLie")?;
    let lam = random_conv(&mut r, &coop, &s, &s, 0, 1, cap);
    let mu = random_conv(&mut r, &coop, &s, &s, 0, 1, cap);
    let inner = ok(gauge_action(&g, &mu, &phi), "μ·φ")?;
    ensure!(ok(inner.is_maurer_cartan(), "mc")?, "μ·φ is not Maurer-Cartan");
    let lhs = ok(gauge_action(&g, &lam, &inner), "λ·(μ·φ)")?;
    let rhs = ok(gauge_action(&g, &ok(bch_to(&g, &lam, &mu, cap), "bch")?, &phi), "BCH(λ,μ)·φ")?;
    ensure!(lhs == rhs, "λ·(μ·φ) = BCH(λ, μ)·φ fails");
    let f1 = random_iso(&mut r, &coop, &s, cap);
    let f2 = random_iso(&mut r, &coop, &s, cap);
    let lhs = ok(act_on_structure(&f1, &ok(act_on_structure(&f2, &phi), "f₂·φ")?), "f₁·(f₂·φ)")?;
    let rhs = ok(act_on_structure(&ok(f1.circ(&f2), "f₁⊚f₂")?, &phi), "(f₁⊚f₂)·φ")?;
    ensure!(lhs == rhs, "f₁·(f₂·φ) = (f₁⊚f₂)·φ fails");
    Ok(())
}

pub fn derivative_is_cycle<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let cap = r.gen_range(2..=5);
    let (coop, phi) = random_structure::<F>(&mut r, cap);
    let g = ok(ConvLie::new(coop, phi.source().clone()), "ConvLie")?;
    let def = ok(prismatic(&g, &phi), "prismatic")?;
    let cycle = ok(kaledin_cycle(&g, &def), "∂_ħ𝔇(φ)")?;
    let image = hbar_twisted_differential(&g, &def.series(), &cycle, cycle.len());
    ensure!(image.iter().all(|x| x.is_zero()), "∂_ħ𝔇(φ) is not a d^Φ-cycle");
    Ok(())
}

pub fn adjoint_intertwines<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let cap = r.gen_range(2..=4);
    let (coop, phi) = random_structure::<F>(&mut r, cap);
    let s = phi.source().clone();
    let g = ok(ConvLie::new(coop.clone(), s.clone()), "ConvLie")?;
    let f = random_iso(&mut r, &coop, &s, cap);
    let psi = ok(act_on_structure(&f, &phi), "f·φ")?;
    let (dx, dy) = (random_degree(&mut r), random_degree(&mut r));
    let x = random_conv(&mut r, &coop, &s, &s, dx, 1, cap);
    let y = random_conv(&mut r, &coop, &s, &s, dy, 1, cap);
    let ad = |z: &ConvElement<F>| ok(adjoint(&f, z), "Ad_f");
    ensure!(ad(&g.bracket(&x, &y))? == g.bracket(&ad(&x)?, &ad(&y)?), "Ad_f[x, y] = [Ad_f x, Ad_f y] fails");
    let d_phi = |z: &ConvElement<F>| g.add(&g.differential(z), &g.bracket(&phi, z));
    let d_psi = |z: &ConvElement<F>| g.add(&g.differential(z), &g.bracket(&psi, z));
    ensure!(ad(&d_phi(&x))? == d_psi(&ad(&x)?), "Ad_f d^φ = d^ψ Ad_f fails");
    let f_inv = ok(invert_infinity_iso(&f), "f⁻¹")?;
    ensure!(ok(adjoint(&f_inv, &ad(&x)?), "Ad_f⁻¹")? == x, "Ad_f⁻¹ Ad_f = id fails");
    Ok(())
}

fn f0_part<F: Scalar>(f: &ConvElement<F>) -> ConvElement<F> {
    f.weight_part(0)
}

pub fn key_lemma<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let cap = r.gen_range(2..=4);
    let n = r.gen_range(1..cap);
    let coop = build_as_koszul_cooperad::<F>(cap).unwrap();
    let base = match r.gen_range(0..3) {
        0 => exterior_algebra::<F>(),
        1 => with_unit(&[0, 2, 4], &[(1, 1, 2)]),
        _ => with_unit(&[0, 1], &[]),
    };
    let s = base.space().clone();
    let base = ainf_to_conv(&base, &coop).unwrap();
    let g = ok(ConvLie::new(coop.clone(), s.clone()), "ConvLie")?;
    let one = ConvElement::identity(coop.clone(), s.clone());
    let plant = random_conv(&mut r, &coop, &s, &s, 0, n, n);
    let phi = ok(act_on_structure(&ok(one.add(&plant), "1 + μ")?, &base), "planted φ")?;
    for k in 2..=n {
        ensure!(phi.weight_part(k).is_zero(), "planted φ has weight {k}");
    }
    let f0 = f0_part(&random_iso(&mut r, &coop, &s, 0));
    let fn_ = random_conv(&mut r, &coop, &s, &s, 0, n, n);
    let f = ok(f0.add(&fn_), "f")?;
    let psi = ok(act_on_structure(&f, &phi), "f·φ")?;
    let ad0 = |z: &ConvElement<F>| ok(adjoint(&f0, z), "Ad_f⁽⁰⁾");
    let psi1 = ad0(&phi.weight_part(1))?;
    ensure!(psi.weight_part(1) == psi1, "ψ⁽¹⁾ = Ad_f⁽⁰⁾(φ⁽¹⁾) fails");
    for k in 2..=n {
        ensure!(psi.weight_part(k).is_zero(), "ψ⁽{k}⁾ = 0 fails");
    }
    let u = ok(fn_.circ(&ok(invert_infinity_iso(&f0), "f⁽⁰⁾⁻¹")?), "f⁽ⁿ⁾⊚f⁽⁰⁾⁻¹")?;
    let twisted = g.add(&g.differential(&u), &g.bracket(&psi1, &u));
    let expected = g.sub(&ad0(&phi.weight_part(n + 1))?, &twisted);
    ensure!(psi.weight_part(n + 1) == expected, "ψ⁽ⁿ⁺¹⁾ closed form fails");
    Ok(())
}

/// `Ad_F(K^n_Φ) - K^n_Ψ = d^Ψ(∂_ħF ⊚ F⁻¹)` modulo `ħⁿ`, for `F = 𝔇(f)`.
pub fn piquant<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let cap = r.gen_range(2..=4);
    let n = r.gen_range(1..cap);
    let (coop, phi) = random_structure::<F>(&mut r, cap);
    let s = phi.source().clone();
    let g = ok(ConvLie::new(coop.clone(), s.clone()), "ConvLie")?;
    let f = random_iso(&mut r, &coop, &s, cap);
    let psi = ok(act_on_structure(&f, &phi), "f·φ")?;
    let k_phi = ok(operadic_truncated_kaledin(&phi, n), "K^n_Φ")?;
    let k_psi = ok(operadic_truncated_kaledin(&psi, n), "K^n_Ψ")?;
    let delta = k_phi.delta;
    let mut moved: Vec<ConvElement<F>> = (0..n).map(|_| g.zero(-1)).collect();
    for (j, c) in k_phi.cycle.iter().enumerate() {
        let w = delta + 1 + j;
        let a = ok(adjoint(&f, c), "Ad_f")?;
        for w2 in w..=cap {
            if j + w2 - w < n {
                moved[j + w2 - w] = g.add(&moved[j + w2 - w], &a.weight_part(w2));
            }
        }
    }
    let diff: Vec<_> = moved.iter().zip(&k_psi.cycle).map(|(a, b)| g.sub(a, b)).collect();
    let mut euler = f.zero_like(0);
    for w in 1..=cap {
        euler = ok(euler.add(&f.weight_part(w).scale(&F::from_i64(w as i64))), "Ef")?;
    }
    let witness = ok(euler.circ(&ok(invert_infinity_iso(&f), "f⁻¹")?), "∂_ħF⊚F⁻¹")?;
    let witness: Vec<_> = (0..n).map(|j| witness.weight_part(j + 1)).collect();
    let boundary = hbar_twisted_differential(&g, &k_psi.twist, &witness, n);
    ensure!(diff == boundary, "Ad_F(K_Φ) - K_Ψ = d^Ψ(∂_ħF⊚F⁻¹) fails");
    let rep = KaledinClassRep { truncation: n, delta, twist: k_psi.twist.clone(), cycle: diff };
    ensure!(ok(class_vanishes(&g, &rep), "image membership")?.0, "difference is not a twisted boundary");
    Ok(())
}

pub fn inversion_round_trip<F: Scalar>(seed: u64) -> Check {
    let mut r = rng(seed);
    let cap = r.gen_range(2..=5);
    let (coop, phi) = random_structure::<F>(&mut r, cap);
    let s = phi.source().clone();
    let f = random_iso(&mut r, &coop, &s, cap);
    let inv = ok(invert_infinity_iso(&f), "f⁻¹")?;
    let one = ConvElement::identity(coop.clone(), s.clone());
    ensure!(ok(inv.circ(&f), "f⁻¹⊚f")? == one, "f⁻¹⊚f = 1 fails");
    ensure!(ok(f.circ(&inv), "f⊚f⁻¹")? == one, "f⊚f⁻¹ = 1 fails");
    ensure!(ok(invert_infinity_iso(&inv), "(f⁻¹)⁻¹")? == f, "(f⁻¹)⁻¹ = f fails");
    let psi = ok(act_on_structure(&f, &phi), "f·φ")?;
    ensure!(ok(check_infinity_morphism(&f, &phi, &psi), "morphism check")?, "f: φ ⇝ f·φ is not an ∞-morphism");
    ensure!(ok(act_on_structure(&inv, &psi), "f⁻¹·ψ")? == phi, "f⁻¹·(f·φ) = φ fails");
    Ok(())
}

pub type Identity = (&'static str, fn(u64) -> Check, fn(u64) -> Check);

/// Every identity family, instantiated over ℚ and 𝔽₅.
pub fn suite() -> Vec<Identity> {
    use gauge_formality::{Rational as Q, F5};
    vec![
        ("pre-Lie identity", pre_lie::<Q>, pre_lie::<F5>),
        ("⊚ associativity and unit", circ_associative_unital::<Q>, circ_associative_unital::<F5>),
        ("compatibility (a)-(e)", compatibility::<Q>, compatibility::<F5>),
        ("differentials (i)-(l)", differentials::<Q>, differentials::<F5>),
        ("BCH group action law", gauge_group_law::<Q>, gauge_group_law::<F5>),
        ("∂_ħ𝔇(φ) is a d^Φ-cycle", derivative_is_cycle::<Q>, derivative_is_cycle::<F5>),
        ("Ad_f intertwines d and [,]", adjoint_intertwines::<Q>, adjoint_intertwines::<F5>),
        ("key lemma closed form", key_lemma::<Q>, key_lemma::<F5>),
        ("class invariance boundary", piquant::<Q>, piquant::<F5>),
        ("∞-iso inversion round trip", inversion_round_trip::<Q>, inversion_round_trip::<F5>),
    ]
}
