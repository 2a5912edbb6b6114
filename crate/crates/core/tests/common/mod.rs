#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use gauge_formality::ainf::AInfinityStructure;
use gauge_formality::exact_algebra::{kernel_basis, solve_linear, ChainComplex, GradedModule, Scalar, SparseMap};
use gauge_formality::ns_operadic::{ConvElement, NsCooperad, Tensor};
use gauge_formality::wg_dglie::{gauge_action, BasisKey, LieElement, LieModel, WeightGradedDgLie};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub mod identities;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_i64(n)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small<F: Scalar>(r: &mut ChaCha8Rng) -> F {
    F::from_i64(r.gen_range(-3..=3))
}

/// Strictly upper triangular `n × n` matrices, `E_ij` in weight `j - i`, degree 0, zero differential.
pub fn nilpotent_algebra<F: Scalar>(n: usize, delta: usize) -> (WeightGradedDgLie<F>, Vec<(usize, usize)>) {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut dims = BTreeMap::new();
    let mut keys = Vec::new();
    for &(i, j) in &pairs {
        let w = j - i;
        let idx = dims.entry((w, 0)).or_insert(0usize);
        keys.push(BasisKey::new(w, 0, *idx));
        *idx += 1;
    }
    let mut g = WeightGradedDgLie::new(delta, n - 1, &dims).unwrap();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for (b, &(k, l)) in pairs.iter().enumerate() {
            if b <= a {
                continue;
            }
            let mut val = Vec::new();
            if j == k {
                let t = pairs.iter().position(|&p| p == (i, l)).unwrap();
                val.push((keys[t].index, F::one()));
            }
            if l == i {
                let t = pairs.iter().position(|&p| p == (k, j)).unwrap();
                val.push((keys[t].index, -F::one()));
            }
            if !val.is_empty() {
                g.set_bracket(keys[a], keys[b], &val).unwrap();
            }
        }
    }
    let order = pairs;
    (g, order)
}

pub type Matrix = Vec<Vec<Q>>;

pub fn to_matrix(g: &WeightGradedDgLie<Q>, pairs: &[(usize, usize)], x: &LieElement<Q>, n: usize) -> Matrix {
    let mut m = vec![vec![Q::zero(); n]; n];
    for (id, c) in &x.coeffs {
        let key = g.key(*id);
        let (i, j) = pairs
            .iter()
            .copied()
            .filter(|(i, j)| j - i == key.weight)
            .nth(key.index)
            .unwrap();
        m[i][j] = c.clone();
    }
    m
}

pub fn from_matrix(g: &WeightGradedDgLie<Q>, pairs: &[(usize, usize)], m: &Matrix) -> LieElement<Q> {
    let mut terms = Vec::new();
    let mut counters: BTreeMap<usize, usize> = BTreeMap::new();
    for &(i, j) in pairs {
        let w = j - i;
        let idx = counters.entry(w).or_insert(0);
        if !m[i][j].is_zero() {
            terms.push((BasisKey::new(w, 0, *idx), m[i][j].clone()));
        }
        *idx += 1;
    }
    g.element(0, &terms).unwrap()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(Q::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect()).collect()
}

fn mat_add_scaled(a: &mut Matrix, b: &Matrix, c: &Q) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y * c;
        }
    }
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

/// Exponential of a nilpotent matrix.
pub fn mat_exp(x: &Matrix) -> Matrix {
    let n = x.len();
    let mut out = identity(n);
    let mut term = identity(n);
    for k in 1..=n {
        term = mat_mul(&term, x);
        mat_add_scaled(&mut out, &term, &(Q::one() / q(factorial(k))));
    }
    out
}

/// Logarithm of a unipotent matrix.
pub fn mat_log(u: &Matrix) -> Matrix {
    let n = u.len();
    let mut y = u.clone();
    for (i, row) in y.iter_mut().enumerate() {
        row[i] -= Q::one();
    }
    let mut out = vec![vec![Q::zero(); n]; n];
    let mut term = identity(n);
    for k in 1..=n {
        term = mat_mul(&term, &y);
        let sign = if k % 2 == 1 { q(1) } else { q(-1) };
        mat_add_scaled(&mut out, &term, &(sign / q(k as i64)));
    }
    out
}

pub fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Monomial `s^a t^b e^ε f^η` of the polynomial de Rham algebra in two variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Mono {
    a: usize,
    b: usize,
    e: usize,
    f: usize,
}

impl Mono {
    fn degree(&self) -> i32 {
        -((self.e + self.f) as i32)
    }

    fn weight(&self, delta: usize) -> i64 {
        -(self.a as i64) - (self.b as i64) + (delta as i64 - 1) * (self.e + self.f) as i64
    }

    fn mul(&self, o: &Mono) -> Option<(Mono, i64)> {
        if self.e + o.e > 1 || self.f + o.f > 1 {
            return None;
        }
        let sign = if self.f * o.e == 1 { -1 } else { 1 };
        Some((Mono { a: self.a + o.a, b: self.b + o.b, e: self.e + o.e, f: self.f + o.f }, sign))
    }

    fn d(&self) -> Vec<(Mono, i64)> {
        let mut out = Vec::new();
        if self.a > 0 && self.e == 0 {
            out.push((Mono { a: self.a - 1, e: 1, ..*self }, self.a as i64));
        }
        if self.b > 0 && self.f == 0 {
            let sign = if self.e == 1 { -1 } else { 1 };
            out.push((Mono { b: self.b - 1, f: 1, ..*self }, sign * self.b as i64));
        }
        out
    }
}

/// Weight `>= 1`, weight `<= cap` part of `𝔫_n ⊗ Ω(k²)` with `w(E_ij) = j - i`,
/// `w(s) = w(t) = -1`, `w(ds) = w(dt) = δ - 1`.
pub fn forms_algebra<F: Scalar>(n: usize, delta: usize, cap: usize) -> WeightGradedDgLie<F> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut monos = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for e in 0..2 {
                for f in 0..2 {
                    monos.push(Mono { a, b, e, f });
                }
            }
        }
    }
    let mut basis = Vec::new();
    let mut dims = BTreeMap::new();
    for &(i, j) in &pairs {
        for m in &monos {
            let w = (j - i) as i64 + m.weight(delta);
            if w < 1 || w > cap as i64 {
                continue;
            }
            let key_w = w as usize;
            let idx = dims.entry((key_w, m.degree())).or_insert(0usize);
            basis.push(((i, j), *m, BasisKey::new(key_w, m.degree(), *idx)));
            *idx += 1;
        }
    }
    let lookup = |p: (usize, usize), m: Mono| basis.iter().find(|(q, n, _)| *q == p && *n == m).map(|x| x.2);
    let mut g = WeightGradedDgLie::new(delta, cap, &dims).unwrap();
    for (x, &(p1, m1, k1)) in basis.iter().enumerate() {
        let dval: Vec<(usize, F)> = m1
            .d()
            .into_iter()
            .filter_map(|(m, c)| lookup(p1, m).map(|k| (k.index, F::from_i64(c))))
            .collect();
        if !dval.is_empty() {
            g.set_differential(k1, &dval).unwrap();
        }
        for &(p2, m2, k2) in basis.iter().skip(x) {
            let Some((m, s)) = m1.mul(&m2) else { continue };
            let mut val: Vec<(usize, F)> = Vec::new();
            if p1.1 == p2.0 {
                if let Some(k) = lookup((p1.0, p2.1), m) {
                    val.push((k.index, F::from_i64(s)));
                }
            }
            if p2.1 == p1.0 {
                if let Some(k) = lookup((p2.0, p1.1), m) {
                    val.push((k.index, F::from_i64(-s)));
                }
            }
            if k1.weight + k2.weight <= cap && !val.is_empty() {
                g.set_bracket(k1, k2, &val).unwrap();
            }
        }
    }
    g
}

/// Random element of the given degree supported in weights `lo..=hi`.
pub fn random_element<F: Scalar, L: LieModel<F>>(
    g: &L,
    r: &mut ChaCha8Rng,
    degree: i32,
    lo: usize,
    hi: usize,
) -> L::Elem {
    let mut acc = g.zero(degree);
    for w in lo..=hi.min(g.weight_cap()) {
        for i in 0..g.dim(w, degree) {
            if r.gen_bool(0.6) {
                let c: F = small(r);
                acc = g.add(&acc, &g.scale(&g.basis_vector(w, degree, i), &c));
            }
        }
    }
    acc
}

/// Closed degree -1 element built from `s^a ds` monomials, then moved by a random gauge.
pub fn random_mc<F: Scalar>(g: &WeightGradedDgLie<F>, r: &mut ChaCha8Rng, lo: usize) -> LieElement<F> {
    let mut acc = g.zero(-1);
    for (&(w, d), &n) in g.block_dims() {
        if d != -1 || w < lo {
            continue;
        }
        for i in 0..n {
            let x = g.basis_vector(w, d, i);
            if r.gen_bool(0.5) {
                let trial = g.add(&acc, &g.scale(&x, &small::<F>(r)));
                if g.is_zero(&g.curvature(&trial).unwrap()) {
                    acc = trial;
                }
            }
        }
    }
    let lam = random_element(g, r, 0, 1, g.weight_cap());
    gauge_action(g, &lam, &acc).unwrap()
}

/// Matrix of `x ↦ dx + [t, x]` from block `(w, d)` to block `(w + δ, d - 1)`.
pub fn twisted_matrix<F: Scalar, L: LieModel<F>>(g: &L, t: &L::Elem, w: usize, d: i32) -> SparseMap<F> {
    let tw = w + g.delta();
    let rows = if tw <= g.weight_cap() { g.dim(tw, d - 1) } else { 0 };
    let cols = g.dim(w, d);
    let mut trip = Vec::new();
    for c in 0..cols {
        let x = g.basis_vector(w, d, c);
        let y = g.add(&g.differential(&x), &g.bracket(t, &x));
        for (r, v) in g.coordinates(&y, tw) {
            trip.push((r, c, v));
        }
    }
    SparseMap::from_triplets(rows, cols, trip).unwrap()
}

/// Maurer-Cartan element built weight by weight: a closed weight-δ part, then for each higher
/// weight a particular solution of the linear constraint plus a random kernel vector.
pub fn random_mc_layered<F: Scalar, L: LieModel<F>>(g: &L, r: &mut ChaCha8Rng, base: &L::Elem) -> Option<L::Elem> {
    let delta = g.delta();
    let cap = g.weight_cap();
    let mut phi = base.clone();
    for m in delta + 1..=cap {
        let dim = g.dim(m, -1);
        if dim == 0 {
            continue;
        }
        let a = twisted_matrix(g, base, m, -1);
        let target_w = m + delta;
        let mut x = vec![F::zero(); dim];
        if target_w <= cap {
            let mut rest = g.zero(-2);
            for p in delta + 1..m {
                let q = target_w - p;
                if q > delta && q < m && p <= q {
                    let br = g.bracket(&g.weight_part(&phi, p), &g.weight_part(&phi, q));
                    rest = g.add(&rest, &if p == q { g.half_square(&g.weight_part(&phi, p)).unwrap() } else { br });
                }
            }
            let mut rhs = vec![F::zero(); a.rows()];
            for (i, c) in g.coordinates(&rest, target_w) {
                rhs[i] = -c;
            }
            x = solve_linear(&a, &rhs).unwrap()?;
        }
        let kernel = if target_w <= cap { kernel_basis(&a) } else { (0..dim).map(|i| unit(dim, i)).collect() };
        for k in kernel {
            let c: F = small(r);
            for (xi, ki) in x.iter_mut().zip(&k) {
                *xi += &(ki.clone() * c.clone());
            }
        }
        let coords: Vec<(usize, F)> = x.into_iter().enumerate().collect();
        phi = g.add(&phi, &g.from_coordinates(m, -1, &coords));
    }
    Some(phi)
}

fn unit<F: Scalar>(n: usize, i: usize) -> Vec<F> {
    (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()
}

/// Random multilinear map on a graded space with the given degree.
pub fn random_tensor<F: Scalar>(r: &mut ChaCha8Rng, degrees: &[i32], arity: usize, degree: i32, density: f64) -> Tensor<F> {
    random_tensor_between(r, degrees, degrees, arity, degree, density)
}

pub fn complex<F: Scalar>(degrees: &[i32], d: &[(usize, usize, i64)]) -> Arc<ChainComplex<F>> {
    let module = GradedModule::new(F::field(), degrees.to_vec());
    let n = degrees.len();
    let d = SparseMap::from_triplets(n, n, d.iter().map(|(r, c, v)| (*r, *c, F::from_i64(*v)))).unwrap();
    Arc::new(ChainComplex::new(module, d).unwrap())
}

/// Exterior algebra on two degree-1 generators: basis `1, x, y, xy`.
pub fn exterior_algebra<F: Scalar>() -> AInfinityStructure<F> {
    let space = complex::<F>(&[0, 1, 1, 2], &[]);
    let one = F::one();
    let mut m2 = Tensor::zero(2, 0);
    for i in 0..4 {
        m2.add_term(vec![0, i, i], &one);
        if i != 0 {
            m2.add_term(vec![i, 0, i], &one);
        }
    }
    m2.add_term(vec![1, 2, 3], &one);
    m2.add_term(vec![2, 1, 3], &-one);
    let mut a = AInfinityStructure::new(space);
    a.set_operation(2, m2).unwrap();
    a
}

/// Random element of `Hom(C, End(A, B))` supported in weights `lo..=hi`.
pub fn random_conv<F: Scalar>(
    r: &mut ChaCha8Rng,
    coop: &Arc<NsCooperad<F>>,
    src: &Arc<ChainComplex<F>>,
    tgt: &Arc<ChainComplex<F>>,
    degree: i32,
    lo: usize,
    hi: usize,
) -> ConvElement<F> {
    let mut x = ConvElement::zero(coop.clone(), src.clone(), tgt.clone(), degree);
    for c in 0..coop.len() {
        let w = coop.weight(c);
        if w < lo || w > hi {
            continue;
        }
        let t = random_tensor_between(r, src.degrees(), tgt.degrees(), coop.arity(c), degree + coop.degree(c), 0.4);
        x.set(c, t).unwrap();
    }
    x
}

pub fn random_tensor_between<F: Scalar>(
    r: &mut ChaCha8Rng,
    src: &[i32],
    tgt: &[i32],
    arity: usize,
    degree: i32,
    density: f64,
) -> Tensor<F> {
    let (n, m) = (src.len(), tgt.len());
    let mut t = Tensor::zero(arity, degree);
    for code in 0..n.pow(arity as u32) * m {
        let mut rest = code;
        let mut key = vec![0usize; arity + 1];
        key[arity] = rest % m;
        rest /= m;
        for slot in key[..arity].iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        let d = tgt[key[arity]] - key[..arity].iter().map(|i| src[*i]).sum::<i32>();
        if d == degree && r.gen_bool(density) {
            t.add_term(key, &small::<F>(r));
        }
    }
    t
}

/// Random ∞-isotopy `id + λ` with `λ` in weights `1..=hi`.
pub fn random_isotopy<F: Scalar>(
    r: &mut ChaCha8Rng,
    coop: &Arc<NsCooperad<F>>,
    space: &Arc<ChainComplex<F>>,
    hi: usize,
) -> ConvElement<F> {
    let lam = random_conv(r, coop, space, space, 0, 1, hi);
    ConvElement::identity(coop.clone(), space.clone()).add(&lam).unwrap()
}

/// Dga with `ab = du`, `bc = dv`, `uc = m`: basis `a, b, c, x = ab, y = bc, u, v, m`.
pub fn massey_dga<F: Scalar>() -> AInfinityStructure<F> {
    let (a, b, c, x, y, u, v, m) = (0, 1, 2, 3, 4, 5, 6, 7);
    let space = complex::<F>(&[1, 1, 1, 2, 2, 3, 3, 4], &[(x, u, 1), (y, v, 1)]);
    let one = F::one();
    let mut m2 = Tensor::zero(2, 0);
    m2.add_term(vec![a, b, x], &one);
    m2.add_term(vec![b, c, y], &one);
    m2.add_term(vec![u, c, m], &one);
    let mut s = AInfinityStructure::new(space);
    s.set_operation(2, m2).unwrap();
    s
}

/// Random degree-preserving automorphism of a graded space.
pub fn random_graded_automorphism<F: Scalar>(r: &mut ChaCha8Rng, degrees: &[i32]) -> SparseMap<F> {
    let n = degrees.len();
    loop {
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if degrees[i] == degrees[j] && r.gen_bool(0.7) {
                    trip.push((i, j, small::<F>(r)));
                }
            }
        }
        let g = SparseMap::from_triplets(n, n, trip).unwrap();
        if gauge_formality::exact_algebra::inverse(&g).is_some() {
            return g;
        }
    }
}

/// Structure transported along a random linear automorphism and then a random ∞-isotopy.
pub fn scrambled<F: Scalar>(
    r: &mut ChaCha8Rng,
    base: &AInfinityStructure<F>,
    coop: &Arc<NsCooperad<F>>,
) -> AInfinityStructure<F> {
    use gauge_formality::ainf::{ainf_to_conv, conv_to_ainf};
    use gauge_formality::ns_operadic::{act_on_structure, COUNIT};
    let space = base.space();
    let g = random_graded_automorphism::<F>(r, space.degrees());
    let g_inv = gauge_formality::exact_algebra::inverse(&g).unwrap();
    let d = g.mul(space.differential()).unwrap().mul(&g_inv).unwrap();
    let target = Arc::new(ChainComplex::new(space.module().clone(), d).unwrap());
    let mut f = ConvElement::zero(coop.clone(), space.clone(), target.clone(), 0);
    f.set(COUNIT, Tensor::from_map(&g, 0)).unwrap();
    let phi = act_on_structure(&f, &ainf_to_conv(base, coop).unwrap()).unwrap();
    let iso = random_isotopy(r, coop, &target, coop.weight_cap());
    conv_to_ainf(&act_on_structure(&iso, &phi).unwrap()).unwrap()
}

/// Complex in standard form (homology plus acyclic pairs), then a random change of basis.
pub fn random_complex<F: Scalar>(r: &mut ChaCha8Rng, max_dim: usize) -> Arc<ChainComplex<F>> {
    let mut degrees = Vec::new();
    let mut trip = Vec::new();
    while degrees.len() < max_dim {
        let k = r.gen_range(0..3);
        if degrees.len() + 2 <= max_dim && r.gen_bool(0.5) {
            let top = degrees.len();
            degrees.push(k + 1);
            degrees.push(k);
            trip.push((top + 1, top, F::one()));
        } else {
            degrees.push(k);
        }
    }
    let n = degrees.len();
    let d = SparseMap::from_triplets(n, n, trip).unwrap();
    let g = random_graded_automorphism::<F>(r, &degrees);
    let g_inv = gauge_formality::exact_algebra::inverse(&g).unwrap();
    let d = g.mul(&d).unwrap().mul(&g_inv).unwrap();
    Arc::new(ChainComplex::new(GradedModule::new(F::field(), degrees), d).unwrap())
}
