use std::collections::{BTreeMap, HashMap};


use super::lie::LieModel;
use crate::error::{Error, Result};
use crate::exact_algebra::{Scalar, SparseVec};

/// Position of a basis vector: weight, degree and index inside that block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKey {
    pub weight: usize,
    pub degree: i32,
    pub index: usize,
}

impl BasisKey {
    pub fn new(weight: usize, degree: i32, index: usize) -> Self {
        BasisKey { weight, degree, index }
    }
}

/// Homogeneous element: coefficients on global basis ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement<F> {
    pub degree: i32,
    pub coeffs: BTreeMap<usize, F>,
}

impl<F: Scalar> LieElement<F> {
    pub fn zero(degree: i32) -> Self {
        LieElement { degree, coeffs: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, id: usize, c: &F) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(id).or_insert_with(F::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&id);
        }
    }
}

/// Weight-graded dg Lie algebra given by structure constants, truncated at a weight cap.
#[derive(Clone, Debug)]
pub struct WeightGradedDgLie<F> {
    delta: usize,
    weight_cap: usize,
    keys: Vec<BasisKey>,
    ids: HashMap<BasisKey, usize>,
    block_dims: BTreeMap<(usize, i32), usize>,
    bracket: HashMap<(usize, usize), Vec<(usize, F)>>,
    diff: Vec<Vec<(usize, F)>>,
}

impl<F: Scalar> WeightGradedDgLie<F> {
    /// Empty bracket and differential on the given block dimensions.
    pub fn new(delta: usize, weight_cap: usize, dims: &BTreeMap<(usize, i32), usize>) -> Result<Self> {
        if delta == 0 {
            return Err(Error::contract("weight shift must be positive"));
        }
        let mut keys = Vec::new();
        let mut block_dims = BTreeMap::new();
        for (&(w, d), &n) in dims {
            if w == 0 || w > weight_cap {
                return Err(Error::contract(format!("block weight {w} outside 1..={weight_cap}")));
            }
            if n == 0 {
                continue;
            }
            block_dims.insert((w, d), n);
            keys.extend((0..n).map(|i| BasisKey::new(w, d, i)));
        }
        let ids = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let diff = vec![Vec::new(); keys.len()];
        Ok(WeightGradedDgLie { delta, weight_cap, keys, ids, block_dims, bracket: HashMap::new(), diff })
    }

    pub fn block_dims(&self) -> &BTreeMap<(usize, i32), usize> {
        &self.block_dims
    }

    pub fn total_dim(&self) -> usize {
        self.keys.len()
    }

    pub fn key(&self, id: usize) -> BasisKey {
        self.keys[id]
    }

    pub fn id(&self, key: BasisKey) -> Result<usize> {
        self.ids.get(&key).copied().ok_or_else(|| Error::contract(format!("no basis vector at {key:?}")))
    }

    /// Sets `[x, y]` and, by graded antisymmetry, `[y, x]`.
    pub fn set_bracket(&mut self, x: BasisKey, y: BasisKey, value: &[(usize, F)]) -> Result<()> {
        let (i, j) = (self.id(x)?, self.id(y)?);
        let target = (x.weight + y.weight, x.degree + y.degree);
        if target.0 > self.weight_cap {
            if value.iter().any(|(_, c)| !c.is_zero()) {
                return Err(Error::contract("bracket value above the weight cap"));
            }
            return Ok(());
        }
        let mut terms = Vec::new();
        for (k, c) in value {
            if c.is_zero() {
                continue;
            }
            terms.push((self.id(BasisKey::new(target.0, target.1, *k))?, c.clone()));
        }
        let sign = if (x.degree * y.degree) % 2 == 0 { -F::one() } else { F::one() };
        let swapped: Vec<_> = terms.iter().map(|(k, c)| (*k, c.clone() * sign.clone())).collect();
        if i == j && swapped.iter().zip(&terms).any(|(a, b)| a != b) {
            return Err(Error::InvalidStructure(format!("self-bracket of {x:?} violates antisymmetry")));
        }
        self.bracket.insert((i, j), terms);
        self.bracket.insert((j, i), swapped);
        Ok(())
    }

    /// Sets `d x` as coordinates in the block `(w + δ, d - 1)`.
    pub fn set_differential(&mut self, x: BasisKey, value: &[(usize, F)]) -> Result<()> {
        let i = self.id(x)?;
        let target = (x.weight + self.delta, x.degree - 1);
        if target.0 > self.weight_cap {
            if value.iter().any(|(_, c)| !c.is_zero()) {
                return Err(Error::contract("differential value above the weight cap"));
            }
            return Ok(());
        }
        let mut terms = Vec::new();
        for (k, c) in value {
            if !c.is_zero() {
                terms.push((self.id(BasisKey::new(target.0, target.1, *k))?, c.clone()));
            }
        }
        self.diff[i] = terms;
        Ok(())
    }

    pub fn basis_element(&self, key: BasisKey) -> Result<LieElement<F>> {
        let id = self.id(key)?;
        let mut e = LieElement::zero(key.degree);
        e.add_term(id, &F::one());
        Ok(e)
    }

    /// Builds an element from `(key, coeff)` pairs, all of degree `degree`.
    pub fn element(&self, degree: i32, terms: &[(BasisKey, F)]) -> Result<LieElement<F>> {
        let mut e = LieElement::zero(degree);
        for (k, c) in terms {
            if k.degree != degree {
                return Err(Error::contract(format!("term {k:?} is not in degree {degree}")));
            }
            e.add_term(self.id(*k)?, c);
        }
        Ok(e)
    }

    pub fn weight_of(&self, id: usize) -> usize {
        self.keys[id].weight
    }

    /// Checks the Jacobi identity, `d² = 0` and the Leibniz rule on basis vectors.
    pub fn validate(&self) -> Result<()> {
        let n = self.keys.len();
        let basis: Vec<_> = (0..n).map(|i| self.basis_element(self.keys[i]).expect("own key")).collect();
        for (i, x) in basis.iter().enumerate() {
            if !self.is_zero(&self.differential(&self.differential(x))) {
                return Err(Error::InvalidStructure(format!("d² ≠ 0 on {:?}", self.keys[i])));
            }
        }
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                if self.keys[i].weight + self.keys[j].weight > self.weight_cap {
                    continue;
                }
                let xy = self.bracket(x, y);
                let lhs = self.differential(&xy);
                let sx = if x.degree % 2 == 0 { F::one() } else { -F::one() };
                let rhs = self.add(
                    &self.bracket(&self.differential(x), y),
                    &self.scale(&self.bracket(x, &self.differential(y)), &sx),
                );
                if !self.is_zero(&self.sub(&lhs, &rhs)) {
                    return Err(Error::InvalidStructure(format!(
                        "Leibniz rule fails on {:?}, {:?}",
                        self.keys[i], self.keys[j]
                    )));
                }
                for (k, z) in basis.iter().enumerate() {
                    if self.keys[i].weight + self.keys[j].weight + self.keys[k].weight > self.weight_cap {
                        continue;
                    }
                    if !self.is_zero(&self.jacobiator(x, y, z)) {
                        return Err(Error::InvalidStructure(format!(
                            "Jacobi identity fails on {:?}, {:?}, {:?}",
                            self.keys[i], self.keys[j], self.keys[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `[x,[y,z]] - [[x,y],z] - (-1)^{|x||y|}[y,[x,z]]`.
    fn jacobiator(&self, x: &LieElement<F>, y: &LieElement<F>, z: &LieElement<F>) -> LieElement<F> {
        let a = self.bracket(x, &self.bracket(y, z));
        let b = self.bracket(&self.bracket(x, y), z);
        let c = self.bracket(y, &self.bracket(x, z));
        let s = if (x.degree * y.degree) % 2 == 0 { F::one() } else { -F::one() };
        self.sub(&self.sub(&a, &b), &self.scale(&c, &s))
    }

    /// Global ids of the `(weight, degree)` block in index order.
    pub fn block_ids(&self, weight: usize, degree: i32) -> Vec<usize> {
        let n = self.block_dims.get(&(weight, degree)).copied().unwrap_or(0);
        (0..n).map(|i| self.ids[&BasisKey::new(weight, degree, i)]).collect()
    }
}

impl<F: Scalar> LieModel<F> for WeightGradedDgLie<F> {
    type Elem = LieElement<F>;

    fn weight_cap(&self) -> usize {
        self.weight_cap
    }

    fn delta(&self) -> usize {
        self.delta
    }

    fn zero(&self, degree: i32) -> LieElement<F> {
        LieElement::zero(degree)
    }

    fn degree_of(&self, x: &LieElement<F>) -> i32 {
        x.degree
    }

    fn is_zero(&self, x: &LieElement<F>) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &LieElement<F>, y: &LieElement<F>) -> LieElement<F> {
        debug_assert!(x.is_zero() || y.is_zero() || x.degree == y.degree);
        let mut out = x.clone();
        if x.is_zero() {
            out.degree = y.degree;
        }
        for (id, c) in &y.coeffs {
            out.add_term(*id, c);
        }
        out
    }

    fn scale(&self, x: &LieElement<F>, c: &F) -> LieElement<F> {
        if c.is_zero() {
            return LieElement::zero(x.degree);
        }
        LieElement { degree: x.degree, coeffs: x.coeffs.iter().map(|(i, v)| (*i, v.clone() * c.clone())).collect() }
    }

    fn bracket(&self, x: &LieElement<F>, y: &LieElement<F>) -> LieElement<F> {
        let mut out = LieElement::zero(x.degree + y.degree);
        for (i, a) in &x.coeffs {
            for (j, b) in &y.coeffs {
                if self.keys[*i].weight + self.keys[*j].weight > self.weight_cap {
                    continue;
                }
                if let Some(terms) = self.bracket.get(&(*i, *j)) {
                    let ab = a.clone() * b.clone();
                    for (k, c) in terms {
                        out.add_term(*k, &(ab.clone() * c.clone()));
                    }
                }
            }
        }
        out
    }

    fn differential(&self, x: &LieElement<F>) -> LieElement<F> {
        let mut out = LieElement::zero(x.degree - 1);
        for (i, a) in &x.coeffs {
            for (k, c) in &self.diff[*i] {
                out.add_term(*k, &(a.clone() * c.clone()));
            }
        }
        out
    }

    fn weight_part(&self, x: &LieElement<F>, w: usize) -> LieElement<F> {
        LieElement {
            degree: x.degree,
            coeffs: x.coeffs.iter().filter(|(i, _)| self.keys[**i].weight == w).map(|(i, c)| (*i, c.clone())).collect(),
        }
    }

    fn support(&self, x: &LieElement<F>) -> Vec<usize> {
        let mut ws: Vec<_> = x.coeffs.keys().map(|i| self.keys[*i].weight).collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }

    fn dim(&self, weight: usize, degree: i32) -> usize {
        self.block_dims.get(&(weight, degree)).copied().unwrap_or(0)
    }

    fn basis_vector(&self, weight: usize, degree: i32, idx: usize) -> LieElement<F> {
        self.basis_element(BasisKey::new(weight, degree, idx)).expect("basis vector in range")
    }

    fn coordinates(&self, x: &LieElement<F>, w: usize) -> SparseVec<F> {
        x.coeffs
            .iter()
            .filter(|(i, _)| self.keys[**i].weight == w)
            .map(|(i, c)| (self.keys[*i].index, c.clone()))
            .collect()
    }
}
