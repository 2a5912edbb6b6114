use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::conv::ConvElement;
use super::cooperad::NsCooperad;
use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::exact_algebra::{ChainComplex, Scalar, SparseVec};
use crate::wg_dglie::LieModel;

type BlockKey = (usize, Vec<usize>);

#[derive(Debug, Default)]
struct Block {
    keys: Vec<BlockKey>,
    index: HashMap<BlockKey, usize>,
}

/// The convolution dg Lie algebra `Hom(C̄, End_A)` with the weight grading of `C`.
#[derive(Debug)]
pub struct ConvLie<F> {
    coop: Arc<NsCooperad<F>>,
    space: Arc<ChainComplex<F>>,
    blocks: Mutex<HashMap<(usize, i32), Arc<Block>>>,
}

impl<F: Scalar> ConvLie<F> {
    /// Needs `d_C = 0` so that the differential preserves weight.
    pub fn new(coop: Arc<NsCooperad<F>>, space: Arc<ChainComplex<F>>) -> Result<Self> {
        if !coop.has_zero_differential() {
            return Err(Error::contract("the weight-graded convolution algebra needs a cooperad with zero differential"));
        }
        Ok(ConvLie { coop, space, blocks: Mutex::new(HashMap::new()) })
    }

    pub fn cooperad(&self) -> &Arc<NsCooperad<F>> {
        &self.coop
    }

    pub fn space(&self) -> &Arc<ChainComplex<F>> {
        &self.space
    }

    pub fn zero_element(&self, degree: i32) -> ConvElement<F> {
        ConvElement::zero(self.coop.clone(), self.space.clone(), self.space.clone(), degree)
    }

    fn block(&self, w: usize, d: i32) -> Arc<Block> {
        let mut cache = self.blocks.lock().expect("block cache poisoned");
        cache.entry((w, d)).or_insert_with(|| Arc::new(self.enumerate(w, d))).clone()
    }

    fn enumerate(&self, w: usize, d: i32) -> Block {
        let degrees = self.space.degrees();
        let n = degrees.len();
        let mut block = Block::default();
        if w == 0 || n == 0 {
            return block;
        }
        for c in self.coop.of_weight(w) {
            let m = self.coop.arity(c);
            let target = d + self.coop.degree(c);
            for code in 0..n.pow(m as u32 + 1) {
                let mut rest = code;
                let mut key = vec![0usize; m + 1];
                for slot in key.iter_mut().rev() {
                    *slot = rest % n;
                    rest /= n;
                }
                let deg = degrees[key[m]] - key[..m].iter().map(|i| degrees[*i]).sum::<i32>();
                if deg == target {
                    block.index.insert((c, key.clone()), block.keys.len());
                    block.keys.push((c, key));
                }
            }
        }
        block
    }
}

impl<F: Scalar> LieModel<F> for ConvLie<F> {
    type Elem = ConvElement<F>;

    fn weight_cap(&self) -> usize {
        self.coop.weight_cap()
    }

    fn delta(&self) -> usize {
        1
    }

    fn zero(&self, degree: i32) -> ConvElement<F> {
        self.zero_element(degree)
    }

    fn degree_of(&self, x: &ConvElement<F>) -> i32 {
        x.degree()
    }

    fn is_zero(&self, x: &ConvElement<F>) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &ConvElement<F>, y: &ConvElement<F>) -> ConvElement<F> {
        if y.is_zero() {
            return x.clone();
        }
        if x.is_zero() {
            return y.clone();
        }
        debug_assert_eq!(x.degree(), y.degree());
        x.add_scaled_unchecked(y, &F::one())
    }

    fn scale(&self, x: &ConvElement<F>, c: &F) -> ConvElement<F> {
        x.scale(c)
    }

    fn bracket(&self, x: &ConvElement<F>, y: &ConvElement<F>) -> ConvElement<F> {
        let xy = x.star_unchecked(y);
        let yx = y.star_unchecked(x);
        let sign = if (x.degree() as i64 * y.degree() as i64).rem_euclid(2) == 1 { F::one() } else { -F::one() };
        xy.add_scaled_unchecked(&yx, &sign)
    }

    fn half_square(&self, x: &ConvElement<F>) -> Result<ConvElement<F>> {
        Ok(x.star_unchecked(x))
    }

    fn differential(&self, x: &ConvElement<F>) -> ConvElement<F> {
        x.differential()
    }

    fn weight_part(&self, x: &ConvElement<F>, w: usize) -> ConvElement<F> {
        x.weight_part(w)
    }

    fn support(&self, x: &ConvElement<F>) -> Vec<usize> {
        x.support()
    }

    fn dim(&self, weight: usize, degree: i32) -> usize {
        self.block(weight, degree).keys.len()
    }

    fn basis_vector(&self, weight: usize, degree: i32, idx: usize) -> ConvElement<F> {
        let block = self.block(weight, degree);
        let (c, key) = &block.keys[idx];
        let mut x = self.zero_element(degree);
        let mut t = Tensor::zero(self.coop.arity(*c), degree + self.coop.degree(*c));
        t.add_term(key.clone(), &F::one());
        x.put(*c, t);
        x
    }

    fn coordinates(&self, x: &ConvElement<F>, w: usize) -> SparseVec<F> {
        let block = self.block(w, x.degree());
        let block = &block;
        let mut out: SparseVec<F> = x
            .components()
            .filter(|(c, _)| self.coop.weight(*c) == w)
            .flat_map(|(c, t)| {
                t.entries().iter().map(move |(k, v)| {
                    let idx = block.index.get(&(c, k.clone())).copied().expect("entry lies in its block");
                    (idx, v.clone())
                })
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }
}
