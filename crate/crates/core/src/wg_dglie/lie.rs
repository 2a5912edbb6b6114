use std::fmt::Debug;


use crate::error::{Error, Result};
use crate::exact_algebra::{Scalar, SparseVec};

/// A weight-graded dg Lie algebra truncated at `weight_cap`, seen through its operations.
///
/// Implemented by the structure-constant algebra of this module and by the
/// convolution algebra of the operadic layer.
pub trait LieModel<F: Scalar> {
    type Elem: Clone + PartialEq + Debug;

    fn weight_cap(&self) -> usize;

    /// Weight shift of the differential.
    fn delta(&self) -> usize;

    fn zero(&self, degree: i32) -> Self::Elem;

    fn degree_of(&self, x: &Self::Elem) -> i32;

    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn scale(&self, x: &Self::Elem, c: &F) -> Self::Elem;

    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn differential(&self, x: &Self::Elem) -> Self::Elem;

    fn weight_part(&self, x: &Self::Elem, w: usize) -> Self::Elem;

    /// Weights carrying a nonzero component, increasing.
    fn support(&self, x: &Self::Elem) -> Vec<usize>;

    fn dim(&self, weight: usize, degree: i32) -> usize;

    fn basis_vector(&self, weight: usize, degree: i32, idx: usize) -> Self::Elem;

    /// Coordinates of the weight-`w` part of `x` in the basis of its (weight, degree) block.
    fn coordinates(&self, x: &Self::Elem, w: usize) -> SparseVec<F>;

    /// `½[x, x]`; the default needs 2 to be invertible.
    fn half_square(&self, x: &Self::Elem) -> Result<Self::Elem> {
        let half = F::from_i64(2)
            .inv()
            .ok_or_else(|| Error::UnsupportedCharacteristic("½[x,x] needs 2 invertible".into()))?;
        Ok(self.scale(&self.bracket(x, x), &half))
    }

    /// `dφ + ½[φ, φ]`.
    fn curvature(&self, phi: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.add(&self.differential(phi), &self.half_square(phi)?))
    }

    /// Drops the components of weight above `cap`.
    fn truncate(&self, x: &Self::Elem, cap: usize) -> Self::Elem {
        if self.support(x).last().is_none_or(|w| *w <= cap) {
            return x.clone();
        }
        self.weight_range(x, 0, cap)
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.scale(y, &-F::one()))
    }

    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        self.scale(x, &-F::one())
    }

    fn sum<'a, I>(&self, degree: i32, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(degree), |acc, x| self.add(&acc, x))
    }

    /// Components of weight in `lo..=hi`.
    fn weight_range(&self, x: &Self::Elem, lo: usize, hi: usize) -> Self::Elem {
        let parts: Vec<_> =
            self.support(x).into_iter().filter(|w| (lo..=hi).contains(w)).map(|w| self.weight_part(x, w)).collect();
        self.sum(self.degree_of(x), parts.iter())
    }

    fn lowest_weight(&self, x: &Self::Elem) -> Option<usize> {
        self.support(x).first().copied()
    }

    fn from_coordinates(&self, weight: usize, degree: i32, coords: &[(usize, F)]) -> Self::Elem {
        let mut acc = self.zero(degree);
        for (i, c) in coords {
            if !c.is_zero() {
                acc = self.add(&acc, &self.scale(&self.basis_vector(weight, degree, *i), c));
            }
        }
        acc
    }
}

/// Polynomial in `ħ` truncated at a fixed length; entry `i` is the `ħ^i` coefficient.
pub type HbarSeries<E> = Vec<E>;

pub(crate) fn series_bracket<F: Scalar, L: LieModel<F>>(
    g: &L,
    x: &[L::Elem],
    y: &[L::Elem],
    len: usize,
    degree: i32,
) -> HbarSeries<L::Elem> {
    (0..len)
        .map(|k| {
            let mut acc = g.zero(degree);
            for a in 0..=k {
                if a < x.len() && k - a < y.len() {
                    acc = g.add(&acc, &g.bracket(&x[a], &y[k - a]));
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn series_is_zero<F: Scalar, L: LieModel<F>>(g: &L, x: &[L::Elem]) -> bool {
    x.iter().all(|e| g.is_zero(e))
}

/// `d x_k + Σ_{a+b=k} [t_a, x_b]` for `k < len`.
pub(crate) fn series_twisted_diff<F: Scalar, L: LieModel<F>>(
    g: &L,
    twist: &[L::Elem],
    x: &[L::Elem],
    len: usize,
) -> HbarSeries<L::Elem> {
    let deg = x.first().map_or(-1, |e| g.degree_of(e)) - 1;
    let br = series_bracket(g, twist, x, len, deg);
    (0..len)
        .map(|k| {
            let dx = if k < x.len() { g.differential(&x[k]) } else { g.zero(deg) };
            g.add(&dx, &br[k])
        })
        .collect()
}
