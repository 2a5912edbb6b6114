use std::collections::BTreeMap;

use super::field::{ExactField, Scalar};
use super::sparse::SparseMap;
use crate::error::{Error, Result};

/// Finite-dimensional graded vector space; basis vector `i` sits in degree `degrees[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    field: ExactField,
    degrees: Vec<i32>,
}

impl GradedModule {
    pub fn new(field: ExactField, degrees: Vec<i32>) -> Self {
        GradedModule { field, degrees }
    }

    /// Basis ordered by increasing degree.
    pub fn from_dims(field: ExactField, dims: &BTreeMap<i32, usize>) -> Self {
        let degrees = dims.iter().flat_map(|(d, n)| std::iter::repeat(*d).take(*n)).collect();
        GradedModule { field, degrees }
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for d in &self.degrees {
            *out.entry(*d).or_insert(0) += 1;
        }
        out
    }

    pub fn dim_in_degree(&self, d: i32) -> usize {
        self.degrees.iter().filter(|&&x| x == d).count()
    }

    pub fn basis_in_degree(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    /// Smallest and largest occupied degree.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        Some((*self.degrees.iter().min()?, *self.degrees.iter().max()?))
    }
}

/// A graded module with a degree -1 square-zero differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex<F> {
    module: GradedModule,
    d: SparseMap<F>,
}

impl<F: Scalar> ChainComplex<F> {
    pub fn new(module: GradedModule, d: SparseMap<F>) -> Result<Self> {
        let n = module.dim();
        if d.rows() != n || d.cols() != n {
            return Err(Error::contract("differential size does not match the module"));
        }
        for (r, c, _) in d.entries() {
            if module.degree(*r) != module.degree(*c) - 1 {
                return Err(Error::InvalidStructure(format!(
                    "differential entry ({r}, {c}) does not lower degree by one"
                )));
            }
        }
        if !d.mul(&d)?.is_zero() {
            return Err(Error::InvalidStructure("differential does not square to zero".into()));
        }
        Ok(ChainComplex { module, d })
    }

    pub fn with_zero_differential(module: GradedModule) -> Self {
        let n = module.dim();
        ChainComplex { module, d: SparseMap::zero(n, n) }
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn differential(&self) -> &SparseMap<F> {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn degrees(&self) -> &[i32] {
        self.module.degrees()
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d.is_zero()
    }

    /// Column `j` of the differential as `(row, coeff)` pairs.
    pub fn d_of(&self, j: usize) -> Vec<(usize, F)> {
        self.d.column(j)
    }
}
