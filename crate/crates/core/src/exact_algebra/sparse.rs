use std::collections::BTreeMap;

use super::field::Scalar;
use crate::error::{Error, Result};

/// A sparse row vector: strictly increasing column indices, nonzero values.
pub type SparseVec<F> = Vec<(usize, F)>;

/// Sparse matrix stored as `(row, col, coeff)` triplets sorted by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMap<F> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, F)>,
}

impl<F: Scalar> SparseMap<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMap { rows, cols, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        SparseMap { rows: n, cols: n, entries: (0..n).map(|i| (i, i, F::one())).collect() }
    }

    /// Duplicate positions are summed, zeros dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), F> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::contract(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            *acc.entry((r, c)).or_insert_with(F::zero) += &v;
        }
        let entries = acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect();
        Ok(SparseMap { rows, cols, entries })
    }

    /// Builds a matrix from its columns, each given as a sparse vector.
    pub fn from_columns(rows: usize, columns: &[SparseVec<F>]) -> Result<Self> {
        let trip = columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())));
        Self::from_triplets(rows, columns.len(), trip)
    }

    pub fn from_dense(rows: &[Vec<F>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::contract("ragged dense matrix"));
        }
        let trip = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone())));
        Self::from_triplets(rows.len(), ncols, trip)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, F)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.entries
            .binary_search_by(|(er, ec, _)| (*er, *ec).cmp(&(r, c)))
            .map(|i| self.entries[i].2.clone())
            .unwrap_or_else(|_| F::zero())
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    pub fn mul_vec(&self, x: &[F]) -> Result<Vec<F>> {
        if x.len() != self.cols {
            return Err(Error::contract(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = vec![F::zero(); self.rows];
        for (r, c, v) in &self.entries {
            if !x[*c].is_zero() {
                out[*r] += &(v.clone() * x[*c].clone());
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMap<F>) -> Result<SparseMap<F>> {
        if self.cols != other.rows {
            return Err(Error::contract("matrix product dimension mismatch"));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, F)>> = BTreeMap::new();
        for (r, c, v) in &other.entries {
            by_row.entry(*r).or_default().push((*c, v.clone()));
        }
        let mut trip = Vec::new();
        for (r, k, v) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, w) in row {
                    trip.push((*r, *c, v.clone() * w.clone()));
                }
            }
        }
        Self::from_triplets(self.rows, other.cols, trip)
    }

    pub fn transpose(&self) -> SparseMap<F> {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        SparseMap { rows: self.cols, cols: self.rows, entries }
    }

    pub fn sub(&self, other: &SparseMap<F>) -> Result<SparseMap<F>> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::contract("matrix difference dimension mismatch"));
        }
        let trip = self
            .entries
            .iter()
            .cloned()
            .chain(other.entries.iter().map(|(r, c, v)| (*r, *c, -v.clone())));
        Self::from_triplets(self.rows, self.cols, trip)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn row_lists(&self) -> Vec<SparseVec<F>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            rows[*r].push((*c, v.clone()));
        }
        rows
    }

    pub fn column(&self, c: usize) -> SparseVec<F> {
        self.entries.iter().filter(|(_, ec, _)| *ec == c).map(|(r, _, v)| (*r, v.clone())).collect()
    }
}

/// Row echelon data: pivot column -> (normalized row, rhs).
struct Echelon<F> {
    cols: usize,
    pivots: BTreeMap<usize, (SparseVec<F>, F)>,
    consistent: bool,
}

fn axpy<F: Scalar>(row: &SparseVec<F>, a: &F, pivot: &SparseVec<F>) -> SparseVec<F> {
    // row - a * pivot
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(a.clone() * pivot[j].1.clone())));
            j += 1;
        } else {
            let v = row[i].1.clone() - a.clone() * pivot[j].1.clone();
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Scalar> Echelon<F> {
    fn build(a: &SparseMap<F>, b: Option<&[F]>) -> Self {
        let mut ech = Echelon { cols: a.cols, pivots: BTreeMap::new(), consistent: true };
        for (r, row) in a.row_lists().into_iter().enumerate() {
            let rhs = b.map_or_else(F::zero, |b| b[r].clone());
            ech.insert(row, rhs);
        }
        ech
    }

    fn insert(&mut self, mut row: SparseVec<F>, mut rhs: F) {
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                if !rhs.is_zero() {
                    self.consistent = false;
                }
                return;
            };
            match self.pivots.get(&lead) {
                Some((prow, prhs)) => {
                    row = axpy(&row, &coeff, prow);
                    rhs = rhs - coeff * prhs.clone();
                }
                None => {
                    let inv = coeff.inv().expect("nonzero pivot");
                    let row: SparseVec<F> = row.into_iter().map(|(c, v)| (c, v * inv.clone())).collect();
                    self.pivots.insert(lead, (row, rhs * inv));
                    return;
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Back substitution with the given values on free columns.
    fn back_substitute(&self, free: &BTreeMap<usize, F>, homogeneous: bool) -> Vec<F> {
        let mut x = vec![F::zero(); self.cols];
        for (c, v) in free {
            x[*c] = v.clone();
        }
        for (&c, (row, rhs)) in self.pivots.iter().rev() {
            let mut val = if homogeneous { F::zero() } else { rhs.clone() };
            for (j, v) in row.iter().skip(1) {
                if !x[*j].is_zero() {
                    val -= &(v.clone() * x[*j].clone());
                }
            }
            x[c] = val;
        }
        x
    }
}

fn check_rhs<F>(a: &SparseMap<F>, b: &[F]) -> Result<()> {
    if b.len() != a.rows {
        return Err(Error::contract(format!(
            "right-hand side of length {} against {} rows",
            b.len(),
            a.rows
        )));
    }
    Ok(())
}

/// Echelon-canonical solution of `A x = b` (free variables zero), or `None`.
pub fn solve_linear<F: Scalar>(a: &SparseMap<F>, b: &[F]) -> Result<Option<Vec<F>>> {
    check_rhs(a, b)?;
    let ech = Echelon::build(a, Some(b));
    if !ech.consistent {
        return Ok(None);
    }
    Ok(Some(ech.back_substitute(&BTreeMap::new(), false)))
}

/// Whether `b` lies in the image of `A`, with a witness when it does.
pub fn image_membership<F: Scalar>(a: &SparseMap<F>, b: &[F]) -> Result<(bool, Option<Vec<F>>)> {
    let x = solve_linear(a, b)?;
    Ok((x.is_some(), x))
}

pub fn rank<F: Scalar>(a: &SparseMap<F>) -> usize {
    Echelon::build(a, None).rank()
}

/// Rank of `A` and of the augmented `[A | b]`.
pub fn augmented_ranks<F: Scalar>(a: &SparseMap<F>, b: &[F]) -> Result<(usize, usize)> {
    check_rhs(a, b)?;
    let ech = Echelon::build(a, Some(b));
    let r = ech.rank();
    Ok((r, if ech.consistent { r } else { r + 1 }))
}

/// Basis of the null space, one vector per free column in increasing order.
pub fn kernel_basis<F: Scalar>(a: &SparseMap<F>) -> Vec<Vec<F>> {
    let ech = Echelon::build(a, None);
    (0..a.cols)
        .filter(|c| !ech.pivots.contains_key(c))
        .map(|f| {
            let mut free = BTreeMap::new();
            free.insert(f, F::one());
            ech.back_substitute(&free, true)
        })
        .collect()
}

/// Columns of `A` (indices) forming the lowest-index basis of its column space.
pub fn pivot_columns<F: Scalar>(a: &SparseMap<F>) -> Vec<usize> {
    let t = a.transpose();
    // column j of A is independent of earlier columns iff row j of A^T enlarges the row span
    let mut ech: Echelon<F> = Echelon { cols: t.cols, pivots: BTreeMap::new(), consistent: true };
    let mut out = Vec::new();
    for (j, row) in t.row_lists().into_iter().enumerate() {
        let before = ech.rank();
        ech.insert(row, F::zero());
        if ech.rank() > before {
            out.push(j);
        }
    }
    out
}

pub fn inverse<F: Scalar>(a: &SparseMap<F>) -> Option<SparseMap<F>> {
    if a.rows != a.cols {
        return None;
    }
    let n = a.rows;
    let ech = Echelon::build(a, None);
    if ech.rank() < n {
        return None;
    }
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![F::zero(); n];
        e[k] = F::one();
        let x = solve_linear(a, &e).ok()??;
        cols.push(x.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect::<SparseVec<F>>());
    }
    SparseMap::from_columns(n, &cols).ok()
}

pub fn to_sparse<F: Scalar>(x: &[F]) -> SparseVec<F> {
    x.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
}

pub fn from_sparse<F: Scalar>(n: usize, x: &[(usize, F)]) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (i, v) in x {
        out[*i] += v;
    }
    out
}
