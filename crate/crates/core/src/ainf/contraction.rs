use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_algebra::{
    inverse, kernel_basis, rank, to_sparse, ChainComplex, GradedModule, Scalar, SparseMap, SparseVec,
};

/// `i: H → A`, `p: A → H`, `h: A → A` (degree +1) with `ip - id = dh + hd`, `pi = id`, `h² = ph = hi = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Contraction<F> {
    pub homology: Arc<ChainComplex<F>>,
    pub complex: Arc<ChainComplex<F>>,
    pub i: SparseMap<F>,
    pub p: SparseMap<F>,
    pub h: SparseMap<F>,
}

/// Order in which candidate basis vectors are tried when completing bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotOrder {
    #[default]
    LowestIndex,
    HighestIndex,
}

impl<F: Scalar> Contraction<F> {
    /// Name of the first failing identity, if any.
    pub fn first_failure(&self) -> Result<Option<&'static str>> {
        let (n_a, n_h) = (self.complex.dim(), self.homology.dim());
        let d = self.complex.differential();
        let dh = self.homology.differential();
        let ip = self.i.mul(&self.p)?;
        let lhs = ip.sub(&SparseMap::identity(n_a))?;
        let rhs = d.mul(&self.h)?;
        let rhs = SparseMap::from_triplets(
            n_a,
            n_a,
            rhs.entries().iter().cloned().chain(self.h.mul(d)?.entries().iter().cloned()),
        )?;
        let checks = [
            ("ip - id = dh + hd", lhs.sub(&rhs)?.is_zero()),
            ("pi = id", self.p.mul(&self.i)?.sub(&SparseMap::identity(n_h))?.is_zero()),
            ("h² = 0", self.h.mul(&self.h)?.is_zero()),
            ("ph = 0", self.p.mul(&self.h)?.is_zero()),
            ("hi = 0", self.h.mul(&self.i)?.is_zero()),
            ("di = i d_H", d.mul(&self.i)?.sub(&self.i.mul(dh)?)?.is_zero()),
            ("pd = d_H p", self.p.mul(d)?.sub(&dh.mul(&self.p)?)?.is_zero()),
        ];
        for (name, ok) in checks {
            if !ok {
                return Ok(Some(name));
            }
        }
        let degrees_ok = self.i.entries().iter().all(|(r, c, _)| self.complex.degrees()[*r] == self.homology.degrees()[*c])
            && self.p.entries().iter().all(|(r, c, _)| self.homology.degrees()[*r] == self.complex.degrees()[*c])
            && self.h.entries().iter().all(|(r, c, _)| self.complex.degrees()[*r] == self.complex.degrees()[*c] + 1);
        Ok((!degrees_ok).then_some("degrees"))
    }

    pub fn validate(&self) -> Result<()> {
        match self.first_failure()? {
            Some(name) => Err(Error::InvalidStructure(format!("contraction fails {name}"))),
            None => Ok(()),
        }
    }
}

fn extend_basis<F: Scalar>(dim: usize, basis: &mut Vec<Vec<F>>, candidates: impl IntoIterator<Item = Vec<F>>) {
    let mut current = rank_of(dim, basis);
    for v in candidates {
        basis.push(v);
        let r = rank_of(dim, basis);
        if r > current {
            current = r;
        } else {
            basis.pop();
        }
    }
}

fn rank_of<F: Scalar>(dim: usize, vectors: &[Vec<F>]) -> usize {
    let cols: Vec<SparseVec<F>> = vectors.iter().map(|v| to_sparse(v)).collect();
    rank(&SparseMap::from_columns(dim, &cols).expect("columns fit"))
}

fn unit<F: Scalar>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

/// Degreewise splitting `A_k = B_k ⊕ H_k ⊕ L_k` with `B_k = d(L_{k+1})`; `h = -(d|_L)⁻¹` on `B`.
pub fn contraction_from_complex<F: Scalar>(a: &Arc<ChainComplex<F>>, order: PivotOrder) -> Result<Contraction<F>> {
    let degrees = a.degrees();
    let n = degrees.len();
    let d = a.differential().to_dense();
    let Some((lo, hi)) = a.module().degree_range() else {
        let empty = Arc::new(ChainComplex::with_zero_differential(GradedModule::new(F::field(), vec![])));
        return Ok(Contraction {
            homology: empty,
            complex: a.clone(),
            i: SparseMap::zero(0, 0),
            p: SparseMap::zero(0, 0),
            h: SparseMap::zero(0, 0),
        });
    };
    let idx = |k: i32| a.module().basis_in_degree(k);
    let embed = |k: i32, local: &[F]| {
        let mut v = vec![F::zero(); n];
        for (j, g) in idx(k).into_iter().enumerate() {
            v[g] = local[j].clone();
        }
        v
    };
    let ordered = |m: usize| -> Vec<usize> {
        match order {
            PivotOrder::LowestIndex => (0..m).collect(),
            PivotOrder::HighestIndex => (0..m).rev().collect(),
        }
    };
    // L_k in local coordinates of A_k.
    let mut complements: Vec<(i32, Vec<Vec<F>>)> = Vec::new();
    let mut cycles: Vec<(i32, Vec<Vec<F>>)> = Vec::new();
    for k in lo..=hi {
        let rows = idx(k - 1);
        let cols = idx(k);
        let local = SparseMap::from_triplets(
            rows.len(),
            cols.len(),
            rows.iter().enumerate().flat_map(|(r, gr)| {
                let d = &d;
                cols.iter().enumerate().map(move |(c, gc)| (r, c, d[*gr][*gc].clone()))
            }),
        )?;
        let mut z = kernel_basis(&local);
        if order == PivotOrder::HighestIndex {
            z.reverse();
        }
        let mut zl = z.clone();
        extend_basis(cols.len(), &mut zl, ordered(cols.len()).into_iter().map(|i| unit(cols.len(), i)));
        complements.push((k, zl.split_off(z.len())));
        cycles.push((k, z));
    }
    let mut h_basis: Vec<(i32, Vec<F>)> = Vec::new();
    let mut l_global: Vec<(i32, Vec<Vec<F>>)> = Vec::new();
    for (k, ls) in &complements {
        l_global.push((*k, ls.iter().map(|l| embed(*k, l)).collect()));
    }
    let apply_d = |v: &[F]| -> Vec<F> {
        (0..n).map(|r| v.iter().enumerate().fold(F::zero(), |acc, (c, x)| acc + d[r][c].clone() * x.clone())).collect()
    };
    let mut i_cols: Vec<Vec<F>> = Vec::new();
    let mut p_rows: Vec<(usize, Vec<F>)> = Vec::new();
    let mut h_trip: Vec<(usize, usize, F)> = Vec::new();
    for (k, z) in &cycles {
        let ls_above = l_global.iter().find(|(j, _)| *j == k + 1).map(|(_, v)| v.clone()).unwrap_or_default();
        let ls_here = l_global.iter().find(|(j, _)| j == k).map(|(_, v)| v.clone()).unwrap_or_default();
        let boundaries: Vec<Vec<F>> = ls_above.iter().map(|l| apply_d(l)).collect();
        let locals = idx(*k);
        let restrict = |v: &[F]| -> Vec<F> { locals.iter().map(|g| v[*g].clone()).collect() };
        let mut split: Vec<Vec<F>> = boundaries.iter().map(|b| restrict(b)).collect();
        let nb = split.len();
        extend_basis(locals.len(), &mut split, z.iter().cloned());
        let nh = split.len() - nb;
        for v in &split[nb..] {
            h_basis.push((*k, embed(*k, v)));
        }
        split.extend(ls_here.iter().map(|l| restrict(l)));
        if split.len() != locals.len() {
            return Err(Error::InvalidStructure(format!("degree {k} splitting is incomplete")));
        }
        // Columns are the split basis; its inverse gives coordinates.
        let basis = SparseMap::from_columns(
            locals.len(),
            &split.iter().map(|v| to_sparse(v)).collect::<Vec<_>>(),
        )?;
        let coords = inverse(&basis).ok_or_else(|| Error::InvalidStructure("splitting is not a basis".into()))?;
        let coords = coords.to_dense();
        let h_offset = i_cols.len();
        for j in 0..nh {
            i_cols.push(embed(*k, &split[nb + j]));
            let row: Vec<F> = {
                let mut r = vec![F::zero(); n];
                for (li, g) in locals.iter().enumerate() {
                    r[*g] = coords[nb + j][li].clone();
                }
                r
            };
            p_rows.push((h_offset + j, row));
        }
        for (bj, l) in ls_above.iter().enumerate() {
            for (li, g) in locals.iter().enumerate() {
                let c = coords[bj][li].clone();
                if c.is_zero() {
                    continue;
                }
                for (r, lv) in l.iter().enumerate() {
                    if !lv.is_zero() {
                        h_trip.push((r, *g, -(lv.clone() * c.clone())));
                    }
                }
            }
        }
    }
    let nh = i_cols.len();
    let h_degrees: Vec<i32> = h_basis.iter().map(|(k, _)| *k).collect();
    let homology = Arc::new(ChainComplex::with_zero_differential(GradedModule::new(F::field(), h_degrees)));
    let i = SparseMap::from_columns(n, &i_cols.iter().map(|v| to_sparse(v)).collect::<Vec<_>>())?;
    let p = SparseMap::from_triplets(
        nh,
        n,
        p_rows.into_iter().flat_map(|(r, row)| row.into_iter().enumerate().map(move |(c, v)| (r, c, v))),
    )?;
    let h = SparseMap::from_triplets(n, n, h_trip)?;
    let c = Contraction { homology, complex: a.clone(), i, p, h };
    c.validate()?;
    Ok(c)
}
