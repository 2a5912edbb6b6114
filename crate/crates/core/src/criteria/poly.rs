use crate::exact_algebra::Scalar;

/// Dense polynomial, coefficients from the constant term up, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<F>(Vec<F>);

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &F) -> F {
        self.0.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    fn monic(&self) -> Self {
        match self.0.last() {
            Some(lead) => {
                let inv = lead.inv().expect("nonzero leading coefficient");
                Poly(self.0.iter().map(|c| c.clone() * inv.clone()).collect())
            }
            None => self.clone(),
        }
    }

    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.0[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.0.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let q = r[top].clone() * lead_inv.clone();
            if !q.is_zero() {
                for (i, c) in d.0.iter().enumerate() {
                    r[top - dd + i] -= &(q.clone() * c.clone());
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Characteristic polynomial `det(x - M)` via reduction to Hessenberg form.
pub fn charpoly<F: Scalar>(m: &[Vec<F>]) -> Poly<F> {
    let n = m.len();
    let mut a: Vec<Vec<F>> = m.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !a[i][j].is_zero()) else { continue };
        if piv != j + 1 {
            a.swap(piv, j + 1);
            for row in a.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = a[j + 1][j].inv().expect("pivot is nonzero");
        for k in j + 2..n {
            let t = a[k][j].clone() * inv.clone();
            if t.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = t.clone() * a[j + 1][c].clone();
                a[k][c] -= &v;
            }
            for row in a.iter_mut() {
                let v = t.clone() * row[k].clone();
                row[j + 1] += &v;
            }
        }
    }
    let mut p: Vec<Vec<F>> = vec![vec![F::one()]];
    for k in 0..n {
        let prev = &p[k];
        let mut next = vec![F::zero(); k + 2];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= &(a[k][k].clone() * c.clone());
        }
        let mut sub = F::one();
        for i in (0..k).rev() {
            sub *= &a[i + 1][i];
            let coeff = sub.clone() * a[i][k].clone();
            if coeff.is_zero() {
                continue;
            }
            for (e, c) in p[i].iter().enumerate() {
                next[e] -= &(coeff.clone() * c.clone());
            }
        }
        p.push(next);
    }
    Poly::new(p.pop().expect("at least the constant polynomial"))
}

pub fn kronecker<F: Scalar>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![F::zero(); n * m]; n * m];
    for (i, ai) in a.iter().enumerate() {
        for (j, aij) in ai.iter().enumerate() {
            if aij.is_zero() {
                continue;
            }
            for (k, bk) in b.iter().enumerate() {
                for (l, bkl) in bk.iter().enumerate() {
                    out[i * m + k][j * m + l] = aij.clone() * bkl.clone();
                }
            }
        }
    }
    out
}
