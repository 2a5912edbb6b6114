use std::sync::Arc;

use crate::error::Result;
use crate::exact_algebra::Scalar;
use crate::ns_operadic::{NsCooperad, NsCooperadBuilder, COUNIT};

/// Name of the cooperad generator dual to the arity-`n` operation.
pub fn mu_name(n: usize) -> String {
    format!("mu{n}")
}

/// Ordered tuples of positive integers summing to `n`.
pub(crate) fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Koszul dual cooperad of the associative operad up to weight `weight_cap`.
///
/// `μ_n` (arity `n ≥ 2`) has weight `n - 1` and degree `n - 1`; index `n - 1` in the basis.
pub fn build_as_koszul_cooperad<F: Scalar>(weight_cap: usize) -> Result<Arc<NsCooperad<F>>> {
    let mut b = NsCooperadBuilder::<F>::new(weight_cap);
    for n in 2..=weight_cap + 1 {
        b.add_element(mu_name(n), n - 1, n, n as i32 - 1);
    }
    let id = |a: usize| if a == 1 { COUNIT } else { a - 1 };
    for n in 3..=weight_cap + 1 {
        for comp in compositions(n) {
            let k = comp.len();
            if k == 1 || k == n {
                continue;
            }
            let exp: usize = comp.iter().enumerate().map(|(j, i)| (k - 1 - j) * (i - 1)).sum();
            let coeff = if exp % 2 == 1 { -F::one() } else { F::one() };
            b.add_decomposition(id(n), id(k), comp.iter().map(|i| id(*i)).collect(), coeff)?;
        }
    }
    Ok(Arc::new(b.build()?))
}
