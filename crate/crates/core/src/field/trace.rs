//! The trace pairing (x, y) ↦ tr(xy) of a tower level over the base field.

use super::linalg::{self, Matrix};
use super::{Field, TowerField};
use crate::error::{Error, Result};

/// Gram matrix of the trace pairing on the flat monomial basis of `k` over its base.
pub fn trace_form<B: Field>(k: &TowerField<B>) -> Result<Matrix<B::Elem>> {
    let n = k.degree();
    let basis: Vec<Vec<B::Elem>> = (0..n)
        .map(|i| {
            let mut e = vec![k.base().zero(); n];
            e[i] = k.base().one();
            e
        })
        .collect();
    let traces: Vec<B::Elem> = basis.iter().map(|e| k.trace(e)).collect();
    let mut gram = vec![vec![k.base().zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let prod = k.mul(&basis[i], &basis[j]);
            // tr is linear: expand the product in the basis
            let t = prod
                .iter()
                .zip(&traces)
                .fold(k.base().zero(), |acc, (c, tr)| k.base().add(&acc, &k.base().mul(c, tr)));
            gram[i][j] = t.clone();
            gram[j][i] = t;
        }
    }
    if k.base().is_zero(&linalg::det(k.base(), &gram)) {
        return Err(Error::InseparableLevel);
    }
    Ok(gram)
}
