//! Factorization over number-field tower levels by Trager's norm method,
//! recursing one level down at a time.

use super::{rational, sort_factors, squarefree_char0};
use crate::error::{Error, Result};
use crate::field::linalg;
use crate::field::poly::Poly;
use crate::field::rational::{Qq, Q};
use crate::field::{Field, TowerField};

/// Largest tower degree over ℚ accepted for factoring.
pub const MAX_TOWER_DEGREE: usize = 12;

pub fn factor_over_level(k: &TowerField<Qq>, f: &Poly<Vec<Q>>) -> Result<Vec<(Poly<Vec<Q>>, usize)>> {
    assert!(!f.is_zero(), "factoring the zero polynomial");
    if k.index() == 0 {
        let g = f.map(&Qq, |c| c[0].clone());
        return Ok(rational::factor_q(&g)?
            .into_iter()
            .map(|(h, m)| (h.map(k, |c| vec![c.clone()]), m))
            .collect());
    }
    if k.degree() > MAX_TOWER_DEGREE {
        return Err(Error::UnsupportedLevel(format!(
            "number field of degree {} exceeds the bound {MAX_TOWER_DEGREE}",
            k.degree()
        )));
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_char0(k, &f.monic(k)) {
        for h in trager(k, &g)? {
            out.push((h, m));
        }
    }
    Ok(sort_factors(out))
}

/// Norm from `k` down to the level below of an element, as a determinant.
pub fn norm_to_below(k: &TowerField<Qq>, a: &[Q]) -> Vec<Q> {
    let below = k.below();
    let d = k.degree() / below.degree();
    let gen = k.generator();
    let mut cols = Vec::with_capacity(d);
    let mut x = a.to_vec();
    for _ in 0..d {
        cols.push(k.to_below_coeffs(&x));
        x = k.mul(&x, &gen);
    }
    linalg::det(&below, &linalg::transpose(&cols))
}

/// Norm of a polynomial with coefficients in `k`, a polynomial over the level below.
fn norm_poly(k: &TowerField<Qq>, h: &Poly<Vec<Q>>) -> Poly<Vec<Q>> {
    let below = k.below();
    let d = k.degree() / below.degree();
    let n = d * h.deg();
    let xs: Vec<Vec<Q>> = (0..=n as i64).map(|j| below.from_i64(j)).collect();
    let ys: Vec<Vec<Q>> =
        xs.iter().map(|x| norm_to_below(k, &h.eval(k, &k.embed_lower(x)))).collect();
    Poly::interpolate(&below, &xs, &ys)
}

fn trager(k: &TowerField<Qq>, g: &Poly<Vec<Q>>) -> Result<Vec<Poly<Vec<Q>>>> {
    if g.deg() <= 1 {
        return Ok(vec![g.monic(k)]);
    }
    let below = k.below();
    let alpha = k.generator();
    for s in (0..40i64).map(|i| if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 }) {
        let sa = k.mul(&k.from_i64(s), &alpha);
        let shift = Poly::from_coeffs(k, vec![k.neg(&sa), k.one()]);
        let gs = g.compose(k, &shift);
        let n = norm_poly(k, &gs);
        if n.gcd(&below, &n.derivative(&below)).deg() > 0 {
            continue;
        }
        let facs = factor_over_level(&below, &n)?;
        if facs.len() == 1 {
            return Ok(vec![g.monic(k)]);
        }
        let back = Poly::from_coeffs(k, vec![sa.clone(), k.one()]);
        let mut out = Vec::new();
        for (nj, _) in facs {
            let lifted = nj.map(k, |c| k.embed_lower(c));
            let h = gs.gcd(k, &lifted);
            out.push(h.compose(k, &back).monic(k));
        }
        return Ok(out);
    }
    Err(Error::UnsupportedLevel("no squarefree norm found".into()))
}
