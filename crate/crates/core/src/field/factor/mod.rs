//! Polynomial factorization over finite fields, ℚ and number-field tower levels.

pub mod finite;
pub mod numberfield;
pub mod rational;

use crate::field::poly::Poly;
use crate::field::Field;

/// Sorts by degree then coefficients, merging repeated factors.
pub(crate) fn sort_factors<E: Clone + Ord>(mut v: Vec<(Poly<E>, usize)>) -> Vec<(Poly<E>, usize)> {
    v.sort_by(|a, b| (a.0.deg(), &a.0).cmp(&(b.0.deg(), &b.0)));
    let mut out: Vec<(Poly<E>, usize)> = Vec::new();
    for (g, m) in v {
        match out.last_mut() {
            Some((h, n)) if *h == g => *n += m,
            _ => out.push((g, m)),
        }
    }
    out
}

/// Yun's squarefree decomposition of a monic polynomial in characteristic 0.
pub fn squarefree_char0<F: Field>(k: &F, f: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative(k);
    let b = f.gcd(k, &df);
    let mut c = f.div_exact(k, &b).unwrap();
    let mut d = df.div_exact(k, &b).unwrap().sub(k, &c.derivative(k));
    let mut i = 1;
    while c.deg() > 0 {
        let a = c.gcd(k, &d);
        c = c.div_exact(k, &a).unwrap();
        d = d.div_exact(k, &a).unwrap().sub(k, &c.derivative(k));
        if a.deg() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}
