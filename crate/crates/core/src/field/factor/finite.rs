//! Factorization over finite fields: squarefree decomposition, distinct-degree
//! factorization and Cantor–Zassenhaus equal-degree splitting.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sort_factors;
use crate::field::poly::Poly;
use crate::field::FiniteField;

const SPLIT_SEED: u64 = 0x5eed_f00d;

/// Complete factorization of a nonzero polynomial into monic irreducibles.
pub fn factor<F: FiniteField>(k: &F, f: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    assert!(!f.is_zero(), "factoring the zero polynomial");
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out = Vec::new();
    for (g, m) in squarefree(k, &f.monic(k)) {
        for (h, d) in distinct_degree(k, &g) {
            for irr in equal_degree(k, &h, d, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    sort_factors(out)
}

/// The roots in k of f, sorted, without multiplicity.
pub fn roots<F: FiniteField>(k: &F, f: &Poly<F::Elem>) -> Vec<F::Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let g = f.monic(k);
    let x = Poly::x(k);
    let xq = x.powmod(k, &k.order(), &g);
    let lin = xq.sub(k, &x).gcd(k, &g);
    let mut r: Vec<F::Elem> = if lin.deg() == 0 {
        Vec::new()
    } else {
        equal_degree(k, &lin, 1, &mut rng).into_iter().map(|p| k.neg(&p.coeffs()[0])).collect()
    };
    r.sort();
    r
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: FiniteField>(k: &F, f: &Poly<F::Elem>) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = f.monic(k);
    let q = k.order();
    let x = Poly::x(k);
    let xpow = |e: usize| {
        let mut h = x.clone();
        for _ in 0..e {
            h = h.powmod(k, &q, &f);
        }
        h
    };
    if !xpow(n).sub(k, &x).rem(k, &f).is_zero() {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| xpow(n / r).sub(k, &x).gcd(k, &f).deg() == 0)
}

pub fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pth_root<F: FiniteField>(k: &F, f: &Poly<F::Elem>) -> Poly<F::Elem> {
    let p = k.characteristic() as usize;
    let inv_frob = |a: &F::Elem| {
        let mut x = a.clone();
        for _ in 1..k.prime_degree() {
            x = k.frobenius(&x);
        }
        x
    };
    let c = f.coeffs().iter().step_by(p).map(inv_frob).collect();
    Poly::from_coeffs(k, c)
}

/// Squarefree decomposition of a monic polynomial: pairs (g_i, i) with
/// f = Π g_i^i and each g_i squarefree.
pub fn squarefree<F: FiniteField>(k: &F, f: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let p = k.characteristic() as usize;
    let mut c = f.gcd(k, &f.derivative(k));
    let mut w = f.div_exact(k, &c).unwrap();
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(k, &c);
        let z = w.div_exact(k, &y).unwrap();
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(k, &w).unwrap();
    }
    if c.deg() > 0 {
        for (g, m) in squarefree(k, &pth_root(k, &c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
pub fn distinct_degree<F: FiniteField>(k: &F, f: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let q = k.order();
    let x = Poly::x(k);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = x.clone();
    let mut i = 1;
    while g.deg() >= 2 * i {
        h = h.powmod(k, &q, &g);
        let d = h.sub(k, &x).gcd(k, &g);
        if d.deg() > 0 {
            g = g.div_exact(k, &d).unwrap();
            h = h.rem(k, &g);
            out.push((d, i));
        }
        i += 1;
    }
    if g.deg() > 0 {
        let d = g.deg();
        out.push((g, d));
    }
    out
}

/// Splits a squarefree monic product of irreducibles of degree `d`.
pub fn equal_degree<F: FiniteField>(
    k: &F,
    f: &Poly<F::Elem>,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly<F::Elem>> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let q = k.order();
    let odd = k.characteristic() != 2;
    let exp = if odd { (q.pow(d as u32) - BigUint::one()) >> 1 } else { BigUint::one() };
    loop {
        let a = Poly::from_coeffs(k, (0..n).map(|_| k.random(rng)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if odd {
            a.powmod(k, &exp, f).sub(k, &Poly::one(k))
        } else {
            let mut t = a.rem(k, f);
            let mut acc = t.clone();
            for _ in 1..d * k.prime_degree() {
                t = t.mulmod(k, &t, f);
                acc = acc.add(k, &t);
            }
            acc
        };
        let g = b.gcd(k, f);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_exact(k, &g).unwrap();
            let mut out = equal_degree(k, &g, d, rng);
            out.extend(equal_degree(k, &h, d, rng));
            return out;
        }
    }
}
