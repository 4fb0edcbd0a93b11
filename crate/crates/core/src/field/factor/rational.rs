//! Factorization over ℚ: squarefree decomposition, factorization modulo a good
//! prime, quadratic Hensel lifting and Zassenhaus subset recombination.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{finite, sort_factors};
use crate::error::{Error, Result};
use crate::field::poly::Poly;
use crate::field::prime::is_prime;
use crate::field::rational::{Qq, Q};
use crate::field::Fp;

pub const MAX_DEGREE: usize = 24;

type ZPoly = Vec<BigInt>;

/// Factorization of a nonzero polynomial over ℚ into monic irreducibles.
pub fn factor_q(f: &Poly<Q>) -> Result<Vec<(Poly<Q>, usize)>> {
    assert!(!f.is_zero(), "factoring the zero polynomial");
    if f.deg() > MAX_DEGREE {
        return Err(Error::UnsupportedLevel(format!(
            "degree {} exceeds the ℚ factorization bound {MAX_DEGREE}",
            f.deg()
        )));
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_q(&f.monic(&Qq)) {
        for h in zassenhaus(&primitive_z(&g)) {
            out.push((from_z(&h).monic(&Qq), m));
        }
    }
    Ok(sort_factors(out))
}

/// Yun's squarefree decomposition of a monic polynomial over ℚ.
pub fn squarefree_q(f: &Poly<Q>) -> Vec<(Poly<Q>, usize)> {
    super::squarefree_char0(&Qq, f)
}

fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

/// Primitive integer polynomial with positive leading coefficient, proportional to f.
pub fn primitive_z(f: &Poly<Q>) -> ZPoly {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: ZPoly = f.coeffs().iter().map(|c| (c * BigRational::from(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

fn from_z(a: &ZPoly) -> Poly<Q> {
    Poly::from_coeffs(&Qq, a.iter().map(|c| BigRational::from(c.clone())).collect())
}

fn zmod(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

fn sym(a: &BigInt, m: &BigInt) -> BigInt {
    let r = zmod(a, m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn reduce(a: &ZPoly, m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| zmod(c, m)).collect())
}

fn zadd(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim((0..n).map(|i| zmod(&(a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)), m)).collect())
}

fn zsub(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim((0..n).map(|i| zmod(&(a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)), m)).collect())
}

fn zmul(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    reduce(&c, m)
}

/// Division by a polynomial whose leading coefficient is a unit mod m.
fn zdivrem(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    let inv = mod_inverse(b.last().unwrap(), m);
    let mut r = reduce(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let f = zmod(&(&r[i] * &inv), m);
        if f.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i - db + j] = zmod(&(&r[i - db + j] - &f * y), m);
        }
        q[i - db] = f;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = zmod(a, m).extended_gcd(m);
    assert!(e.gcd.is_one(), "non-invertible leading coefficient");
    zmod(&e.x, m)
}

fn to_fp(k: &Fp, a: &ZPoly) -> Poly<u64> {
    let p = BigInt::from(k.p());
    Poly::from_coeffs(k, a.iter().map(|c| zmod(c, &p).to_u64().unwrap()).collect())
}

fn from_fp(a: &Poly<u64>) -> ZPoly {
    a.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from f ≡ g·h (mod m), s·g + t·h ≡ 1 (mod m), h monic,
/// to the same relations modulo m².
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zsub(f, &zmul(g, h, &m2), &m2);
    let (q, r) = zdivrem(&zmul(s, &e, &m2), h, &m2);
    let g2 = zadd(&zadd(g, &zmul(t, &e, &m2), &m2), &zmul(&q, g, &m2), &m2);
    let h2 = zadd(h, &r, &m2);
    let one = vec![BigInt::one()];
    let b = zsub(&zadd(&zmul(s, &g2, &m2), &zmul(t, &h2, &m2), &m2), &one, &m2);
    let (c, d) = zdivrem(&zmul(s, &b, &m2), &h2, &m2);
    let s2 = zsub(s, &d, &m2);
    let t2 = zsub(&zsub(t, &zmul(t, &b, &m2), &m2), &zmul(&c, &g2, &m2), &m2);
    (g2, h2, s2, t2)
}

/// Lifts f ≡ lc(f)·Π factors (mod p) to monic factors modulo p^(2^steps).
fn lift_tree(f: &ZPoly, factors: &[Poly<u64>], k: &Fp, steps: u32) -> Vec<ZPoly> {
    let p = BigInt::from(k.p());
    let mut big_m = p.clone();
    for _ in 0..steps {
        big_m = &big_m * &big_m;
    }
    if factors.len() == 1 {
        let inv = mod_inverse(f.last().unwrap(), &big_m);
        return vec![reduce(&f.iter().map(|c| c * &inv).collect(), &big_m)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc = to_fp(k, &vec![f.last().unwrap().clone()]);
    let g0 = left.iter().fold(lc, |acc, x| acc.mul(k, x));
    let h0 = right.iter().fold(Poly::one(k), |acc, x| acc.mul(k, x));
    let (one, s0, t0) = g0.xgcd(k, &h0);
    debug_assert_eq!(one, Poly::one(k));
    let (mut g, mut h, mut s, mut t) = (from_fp(&g0), from_fp(&h0), from_fp(&s0), from_fp(&t0));
    let mut m = p.clone();
    for _ in 0..steps {
        let fm = reduce(f, &(&m * &m));
        (g, h, s, t) = hensel_step(&fm, &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    let mut out = lift_tree(&g, left, k, steps);
    out.extend(lift_tree(&h, right, k, steps));
    out
}

fn prime_candidates() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&p| is_prime(p))
}

/// Irreducible factors over ℤ of a primitive squarefree polynomial.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let mut best: Option<(Fp, Vec<Poly<u64>>)> = None;
    let mut good = 0;
    for p in prime_candidates() {
        let k = Fp::new(p).unwrap();
        let fp = to_fp(&k, f);
        if fp.deg() != n || fp.gcd(&k, &fp.derivative(&k)).deg() > 0 {
            continue;
        }
        let fac: Vec<Poly<u64>> = finite::factor(&k, &fp).into_iter().map(|(g, _)| g).collect();
        if fac.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| fac.len() < b.len()) {
            best = Some((k, fac));
        }
        good += 1;
        if good == 5 {
            break;
        }
    }
    let (k, modular) = best.unwrap();
    let lc = f.last().unwrap().abs();
    let norm2 = f.iter().fold(BigInt::zero(), |acc, c| acc + c * c).sqrt() + 1;
    let bound = &lc * (BigInt::one() << n) * norm2 * 2;
    let p = BigInt::from(k.p());
    let mut steps = 0;
    let mut m = p.clone();
    while m <= bound {
        m = &m * &m;
        steps += 1;
    }
    let lifted = lift_tree(f, &modular, &k, steps);
    recombine(f, lifted, &m)
}

fn divides_exactly(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let (q, r) = from_z(a).divrem(&Qq, &from_z(b));
    if !r.is_zero() || q.coeffs().iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.to_integer()).collect())
}

fn primitive_part(a: &ZPoly) -> ZPoly {
    let g = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let s = if a.last().unwrap().sign() == Sign::Minus { -g } else { g };
    a.iter().map(|c| c / &s).collect()
}

fn recombine(f: &ZPoly, mut lifted: Vec<ZPoly>, m: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = g.last().unwrap().clone();
            let cand = idx.iter().fold(vec![lc], |acc, &i| zmul(&acc, &lifted[i], m));
            let cand = trim(cand.iter().map(|c| sym(c, m)).collect());
            if !cand.is_empty() {
                let cand = primitive_part(&cand);
                if let Some(q) = divides_exactly(&g, &cand) {
                    out.push(cand);
                    g = q;
                    for &i in idx.iter().rev() {
                        lifted.remove(i);
                    }
                    continue 'outer;
                }
            }
            // next combination
            let mut i = size;
            loop {
                if i == 0 {
                    size += 1;
                    continue 'outer;
                }
                i -= 1;
                if idx[i] < r - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    if g.len() > 1 {
        out.push(primitive_part(&g));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::q;
    use proptest::prelude::*;

    fn qp(c: &[i64]) -> Poly<Q> {
        Poly::from_coeffs(&Qq, c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn u9_u6_u3_1() {
        let f = qp(&[1, 0, 0, 1, 0, 0, 1, 0, 0, 1]);
        let fac = factor_q(&f).unwrap();
        let expected = vec![
            (qp(&[1, 1]), 1),
            (qp(&[1, -1, 1]), 1),
            (qp(&[1, 0, 1]), 1),
            (qp(&[1, 0, -1, 0, 1]), 1),
        ];
        assert_eq!(fac, expected);
    }

    #[test]
    fn cube_root_of_two_is_irreducible() {
        assert_eq!(factor_q(&qp(&[-2, 0, 0, 1])).unwrap(), vec![(qp(&[-2, 0, 0, 1]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_style_many_modular_factors() {
        // x^4 - 10x^2 + 1 is irreducible but splits into quadratics mod every prime.
        let f = qp(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_q(&f).unwrap(), vec![(f.clone(), 1)]);
        // (x^4-10x^2+1)(x^2-2)^2 (3x+1)
        let g = f.mul(&Qq, &qp(&[-2, 0, 1]).pow(&Qq, 2)).mul(&Qq, &qp(&[1, 3]));
        let fac = factor_q(&g).unwrap();
        assert_eq!(fac.len(), 3);
        assert_eq!(fac[0], (Poly::from_coeffs(&Qq, vec![crate::field::rational::qf(1, 3), q(1)]), 1));
        assert_eq!(fac[1], (qp(&[-2, 0, 1]), 2));
    }

    #[test]
    fn degree_cap() {
        let mut c = vec![0; 26];
        c[0] = 1;
        c[25] = 1;
        assert!(matches!(factor_q(&qp(&c)), Err(Error::UnsupportedLevel(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn product_of_random_factors(
            a in prop::collection::vec(-9i64..10, 2..5),
            b in prop::collection::vec(-9i64..10, 2..5),
            c in prop::collection::vec(-9i64..10, 2..4),
        ) {
            let f = qp(&a).mul(&Qq, &qp(&b)).mul(&Qq, &qp(&c));
            prop_assume!(f.deg() > 0);
            let fac = factor_q(&f).unwrap();
            let mut prod = Poly::constant(&Qq, f.lc().unwrap().clone());
            for (g, m) in &fac {
                prod = prod.mul(&Qq, &g.pow(&Qq, *m as u64));
            }
            prop_assert_eq!(prod, f.clone());
            // each factor of the inputs divides some product of output factors: at least
            // as many factors as nonconstant inputs
            let nonconst = [&a, &b, &c].iter().filter(|x| qp(x).deg() > 0).count();
            let total: usize = fac.iter().map(|(_, m)| m).sum();
            prop_assert!(total >= nonconst);
        }
    }
}
