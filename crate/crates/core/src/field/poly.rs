//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so equal
//! polynomials have equal representations.

use num_bigint::BigUint;

use super::Field;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<E> {
    c: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn from_coeffs<F: Field<Elem = E>>(k: &F, mut c: Vec<E>) -> Self {
        while c.last().is_some_and(|x| k.is_zero(x)) {
            c.pop();
        }
        Poly { c }
    }

    pub fn constant<F: Field<Elem = E>>(k: &F, a: E) -> Self {
        Self::from_coeffs(k, vec![a])
    }

    pub fn one<F: Field<Elem = E>>(k: &F) -> Self {
        Self::constant(k, k.one())
    }

    /// The monomial a·T^n.
    pub fn monomial<F: Field<Elem = E>>(k: &F, a: E, n: usize) -> Self {
        let mut c = vec![k.zero(); n + 1];
        c[n] = a;
        Self::from_coeffs(k, c)
    }

    pub fn x<F: Field<Elem = E>>(k: &F) -> Self {
        Self::monomial(k, k.one(), 1)
    }

    /// T − a.
    pub fn linear_root<F: Field<Elem = E>>(k: &F, a: &E) -> Self {
        Self::from_coeffs(k, vec![k.neg(a), k.one()])
    }

    pub fn coeffs(&self) -> &[E] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Option<&E> {
        self.c.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, k: &F, i: usize) -> E {
        self.c.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, k: &F) -> bool {
        self.lc().is_some_and(|a| k.is_one(a))
    }

    pub fn add<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => k.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(k, c)
    }

    pub fn neg<F: Field<Elem = E>>(&self, k: &F) -> Self {
        Poly { c: self.c.iter().map(|a| k.neg(a)).collect() }
    }

    pub fn sub<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        self.add(k, &o.neg(k))
    }

    pub fn scale<F: Field<Elem = E>>(&self, k: &F, a: &E) -> Self {
        Self::from_coeffs(k, self.c.iter().map(|x| k.mul(x, a)).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![k.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = k.add(&c[i + j], &k.mul(a, b));
            }
        }
        Self::from_coeffs(k, c)
    }

    /// Multiplication by T^n.
    pub fn shift<F: Field<Elem = E>>(&self, k: &F, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![k.zero(); n];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn pow<F: Field<Elem = E>>(&self, k: &F, mut e: u64) -> Self {
        let mut acc = Self::one(k);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(k, &b);
            }
        }
        acc
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn divrem<F: Field<Elem = E>>(&self, k: &F, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        if self.c.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let inv = k.inv(d.lc().unwrap()).unwrap();
        let mut r = self.c.clone();
        let mut q = vec![k.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let f = k.mul(&r[i], &inv);
            if k.is_zero(&f) {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = k.sub(&r[idx], &k.mul(&f, b));
            }
            q[i - dd] = f;
        }
        r.truncate(dd);
        (Self::from_coeffs(k, q), Self::from_coeffs(k, r))
    }

    pub fn rem<F: Field<Elem = E>>(&self, k: &F, d: &Self) -> Self {
        self.divrem(k, d).1
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, k: &F, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(k, d);
        r.is_zero().then_some(q)
    }

    pub fn monic<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(a) => self.scale(k, &k.inv(a).unwrap()),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(k, &b);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// Returns (g, s, t) with s·self + t·o = g monic.
    pub fn xgcd<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(k), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(k, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(k, &q.mul(k, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(k, &q.mul(k, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc() {
            None => (r0, s0, t0),
            Some(a) => {
                let inv = k.inv(a).unwrap();
                (r0.scale(k, &inv), s0.scale(k, &inv), t0.scale(k, &inv))
            }
        }
    }

    pub fn derivative<F: Field<Elem = E>>(&self, k: &F) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| k.mul(a, &k.from_i64(i as i64)))
            .collect();
        Self::from_coeffs(k, c)
    }

    pub fn eval<F: Field<Elem = E>>(&self, k: &F, x: &E) -> E {
        self.c.iter().rev().fold(k.zero(), |acc, a| k.add(&k.mul(&acc, x), a))
    }

    /// Evaluates at an element of a larger field `big`, through the embedding `emb`.
    pub fn eval_in<G: Field>(
        &self,
        big: &G,
        emb: impl Fn(&E) -> G::Elem,
        x: &G::Elem,
    ) -> G::Elem {
        self.c.iter().rev().fold(big.zero(), |acc, a| big.add(&big.mul(&acc, x), &emb(a)))
    }

    /// self(g).
    pub fn compose<F: Field<Elem = E>>(&self, k: &F, g: &Self) -> Self {
        self.c
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| acc.mul(k, g).add(k, &Self::constant(k, a.clone())))
    }

    pub fn mulmod<F: Field<Elem = E>>(&self, k: &F, o: &Self, m: &Self) -> Self {
        self.mul(k, o).rem(k, m)
    }

    pub fn powmod<F: Field<Elem = E>>(&self, k: &F, e: &BigUint, m: &Self) -> Self {
        let base = self.rem(k, m);
        let mut acc = Self::one(k).rem(k, m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(k, &acc, m);
            if e.bit(i) {
                acc = acc.mulmod(k, &base, m);
            }
        }
        acc
    }

    /// Newton interpolation through (xs[i], ys[i]) with distinct xs.
    pub fn interpolate<F: Field<Elem = E>>(k: &F, xs: &[E], ys: &[E]) -> Self {
        let n = xs.len();
        let mut coef = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = k.sub(&coef[i], &coef[i - 1]);
                let den = k.sub(&xs[i], &xs[i - j]);
                coef[i] = k.div(&num, &den);
            }
        }
        let mut acc = Self::zero();
        for i in (0..n).rev() {
            let lin = Self::linear_root(k, &xs[i]);
            acc = acc.mul(k, &lin).add(k, &Self::constant(k, coef[i].clone()));
        }
        acc
    }

    pub fn map<G: Field>(&self, g: &G, f: impl Fn(&E) -> G::Elem) -> Poly<G::Elem> {
        Poly::from_coeffs(g, self.c.iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    fn p7(c: &[i64]) -> Poly<u64> {
        let k = Fp::new(7).unwrap();
        Poly::from_coeffs(&k, c.iter().map(|&x| k.elem(x)).collect())
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(p7(&[1, 2, 0, 7]).degree(), Some(1));
        assert!(p7(&[0, 0]).is_zero());
    }

    #[test]
    fn divrem_small() {
        let k = Fp::new(7).unwrap();
        let (q, r) = p7(&[1, 0, 0, 1]).divrem(&k, &p7(&[1, 1]));
        assert_eq!(q, p7(&[1, -1, 1]));
        assert!(r.is_zero());
    }

    fn all_monic(p: u64, deg: usize) -> Vec<Poly<u64>> {
        let k = Fp::new(p).unwrap();
        let mut out = Vec::new();
        for code in 0..p.pow(deg as u32) {
            let mut c = Vec::new();
            let mut x = code;
            for _ in 0..deg {
                c.push(x % p);
                x /= p;
            }
            c.push(1);
            out.push(Poly::from_coeffs(&k, c));
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gcd_matches_brute_force(
            p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
            a in prop::collection::vec(0u64..11, 1..7),
            b in prop::collection::vec(0u64..11, 1..7),
        ) {
            let k = Fp::new(p).unwrap();
            let f = Poly::from_coeffs(&k, a.iter().map(|x| x % p).collect());
            let g = Poly::from_coeffs(&k, b.iter().map(|x| x % p).collect());
            prop_assume!(!f.is_zero() && !g.is_zero());
            let d = f.gcd(&k, &g);
            prop_assert!(f.rem(&k, &d).is_zero());
            prop_assert!(g.rem(&k, &d).is_zero());
            let mut best = 0;
            for deg in 0..=f.deg().min(g.deg()) {
                for h in all_monic(p, deg) {
                    if f.rem(&k, &h).is_zero() && g.rem(&k, &h).is_zero() {
                        best = deg;
                    }
                }
            }
            prop_assert_eq!(d.deg(), best);
            prop_assert!(d.is_monic(&k));
        }

        #[test]
        fn xgcd_bezout_identity(
            a in prop::collection::vec(0u64..13, 1..9),
            b in prop::collection::vec(0u64..13, 1..9),
        ) {
            let k = Fp::new(13).unwrap();
            let f = Poly::from_coeffs(&k, a);
            let g = Poly::from_coeffs(&k, b);
            prop_assume!(!f.is_zero() || !g.is_zero());
            let (d, s, t) = f.xgcd(&k, &g);
            prop_assert_eq!(s.mul(&k, &f).add(&k, &t.mul(&k, &g)), d.clone());
            prop_assert_eq!(d, f.gcd(&k, &g));
        }
    }
}
