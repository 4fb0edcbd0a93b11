//! The rational function field F(t) over an exact field F.

use super::poly::Poly;
use super::Field;

#[derive(Debug, Clone)]
pub struct RatFuncField<F: Field> {
    k: F,
}

/// num/den in lowest terms with den monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc<E> {
    pub num: Poly<E>,
    pub den: Poly<E>,
}

impl<F: Field> RatFuncField<F> {
    pub fn new(k: F) -> Self {
        RatFuncField { k }
    }

    pub fn coeff_field(&self) -> &F {
        &self.k
    }

    pub fn make(&self, num: Poly<F::Elem>, den: Poly<F::Elem>) -> RatFunc<F::Elem> {
        let k = &self.k;
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return self.zero();
        }
        let g = num.gcd(k, &den);
        let (num, den) = if g.deg() > 0 {
            (num.div_exact(k, &g).unwrap(), den.div_exact(k, &g).unwrap())
        } else {
            (num, den)
        };
        let inv = k.inv(den.lc().unwrap()).unwrap();
        RatFunc { num: num.scale(k, &inv), den: den.scale(k, &inv) }
    }

    pub fn from_poly(&self, p: Poly<F::Elem>) -> RatFunc<F::Elem> {
        RatFunc { num: p, den: Poly::one(&self.k) }
    }

    pub fn constant(&self, a: F::Elem) -> RatFunc<F::Elem> {
        self.from_poly(Poly::constant(&self.k, a))
    }

    /// The transcendental t.
    pub fn t(&self) -> RatFunc<F::Elem> {
        self.from_poly(Poly::x(&self.k))
    }

    /// Evaluation at t = a; `None` if a is a pole.
    pub fn eval(&self, f: &RatFunc<F::Elem>, a: &F::Elem) -> Option<F::Elem> {
        let d = f.den.eval(&self.k, a);
        self.k.inv(&d).map(|di| self.k.mul(&f.num.eval(&self.k, a), &di))
    }
}

impl<F: Field> Field for RatFuncField<F> {
    type Elem = RatFunc<F::Elem>;

    fn zero(&self) -> Self::Elem {
        RatFunc { num: Poly::zero(), den: Poly::one(&self.k) }
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.k.one())
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.constant(self.k.from_i64(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.k;
        if a.den == b.den {
            return self.make(a.num.add(k, &b.num), a.den.clone());
        }
        self.make(a.num.mul(k, &b.den).add(k, &b.num.mul(k, &a.den)), a.den.mul(k, &b.den))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        RatFunc { num: a.num.neg(&self.k), den: a.den.clone() }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        let k = &self.k;
        self.make(a.num.mul(k, &b.num), a.den.mul(k, &b.den))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.num.is_zero() {
            return None;
        }
        Some(self.make(a.den.clone(), a.num.clone()))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.num.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.k.characteristic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    #[test]
    fn reduces_to_lowest_terms() {
        let k = Fp::new(5).unwrap();
        let r = RatFuncField::new(k);
        let t = r.t();
        let one = r.one();
        // (t^2 - 1)/(t - 1) = t + 1
        let num = r.sub(&r.mul(&t, &t), &one);
        let den = r.sub(&t, &one);
        let q = r.div(&num, &den);
        assert_eq!(q, r.add(&t, &one));
        assert_eq!(r.eval(&q, &3), Some(4));
        assert_eq!(r.eval(&r.inv(&den).unwrap(), &1), None);
    }
}
