//! Exact fields: prime fields, the rationals, towers of simple extensions and
//! rational function fields, together with polynomials and linear algebra over them.

pub mod factor;
pub mod ground;
pub mod linalg;
pub mod poly;
pub mod prime;
pub mod ratfunc;
pub mod rational;
pub mod tower;
pub mod trace;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use rand::RngCore;

pub use poly::Poly;
pub use prime::Fp;
pub use ratfunc::{RatFunc, RatFuncField};
pub use rational::Qq;
pub use ground::GroundField;
pub use tower::{FieldTower, TowerField};

/// A field whose elements are canonical values, so `==` is field equality.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Panics on division by zero.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn sum<'a, I: IntoIterator<Item = &'a Self::Elem>>(&self, it: I) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        it.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// A finite field.
pub trait FiniteField: Field {
    /// Degree over the prime field.
    fn prime_degree(&self) -> usize;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.prime_degree() as u32)
    }

    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic())
    }

    /// Coordinates over the prime field, in a fixed basis.
    fn to_prime_coords(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_prime_coords(&self, c: &[u64]) -> Self::Elem;
}
