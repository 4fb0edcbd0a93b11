use rand::{Rng, RngCore};

use super::{FiniteField, Field};
use crate::error::{Error, Result};

/// The prime field 𝔽_p for a prime p ≤ 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

pub const MAX_PRIME: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not a prime ≤ 2^31")));
        }
        Ok(Fp { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in (−p/2, p/2].
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.elem(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(self.elem(s0))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

impl FiniteField for Fp {
    fn prime_degree(&self) -> usize {
        1
    }
    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn frobenius(&self, a: &u64) -> u64 {
        *a
    }
    fn to_prime_coords(&self, a: &u64) -> Vec<u64> {
        vec![*a]
    }
    fn from_prime_coords(&self, c: &[u64]) -> u64 {
        c[0] % self.p
    }
}

/// Smallest m with g^m = h, by baby-step giant-step.
pub fn discrete_log(k: &Fp, g: u64, h: u64) -> Option<u64> {
    let n = k.p() - 1;
    let m = (n as f64).sqrt().ceil() as u64 + 1;
    let mut table = std::collections::HashMap::with_capacity(m as usize);
    let mut x = 1u64;
    for j in 0..m {
        table.entry(x).or_insert(j);
        x = k.mul(&x, &g);
    }
    let step = k.inv(&k.pow(&g, m))?;
    let mut y = h;
    for i in 0..=m {
        if let Some(j) = table.get(&y) {
            return Some(i * m + j);
        }
        y = k.mul(&y, &step);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baby_step_giant_step() {
        let k = Fp::new(1_000_003).unwrap();
        let g = 2;
        let h = k.pow(&g, 123_456);
        let m = discrete_log(&k, g, h).unwrap();
        assert_eq!(k.pow(&g, m), h);
    }

    #[test]
    fn rejects_composites() {
        assert!(Fp::new(9).is_err());
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(2).is_ok());
        assert!(Fp::new(2_147_483_647).is_ok());
    }

    #[test]
    fn inverse_table_mod_7() {
        let k = Fp::new(7).unwrap();
        for a in 1..7u64 {
            assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), 1);
        }
        assert_eq!(k.inv(&0), None);
    }

    #[test]
    fn large_prime_products_do_not_overflow() {
        let p = 2_147_483_647u64;
        let k = Fp::new(p).unwrap();
        let a = p - 1;
        assert_eq!(k.mul(&a, &a), 1);
        assert_eq!(k.pow(&3, p - 1), 1);
    }
}
