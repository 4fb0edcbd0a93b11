//! Towers of simple algebraic extensions over a base field.
//!
//! An element of level `i` is stored as a flat coefficient vector over the base
//! field of length `[K_i : k]`, with respect to the monomial basis
//! `y_1^{e_1}⋯y_i^{e_i}` ordered so that the top variable varies slowest. Embedding
//! a lower level into a higher one is zero padding.

use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use super::poly::Poly;
use super::{FiniteField, Field, Fp};
use crate::error::{Error, Result};

#[derive(Debug)]
struct Level<E> {
    var: String,
    deg: usize,
    /// Monic defining polynomial, coefficients are elements of the previous level.
    minpoly: Vec<Vec<E>>,
}

#[derive(Debug)]
struct TowerData<B: Field> {
    base: B,
    levels: Vec<Level<B::Elem>>,
    totals: Vec<usize>,
}

/// A base field plus a chain of simple extensions. Cheap to clone.
#[derive(Clone)]
pub struct FieldTower<B: Field> {
    data: Arc<TowerData<B>>,
}

impl<B: Field> fmt::Debug for FieldTower<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("base", &self.data.base)
            .field("levels", &self.data.levels)
            .finish()
    }
}

/// One level of a [`FieldTower`], usable as a [`Field`]. Level 0 is the base field.
#[derive(Clone)]
pub struct TowerField<B: Field> {
    tower: FieldTower<B>,
    level: usize,
}

impl<B: Field> fmt::Debug for TowerField<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerField(level {} of {:?})", self.level, self.tower)
    }
}

impl<B: Field> FieldTower<B> {
    pub fn new(base: B) -> Self {
        FieldTower { data: Arc::new(TowerData { base, levels: Vec::new(), totals: vec![1] }) }
    }

    pub fn base(&self) -> &B {
        &self.data.base
    }

    pub fn height(&self) -> usize {
        self.data.levels.len()
    }

    pub fn degree(&self) -> usize {
        *self.data.totals.last().unwrap()
    }

    pub fn top(&self) -> TowerField<B> {
        self.level(self.height())
    }

    pub fn level(&self, i: usize) -> TowerField<B> {
        assert!(i <= self.height());
        TowerField { tower: self.clone(), level: i }
    }

    pub fn var(&self, i: usize) -> &str {
        &self.data.levels[i - 1].var
    }

    /// Adjoins a root of `f` (monic, coefficients in the top level) without an
    /// irreducibility check. The caller guarantees irreducibility.
    pub fn extend_unchecked(&self, var: &str, f: &Poly<Vec<B::Elem>>) -> Result<Self> {
        if !f.is_monic(&self.top()) {
            return Err(Error::NotMonic);
        }
        let deg = f.degree().unwrap();
        if deg == 0 {
            return Err(Error::Invalid("constant defining polynomial".into()));
        }
        let mut levels: Vec<Level<B::Elem>> = self
            .data
            .levels
            .iter()
            .map(|l| Level { var: l.var.clone(), deg: l.deg, minpoly: l.minpoly.clone() })
            .collect();
        levels.push(Level { var: var.to_string(), deg, minpoly: f.coeffs().to_vec() });
        let mut totals = self.data.totals.clone();
        totals.push(self.degree() * deg);
        Ok(FieldTower { data: Arc::new(TowerData { base: self.data.base.clone(), levels, totals }) })
    }

    /// Single-level tower k[T]/(f) for f over the base, unchecked.
    pub fn simple_unchecked(base: B, var: &str, f: &Poly<B::Elem>) -> Result<Self> {
        let t = FieldTower::new(base);
        let top = t.top();
        let lifted = Poly::from_coeffs(&top, f.coeffs().iter().map(|a| vec![a.clone()]).collect());
        t.extend_unchecked(var, &lifted)
    }

    /// Defining polynomial of level `i ≥ 1`, over level `i − 1`.
    pub fn minpoly(&self, i: usize) -> Poly<Vec<B::Elem>> {
        Poly::from_coeffs(&self.level(i - 1), self.data.levels[i - 1].minpoly.clone())
    }

    pub fn same_as(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
    }
}

impl<B: Field> TowerField<B> {
    pub fn tower(&self) -> &FieldTower<B> {
        &self.tower
    }

    pub fn index(&self) -> usize {
        self.level
    }

    pub fn base(&self) -> &B {
        &self.tower.data.base
    }

    /// Degree over the base field.
    pub fn degree(&self) -> usize {
        self.tower.data.totals[self.level]
    }

    pub fn below(&self) -> TowerField<B> {
        self.tower.level(self.level - 1)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.level == other.level && self.tower.same_as(&other.tower)
    }

    pub fn embed_base(&self, a: &B::Elem) -> Vec<B::Elem> {
        let mut v = vec![self.base().zero(); self.degree()];
        v[0] = a.clone();
        v
    }

    /// Embeds an element of a lower level of the same tower.
    pub fn embed_lower(&self, a: &[B::Elem]) -> Vec<B::Elem> {
        let mut v = a.to_vec();
        v.resize(self.degree(), self.base().zero());
        v
    }

    pub fn in_base(&self, a: &[B::Elem]) -> Option<B::Elem> {
        a[1..].iter().all(|x| self.base().is_zero(x)).then(|| a[0].clone())
    }

    /// The adjoined root of this level (for level 0, the element 0).
    pub fn generator(&self) -> Vec<B::Elem> {
        let mut v = vec![self.base().zero(); self.degree()];
        if self.level == 0 {
            return v;
        }
        let below = self.tower.data.totals[self.level - 1];
        if self.tower.data.levels[self.level - 1].deg == 1 {
            // y = −c0
            let c0 = &self.tower.data.levels[self.level - 1].minpoly[0];
            return self.embed_lower(&self.below().neg(c0));
        }
        v[below] = self.base().one();
        v
    }

    /// Builds an element from base coefficients, checking the length.
    pub fn from_flat(&self, c: Vec<B::Elem>) -> Vec<B::Elem> {
        assert_eq!(c.len(), self.degree());
        c
    }

    /// For level ≥ 1: the element Σ c_j y^j with c_j in the level below.
    pub fn from_below_coeffs(&self, c: &[Vec<B::Elem>]) -> Vec<B::Elem> {
        let d = self.tower.data.levels[self.level - 1].deg;
        let m = self.tower.data.totals[self.level - 1];
        let mut v = vec![self.base().zero(); self.degree()];
        let poly = Poly::from_coeffs(&self.below(), c.to_vec());
        let red = poly.rem(&self.below(), &self.tower.minpoly(self.level));
        for (j, cj) in red.coeffs().iter().enumerate().take(d) {
            v[j * m..(j + 1) * m].clone_from_slice(cj);
        }
        v
    }

    /// Coefficients over the level below (inverse of [`Self::from_below_coeffs`]).
    pub fn to_below_coeffs(&self, a: &[B::Elem]) -> Vec<Vec<B::Elem>> {
        let m = self.tower.data.totals[self.level - 1];
        a.chunks(m).map(<[B::Elem]>::to_vec).collect()
    }

    fn mul_at(&self, i: usize, a: &[B::Elem], b: &[B::Elem]) -> Vec<B::Elem> {
        let k = self.base();
        if i == 0 {
            return vec![k.mul(&a[0], &b[0])];
        }
        let lv = &self.tower.data.levels[i - 1];
        let d = lv.deg;
        let m = self.tower.data.totals[i - 1];
        if m == 1 {
            let mut prod = vec![k.zero(); 2 * d - 1];
            for (x, ax) in a.iter().enumerate() {
                if k.is_zero(ax) {
                    continue;
                }
                for (y, by) in b.iter().enumerate() {
                    prod[x + y] = k.add(&prod[x + y], &k.mul(ax, by));
                }
            }
            for top in (d..2 * d - 1).rev() {
                let c = std::mem::replace(&mut prod[top], k.zero());
                if k.is_zero(&c) {
                    continue;
                }
                for t in 0..d {
                    let idx = top - d + t;
                    prod[idx] = k.sub(&prod[idx], &k.mul(&c, &lv.minpoly[t][0]));
                }
            }
            prod.truncate(d);
            return prod;
        }
        let zero_block = vec![k.zero(); m];
        let is_zero_block = |v: &[B::Elem]| v.iter().all(|x| k.is_zero(x));
        let mut prod: Vec<Vec<B::Elem>> = vec![zero_block.clone(); 2 * d - 1];
        for x in 0..d {
            let ax = &a[x * m..(x + 1) * m];
            if is_zero_block(ax) {
                continue;
            }
            for y in 0..d {
                let by = &b[y * m..(y + 1) * m];
                if is_zero_block(by) {
                    continue;
                }
                let p = self.mul_at(i - 1, ax, by);
                for (s, t) in prod[x + y].iter_mut().zip(&p) {
                    *s = k.add(s, t);
                }
            }
        }
        for top in (d..2 * d - 1).rev() {
            let c = std::mem::replace(&mut prod[top], zero_block.clone());
            if is_zero_block(&c) {
                continue;
            }
            for t in 0..d {
                let p = self.mul_at(i - 1, &c, &lv.minpoly[t]);
                for (s, u) in prod[top - d + t].iter_mut().zip(&p) {
                    *s = k.sub(s, u);
                }
            }
        }
        prod.truncate(d);
        prod.concat()
    }

    /// The matrix of multiplication by `a` on the flat base coordinates
    /// (column j is a·e_j).
    pub fn mul_matrix(&self, a: &[B::Elem]) -> Vec<Vec<B::Elem>> {
        let n = self.degree();
        let k = self.base();
        let cols: Vec<Vec<B::Elem>> = (0..n)
            .map(|j| {
                let mut e = vec![k.zero(); n];
                e[j] = k.one();
                self.mul_at(self.level, a, &e)
            })
            .collect();
        super::linalg::transpose(&cols)
    }

    /// Trace over the base field.
    pub fn trace(&self, a: &[B::Elem]) -> B::Elem {
        let m = self.mul_matrix(a);
        let k = self.base();
        (0..m.len()).fold(k.zero(), |acc, i| k.add(&acc, &m[i][i]))
    }
}

impl<B: Field> Field for TowerField<B> {
    type Elem = Vec<B::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base().zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.embed_base(&self.base().one())
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.embed_base(&self.base().from_i64(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base().add(x, y)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base().sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base().neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul_at(self.level, a, b)
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        if self.level == 0 {
            return self.base().inv(&a[0]).map(|x| vec![x]);
        }
        let below = self.below();
        let f = Poly::from_coeffs(&below, self.to_below_coeffs(a));
        let m = self.tower.minpoly(self.level);
        let (g, s, _) = f.xgcd(&below, &m);
        debug_assert_eq!(g.degree(), Some(0));
        Some(self.from_below_coeffs(s.coeffs()))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base().is_zero(x))
    }
    fn characteristic(&self) -> u64 {
        self.base().characteristic()
    }
}

impl FiniteField for TowerField<Fp> {
    fn prime_degree(&self) -> usize {
        self.degree()
    }
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem {
        (0..self.degree()).map(|_| self.base().random(rng)).collect()
    }
    fn to_prime_coords(&self, a: &Self::Elem) -> Vec<u64> {
        a.clone()
    }
    fn from_prime_coords(&self, c: &[u64]) -> Self::Elem {
        c.iter().map(|x| x % self.base().p()).collect()
    }
}
