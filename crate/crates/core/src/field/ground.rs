//! The two supported ground fields, 𝔽_p and ℚ, and the operations whose algorithms
//! depend on which one is in use.

use serde_json::Value;

use super::factor::{finite, numberfield, rational};
use super::poly::Poly;
use super::rational::{format_q, parse_q, q, Qq, Q};
use super::{FiniteField, Field, FieldTower, Fp, TowerField};
use crate::error::{Error, Result};

/// Largest splitting field degree accepted over ℚ.
pub const MAX_SPLITTING_DEGREE_Q: usize = 12;

pub type Roots<E> = Vec<Vec<Vec<E>>>;

pub trait GroundField: Field + Copy + PartialEq + 'static {
    /// Factors over the ground field into sorted monic irreducibles.
    fn factor(&self, f: &Poly<Self::Elem>) -> Result<Vec<(Poly<Self::Elem>, usize)>>;

    /// Factors over a level of a tower built on this field.
    fn factor_in(
        k: &TowerField<Self>,
        f: &Poly<Vec<Self::Elem>>,
    ) -> Result<Vec<(Poly<Vec<Self::Elem>>, usize)>>;

    /// A single field containing all roots of the given irreducible polynomials,
    /// with the roots of each polynomial listed in canonical order.
    fn split(&self, polys: &[Poly<Self::Elem>]) -> Result<(TowerField<Self>, Roots<Self::Elem>)>;

    /// Descends a parametrization matrix (rows = coordinates, columns = coefficients
    /// of s^e..t^e) with entries in `l` whose image is Galois stable to one over the
    /// ground field with the same image.
    fn descend_matrix(
        l: &TowerField<Self>,
        a: &[Vec<Vec<Self::Elem>>],
    ) -> Result<Vec<Vec<Self::Elem>>>;

    fn as_prime_field(&self) -> Option<Fp>;

    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;

    /// Deterministic sequence of distinct ground-field elements 0, 1, 2, …
    /// (as many as exist, up to `n`).
    fn small_elements(&self, n: usize) -> Vec<Self::Elem> {
        let limit = match self.characteristic() {
            0 => n,
            p => n.min(p as usize),
        };
        (0..limit as i64).map(|i| self.from_i64(i)).collect()
    }
}

/// Adjoins a root of `f` to the top of `tower`, checking monicity and irreducibility.
pub fn tower_extend<B: GroundField>(
    tower: &FieldTower<B>,
    var: &str,
    f: &Poly<Vec<B::Elem>>,
) -> Result<FieldTower<B>> {
    let top = tower.top();
    if f.degree().is_none_or(|d| d == 0) {
        return Err(Error::Invalid("defining polynomial must be nonconstant".into()));
    }
    if !f.is_monic(&top) {
        return Err(Error::NotMonic);
    }
    let fac = B::factor_in(&top, f)?;
    if fac.len() != 1 || fac[0].1 != 1 {
        return Err(Error::ReducibleDefiningPolynomial);
    }
    tower.extend_unchecked(var, f)
}

/// Lexicographically least monic irreducible of degree `d` over 𝔽_p, enumerating
/// lower coefficients as base-p digits (constant term least significant).
pub fn canonical_irreducible(k: Fp, d: usize) -> Poly<u64> {
    let p = k.p();
    for code in 0u64.. {
        let mut c = Vec::with_capacity(d + 1);
        let mut x = code;
        for _ in 0..d {
            c.push(x % p);
            x /= p;
        }
        c.push(1);
        let f = Poly::from_coeffs(&k, c);
        if finite::is_irreducible(&k, &f) {
            return f;
        }
    }
    unreachable!()
}

fn lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}

impl GroundField for Fp {
    fn factor(&self, f: &Poly<u64>) -> Result<Vec<(Poly<u64>, usize)>> {
        Ok(finite::factor(self, f))
    }

    fn factor_in(k: &TowerField<Fp>, f: &Poly<Vec<u64>>) -> Result<Vec<(Poly<Vec<u64>>, usize)>> {
        Ok(finite::factor(k, f))
    }

    fn split(&self, polys: &[Poly<u64>]) -> Result<(TowerField<Fp>, Roots<u64>)> {
        let orbit = |l: &TowerField<Fp>, r: Vec<u64>, d: usize| {
            let mut out = vec![r];
            for _ in 1..d {
                out.push(l.frobenius(out.last().unwrap()));
            }
            out
        };
        if let [f] = polys {
            let d = f.deg();
            if d == 1 {
                let l = FieldTower::new(*self).top();
                return Ok((l, vec![vec![vec![self.neg(&f.coeffs()[0])]]]));
            }
            let l = FieldTower::simple_unchecked(*self, "a", f)?.top();
            let g = l.generator();
            return Ok((l.clone(), vec![orbit(&l, g, d)]));
        }
        let big = polys.iter().fold(1, |acc, f| lcm(acc, f.deg()));
        let l = if big == 1 {
            FieldTower::new(*self).top()
        } else {
            FieldTower::simple_unchecked(*self, "a", &canonical_irreducible(*self, big))?.top()
        };
        let mut all = Vec::new();
        for f in polys {
            let fl = f.map(&l, |c| l.embed_base(c));
            let roots = finite::roots(&l, &fl);
            let first = roots.into_iter().next().expect("irreducible factor has a root");
            all.push(orbit(&l, first, f.deg()));
        }
        Ok((l, all))
    }

    fn descend_matrix(l: &TowerField<Fp>, a: &[Vec<Vec<u64>>]) -> Result<Vec<Vec<u64>>> {
        crate::curve::descend_fp(l, a)
    }

    fn as_prime_field(&self) -> Option<Fp> {
        Some(*self)
    }

    fn elem_to_json(&self, a: &u64) -> Value {
        Value::from(*a)
    }

    fn elem_from_json(&self, v: &Value) -> Result<u64> {
        if let Some(n) = v.as_i64() {
            return Ok(self.elem(n));
        }
        if let Some(n) = v.as_u64() {
            return Ok(n % self.p());
        }
        if let Some(s) = v.as_str() {
            if let Ok(n) = s.trim().parse::<i64>() {
                return Ok(self.elem(n));
            }
        }
        Err(Error::Invalid(format!("not an element of F_{}: {v}", self.p())))
    }
}

impl GroundField for Qq {
    fn factor(&self, f: &Poly<Q>) -> Result<Vec<(Poly<Q>, usize)>> {
        rational::factor_q(f)
    }

    fn factor_in(
        k: &TowerField<Qq>,
        f: &Poly<Vec<Q>>,
    ) -> Result<Vec<(Poly<Vec<Q>>, usize)>> {
        numberfield::factor_over_level(k, f)
    }

    fn split(&self, polys: &[Poly<Q>]) -> Result<(TowerField<Qq>, Roots<Q>)> {
        let mut tower = FieldTower::new(Qq);
        // roots found so far, per polynomial, as elements of the current top level
        let mut roots: Roots<Q> = vec![Vec::new(); polys.len()];
        let mut remaining: Vec<Poly<Vec<Q>>> = {
            let top = tower.top();
            polys.iter().map(|f| f.map(&top, |c| top.embed_base(c))).collect()
        };
        let mut level = 0;
        loop {
            let top = tower.top();
            let mut next: Option<Poly<Vec<Q>>> = None;
            for (i, f) in remaining.iter_mut().enumerate() {
                if f.deg() == 0 {
                    continue;
                }
                let fac = Qq::factor_in(&top, f)?;
                for (g, _) in &fac {
                    if g.deg() == 1 {
                        let r = top.neg(&g.coeffs()[0]);
                        *f = f.div_exact(&top, &Poly::linear_root(&top, &r)).unwrap();
                        roots[i].push(r);
                    } else if next.as_ref().is_none_or(|n| g.deg() < n.deg()) {
                        next = Some(g.clone());
                    }
                }
            }
            let Some(g) = next else { break };
            let degree = top.degree() * g.deg();
            if degree > MAX_SPLITTING_DEGREE_Q {
                return Err(Error::SplittingTooLarge(degree));
            }
            level += 1;
            tower = tower.extend_unchecked(&format!("a{level}"), &g)?;
            let new_top = tower.top();
            for r in roots.iter_mut().flatten() {
                *r = new_top.embed_lower(r);
            }
            for f in remaining.iter_mut() {
                *f = f.map(&new_top, |c| new_top.embed_lower(c));
            }
        }
        Ok((tower.top(), roots))
    }

    fn descend_matrix(
        _l: &TowerField<Qq>,
        _a: &[Vec<Vec<Q>>],
    ) -> Result<Vec<Vec<Q>>> {
        Err(Error::UnsupportedLevel(
            "descending a parametrization over ℚ needs three rational points".into(),
        ))
    }

    fn as_prime_field(&self) -> Option<Fp> {
        None
    }

    fn elem_to_json(&self, a: &Q) -> Value {
        Value::from(format_q(a))
    }

    fn elem_from_json(&self, v: &Value) -> Result<Q> {
        if let Some(n) = v.as_i64() {
            return Ok(q(n));
        }
        if let Some(s) = v.as_str() {
            if let Some(x) = parse_q(s) {
                return Ok(x);
            }
        }
        Err(Error::Invalid(format!("not a rational number: {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::q;

    #[test]
    fn extend_rejects_reducible_and_non_monic() {
        let k = Fp::new(5).unwrap();
        let t = FieldTower::new(k);
        let top = t.top();
        let f = Poly::from_coeffs(&top, vec![vec![1], vec![0], vec![1]]);
        assert!(matches!(tower_extend(&t, "T", &f), Err(Error::ReducibleDefiningPolynomial)));
        let g = Poly::from_coeffs(&top, vec![vec![1], vec![0], vec![2]]);
        assert!(matches!(tower_extend(&t, "T", &g), Err(Error::NotMonic)));
        let h = Poly::from_coeffs(&top, vec![vec![2], vec![0], vec![1]]);
        assert_eq!(tower_extend(&t, "T", &h).unwrap().degree(), 2);
    }

    #[test]
    fn extend_over_q() {
        let t = FieldTower::new(Qq);
        let top = t.top();
        let lin = Poly::from_coeffs(&top, vec![vec![q(-1)], vec![q(1)]]);
        assert_eq!(tower_extend(&t, "T", &lin).unwrap().degree(), 1);
        let cubic = Poly::from_coeffs(&top, vec![vec![q(-2)], vec![q(0)], vec![q(0)], vec![q(1)]]);
        let t3 = tower_extend(&t, "T", &cubic).unwrap();
        assert_eq!(t3.degree(), 3);
        // x^3 - 2 is reducible over ℚ(∛2)
        let k = t3.top();
        let again = cubic.map(&k, |c| k.embed_lower(c));
        assert!(matches!(tower_extend(&t3, "U", &again), Err(Error::ReducibleDefiningPolynomial)));
    }

    #[test]
    fn canonical_irreducibles() {
        let k = Fp::new(2).unwrap();
        assert_eq!(canonical_irreducible(k, 3).coeffs(), &[1, 1, 0, 1]);
        let k3 = Fp::new(3).unwrap();
        assert_eq!(canonical_irreducible(k3, 2).coeffs(), &[1, 0, 1]);
    }

    #[test]
    fn split_cubic_over_q_needs_degree_six() {
        let f = Poly::from_coeffs(&Qq, vec![q(-2), q(0), q(0), q(1)]);
        let (l, roots) = Qq.split(&[f.clone()]).unwrap();
        assert_eq!(l.degree(), 6);
        assert_eq!(roots[0].len(), 3);
        let fl = f.map(&l, |c| l.embed_base(c));
        for r in &roots[0] {
            assert!(l.is_zero(&fl.eval(&l, r)));
        }
    }

    #[test]
    fn split_two_polys_over_fp() {
        let k = Fp::new(3).unwrap();
        let f2 = Poly::from_coeffs(&k, vec![1, 0, 1]);
        let f3 = canonical_irreducible(k, 3);
        let (l, roots) = k.split(&[f2.clone(), f3.clone()]).unwrap();
        assert_eq!(l.degree(), 6);
        for (f, rs) in [f2, f3].iter().zip(&roots) {
            assert_eq!(rs.len(), f.deg());
            let fl = f.map(&l, |c| l.embed_base(c));
            for r in rs {
                assert!(l.is_zero(&fl.eval(&l, r)));
            }
        }
    }
}
