//! Binary forms in (s, t) and homogeneous multivariate forms.
//!
//! A binary form of degree e is a coefficient vector `c` of length e+1 where
//! `c[j]` multiplies s^(e−j) t^j.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Field, Poly};

/// Dehomogenizes at t = 1: the polynomial Σ c_j u^(e−j).
pub fn dehomogenize<F: Field>(k: &F, c: &[F::Elem]) -> Poly<F::Elem> {
    Poly::from_coeffs(k, c.iter().rev().cloned().collect())
}

/// Homogenizes a polynomial in u to a binary form of degree `e ≥ deg p`.
pub fn homogenize<F: Field>(k: &F, p: &Poly<F::Elem>, e: usize) -> Vec<F::Elem> {
    (0..=e).map(|j| p.coeff(k, e - j)).collect()
}

/// Number of leading zero coefficients, i.e. the multiplicity of the root (1:0).
pub fn leading_zeros<F: Field>(k: &F, c: &[F::Elem]) -> usize {
    c.iter().take_while(|x| k.is_zero(x)).count()
}

pub fn binform_mul<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    out
}

pub fn binform_add<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| k.add(x, y)).collect()
}

pub fn binform_scale<F: Field>(k: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    a.iter().map(|x| k.mul(x, c)).collect()
}

pub fn binform_eval<F: Field>(k: &F, c: &[F::Elem], s: &F::Elem, t: &F::Elem) -> F::Elem {
    let e = c.len() - 1;
    let mut spow = vec![k.one(); e + 1];
    let mut tpow = vec![k.one(); e + 1];
    for i in 1..=e {
        spow[i] = k.mul(&spow[i - 1], s);
        tpow[i] = k.mul(&tpow[i - 1], t);
    }
    let mut acc = k.zero();
    for (j, x) in c.iter().enumerate() {
        if !k.is_zero(x) {
            acc = k.add(&acc, &k.mul(x, &k.mul(&spow[e - j], &tpow[j])));
        }
    }
    acc
}

/// Powers ℓ^0, …, ℓ^e of the linear form ℓ = a s + b t.
pub fn linear_powers<F: Field>(k: &F, a: &F::Elem, b: &F::Elem, e: usize) -> Vec<Vec<F::Elem>> {
    let lin = vec![a.clone(), b.clone()];
    let mut out = vec![vec![k.one()]];
    for _ in 0..e {
        out.push(binform_mul(k, out.last().unwrap(), &lin));
    }
    out
}

/// Greatest common divisor of binary forms, as a binary form with monic dehomogenized part.
pub fn binforms_gcd<F: Field>(k: &F, forms: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let nonzero: Vec<&Vec<F::Elem>> = forms.iter().filter(|f| f.iter().any(|x| !k.is_zero(x))).collect();
    let Some(first) = nonzero.first() else {
        return vec![k.zero()];
    };
    let z = nonzero.iter().map(|f| leading_zeros(k, f)).min().unwrap();
    let mut g = dehomogenize(k, first);
    for f in &nonzero[1..] {
        g = g.gcd(k, &dehomogenize(k, f));
    }
    let g = g.monic(k);
    homogenize(k, &g, g.deg() + z)
}

/// Divides every form by their common binary gcd.
pub fn remove_common_factor<F: Field>(k: &F, forms: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let e = forms[0].len() - 1;
    let nonzero: Vec<&Vec<F::Elem>> = forms.iter().filter(|f| f.iter().any(|x| !k.is_zero(x))).collect();
    if nonzero.is_empty() {
        return forms.to_vec();
    }
    let z = nonzero.iter().map(|f| leading_zeros(k, f)).min().unwrap();
    let mut g = dehomogenize(k, nonzero[0]);
    for f in &nonzero[1..] {
        g = g.gcd(k, &dehomogenize(k, f));
    }
    let e2 = e - z - g.deg();
    forms
        .iter()
        .map(|f| {
            let q = dehomogenize(k, f).div_exact(k, &g).expect("gcd divides");
            homogenize(k, &q, e2)
        })
        .collect()
}

/// A homogeneous polynomial in `nvars` variables, stored sparsely by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form<E> {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<u32>, E>,
}

impl<E: Clone + PartialEq> Form<E> {
    pub fn new<F: Field<Elem = E>>(
        k: &F,
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, E)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, E> = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} for {} variables",
                    exp.len(),
                    nvars
                )));
            }
            if exp.iter().map(|&x| x as usize).sum::<usize>() != degree {
                return Err(Error::Invalid(format!("term {exp:?} is not of degree {degree}")));
            }
            let entry = map.entry(exp).or_insert_with(|| k.zero());
            *entry = k.add(entry, &c);
        }
        map.retain(|_, c| !k.is_zero(c));
        Ok(Form { nvars, degree, terms: map })
    }

    pub fn zero(nvars: usize, degree: usize) -> Self {
        Form { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn linear<F: Field<Elem = E>>(k: &F, coeffs: &[E]) -> Self {
        let n = coeffs.len();
        let terms = coeffs.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0; n];
            e[i] = 1;
            (e, c.clone())
        });
        Form::new(k, n, 1, terms).unwrap()
    }

    pub fn constant<F: Field<Elem = E>>(k: &F, nvars: usize, c: E) -> Self {
        Form::new(k, nvars, 0, [(vec![0; nvars], c)]).unwrap()
    }

    /// Σ x_i^m.
    pub fn fermat<F: Field<Elem = E>>(k: &F, nvars: usize, m: usize) -> Self {
        let terms = (0..nvars).map(|i| {
            let mut e = vec![0; nvars];
            e[i] = m as u32;
            (e, k.one())
        });
        Form::new(k, nvars, m, terms).unwrap()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, E> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, k: &F, exp: &[u32]) -> E {
        self.terms.get(exp).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn add<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        assert_eq!((self.nvars, self.degree), (o.nvars, o.degree));
        Form::new(k, self.nvars, self.degree, self.terms.clone().into_iter().chain(o.terms.clone())).unwrap()
    }

    pub fn scale<F: Field<Elem = E>>(&self, k: &F, c: &E) -> Self {
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), k.mul(x, c)));
        Form::new(k, self.nvars, self.degree, terms).unwrap()
    }

    pub fn mul<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out: BTreeMap<Vec<u32>, E> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = out.entry(e).or_insert_with(|| k.zero());
                *entry = k.add(entry, &k.mul(c1, c2));
            }
        }
        out.retain(|_, c| !k.is_zero(c));
        Form { nvars: self.nvars, degree: self.degree + o.degree, terms: out }
    }

    pub fn pow<F: Field<Elem = E>>(&self, k: &F, e: usize) -> Self {
        let mut acc = Form::constant(k, self.nvars, k.one());
        for _ in 0..e {
            acc = acc.mul(k, self);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial<F: Field<Elem = E>>(&self, k: &F, i: usize) -> Self {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            terms.push((e2, k.mul(c, &k.from_i64(e[i] as i64))));
        }
        Form::new(k, self.nvars, self.degree.saturating_sub(1), terms).unwrap()
    }

    pub fn eval<F: Field<Elem = E>>(&self, k: &F, x: &[E]) -> E {
        self.eval_in(k, |c| c.clone(), x)
    }

    /// Evaluates at a point with coordinates in a field containing the coefficients.
    pub fn eval_in<G: Field>(&self, g: &G, emb: impl Fn(&E) -> G::Elem, x: &[G::Elem]) -> G::Elem {
        assert_eq!(x.len(), self.nvars);
        let mut pows: Vec<Vec<G::Elem>> = x.iter().map(|v| vec![g.one(), v.clone()]).collect();
        let mut acc = g.zero();
        for (e, c) in &self.terms {
            let mut term = emb(c);
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                while pows[i].len() <= ei as usize {
                    let next = g.mul(pows[i].last().unwrap(), &x[i]);
                    pows[i].push(next);
                }
                term = g.mul(&term, &pows[i][ei as usize]);
            }
            acc = g.add(&acc, &term);
        }
        acc
    }

    /// Substitutes binary forms (all of one degree e) for the variables; the
    /// result is a binary form of degree `degree · e`.
    pub fn pullback<G: Field>(
        &self,
        g: &G,
        emb: impl Fn(&E) -> G::Elem,
        forms: &[Vec<G::Elem>],
    ) -> Vec<G::Elem> {
        assert_eq!(forms.len(), self.nvars);
        let e = forms[0].len() - 1;
        let mut pows: Vec<Vec<Vec<G::Elem>>> = forms.iter().map(|f| vec![vec![g.one()], f.clone()]).collect();
        let mut acc = vec![g.zero(); self.degree * e + 1];
        for (exp, c) in &self.terms {
            let mut term = vec![emb(c)];
            for (i, &ei) in exp.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                while pows[i].len() <= ei as usize {
                    let next = binform_mul(g, pows[i].last().unwrap(), &forms[i]);
                    pows[i].push(next);
                }
                term = binform_mul(g, &term, &pows[i][ei as usize]);
            }
            acc = binform_add(g, &acc, &term);
        }
        acc
    }

    /// Substitutes forms (all of one degree) for the variables.
    pub fn compose<F: Field<Elem = E>>(&self, k: &F, subs: &[Form<E>]) -> Self {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs[0].nvars;
        let dd = subs[0].degree;
        let mut acc = Form::zero(nv, self.degree * dd);
        for (exp, c) in &self.terms {
            let mut term = Form::constant(k, nv, c.clone());
            for (i, &ei) in exp.iter().enumerate() {
                term = term.mul(k, &subs[i].pow(k, ei as usize));
            }
            acc = acc.add(k, &term);
        }
        acc
    }

    pub fn map<G: Field>(&self, g: &G, f: impl Fn(&E) -> G::Elem) -> Form<G::Elem> {
        Form::new(g, self.nvars, self.degree, self.terms.iter().map(|(e, c)| (e.clone(), f(c)))).unwrap()
    }

    /// Pulls coefficients back to a subfield, if they all lie in it.
    pub fn try_map<G: Field>(&self, g: &G, f: impl Fn(&E) -> Option<G::Elem>) -> Option<Form<G::Elem>> {
        let terms: Option<Vec<_>> = self.terms.iter().map(|(e, c)| f(c).map(|x| (e.clone(), x))).collect();
        Some(Form::new(g, self.nvars, self.degree, terms?).unwrap())
    }
}

/// All exponent vectors of total degree `d` in `n` variables, in lexicographically decreasing order.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{q, Qq};
    use crate::field::Fp;

    #[test]
    fn binform_gcd_and_removal() {
        let k = Fp::new(7).unwrap();
        // s·t and t² share t
        let f = vec![vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(binforms_gcd(&k, &f), vec![0, 1]);
        assert_eq!(remove_common_factor(&k, &f), vec![vec![1, 0], vec![0, 1]]);
        // (s+t)s, (s+t)t
        let g = vec![vec![1, 1, 0], vec![0, 1, 1]];
        assert_eq!(remove_common_factor(&k, &g), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn pullback_of_fermat_along_twisted_cubic() {
        let f = Form::fermat(&Qq, 4, 3);
        let e = |v: [i64; 4]| v.iter().map(|&x| q(x)).collect::<Vec<_>>();
        let curve = vec![e([1, 0, 0, 0]), e([0, 1, 0, 0]), e([0, 0, 1, 0]), e([0, 0, 0, 1])];
        let h = f.pullback(&Qq, |c| c.clone(), &curve);
        // s⁹ + s⁶t³ + s³t⁶ + t⁹
        let mut expect = vec![q(0); 10];
        for j in [0, 3, 6, 9] {
            expect[j] = q(1);
        }
        assert_eq!(h, expect);
    }

    #[test]
    fn partials_and_compose() {
        let k = Fp::new(7).unwrap();
        let f = Form::fermat(&k, 3, 3);
        let d0 = f.partial(&k, 0);
        assert_eq!(d0.eval(&k, &[2, 5, 6]), 3 * 4 % 7);
        let m = |e: Vec<u32>| Form::new(&k, 3, 2, [(e, 1)]).unwrap();
        let cr = vec![m(vec![0, 1, 1]), m(vec![1, 0, 1]), m(vec![1, 1, 0])];
        let x = |i: usize| {
            let mut c = vec![0; 3];
            c[i] = 1;
            Form::linear(&k, &c)
        };
        let twice: Vec<_> = cr.iter().map(|g| g.compose(&k, &cr)).collect();
        let xyz = x(0).mul(&k, &x(1)).mul(&k, &x(2));
        for (i, g) in twice.iter().enumerate() {
            assert_eq!(*g, xyz.mul(&k, &x(i)));
        }
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(4, 3).len(), 20);
        assert_eq!(monomials(3, 2)[0], vec![2, 0, 0]);
    }
}
