//! Parametrized rational curves and their descent from an extension to the ground field.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::factor::finite::prime_divisors;
use crate::field::linalg;
use crate::field::prime::discrete_log;
use crate::field::{Field, FiniteField, Fp, TowerField};
use crate::forms::{
    binform_add, binform_eval, binform_scale, binforms_gcd, dehomogenize, leading_zeros, linear_powers,
    remove_common_factor,
};

/// A 2×2 matrix acting on parameters: (s, t) ↦ (g00 s + g01 t, g10 s + g11 t).
pub type Mobius<E> = [[E; 2]; 2];

/// n+1 binary forms of a common degree e, stored as rows of coefficients of s^e … t^e.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalCurve<E> {
    forms: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq> RationalCurve<E> {
    /// Checks shape and that the forms are coprime.
    pub fn new<F: Field<Elem = E>>(k: &F, forms: Vec<Vec<E>>) -> Result<Self> {
        let c = Self::unchecked(k, forms)?;
        let g = binforms_gcd(k, &c.forms);
        if g.len() > 1 {
            return Err(Error::Invalid("forms of a parametrization must be coprime".into()));
        }
        Ok(c)
    }

    /// Divides out the common factor of the forms.
    pub fn reduced<F: Field<Elem = E>>(k: &F, forms: Vec<Vec<E>>) -> Result<Self> {
        let c = Self::unchecked(k, forms)?;
        Ok(RationalCurve { forms: remove_common_factor(k, &c.forms) })
    }

    fn unchecked<F: Field<Elem = E>>(k: &F, forms: Vec<Vec<E>>) -> Result<Self> {
        let Some(first) = forms.first() else {
            return Err(Error::Invalid("a curve needs at least one form".into()));
        };
        if first.is_empty() || forms.iter().any(|f| f.len() != first.len()) {
            return Err(Error::Invalid("forms must share one degree".into()));
        }
        if forms.iter().flatten().all(|x| k.is_zero(x)) {
            return Err(Error::Invalid("all forms vanish".into()));
        }
        Ok(RationalCurve { forms })
    }

    /// The line s·p + t·q.
    pub fn line<F: Field<Elem = E>>(k: &F, p: &[E], q: &[E]) -> Result<Self> {
        Self::new(k, p.iter().zip(q).map(|(a, b)| vec![a.clone(), b.clone()]).collect())
    }

    pub fn ambient(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.forms[0].len() - 1
    }

    pub fn forms(&self) -> &[Vec<E>] {
        &self.forms
    }

    /// The normalized point C(s, t), or `None` at a base point.
    pub fn point_at<F: Field<Elem = E>>(&self, k: &F, s: &E, t: &E) -> Option<Vec<E>> {
        crate::projgeom::normalize(k, self.forms.iter().map(|f| binform_eval(k, f, s, t)).collect())
    }

    /// Forms of φ(g00 s + g01 t, g10 s + g11 t).
    pub fn reparam<F: Field<Elem = E>>(&self, k: &F, g: &Mobius<E>) -> Self {
        let e = self.degree();
        let p = linear_powers(k, &g[0][0], &g[0][1], e);
        let q = linear_powers(k, &g[1][0], &g[1][1], e);
        let basis: Vec<Vec<E>> = (0..=e).map(|j| crate::forms::binform_mul(k, &p[e - j], &q[j])).collect();
        let forms = self
            .forms
            .iter()
            .map(|f| {
                let mut acc = vec![k.zero(); e + 1];
                for (j, c) in f.iter().enumerate() {
                    if !k.is_zero(c) {
                        acc = binform_add(k, &acc, &binform_scale(k, &basis[j], c));
                    }
                }
                acc
            })
            .collect();
        RationalCurve { forms }
    }

    /// Scales so the first nonzero coefficient (row by row) is 1.
    pub fn normalized<F: Field<Elem = E>>(&self, k: &F) -> Self {
        let flat: Vec<E> = self.forms.iter().flatten().cloned().collect();
        let lead = flat.into_iter().find(|x| !k.is_zero(x)).expect("nonzero curve");
        let inv = k.inv(&lead).unwrap();
        RationalCurve { forms: self.forms.iter().map(|f| binform_scale(k, f, &inv)).collect() }
    }

    /// The forms G_j = φ_j − p_j φ_i where p_i = 1 is the pivot of the point.
    fn incidence_forms<F: Field<Elem = E>>(&self, k: &F, pt: &[E]) -> Vec<Vec<E>> {
        let i = pt.iter().position(|x| !k.is_zero(x)).expect("nonzero point");
        let inv = k.inv(&pt[i]).unwrap();
        (0..pt.len())
            .filter(|&j| j != i)
            .map(|j| {
                let c = k.neg(&k.mul(&pt[j], &inv));
                binform_add(k, &self.forms[j], &binform_scale(k, &self.forms[i], &c))
            })
            .collect()
    }

    /// Whether the point lies on the image of the curve.
    pub fn contains<F: Field<Elem = E>>(&self, k: &F, pt: &[E]) -> bool {
        let g = self.incidence_forms(k, pt);
        if g.iter().flatten().all(|x| k.is_zero(x)) {
            return true;
        }
        binforms_gcd(k, &g).len() > 1
    }

    /// The unique parameter (s : t) mapping to `pt`, when there is exactly one.
    pub fn param_of<F: Field<Elem = E>>(&self, k: &F, pt: &[E]) -> Option<(E, E)> {
        let g = binforms_gcd(k, &self.incidence_forms(k, pt));
        if g.len() != 2 {
            return None;
        }
        if leading_zeros(k, &g) == 1 {
            return Some((k.one(), k.zero()));
        }
        // g = s + c t vanishes at (−c : 1)
        let root = dehomogenize(k, &g);
        Some((k.neg(&root.coeff(k, 0)), k.one()))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&E) -> G::Elem) -> RationalCurve<G::Elem> {
        RationalCurve { forms: self.forms.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&E) -> Option<G::Elem>) -> Option<RationalCurve<G::Elem>> {
        let forms: Option<Vec<Vec<G::Elem>>> =
            self.forms.iter().map(|r| r.iter().map(&f).collect()).collect();
        Some(RationalCurve { forms: forms? })
    }
}

/// The Möbius transformation with (1:0) ↦ r1, (0:1) ↦ r2, (1:1) ↦ r3, if the
/// three parameters are distinct.
pub fn mobius_from_three<F: Field>(
    k: &F,
    r1: &(F::Elem, F::Elem),
    r2: &(F::Elem, F::Elem),
    r3: &(F::Elem, F::Elem),
) -> Option<Mobius<F::Elem>> {
    let m = vec![vec![r1.0.clone(), r2.0.clone()], vec![r1.1.clone(), r2.1.clone()]];
    let mu = linalg::solve(k, &m, &[r3.0.clone(), r3.1.clone()])?;
    if mu.iter().any(|x| k.is_zero(x)) {
        return None;
    }
    Some([
        [k.mul(&mu[0], &r1.0), k.mul(&mu[1], &r2.0)],
        [k.mul(&mu[0], &r1.1), k.mul(&mu[1], &r2.1)],
    ])
}

/// Point of P^1 read off a vector proportional to a Veronese vector (x^e, x^(e−1) y, …).
fn veronese_param<F: Field>(k: &F, w: &[F::Elem]) -> (F::Elem, F::Elem) {
    if k.is_zero(&w[0]) {
        (k.zero(), k.one())
    } else {
        (k.one(), k.div(&w[1], &w[0]))
    }
}

fn mat2_mul<F: Field>(k: &F, a: &Mobius<F::Elem>, b: &Mobius<F::Elem>) -> Mobius<F::Elem> {
    let e = |i: usize, j: usize| k.add(&k.mul(&a[i][0], &b[0][j]), &k.mul(&a[i][1], &b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat2_map<F: Field>(a: &Mobius<F::Elem>, f: impl Fn(&F::Elem) -> F::Elem) -> Mobius<F::Elem> {
    [[f(&a[0][0]), f(&a[0][1])], [f(&a[1][0]), f(&a[1][1])]]
}

fn norm_to_fp(l: &TowerField<Fp>, x: &[u64]) -> u64 {
    let mut acc = x.to_vec();
    let mut y = x.to_vec();
    for _ in 1..l.degree() {
        y = l.frobenius(&y);
        acc = l.mul(&acc, &y);
    }
    l.in_base(&acc).expect("norms lie in the prime field")
}

/// An element of norm `c` from 𝔽_{p^D} down to 𝔽_p.
pub fn solve_norm_equation(l: &TowerField<Fp>, c: u64) -> Vec<u64> {
    let k = *l.base();
    let p = k.p();
    if p == 2 {
        return l.one();
    }
    let primes = prime_divisors((p - 1) as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e0e_4a11);
    loop {
        let x = l.random(&mut rng);
        if l.is_zero(&x) {
            continue;
        }
        let nx = norm_to_fp(l, &x);
        if primes.iter().any(|&q| k.pow(&nx, (p - 1) / q as u64) == 1) {
            continue;
        }
        let m = discrete_log(&k, nx, c).expect("a generator reaches every unit");
        return l.pow(&x, m);
    }
}

/// Descends a Galois-stable parametrization over 𝔽_{p^D} to one over 𝔽_p with the same image.
///
/// `a` has one row per coordinate, each row listing coefficients of s^e … t^e.
/// Frobenius acts on the image through a Möbius map G; after rescaling G to
/// have norm one, Hilbert 90 gives h with h = G h^σ, and φ∘h is fixed by Frobenius
/// up to a scalar.
pub fn descend_fp(l: &TowerField<Fp>, a: &[Vec<Vec<u64>>]) -> Result<Vec<Vec<u64>>> {
    let curve = RationalCurve { forms: a.to_vec() }.normalized(l);
    if l.degree() == 1 {
        return extract_fp(l, &curve);
    }
    if let Ok(c) = extract_fp(l, &curve) {
        return Ok(c);
    }
    let e = curve.degree();
    let frob = |x: &Vec<u64>| l.frobenius(x);
    let asig: Vec<Vec<Vec<u64>>> = curve.forms.iter().map(|r| r.iter().map(frob).collect()).collect();

    // A^σ = A S with S = λ·Sym^e(G)
    let (_, rows) = linalg::rref(l, &linalg::transpose(&curve.forms));
    if rows.len() != e + 1 {
        return Err(Error::Invalid("parametrization does not span a space of dimension e+1".into()));
    }
    let a_i: Vec<Vec<Vec<u64>>> = rows.iter().map(|&r| curve.forms[r].clone()).collect();
    let as_i: Vec<Vec<Vec<u64>>> = rows.iter().map(|&r| asig[r].clone()).collect();
    let s = linalg::mat_mul(l, &linalg::inverse(l, &a_i).unwrap(), &as_i);
    if linalg::mat_mul(l, &curve.forms, &s) != asig {
        return Err(Error::NotGaloisStable);
    }
    let col = |j: usize| -> Vec<Vec<u64>> { s.iter().map(|r| r[j].clone()).collect() };
    let ones = vec![l.one(); e + 1];
    let r1 = veronese_param(l, &col(0));
    let r2 = veronese_param(l, &col(e));
    let r3 = veronese_param(l, &linalg::mat_vec(l, &s, &ones));
    let g = mobius_from_three(l, &r1, &r2, &r3).ok_or(Error::NotGaloisStable)?;

    // G G^σ ⋯ G^{σ^{D−1}} = c·I
    let mut norm = g.clone();
    let mut gi = g.clone();
    for _ in 1..l.degree() {
        gi = mat2_map::<TowerField<Fp>>(&gi, frob);
        norm = mat2_mul(l, &norm, &gi);
    }
    let c = l.in_base(&norm[0][0]).ok_or(Error::NotGaloisStable)?;
    if !l.is_zero(&norm[0][1]) || !l.is_zero(&norm[1][0]) || norm[0][0] != norm[1][1] || c == 0 {
        return Err(Error::NotGaloisStable);
    }
    let k = *l.base();
    let kappa = solve_norm_equation(l, k.inv(&c).unwrap());
    let gh = mat2_map::<TowerField<Fp>>(&g, |x| l.mul(x, &kappa));

    // 𝔽_p-linear map v ↦ Ĝ σ(v) − v on L² ≅ 𝔽_p^{2D}
    let dd = l.degree();
    let apply = |v: &[Vec<u64>; 2]| -> Vec<u64> {
        let sv = [l.frobenius(&v[0]), l.frobenius(&v[1])];
        let mut out = Vec::with_capacity(2 * dd);
        for i in 0..2 {
            let w = l.sub(&l.add(&l.mul(&gh[i][0], &sv[0]), &l.mul(&gh[i][1], &sv[1])), &v[i]);
            out.extend(l.to_prime_coords(&w));
        }
        out
    };
    let mut columns = Vec::with_capacity(2 * dd);
    for idx in 0..2 * dd {
        let mut basis = vec![0u64; dd];
        basis[idx % dd] = 1;
        let b = l.from_prime_coords(&basis);
        let v = if idx < dd { [b, l.zero()] } else { [l.zero(), b] };
        columns.push(apply(&v));
    }
    let mat = linalg::transpose(&columns);
    let null = linalg::nullspace(&k, &mat, 2 * dd);
    if null.len() != 2 {
        return Err(Error::NotGaloisStable);
    }
    let vec_of = |x: &[u64]| [l.from_prime_coords(&x[..dd]), l.from_prime_coords(&x[dd..])];
    let (v1, v2) = (vec_of(&null[0]), vec_of(&null[1]));
    let h: Mobius<Vec<u64>> = [[v1[0].clone(), v2[0].clone()], [v1[1].clone(), v2[1].clone()]];
    let det = l.sub(&l.mul(&h[0][0], &h[1][1]), &l.mul(&h[0][1], &h[1][0]));
    if l.is_zero(&det) {
        return Err(Error::NotGaloisStable);
    }
    extract_fp(l, &curve.reparam(l, &h).normalized(l))
}

fn extract_fp(l: &TowerField<Fp>, c: &RationalCurve<Vec<u64>>) -> Result<Vec<Vec<u64>>> {
    c.normalized(l)
        .try_map::<Fp>(|x| l.in_base(x))
        .map(|c| c.forms)
        .ok_or(Error::NotGaloisStable)
}
