//! Closed points, zero-cycles and configuration predicates in projective space.
//!
//! A [`ClosedPoint`] is stored in a canonical form: coordinates are normalized so
//! the first nonzero one is 1, and the residue field is presented by the minimal
//! polynomial of a primitive element chosen by a fixed deterministic search. Two
//! closed points are equal exactly when their representations are.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::linalg;
use crate::field::{Field, FieldTower, GroundField, Poly, TowerField};

/// A point of P^n with coordinates in some field, normalized so the first
/// nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint<E> {
    coords: Vec<E>,
}

impl<E: Clone + PartialEq> ProjPoint<E> {
    pub fn new<F: Field<Elem = E>>(k: &F, coords: Vec<E>) -> Result<Self> {
        normalize(k, coords).map(|coords| ProjPoint { coords }).ok_or(Error::Invalid(
            "all homogeneous coordinates vanish".into(),
        ))
    }

    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    pub fn ambient(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn map<F: Field>(&self, k: &F, f: impl Fn(&E) -> F::Elem) -> ProjPoint<F::Elem> {
        ProjPoint { coords: normalize(k, self.coords.iter().map(f).collect()).unwrap() }
    }
}

/// Scales so the first nonzero entry is 1; `None` for the zero vector.
pub fn normalize<F: Field>(k: &F, mut v: Vec<F::Elem>) -> Option<Vec<F::Elem>> {
    let i = v.iter().position(|x| !k.is_zero(x))?;
    if !k.is_one(&v[i]) {
        let inv = k.inv(&v[i]).unwrap();
        for x in v.iter_mut().skip(i) {
            *x = k.mul(x, &inv);
        }
    }
    Some(v)
}

/// A closed point of P^n over a ground field `B` in canonical form.
#[derive(Debug, Clone)]
pub struct ClosedPoint<B: GroundField> {
    ambient: usize,
    minpoly: Poly<B::Elem>,
    coords: Vec<Poly<B::Elem>>,
    field: TowerField<B>,
}

impl<B: GroundField> PartialEq for ClosedPoint<B> {
    fn eq(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.minpoly == o.minpoly && self.coords == o.coords
    }
}

impl<B: GroundField> Eq for ClosedPoint<B> {}

impl<B: GroundField> Hash for ClosedPoint<B> {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.ambient.hash(h);
        self.minpoly.hash(h);
        self.coords.hash(h);
    }
}

impl<B: GroundField> Ord for ClosedPoint<B> {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.ambient, self.degree(), &self.minpoly, &self.coords).cmp(&(
            o.ambient,
            o.degree(),
            &o.minpoly,
            &o.coords,
        ))
    }
}

impl<B: GroundField> PartialOrd for ClosedPoint<B> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

const CANON_SEED: u64 = 0xc105_ed70;

impl<B: GroundField> ClosedPoint<B> {
    /// A point with coordinates in the ground field.
    pub fn rational(k: B, coords: Vec<B::Elem>) -> Result<Self> {
        let ambient = coords.len().checked_sub(1).ok_or(Error::Invalid("empty coordinates".into()))?;
        let c = normalize(&k, coords).ok_or(Error::Invalid("all coordinates vanish".into()))?;
        let field = FieldTower::new(k).top();
        Ok(ClosedPoint {
            ambient,
            minpoly: Poly::x(&k),
            coords: c.into_iter().map(|a| Poly::constant(&k, a)).collect(),
            field,
        })
    }

    /// A point given by a monic irreducible `minpoly` and coordinates that are
    /// polynomials in its root. Checks irreducibility, then canonicalizes.
    pub fn new(k: B, minpoly: &Poly<B::Elem>, coords: &[Poly<B::Elem>]) -> Result<Self> {
        if !minpoly.is_monic(&k) {
            return Err(Error::NotMonic);
        }
        let fac = k.factor(minpoly)?;
        if fac.len() != 1 || fac[0].1 != 1 {
            return Err(Error::ReducibleDefiningPolynomial);
        }
        if minpoly.deg() == 1 {
            let r = k.neg(&minpoly.coeffs()[0]);
            return Self::rational(k, coords.iter().map(|c| c.eval(&k, &r)).collect());
        }
        let field = FieldTower::simple_unchecked(k, "t", minpoly)?.top();
        let vals = coords.iter().map(|c| field.from_below_coeffs(&lift(c))).collect();
        Self::from_field_coords(&field, vals)
    }

    /// Canonical closed point underlying a point with coordinates in any tower level.
    pub fn from_field_coords(l: &TowerField<B>, coords: Vec<Vec<B::Elem>>) -> Result<Self> {
        let k = *l.base();
        let ambient = coords.len().checked_sub(1).ok_or(Error::Invalid("empty coordinates".into()))?;
        let c = normalize(l, coords).ok_or(Error::Invalid("all coordinates vanish".into()))?;
        if let Some(base) = c.iter().map(|x| l.in_base(x)).collect::<Option<Vec<_>>>() {
            return Self::rational(k, base);
        }
        for theta in Candidates::new(l, &c) {
            if let Some((m, polys)) = express_in_powers(l, &theta, &c) {
                if m.deg() == 1 {
                    // cannot happen: coordinates not all in the base
                    continue;
                }
                let field = FieldTower::simple_unchecked(k, "t", &m)?.top();
                return Ok(ClosedPoint { ambient, minpoly: m, coords: polys, field });
            }
        }
        Err(Error::Invalid("no primitive element found for the coordinate field".into()))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn minpoly(&self) -> &Poly<B::Elem> {
        &self.minpoly
    }

    pub fn coord_polys(&self) -> &[Poly<B::Elem>] {
        &self.coords
    }

    pub fn ground(&self) -> B {
        *self.field.base()
    }

    /// The residue field k[t]/(minpoly) (the ground field itself in degree 1).
    pub fn residue_field(&self) -> &TowerField<B> {
        &self.field
    }

    /// Coordinates as elements of the residue field.
    pub fn coords_in_field(&self) -> Vec<Vec<B::Elem>> {
        let k = self.ground();
        let d = self.field.degree();
        self.coords
            .iter()
            .map(|c| {
                let mut v = c.coeffs().to_vec();
                v.resize(d, k.zero());
                v
            })
            .collect()
    }

    /// Coordinates when the point is rational.
    pub fn rational_coords(&self) -> Option<Vec<B::Elem>> {
        (self.degree() == 1).then(|| self.coords.iter().map(|c| c.coeff(&self.ground(), 0)).collect())
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// The geometric points over a splitting field, in canonical conjugate order.
    pub fn geometric_points(&self) -> Result<(TowerField<B>, Vec<ProjPoint<Vec<B::Elem>>>)> {
        let (l, mut pts) = geometric_points_of(std::slice::from_ref(self))?;
        Ok((l, pts.remove(0)))
    }

    /// Evaluates the coordinates at a root `r` of the minimal polynomial in `l`.
    pub fn specialize(&self, l: &TowerField<B>, r: &[B::Elem]) -> ProjPoint<Vec<B::Elem>> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.eval_in(l, |a| l.embed_base(a), &r.to_vec()))
            .collect();
        ProjPoint::new(l, coords).expect("nonzero coordinates at a root")
    }
}

fn lift<E: Clone + PartialEq>(p: &Poly<E>) -> Vec<Vec<E>> {
    p.coeffs().iter().map(|a| vec![a.clone()]).collect()
}

/// Geometric points of several closed points over one common splitting field.
pub fn geometric_points_of<B: GroundField>(
    pts: &[ClosedPoint<B>],
) -> Result<(TowerField<B>, Vec<Vec<ProjPoint<Vec<B::Elem>>>>)> {
    let k = pts.first().ok_or(Error::Invalid("no points".into()))?.ground();
    let polys: Vec<Poly<B::Elem>> = pts.iter().map(|p| p.minpoly.clone()).collect();
    let (l, roots) = match pts {
        [single] if single.degree() == 1 => (FieldTower::new(k).top(), vec![vec![vec![k.zero()]]]),
        _ => k.split(&polys)?,
    };
    let out = pts
        .iter()
        .zip(&roots)
        .map(|(p, rs)| rs.iter().map(|r| p.specialize(&l, r)).collect())
        .collect();
    Ok((l, out))
}

/// Deterministic enumeration of candidate primitive elements built from the coordinates.
struct Candidates<'a, B: GroundField> {
    l: &'a TowerField<B>,
    c: &'a [Vec<B::Elem>],
    stage: usize,
    i: usize,
    j: usize,
    w: i64,
    rng: ChaCha8Rng,
    random_left: usize,
}

impl<'a, B: GroundField> Candidates<'a, B> {
    fn new(l: &'a TowerField<B>, c: &'a [Vec<B::Elem>]) -> Self {
        Candidates {
            l,
            c,
            stage: 0,
            i: 0,
            j: 1,
            w: 1,
            rng: ChaCha8Rng::seed_from_u64(CANON_SEED),
            random_left: 128,
        }
    }

    fn weight_bound(&self) -> u64 {
        match self.l.characteristic() {
            0 => 1 << 16,
            p => p.min(1 << 16),
        }
    }
}

impl<B: GroundField> Iterator for Candidates<'_, B> {
    type Item = Vec<B::Elem>;

    fn next(&mut self) -> Option<Self::Item> {
        let l = self.l;
        let n = self.c.len();
        loop {
            match self.stage {
                0 => {
                    if self.i < n {
                        self.i += 1;
                        return Some(self.c[self.i - 1].clone());
                    }
                    self.stage = 1;
                    self.i = 0;
                    self.j = 1;
                }
                1 => {
                    let wmax = 3.min(self.weight_bound() as i64 - 1);
                    if self.i >= n {
                        self.stage = 2;
                        continue;
                    }
                    if self.j >= n {
                        self.i += 1;
                        self.j = self.i + 1;
                        self.w = 1;
                        continue;
                    }
                    if self.w > wmax {
                        self.j += 1;
                        self.w = 1;
                        continue;
                    }
                    let w = l.from_i64(self.w);
                    self.w += 1;
                    return Some(l.add(&self.c[self.i], &l.mul(&w, &self.c[self.j])));
                }
                2 => {
                    if self.random_left == 0 {
                        self.stage = 3;
                        self.random_left = 128;
                        continue;
                    }
                    self.random_left -= 1;
                    let bound = self.weight_bound();
                    let mut acc = l.zero();
                    for x in self.c {
                        let w = l.from_i64(self.rng.gen_range(0..bound) as i64);
                        acc = l.add(&acc, &l.mul(&w, x));
                    }
                    return Some(acc);
                }
                3 => {
                    if self.random_left == 0 {
                        return None;
                    }
                    self.random_left -= 1;
                    let bound = self.weight_bound();
                    let mut acc = l.zero();
                    for a in 0..n {
                        for b in a..n {
                            let w = l.from_i64(self.rng.gen_range(0..bound) as i64);
                            let m = l.mul(&self.c[a], &self.c[b]);
                            acc = l.add(&acc, &l.mul(&w, &m));
                        }
                        let w = l.from_i64(self.rng.gen_range(0..bound) as i64);
                        acc = l.add(&acc, &l.mul(&w, &self.c[a]));
                    }
                    return Some(acc);
                }
                _ => return None,
            }
        }
    }
}

/// Minimal polynomial of θ over the base, by linear algebra on its powers.
pub fn minimal_polynomial<B: GroundField>(l: &TowerField<B>, theta: &[B::Elem]) -> Poly<B::Elem> {
    let k = *l.base();
    let mut powers: Vec<Vec<B::Elem>> = vec![l.one()];
    loop {
        let next = l.mul(powers.last().unwrap(), &theta.to_vec());
        let m = linalg::transpose(&powers);
        if let Some(sol) = linalg::solve(&k, &m, &next) {
            let mut c: Vec<B::Elem> = sol.iter().map(|x| k.neg(x)).collect();
            c.push(k.one());
            return Poly::from_coeffs(&k, c);
        }
        powers.push(next);
    }
}

/// If θ generates all coordinates, returns its minimal polynomial and the
/// coordinates as polynomials in θ of degree below it.
fn express_in_powers<B: GroundField>(
    l: &TowerField<B>,
    theta: &[B::Elem],
    c: &[Vec<B::Elem>],
) -> Option<(Poly<B::Elem>, Vec<Poly<B::Elem>>)> {
    let k = *l.base();
    let m = minimal_polynomial(l, theta);
    let e = m.deg();
    let mut powers: Vec<Vec<B::Elem>> = vec![l.one()];
    for _ in 1..e {
        powers.push(l.mul(powers.last().unwrap(), &theta.to_vec()));
    }
    let mat = linalg::transpose(&powers);
    let mut polys = Vec::with_capacity(c.len());
    for x in c {
        let sol = linalg::solve(&k, &mat, x)?;
        polys.push(Poly::from_coeffs(&k, sol));
    }
    Some((m, polys))
}

/// A finite formal sum of closed points with positive multiplicities, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeroCycle<B: GroundField> {
    ambient: usize,
    parts: Vec<(ClosedPoint<B>, usize)>,
}

impl<B: GroundField> ZeroCycle<B> {
    pub fn new(ambient: usize, parts: Vec<(ClosedPoint<B>, usize)>) -> Result<Self> {
        if parts.iter().any(|(p, _)| p.ambient() != ambient) {
            return Err(Error::MixedAmbient);
        }
        let mut parts: Vec<_> = parts.into_iter().filter(|(_, m)| *m > 0).collect();
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(ClosedPoint<B>, usize)> = Vec::new();
        for (p, m) in parts {
            match merged.last_mut() {
                Some((q, n)) if *q == p => *n += m,
                _ => merged.push((p, m)),
            }
        }
        Ok(ZeroCycle { ambient, parts: merged })
    }

    pub fn from_points(ambient: usize, pts: Vec<ClosedPoint<B>>) -> Result<Self> {
        Self::new(ambient, pts.into_iter().map(|p| (p, 1)).collect())
    }

    pub fn empty(ambient: usize) -> Self {
        ZeroCycle { ambient, parts: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn parts(&self) -> &[(ClosedPoint<B>, usize)] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().map(|(p, m)| p.degree() * m).sum()
    }

    /// Sorted list of part degrees, repeated by multiplicity.
    pub fn part_degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.parts.iter().flat_map(|(p, m)| std::iter::repeat_n(p.degree(), *m)).collect();
        v.sort();
        v
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::MixedAmbient);
        }
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Self::new(self.ambient, parts)
    }

    pub fn multiplicity(&self, p: &ClosedPoint<B>) -> usize {
        self.parts.iter().find(|(q, _)| q == p).map_or(0, |(_, m)| *m)
    }

    /// Removes one copy of `x`.
    pub fn residual(&self, x: &ClosedPoint<B>) -> Result<Self> {
        let pos = self.parts.iter().position(|(q, _)| q == x).ok_or(Error::PointNotInCycle)?;
        let mut parts = self.parts.clone();
        if parts[pos].1 == 1 {
            parts.remove(pos);
        } else {
            parts[pos].1 -= 1;
        }
        Ok(ZeroCycle { ambient: self.ambient, parts })
    }

    /// Removes one copy of every part of `other`.
    pub fn residual_cycle(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (p, m) in &other.parts {
            for _ in 0..*m {
                out = out.residual(p)?;
            }
        }
        Ok(out)
    }

    /// True when every part has multiplicity one.
    pub fn is_reduced(&self) -> bool {
        self.parts.iter().all(|(_, m)| *m == 1)
    }

    pub fn points(&self) -> impl Iterator<Item = &ClosedPoint<B>> {
        self.parts.iter().map(|(p, _)| p)
    }

    /// All geometric points of a reduced cycle over one splitting field, part by part.
    pub fn geometric_points(&self) -> Result<(TowerField<B>, Vec<ProjPoint<Vec<B::Elem>>>)> {
        if !self.is_reduced() {
            return Err(Error::Invalid("cycle has repeated points".into()));
        }
        let pts: Vec<ClosedPoint<B>> = self.points().cloned().collect();
        let (l, groups) = geometric_points_of(&pts)?;
        Ok((l, groups.into_iter().flatten().collect()))
    }
}

/// True iff every subset of at most r+1 of the points (in P^r) is linearly independent.
pub fn in_linearly_general_position<F: Field>(k: &F, pts: &[ProjPoint<F::Elem>]) -> Result<bool> {
    let Some(first) = pts.first() else { return Ok(true) };
    let n = first.coords.len();
    if pts.iter().any(|p| p.coords.len() != n) {
        return Err(Error::MixedAmbient);
    }
    if pts.len() <= n {
        let rows: Vec<Vec<F::Elem>> = pts.iter().map(|p| p.coords.clone()).collect();
        return Ok(linalg::rank(k, &rows) == pts.len());
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let rows: Vec<Vec<F::Elem>> = idx.iter().map(|&i| pts[i].coords.clone()).collect();
        if k.is_zero(&linalg::det(k, &rows)) {
            return Ok(false);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(true);
            }
            i -= 1;
            if idx[i] < pts.len() - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// LGP check for the geometric points of a closed point.
pub fn closed_point_in_lgp<B: GroundField>(x: &ClosedPoint<B>) -> Result<bool> {
    let (l, pts) = x.geometric_points()?;
    in_linearly_general_position(&l, &pts)
}

/// The closed point with affine coordinates (α, α², …, α^n) on the standard
/// rational normal curve, where α generates the given level.
pub fn moment_point<B: GroundField>(k: &TowerField<B>, n: usize) -> Result<ClosedPoint<B>> {
    moment_point_of(k, &k.generator(), n)
}

/// Moment point (1 : β : β² : … : β^n) for an arbitrary element β.
pub fn moment_point_of<B: GroundField>(
    k: &TowerField<B>,
    beta: &[B::Elem],
    n: usize,
) -> Result<ClosedPoint<B>> {
    let mut coords = vec![k.one()];
    for _ in 0..n {
        coords.push(k.mul(coords.last().unwrap(), &beta.to_vec()));
    }
    ClosedPoint::from_field_coords(k, coords)
}

/// A part of degree prime to 3: smallest degree, then canonical order.
pub fn select_prime_to_3<B: GroundField>(cycle: &ZeroCycle<B>) -> Result<ClosedPoint<B>> {
    if cycle.degree() % 3 == 0 {
        return Err(Error::DegreeDivisibleBy3(cycle.degree()));
    }
    let best = cycle
        .points()
        .filter(|p| p.degree() % 3 != 0)
        .min_by(|a, b| (a.degree(), *a).cmp(&(b.degree(), *b)))
        .expect("a cycle of degree prime to 3 has a part of degree prime to 3");
    Ok(best.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{q, Qq};
    use crate::field::{FiniteField, Fp};
    use proptest::prelude::*;

    fn f2_cubic_point() -> ClosedPoint<Fp> {
        let k = Fp::new(2).unwrap();
        let f = Poly::from_coeffs(&k, vec![1, 1, 0, 1]);
        let t = Poly::x(&k);
        ClosedPoint::new(k, &f, &[Poly::one(&k), t.clone(), t.mul(&k, &t)]).unwrap()
    }

    #[test]
    fn f8_point_has_three_frobenius_conjugates() {
        let x = f2_cubic_point();
        assert_eq!(x.degree(), 3);
        assert_eq!(x.minpoly().coeffs(), &[1, 1, 0, 1]);
        let (l, pts) = x.geometric_points().unwrap();
        assert_eq!(pts.len(), 3);
        let a = l.generator();
        let a2 = l.mul(&a, &a);
        assert_eq!(pts[0].coords(), &[l.one(), a.clone(), a2.clone()]);
        assert_eq!(pts[1].coords()[1], a2);
        assert_ne!(pts[0], pts[1]);
        assert_ne!(pts[1], pts[2]);
        assert_ne!(pts[0], pts[2]);
    }

    #[test]
    fn gaussian_point_over_q() {
        let f = Poly::from_coeffs(&Qq, vec![q(1), q(0), q(1)]);
        let t = Poly::x(&Qq);
        let x = ClosedPoint::new(Qq, &f, &[Poly::one(&Qq), t]).unwrap();
        let (l, pts) = x.geometric_points().unwrap();
        assert_eq!(l.degree(), 2);
        assert_eq!(pts.len(), 2);
        assert_eq!(l.add(&pts[0].coords()[1], &pts[1].coords()[1]), l.zero());
    }

    #[test]
    fn lgp_examples() {
        let k = Fp::new(7).unwrap();
        let p = |c: Vec<u64>| ProjPoint::new(&k, c).unwrap();
        let frame = vec![p(vec![1, 0, 0]), p(vec![0, 1, 0]), p(vec![0, 0, 1]), p(vec![1, 1, 1])];
        assert!(in_linearly_general_position(&k, &frame).unwrap());
        let col = vec![p(vec![1, 0, 0]), p(vec![0, 1, 0]), p(vec![1, 1, 0])];
        assert!(!in_linearly_general_position(&k, &col).unwrap());
        let mixed = vec![p(vec![1, 0, 0]), p(vec![0, 1])];
        assert!(matches!(in_linearly_general_position(&k, &mixed), Err(Error::MixedAmbient)));
    }

    #[test]
    fn moment_points_f2_and_f3() {
        let k = Fp::new(2).unwrap();
        let l = FieldTower::simple_unchecked(k, "a", &Poly::from_coeffs(&k, vec![1, 1, 0, 1]))
            .unwrap()
            .top();
        let m = moment_point(&l, 3).unwrap();
        assert_eq!(m.degree(), 3);
        assert!(closed_point_in_lgp(&m).unwrap());

        let k3 = Fp::new(3).unwrap();
        let f8 = crate::field::ground::canonical_irreducible(k3, 8);
        let l8 = FieldTower::simple_unchecked(k3, "a", &f8).unwrap().top();
        let m8 = moment_point(&l8, 5).unwrap();
        assert_eq!(m8.degree(), 8);
        assert!(closed_point_in_lgp(&m8).unwrap());
    }

    #[test]
    fn moment_point_degree_one() {
        let k = Fp::new(5).unwrap();
        let t = FieldTower::new(k).extend_unchecked("c", &Poly::from_coeffs(&FieldTower::new(k).top(), vec![vec![3], vec![1]])).unwrap();
        let m = moment_point(&t.top(), 3).unwrap();
        // root c = −3 = 2: (1 : 2 : 4 : 8)
        assert_eq!(m.rational_coords().unwrap(), vec![1, 2, 4, 3]);
    }

    #[test]
    fn selector_rules() {
        let k = Fp::new(7).unwrap();
        let pt = |deg: usize, shift: u64| {
            let f = crate::field::ground::canonical_irreducible(k, deg);
            let l = FieldTower::simple_unchecked(k, "a", &f).unwrap().top();
            let b = l.add(&l.generator(), &l.from_i64(shift as i64));
            moment_point_of(&l, &b, 2).unwrap()
        };
        let c = ZeroCycle::from_points(2, vec![pt(3, 0), pt(5, 0)]).unwrap();
        assert_eq!(select_prime_to_3(&c).unwrap().degree(), 5);
        let c = ZeroCycle::from_points(2, vec![pt(1, 0), pt(3, 0), pt(4, 0)]).unwrap();
        assert_eq!(select_prime_to_3(&c).unwrap().degree(), 1);
        let c = ZeroCycle::from_points(2, vec![pt(3, 0), pt(3, 1), pt(3, 2)]).unwrap();
        assert!(matches!(select_prime_to_3(&c), Err(Error::DegreeDivisibleBy3(9))));
    }

    #[test]
    fn residual_and_degree() {
        let x = f2_cubic_point();
        let k = x.ground();
        let y = ClosedPoint::rational(k, vec![1, 1, 1]).unwrap();
        let c = ZeroCycle::new(2, vec![(x.clone(), 2), (y.clone(), 1)]).unwrap();
        assert_eq!(c.degree(), 7);
        let r = c.residual(&x).unwrap();
        assert_eq!(r.multiplicity(&x), 1);
        let only_y = ZeroCycle::from_points(2, vec![y]).unwrap();
        assert!(matches!(only_y.residual(&x), Err(Error::PointNotInCycle)));
        assert_eq!(c.union(&only_y).unwrap().degree(), c.degree() + only_y.degree());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn moment_points_are_lgp(
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            d in 1usize..=8,
            n in 2usize..=5,
        ) {
            let k = Fp::new(p).unwrap();
            let f = crate::field::ground::canonical_irreducible(k, d);
            let l = FieldTower::simple_unchecked(k, "a", &f).unwrap().top();
            let m = moment_point(&l, n).unwrap();
            prop_assert_eq!(m.degree(), d);
            prop_assert!(closed_point_in_lgp(&m).unwrap());
        }

        #[test]
        fn orbit_round_trip(
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            d in 1usize..=10,
            seed in any::<u64>(),
        ) {
            let k = Fp::new(p).unwrap();
            let f = crate::field::ground::canonical_irreducible(k, d);
            let l = FieldTower::simple_unchecked(k, "a", &f).unwrap().top();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coords: Vec<Vec<u64>> = (0..4).map(|_| l.random(&mut rng)).collect();
            prop_assume!(coords.iter().any(|c| !l.is_zero(c)));
            let x = ClosedPoint::from_field_coords(&l, coords).unwrap();
            let (big, pts) = x.geometric_points().unwrap();
            prop_assert_eq!(pts.len(), x.degree());
            // every conjugate regroups to the same closed point
            for pt in &pts {
                let y = ClosedPoint::from_field_coords(&big, pt.coords().to_vec()).unwrap();
                prop_assert_eq!(&y, &x);
            }
            let distinct: std::collections::BTreeSet<_> = pts.iter().collect();
            prop_assert_eq!(distinct.len(), pts.len());
        }
    }
}
