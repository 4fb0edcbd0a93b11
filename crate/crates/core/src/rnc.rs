//! Rational normal curves through n+3 points of P^n, and the family over k(t)
//! used to pass through points that are not in general position.

use serde_json::json;

use crate::curve::{mobius_from_three, RationalCurve};
use crate::error::{Diagnostics, Error, Result};
use crate::field::linalg;
use crate::field::{Field, FieldTower, GroundField, Poly, RatFunc, RatFuncField, TowerField};
use crate::forms::{binforms_gcd, monomials, Form};
use crate::projgeom::{in_linearly_general_position, normalize, ZeroCycle};

/// Largest prime for which canonicalization enumerates the rational points of a curve.
pub const ENUMERATION_PRIME_BOUND: u64 = 10_000;

/// The degree-n curve through n+3 points of P^n (first n+1 used as the frame),
/// and the parameter of each point. `None` if the points are not in general position.
pub fn rnc_formula<F: Field>(k: &F, pts: &[Vec<F::Elem>]) -> Option<(RationalCurve<F::Elem>, Vec<(F::Elem, F::Elem)>)> {
    let dim = pts[0].len();
    if pts.len() != dim + 2 {
        return None;
    }
    let n_mat: Vec<Vec<F::Elem>> = (0..dim).map(|i| pts[..dim].iter().map(|p| p[i].clone()).collect()).collect();
    let m = linalg::inverse(k, &n_mat)?;
    let inv_all = |v: Vec<F::Elem>| v.iter().map(|x| k.inv(x)).collect::<Option<Vec<_>>>();
    let a = inv_all(linalg::mat_vec(k, &m, &pts[dim]))?;
    let b = inv_all(linalg::mat_vec(k, &m, &pts[dim + 1]))?;
    let psi: Vec<Vec<F::Elem>> = (0..dim)
        .map(|j| {
            let mut acc = vec![k.one()];
            for l in (0..dim).filter(|&l| l != j) {
                acc = crate::forms::binform_mul(k, &acc, &[a[l].clone(), b[l].clone()]);
            }
            acc
        })
        .collect();
    let forms: Vec<Vec<F::Elem>> = (0..dim)
        .map(|i| {
            let mut acc = vec![k.zero(); dim];
            for (j, p) in psi.iter().enumerate() {
                acc = crate::forms::binform_add(k, &acc, &crate::forms::binform_scale(k, p, &n_mat[i][j]));
            }
            acc
        })
        .collect();
    let mut params: Vec<(F::Elem, F::Elem)> = (0..dim).map(|j| (b[j].clone(), k.neg(&a[j]))).collect();
    params.push((k.one(), k.zero()));
    params.push((k.zero(), k.one()));
    Some((RationalCurve::reduced(k, forms).ok()?, params))
}

/// Fixes the parametrization of a ground-field curve: send (1:0), (0:1), (1:1) to
/// the three least of the given rational points when possible, else (over small
/// prime fields) to the three least rational points of the curve, else scale only.
pub fn canonical_form<B: GroundField>(
    k: B,
    curve: &RationalCurve<B::Elem>,
    rational: &[Vec<B::Elem>],
) -> RationalCurve<B::Elem> {
    let mut pts: Vec<Vec<B::Elem>> = rational.iter().filter_map(|p| normalize(&k, p.clone())).collect();
    pts.sort();
    pts.dedup();
    let mut params = Vec::new();
    for p in &pts {
        if let Some(r) = curve.param_of(&k, p) {
            params.push(r);
            if params.len() == 3 {
                break;
            }
        }
    }
    if params.len() < 3 {
        params.clear();
        if let Some(fp) = k.as_prime_field().filter(|f| f.p() <= ENUMERATION_PRIME_BOUND) {
            let mut found: Vec<(Vec<B::Elem>, (B::Elem, B::Elem))> = Vec::new();
            let mut candidates = vec![(k.one(), k.zero())];
            candidates.extend((0..fp.p() as i64).map(|u| (k.from_i64(u), k.one())));
            for (s, t) in candidates {
                if let Some(img) = curve.point_at(&k, &s, &t) {
                    found.push((img, (s, t)));
                }
            }
            found.sort();
            found.dedup_by(|a, b| a.0 == b.0);
            params = found.into_iter().take(3).map(|(_, r)| r).collect();
        }
    }
    if params.len() == 3 {
        if let Some(g) = mobius_from_three(&k, &params[0], &params[1], &params[2]) {
            return curve.reparam(&k, &g).normalized(&k);
        }
    }
    curve.normalized(&k)
}

fn check_rnc_input<B: GroundField>(x: &ZeroCycle<B>) -> Result<()> {
    let n = x.ambient();
    if !x.is_reduced() {
        return Err(Error::Invalid("points through a rational normal curve must be distinct".into()));
    }
    if x.degree() != n + 3 {
        return Err(Error::WrongDegree { expected: n + 3, got: x.degree() });
    }
    Ok(())
}

fn rational_points<B: GroundField>(x: &ZeroCycle<B>) -> Vec<Vec<B::Elem>> {
    x.points().filter_map(|p| p.rational_coords()).collect()
}

/// The unique rational normal curve through a cycle of total degree n+3 in P^n
/// whose geometric points are in linearly general position, over the ground field.
pub fn rnc_through<B: GroundField>(x: &ZeroCycle<B>) -> Result<RationalCurve<B::Elem>> {
    check_rnc_input(x)?;
    let (l, geo) = x.geometric_points()?;
    if !in_linearly_general_position(&l, &geo)? {
        return Err(Error::NotLgp);
    }
    let coords: Vec<Vec<Vec<B::Elem>>> = geo.iter().map(|p| p.coords().to_vec()).collect();
    let (curve, _) = rnc_formula(&l, &coords).ok_or(Error::NotLgp)?;
    let k = *l.base();
    let rational = rational_points(x);
    let ground = descend_curve(&l, &curve, &rational)?;
    Ok(canonical_form(k, &ground, &rational))
}

/// Brings a Galois-stable curve over a splitting field down to the ground field.
fn descend_curve<B: GroundField>(
    l: &TowerField<B>,
    curve: &RationalCurve<Vec<B::Elem>>,
    rational: &[Vec<B::Elem>],
) -> Result<RationalCurve<B::Elem>> {
    let k = *l.base();
    if rational.len() >= 3 {
        let lifted: Vec<Vec<Vec<B::Elem>>> =
            rational.iter().map(|p| p.iter().map(|c| l.embed_base(c)).collect()).collect();
        let mut sorted = lifted.clone();
        sorted.sort();
        let params: Option<Vec<_>> = sorted.iter().take(3).map(|p| curve.param_of(l, p)).collect();
        if let Some(g) = params.and_then(|r| mobius_from_three(l, &r[0], &r[1], &r[2])) {
            if let Some(c) = curve.reparam(l, &g).normalized(l).try_map::<B>(|x| l.in_base(x)) {
                return Ok(c);
            }
        }
    }
    RationalCurve::new(&k, B::descend_matrix(l, curve.forms())?)
}

/// The limit at t = 1 of the family through the interpolated points.
#[derive(Debug, Clone)]
pub enum Limit<B: GroundField> {
    /// A curve over the ground field through every geometric point of the input.
    Generic { curve: RationalCurve<B::Elem>, degree: usize },
    Degenerate(Degeneration<B>),
}

/// What the family does at t = 1 when the limit is not a curve through the input.
#[derive(Debug, Clone)]
pub struct Degeneration<B: GroundField> {
    /// Limit parametrization over the splitting field, common factor removed.
    pub limit: RationalCurve<Vec<B::Elem>>,
    pub limit_degree: usize,
    /// Coordinates whose form vanishes identically at t = 1.
    pub vanishing_forms: Vec<usize>,
    /// Degree of the common factor removed from the limit forms.
    pub base_locus_degree: usize,
    /// Whether the limit parametrization passes through every input point.
    pub through_x: bool,
    /// For n = 2: the limit of the implicit conics, over the ground field.
    pub limit_conic: Option<Vec<B::Elem>>,
}

impl<B: GroundField> Degeneration<B> {
    pub fn diagnostics(&self, k: &B) -> Diagnostics {
        Diagnostics {
            reason: "degenerate specialization at t = 1".into(),
            details: json!({
                "limit_degree": self.limit_degree,
                "vanishing_forms": self.vanishing_forms,
                "base_locus_degree": self.base_locus_degree,
                "through_x": self.through_x,
                "limit_conic": self.limit_conic.as_ref().map(|c| c.iter().map(|x| k.elem_to_json(x)).collect::<Vec<_>>()),
            }),
        }
    }
}

/// Output of [`rnc_generic_then_specialize`].
#[derive(Debug, Clone)]
pub struct Specialization<B: GroundField> {
    pub field: TowerField<B>,
    /// The curve over L(t) through the interpolated points.
    pub family: RationalCurve<RatFunc<Vec<B::Elem>>>,
    /// Exponent j of the companion parameters θ^j that succeeded.
    pub companion_power: usize,
    pub limit: Limit<B>,
}

/// Number of retries with alternate companion parameters.
pub const COMPANION_RETRIES: usize = 5;

/// Companion coordinates for each part of `x`: the moment point (1, β, …, β^n) with
/// β = θ^j + c, θ the residue generator and c the part index.
pub fn companion_coords<B: GroundField>(x: &ZeroCycle<B>, j: usize) -> Vec<Vec<Poly<B::Elem>>> {
    let n = x.ambient();
    let consts = part_constants(x);
    x.points()
        .zip(consts)
        .map(|(p, c)| {
            let k = p.ground();
            let f = p.minpoly();
            let beta = if p.degree() == 1 {
                Poly::constant(&k, c)
            } else {
                Poly::x(&k).pow(&k, j as u64).rem(&k, f).add(&k, &Poly::constant(&k, c))
            };
            let mut out = vec![Poly::one(&k)];
            for _ in 0..n {
                out.push(out.last().unwrap().mul(&k, &beta).rem(&k, f));
            }
            out
        })
        .collect()
}

/// One small constant per part, distinct as long as the field allows.
fn part_constants<B: GroundField>(x: &ZeroCycle<B>) -> Vec<B::Elem> {
    let Some(p) = x.points().next() else { return Vec::new() };
    let m = x.parts().len();
    let small = p.ground().small_elements(m);
    (0..m).map(|i| small[i % small.len()].clone()).collect()
}

/// Passes a curve through a cycle of degree n+3 that need not be in general
/// position, by moving it along the line to a companion in general position,
/// taking the rational normal curve over k(t), and specializing at t = 1.
/// Companion parameters θ, θ², … are tried in turn.
pub fn rnc_generic_then_specialize<B: GroundField>(x: &ZeroCycle<B>) -> Result<Specialization<B>> {
    check_rnc_input(x)?;
    let mut last = Error::GenericallyNotLgp;
    for j in std::iter::once(1).chain(2..2 + COMPANION_RETRIES) {
        match specialize_with_companion(x, &companion_coords(x, j)) {
            Ok(mut s) => {
                s.companion_power = j;
                return Ok(s);
            }
            Err(Error::GenericallyNotLgp) => last = Error::GenericallyNotLgp,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Specialization with an explicit companion: per part of `x`, coordinates given as
/// polynomials in that part's residue generator.
pub fn specialize_with_companion<B: GroundField>(
    x: &ZeroCycle<B>,
    companion: &[Vec<Poly<B::Elem>>],
) -> Result<Specialization<B>> {
    check_rnc_input(x)?;
    let n = x.ambient();
    let pts: Vec<_> = x.points().cloned().collect();
    if companion.len() != pts.len() || companion.iter().any(|c| c.len() != n + 1) {
        return Err(Error::DimensionMismatch("companion does not match the cycle".into()));
    }
    let k = pts[0].ground();
    let polys: Vec<Poly<B::Elem>> = pts.iter().map(|p| p.minpoly().clone()).collect();
    let (l, roots) = if pts.len() == 1 && pts[0].degree() == 1 {
        (FieldTower::new(k).top(), vec![vec![vec![k.zero()]]])
    } else {
        k.split(&polys)?
    };
    let lt = RatFuncField::new(l.clone());
    let t = lt.t();
    let one_minus_t = lt.sub(&lt.one(), &t);
    let mut geo_x: Vec<Vec<Vec<B::Elem>>> = Vec::new();
    let mut family_pts: Vec<Vec<RatFunc<Vec<B::Elem>>>> = Vec::new();
    for ((p, rs), comp) in pts.iter().zip(&roots).zip(companion) {
        for r in rs {
            let px = p.specialize(&l, r).coords().to_vec();
            let pc: Vec<Vec<B::Elem>> =
                comp.iter().map(|c| c.eval_in(&l, |a| l.embed_base(a), r)).collect();
            let v = px
                .iter()
                .zip(&pc)
                .map(|(a, b)| {
                    lt.add(&lt.mul(&t, &lt.constant(a.clone())), &lt.mul(&one_minus_t, &lt.constant(b.clone())))
                })
                .collect();
            family_pts.push(v);
            geo_x.push(px);
        }
    }
    let family_proj: Vec<_> = family_pts
        .iter()
        .map(|v| crate::projgeom::ProjPoint::new(&lt, v.clone()))
        .collect::<Result<_>>()
        .map_err(|_| Error::GenericallyNotLgp)?;
    if !in_linearly_general_position(&lt, &family_proj)? {
        return Err(Error::GenericallyNotLgp);
    }
    let (family, _) = rnc_formula(&lt, &family_pts).ok_or(Error::GenericallyNotLgp)?;

    let at_one = specialize_forms(&l, family.forms());
    let vanishing_forms: Vec<usize> =
        at_one.iter().enumerate().filter(|(_, f)| f.iter().all(|c| l.is_zero(c))).map(|(i, _)| i).collect();
    let g = binforms_gcd(&l, &at_one);
    let limit = RationalCurve::reduced(&l, at_one)?;
    let degree = limit.degree();
    let through_x = geo_x.iter().all(|p| limit.contains(&l, p));
    let rational = rational_points(x);
    if through_x && degree >= 1 {
        if let Ok(ground) = descend_curve(&l, &limit, &rational) {
            let curve = canonical_form(k, &ground, &rational);
            return Ok(Specialization {
                field: l,
                family,
                companion_power: 0,
                limit: Limit::Generic { curve, degree },
            });
        }
    }
    let limit_conic = if n == 2 { limit_conic(&lt, &family) } else { None };
    Ok(Specialization {
        field: l,
        family,
        companion_power: 0,
        limit: Limit::Degenerate(Degeneration {
            limit,
            limit_degree: degree,
            vanishing_forms,
            base_locus_degree: g.len() - 1,
            through_x,
            limit_conic,
        }),
    })
}

/// Clears denominators, divides by the content over L[t], and evaluates at t = 1.
fn specialize_forms<B: GroundField>(l: &TowerField<B>, forms: &[Vec<RatFunc<Vec<B::Elem>>>]) -> Vec<Vec<Vec<B::Elem>>> {
    let polys = clear_and_content(l, forms.iter().flatten());
    let one = l.one();
    let mut it = polys.into_iter();
    forms.iter().map(|row| row.iter().map(|_| it.next().unwrap().eval(l, &one)).collect()).collect()
}

/// Multiplies by the common denominator and divides by the gcd of the numerators.
fn clear_and_content<'a, B: GroundField>(
    l: &TowerField<B>,
    entries: impl Iterator<Item = &'a RatFunc<Vec<B::Elem>>> + Clone,
) -> Vec<Poly<Vec<B::Elem>>> {
    let mut den = Poly::one(l);
    for f in entries.clone() {
        let g = den.gcd(l, &f.den);
        den = den.mul(l, &f.den.div_exact(l, &g).unwrap());
    }
    let nums: Vec<Poly<Vec<B::Elem>>> =
        entries.map(|f| f.num.mul(l, &den.div_exact(l, &f.den).unwrap())).collect();
    let mut content = Poly::zero();
    for p in &nums {
        content = content.gcd(l, p);
    }
    if content.is_zero() {
        return nums;
    }
    nums.iter().map(|p| p.div_exact(l, &content).unwrap()).collect()
}

/// Coefficients (x², xy, xz, y², yz, z²) of the conic containing a parametrized conic.
pub fn implicit_conic<F: Field>(k: &F, curve: &RationalCurve<F::Elem>) -> Option<Vec<F::Elem>> {
    if curve.ambient() != 2 {
        return None;
    }
    let cols: Vec<Vec<F::Elem>> = monomials(3, 2)
        .into_iter()
        .map(|e| Form::new(k, 3, 2, [(e, k.one())]).unwrap().pullback(k, |c| c.clone(), curve.forms()))
        .collect();
    let null = linalg::nullspace(k, &linalg::transpose(&cols), 6);
    if null.len() != 1 {
        return None;
    }
    normalize(k, null.into_iter().next().unwrap())
}

fn limit_conic<B: GroundField>(
    lt: &RatFuncField<TowerField<B>>,
    family: &RationalCurve<RatFunc<Vec<B::Elem>>>,
) -> Option<Vec<B::Elem>> {
    let l = lt.coeff_field();
    let conic = implicit_conic(lt, family)?;
    let polys = clear_and_content(l, conic.iter());
    let at_one: Vec<Vec<B::Elem>> = polys.iter().map(|p| p.eval(l, &l.one())).collect();
    let c = normalize(l, at_one)?;
    c.iter().map(|x| l.in_base(x)).collect()
}
