//! Residual-intersection maps between symmetric products of a hypersurface,
//! evaluated on cycle representatives.
//!
//! For a cycle P of degree N+3 in general position on X ⊂ P^N of degree m, C_P is the
//! rational normal curve through P, and the residual (C_P ∩ X) ∖ P has degree mN − (N+3).

use crate::cremona::CremonaMap;
use crate::cubic::{hyperplane_section, intersect_curve, Hypersurface, Intersection};
use crate::curve::RationalCurve;
use crate::error::{Error, Result};
use crate::field::{Field, GroundField};
use crate::fmoduli::{embedding_to_p1, normal_form, parametrize_fpn, FModuliTuple};
use crate::projgeom::{ClosedPoint, ZeroCycle};
use crate::rnc::{canonical_form, rnc_through, ENUMERATION_PRIME_BOUND};

fn require_on<B: GroundField>(x: &Hypersurface<B>, p: &ZeroCycle<B>) -> Result<()> {
    if p.ambient() != x.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "cycle in P^{} for a hypersurface in P^{}",
            p.ambient(),
            x.ambient()
        )));
    }
    if !x.is_on_cycle(p)? {
        return Err(Error::NotOnHypersurface);
    }
    Ok(())
}

fn residual_on_curve<B: GroundField>(
    x: &Hypersurface<B>,
    c: &RationalCurve<B::Elem>,
    sub: &ZeroCycle<B>,
) -> Result<ZeroCycle<B>> {
    match intersect_curve(x, c)? {
        Intersection::Contained => Err(Error::CurveContained),
        Intersection::Cycle(z) => z.residual_cycle(sub),
    }
}

/// (C_P ∩ X) ∖ P for a cycle P of degree N+3 on a hypersurface X ⊂ P^N.
pub fn general_residual<B: GroundField>(x: &Hypersurface<B>, p: &ZeroCycle<B>) -> Result<ZeroCycle<B>> {
    let n = x.ambient();
    if p.degree() != n + 3 {
        return Err(Error::Undetermined(p.degree()));
    }
    require_on(x, p)?;
    let r = residual_on_curve(x, &rnc_through(p)?, p)?;
    assert_eq!(r.degree(), x.degree() * n - p.degree());
    Ok(r)
}

fn require_cubic_surface<B: GroundField>(x: &Hypersurface<B>) -> Result<()> {
    if x.ambient() != 3 || x.degree() != 3 {
        return Err(Error::Invalid("expected a cubic surface in P^3".into()));
    }
    Ok(())
}

/// C_P ∩ H for a degree-6 cycle P on a cubic surface.
pub fn phi1<B: GroundField>(x: &Hypersurface<B>, h: &[B::Elem], p: &ZeroCycle<B>) -> Result<ZeroCycle<B>> {
    require_cubic_surface(x)?;
    if p.degree() != 6 {
        return Err(Error::WrongDegree { expected: 6, got: p.degree() });
    }
    require_on(x, p)?;
    let q = hyperplane_section(x.ground(), &rnc_through(p)?, h)?;
    assert_eq!(q.degree(), 3);
    Ok(q)
}

/// (C_P ∩ X) ∖ P for a degree-6 cycle P on a cubic surface.
pub fn phi2<B: GroundField>(x: &Hypersurface<B>, p: &ZeroCycle<B>) -> Result<ZeroCycle<B>> {
    require_cubic_surface(x)?;
    if p.degree() != 6 {
        return Err(Error::WrongDegree { expected: 6, got: p.degree() });
    }
    general_residual(x, p)
}

/// (C_{Q₁ ∪ Q₂} ∩ X) ∖ Q₁ for degree-3 cycles Q₁ on X and Q₂ on the plane H.
pub fn joint_inverse<B: GroundField>(
    x: &Hypersurface<B>,
    h: &[B::Elem],
    q1: &ZeroCycle<B>,
    q2: &ZeroCycle<B>,
) -> Result<ZeroCycle<B>> {
    require_cubic_surface(x)?;
    for q in [q1, q2] {
        if q.degree() != 3 {
            return Err(Error::WrongDegree { expected: 3, got: q.degree() });
        }
    }
    require_on(x, q1)?;
    for p in q2.points() {
        let kf = p.residue_field();
        let v = p.coords_in_field();
        let s = h.iter().zip(&v).fold(kf.zero(), |acc, (a, c)| kf.add(&acc, &kf.mul(&kf.embed_base(a), c)));
        if !kf.is_zero(&s) {
            return Err(Error::Invalid("second cycle is not on the plane".into()));
        }
    }
    let c = rnc_through(&q1.union(q2)?)?;
    let r = residual_on_curve(x, &c, q1)?;
    assert_eq!(r.degree(), 6);
    Ok(r)
}

/// (C_P ∩ X) ∖ P for a degree-(n+4) cycle on a cubic n-fold, n ∈ {3, 4}.
pub fn fold_residual<B: GroundField>(x: &Hypersurface<B>, p: &ZeroCycle<B>) -> Result<ZeroCycle<B>> {
    let n = x.ambient() - 1;
    if !(n == 3 || n == 4) || x.degree() != 3 {
        return Err(Error::Invalid("expected a cubic threefold or fourfold".into()));
    }
    if p.degree() != n + 4 {
        return Err(Error::WrongDegree { expected: n + 4, got: p.degree() });
    }
    let r = general_residual(x, p)?;
    debug_assert_eq!(r.degree(), 2 * n - 1);
    Ok(r)
}

/// Whether two curves have the same image. Over prime fields up to the enumeration
/// bound both are brought to canonical form; otherwise points of one are tested on the other.
pub fn same_curve<B: GroundField>(k: B, a: &RationalCurve<B::Elem>, b: &RationalCurve<B::Elem>) -> bool {
    if a.ambient() != b.ambient() || a.degree() != b.degree() {
        return false;
    }
    if k.as_prime_field().is_some_and(|f| f.p() <= ENUMERATION_PRIME_BOUND) {
        return canonical_form(k, a, &[]) == canonical_form(k, b, &[]);
    }
    let e = a.degree();
    k.small_elements(e * e + 1)
        .into_iter()
        .all(|u| a.point_at(&k, &u, &k.one()).is_some_and(|p| b.contains(&k, &p)))
}

/// A fiber of the fold map recomputed from its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldFiber<B: GroundField> {
    pub image: ZeroCycle<B>,
    /// The preimage recovered from the image alone.
    pub recovered: ZeroCycle<B>,
    pub curve_recovered: bool,
    /// A second member of the fiber, from a different curve through the image.
    pub other: Option<ZeroCycle<B>>,
}

/// Recomputes the curve through R = f(P) from R alone, via the Cremona map at R
/// (n = 3) or the (α, β) parametrization (n = 4, R a single point), and reads off
/// P again together with a second preimage.
pub fn fold_fiber<B: GroundField>(x: &Hypersurface<B>, p: &ZeroCycle<B>) -> Result<FoldFiber<B>> {
    let k = x.ground();
    let image = fold_residual(x, p)?;
    let c_p = rnc_through(p)?;
    let (curve, other_curve) = match x.ambient() - 1 {
        3 => resolve_by_cremona(k, &image, &c_p)?,
        _ => resolve_by_tuple(&image, &c_p)?,
    };
    let recovered = residual_on_curve(x, &curve, &image)?;
    let other = match other_curve {
        Some(c) => residual_on_curve(x, &c, &image).ok(),
        None => None,
    };
    Ok(FoldFiber { image, recovered, curve_recovered: same_curve(k, &curve, &c_p), other })
}

type CurvePair<E> = (RationalCurve<E>, Option<RationalCurve<E>>);

fn resolve_by_cremona<B: GroundField>(
    k: B,
    image: &ZeroCycle<B>,
    c_p: &RationalCurve<B::Elem>,
) -> Result<CurvePair<B::Elem>> {
    let cr = CremonaMap::new(image)?;
    let mut pts: Vec<Vec<B::Elem>> = Vec::new();
    for u in k.small_elements(64) {
        let Some(q) = c_p.point_at(&k, &u, &k.one()) else { continue };
        let Ok(img) = cr.apply_in(&k, |c| c.clone(), &q) else { continue };
        if !pts.contains(&img.coords().to_vec()) {
            pts.push(img.coords().to_vec());
        }
        if pts.len() == 3 {
            break;
        }
    }
    if pts.len() < 2 {
        return Err(Error::Invalid("too few points of the curve off the fundamental locus".into()));
    }
    let line = RationalCurve::line(&k, &pts[0], &pts[1])?;
    let curve = cr.line_to_curve(&line)?;
    let mut other = None;
    for u in k.small_elements(16).into_iter().skip(1) {
        let mut q = pts[1].clone();
        q[0] = k.add(&q[0], &u);
        if let Ok(c) = RationalCurve::line(&k, &pts[0], &q).and_then(|l| cr.line_to_curve(&l)) {
            other = Some(c);
            break;
        }
    }
    Ok((curve, other))
}

fn resolve_by_tuple<B: GroundField>(image: &ZeroCycle<B>, c_p: &RationalCurve<B::Elem>) -> Result<CurvePair<B::Elem>> {
    let r = single_point(image)?;
    let (s, t) = embedding_to_p1(r, c_p)?;
    let kf = r.residue_field();
    let tuple = normal_form(kf, &s, &t)?.tuple;
    let curve = parametrize_fpn(r, &tuple)?;
    let k = r.ground();
    let mut alpha = tuple.alpha.clone();
    alpha[0] = k.add(&alpha[0], &k.one());
    let moved = FModuliTuple::new(tuple.d, tuple.minpoly.clone(), alpha, tuple.beta.clone())?;
    Ok((curve, parametrize_fpn(r, &moved).ok()))
}

fn single_point<B: GroundField>(z: &ZeroCycle<B>) -> Result<&ClosedPoint<B>> {
    match z.parts() {
        [(p, 1)] => Ok(p),
        _ => Err(Error::Invalid("the (α, β) parametrization needs a single closed point".into())),
    }
}

/// Outcome of a round trip on one representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundTrip {
    Identity,
    Mismatch,
    /// The instance violates a precondition of one of the maps.
    OutOfDomain(String),
}

fn out_of_domain(e: &Error) -> bool {
    matches!(e, Error::NotLgp | Error::CurveContained | Error::HyperplaneContainsCurve | Error::Invalid(_))
}

/// (φ₁, φ₂) followed by the joint inverse on a degree-6 cycle of a cubic surface.
pub fn surface_round_trip<B: GroundField>(x: &Hypersurface<B>, h: &[B::Elem], p: &ZeroCycle<B>) -> Result<RoundTrip> {
    let run = || -> Result<ZeroCycle<B>> {
        let q2 = phi1(x, h, p)?;
        let q1 = phi2(x, p)?;
        if !q1.union(&q2)?.is_reduced() {
            return Err(Error::Invalid("C_P is tangent to X or H, or X ∩ H ∩ C_P is nonempty".into()));
        }
        joint_inverse(x, h, &q1, &q2)
    };
    match run() {
        Ok(back) if &back == p => Ok(RoundTrip::Identity),
        Ok(_) => Ok(RoundTrip::Mismatch),
        Err(e) if out_of_domain(&e) => Ok(RoundTrip::OutOfDomain(e.to_string())),
        Err(e) => Err(e),
    }
}

/// Fold map followed by fiber re-solution from the image.
pub fn fold_round_trip<B: GroundField>(x: &Hypersurface<B>, p: &ZeroCycle<B>) -> Result<RoundTrip> {
    match fold_fiber(x, p) {
        Ok(f) if f.curve_recovered && &f.recovered == p => Ok(RoundTrip::Identity),
        Ok(_) => Ok(RoundTrip::Mismatch),
        Err(e) if out_of_domain(&e) || matches!(e, Error::LineMeetsFundamentalLocus | Error::NotGeneral(_)) => {
            Ok(RoundTrip::OutOfDomain(e.to_string()))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::sample::{sample_point, DEFAULT_ATTEMPTS, FIELD_SIZE_BUDGET};

    fn cycle_of(p: ClosedPoint<Fp>) -> ZeroCycle<Fp> {
        ZeroCycle::from_points(p.ambient(), vec![p]).unwrap()
    }

    #[test]
    fn surface_round_trip_on_samples() {
        let k = Fp::new(7).unwrap();
        let x = Hypersurface::fermat(k, 3, 3);
        let h = [1, 0, 0, 0];
        let mut passed = 0;
        for seed in 0..12 {
            let p = cycle_of(sample_point(&x, 6, seed, FIELD_SIZE_BUDGET, DEFAULT_ATTEMPTS).unwrap());
            match surface_round_trip(&x, &h, &p).unwrap() {
                RoundTrip::Identity => passed += 1,
                RoundTrip::Mismatch => panic!("seed {seed}"),
                RoundTrip::OutOfDomain(_) => {}
            }
        }
        assert!(passed >= 3, "{passed}");
    }

    #[test]
    fn fold_threefold_fiber() {
        let k = Fp::new(5).unwrap();
        let x = Hypersurface::fermat(k, 4, 3);
        let p = cycle_of(sample_point(&x, 7, 2, FIELD_SIZE_BUDGET, DEFAULT_ATTEMPTS).unwrap());
        let f = fold_fiber(&x, &p).unwrap();
        assert_eq!(f.image.degree(), 5);
        assert!(x.is_on_cycle(&f.image).unwrap());
        assert!(f.curve_recovered);
        assert_eq!(f.recovered, p);
        let other = f.other.unwrap();
        assert_eq!(other.degree(), 7);
        assert_ne!(other, p);
    }

    #[test]
    fn degree_bookkeeping() {
        let k = Fp::new(5).unwrap();
        let x = Hypersurface::fermat(k, 4, 3);
        let p = cycle_of(sample_point(&x, 6, 0, FIELD_SIZE_BUDGET, DEFAULT_ATTEMPTS).unwrap());
        assert!(matches!(general_residual(&x, &p), Err(Error::Undetermined(6))));
        let quartic = Hypersurface::fermat(k, 4, 4);
        let p = cycle_of(sample_point(&quartic, 7, 0, FIELD_SIZE_BUDGET, DEFAULT_ATTEMPTS).unwrap());
        let r = general_residual(&quartic, &p).unwrap();
        assert_eq!(r.degree(), 9);
        assert!(quartic.is_on_cycle(&r).unwrap());
    }
}
