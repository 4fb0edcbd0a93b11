//! Explicit parametrizations of genus-zero curves through a fixed closed point.
//!
//! K = k[θ] has degree 2d+1 and W = span{1, θ, …, θ^d}. A pair (b₀′, b₁′) ∈ K²
//! describes a closed immersion of the point into P¹; after rescaling by the unique
//! λ with λb₀′, λb₁′ ∈ W and changing coordinates on P¹, it becomes
//! b₀ = θ^d + Σ α_i θ^i, b₁ = θ^{d−1} + Σ β_i θ^i with i ≤ d−2.

use serde_json::{json, Value};

use crate::cremona::cremona_at;
use crate::curve::RationalCurve;
use crate::error::{Error, Result};
use crate::field::linalg;
use crate::field::trace::trace_form;
use crate::field::{Field, GroundField, Poly, TowerField};
use crate::forms::binform_eval;
use crate::json::{elems_from_json, elems_to_json};
use crate::projgeom::{closed_point_in_lgp, normalize, ClosedPoint};

type Elem<B> = <B as Field>::Elem;

/// The (α, β) coordinates of a curve through a point of degree 2d+1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FModuliTuple<B: GroundField> {
    pub d: usize,
    pub minpoly: Poly<B::Elem>,
    pub alpha: Vec<B::Elem>,
    pub beta: Vec<B::Elem>,
}

impl<B: GroundField> FModuliTuple<B> {
    pub fn new(d: usize, minpoly: Poly<B::Elem>, alpha: Vec<B::Elem>, beta: Vec<B::Elem>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("d must be at least 1".into()));
        }
        if minpoly.deg() != 2 * d + 1 {
            return Err(Error::WrongDegree { expected: 2 * d + 1, got: minpoly.deg() });
        }
        if alpha.len() != d - 1 || beta.len() != d - 1 {
            return Err(Error::Invalid(format!("α and β must have length {}", d - 1)));
        }
        Ok(FModuliTuple { d, minpoly, alpha, beta })
    }

    pub fn zero(d: usize, minpoly: Poly<B::Elem>, k: &B) -> Result<Self> {
        Self::new(d, minpoly, vec![k.zero(); d.saturating_sub(1)], vec![k.zero(); d.saturating_sub(1)])
    }

    /// b₀ and b₁ as elements of K.
    pub fn basis_pair(&self, kf: &TowerField<B>) -> (Vec<B::Elem>, Vec<B::Elem>) {
        let k = *kf.base();
        let mut b0 = vec![k.zero(); kf.degree()];
        let mut b1 = b0.clone();
        b0[self.d] = k.one();
        b1[self.d - 1] = k.one();
        for i in 0..self.d - 1 {
            b0[i] = self.alpha[i].clone();
            b1[i] = self.beta[i].clone();
        }
        (b0, b1)
    }

    pub fn to_json(&self, k: &B) -> Value {
        json!({
            "d": self.d,
            "minpoly": elems_to_json(k, self.minpoly.coeffs()),
            "alpha": elems_to_json(k, &self.alpha),
            "beta": elems_to_json(k, &self.beta),
        })
    }

    pub fn from_json(k: B, v: &Value) -> Result<Self> {
        let d = v.get("d").and_then(Value::as_u64).ok_or_else(|| Error::Invalid("missing \"d\"".into()))? as usize;
        let field = |key: &str| v.get(key).ok_or_else(|| Error::Invalid(format!("missing \"{key}\"")));
        let minpoly = Poly::from_coeffs(&k, elems_from_json(&k, field("minpoly")?)?);
        Self::new(d, minpoly, elems_from_json(&k, field("alpha")?)?, elems_from_json(&k, field("beta")?)?)
    }
}

fn half_degree<B: GroundField>(kf: &TowerField<B>) -> Result<usize> {
    let n = kf.degree();
    if n < 3 || n % 2 == 0 {
        return Err(Error::WrongDimension(format!("K has degree {n}, expected 2d+1 with d ≥ 1")));
    }
    Ok((n - 1) / 2)
}

fn theta_power<B: GroundField>(kf: &TowerField<B>, i: usize) -> Vec<B::Elem> {
    let k = kf.base();
    let mut e = vec![k.zero(); kf.degree()];
    e[i] = k.one();
    e
}

/// Scales a vector so its lowest-index nonzero entry is 1.
fn canonical<B: GroundField>(k: &B, v: Vec<B::Elem>) -> Vec<B::Elem> {
    normalize(k, v).expect("nonzero vector")
}

/// The λ ∈ K*, unique up to k*, with λb₁, λb₂ ∈ W.
pub fn scaling_lambda<B: GroundField>(kf: &TowerField<B>, b1: &[B::Elem], b2: &[B::Elem]) -> Result<Vec<B::Elem>> {
    let d = half_degree(kf)?;
    let k = kf.base();
    let n = kf.degree();
    let (b1, b2) = (&b1.to_vec(), &b2.to_vec());
    let cols: Vec<(Vec<B::Elem>, Vec<B::Elem>)> =
        (0..n).map(|i| (kf.mul(&theta_power(kf, i), b1), kf.mul(&theta_power(kf, i), b2))).collect();
    let mut rows = Vec::with_capacity(2 * d);
    for m in d + 1..n {
        rows.push(cols.iter().map(|c| c.0[m].clone()).collect::<Vec<_>>());
        rows.push(cols.iter().map(|c| c.1[m].clone()).collect::<Vec<_>>());
    }
    let null = linalg::nullspace(k, &rows, n);
    assert!(!null.is_empty(), "2d conditions on 2d+1 unknowns");
    if null.len() > 1 {
        return Err(Error::NotGeneral(format!("scaling system has nullity {}", null.len())));
    }
    Ok(canonical(k, null.into_iter().next().unwrap()))
}

/// Generator of the trace-orthogonal line of a hyperplane of K.
fn perpendicular<B: GroundField>(kf: &TowerField<B>, span: &[Vec<B::Elem>]) -> Result<Vec<B::Elem>> {
    let k = kf.base();
    let n = kf.degree();
    if span.iter().any(|v| v.len() != n) || linalg::rank(k, span) != n - 1 {
        return Err(Error::WrongDimension(format!("spanning set does not span a hyperplane of K (degree {n})")));
    }
    let gram = trace_form(kf)?;
    let rows = linalg::mat_mul(k, span, &gram);
    let null = linalg::nullspace(k, &rows, n);
    assert_eq!(null.len(), 1, "trace pairing is nondegenerate");
    Ok(null.into_iter().next().unwrap())
}

/// λ with λV = V′ for hyperplanes V, V′ of K, as the quotient of their
/// trace-orthogonal generators, canonical up to k*.
pub fn conjugating_scalar<B: GroundField>(
    kf: &TowerField<B>,
    v: &[Vec<B::Elem>],
    v_prime: &[Vec<B::Elem>],
) -> Result<Vec<B::Elem>> {
    let a = perpendicular(kf, v)?;
    let b = perpendicular(kf, v_prime)?;
    let lambda = kf.div(&a, &b);
    Ok(canonical(kf.base(), lambda))
}

/// Result of [`normal_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm<B: GroundField> {
    pub tuple: FModuliTuple<B>,
    pub b0: Vec<B::Elem>,
    pub b1: Vec<B::Elem>,
}

/// Reduces an embedding (b₀′ : b₁′) of the point into P¹ to its (α, β) normal form.
pub fn normal_form<B: GroundField>(kf: &TowerField<B>, b0: &[B::Elem], b1: &[B::Elem]) -> Result<NormalForm<B>> {
    let d = half_degree(kf)?;
    let k = kf.base();
    let lambda = scaling_lambda(kf, b0, b1)?;
    let mut r0 = kf.mul(&lambda, &b0.to_vec());
    let mut r1 = kf.mul(&lambda, &b1.to_vec());
    debug_assert!(r0[d + 1..].iter().chain(&r1[d + 1..]).all(|c| k.is_zero(c)));
    let minor = k.sub(&k.mul(&r0[d], &r1[d - 1]), &k.mul(&r0[d - 1], &r1[d]));
    if k.is_zero(&minor) {
        return Err(Error::NotGeneral("leading 2×2 minor vanishes".into()));
    }
    if k.is_zero(&r0[d]) {
        std::mem::swap(&mut r0, &mut r1);
    }
    let scale = |r: &mut Vec<Elem<B>>, c: &Elem<B>| r.iter_mut().for_each(|x| *x = k.mul(x, c));
    let axpy = |r: &mut Vec<Elem<B>>, c: &Elem<B>, o: &[Elem<B>]| {
        r.iter_mut().zip(o).for_each(|(x, y)| *x = k.sub(x, &k.mul(c, y)))
    };
    let c = k.inv(&r0[d]).unwrap();
    scale(&mut r0, &c);
    let c = r1[d].clone();
    axpy(&mut r1, &c, &r0);
    let c = k.inv(&r1[d - 1]).unwrap();
    scale(&mut r1, &c);
    let c = r0[d - 1].clone();
    axpy(&mut r0, &c, &r1);
    let tuple = FModuliTuple::new(
        d,
        kf.tower().minpoly(kf.index()).map(k, |c| c[0].clone()),
        r0[..d - 1].to_vec(),
        r1[..d - 1].to_vec(),
    )?;
    Ok(NormalForm { tuple, b0: r0, b1: r1 })
}

/// The curve f of degree 2d−1 with f(b₀ : b₁) = p for an embedding p of the
/// point into P^{2d−1} given by coordinates in K.
pub fn curve_from_tuple<B: GroundField>(
    kf: &TowerField<B>,
    p: &[Vec<B::Elem>],
    tuple: &FModuliTuple<B>,
) -> Result<RationalCurve<B::Elem>> {
    let d = half_degree(kf)?;
    if d != tuple.d {
        return Err(Error::WrongDimension(format!("tuple has d = {} but K has degree {}", tuple.d, kf.degree())));
    }
    if p.len() != 2 * d {
        return Err(Error::DimensionMismatch(format!("{} coordinates for P^{}", p.len(), 2 * d - 1)));
    }
    let k = kf.base();
    let e = 2 * d - 1;
    let (b0, b1) = tuple.basis_pair(kf);
    // basis[i] = b₀^i b₁^{e−i}
    let basis: Vec<Vec<B::Elem>> =
        (0..=e).map(|i| kf.mul(&kf.pow(&b0, i as u64), &kf.pow(&b1, (e - i) as u64))).collect();
    if linalg::rank(k, &basis) != 2 * d {
        return Err(Error::DependentBasis);
    }
    let lambda = conjugating_scalar(kf, p, &basis).map_err(|err| Error::ScalingFailure(err.to_string()))?;
    let columns = linalg::transpose(&basis);
    let mut forms = Vec::with_capacity(2 * d);
    for pt in p {
        let target = kf.mul(&lambda, pt);
        let a = linalg::solve(k, &columns, &target)
            .ok_or_else(|| Error::ScalingFailure("scaled coordinate outside the basis span".into()))?;
        let mut form = vec![k.zero(); e + 1];
        for (i, ai) in a.into_iter().enumerate() {
            form[e - i] = ai;
        }
        forms.push(form);
    }
    let curve = RationalCurve::new(k, forms)?;
    for (f, pt) in curve.forms().iter().zip(p) {
        let lifted: Vec<Vec<B::Elem>> = f.iter().map(|c| kf.embed_base(c)).collect();
        assert_eq!(binform_eval(kf, &lifted, &b0, &b1), kf.mul(&lambda, pt), "f ∘ j = i");
    }
    Ok(curve)
}

fn check_point_for_tuple<B: GroundField>(x: &ClosedPoint<B>, tuple: &FModuliTuple<B>) -> Result<()> {
    let d = tuple.d;
    if x.degree() != 2 * d + 1 {
        return Err(Error::WrongDegree { expected: 2 * d + 1, got: x.degree() });
    }
    if x.ambient() != 2 * d - 1 {
        return Err(Error::DimensionMismatch(format!("point in P^{} for d = {d}", x.ambient())));
    }
    if x.minpoly() != &tuple.minpoly {
        return Err(Error::Invalid("tuple and point use different primitive elements".into()));
    }
    Ok(())
}

/// The member of the family of degree-(2d−1) curves through x given by the tuple.
pub fn parametrize_fpn<B: GroundField>(x: &ClosedPoint<B>, tuple: &FModuliTuple<B>) -> Result<RationalCurve<B::Elem>> {
    check_point_for_tuple(x, tuple)?;
    if !closed_point_in_lgp(x)? {
        return Err(Error::NotLgp);
    }
    curve_from_tuple(x.residue_field(), &x.coords_in_field(), tuple)
}

/// The parameter (s : t) ∈ P¹(K) of the point on the curve.
pub fn embedding_to_p1<B: GroundField>(
    x: &ClosedPoint<B>,
    curve: &RationalCurve<B::Elem>,
) -> Result<(Vec<B::Elem>, Vec<B::Elem>)> {
    let kf = x.residue_field();
    let lifted = curve.map::<TowerField<B>>(|c| kf.embed_base(c));
    lifted
        .param_of(kf, &x.coords_in_field())
        .ok_or_else(|| Error::Invalid("point is not a simple point of the curve".into()))
}

/// Tuple → curve → embedding into P¹ → normal form.
pub fn moduli_roundtrip<B: GroundField>(x: &ClosedPoint<B>, tuple: &FModuliTuple<B>) -> Result<FModuliTuple<B>> {
    let curve = parametrize_fpn(x, tuple)?;
    let (s, t) = embedding_to_p1(x, &curve)?;
    Ok(normal_form(x.residue_field(), &s, &t)?.tuple)
}

/// The degree-n curve through a point of degree n+1 cut out by the image of a line
/// under the Cremona map centered there.
pub fn curves_through_n_plus_1<B: GroundField>(
    x: &ClosedPoint<B>,
    line: &RationalCurve<B::Elem>,
) -> Result<RationalCurve<B::Elem>> {
    cremona_at(x)?.line_to_curve(line)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldTower, Fp};
    use crate::projgeom::moment_point;
    use crate::rnc::implicit_conic;

    fn cubic_f7() -> TowerField<Fp> {
        let k = Fp::new(7).unwrap();
        FieldTower::simple_unchecked(k, "θ", &Poly::from_coeffs(&k, vec![5, 0, 0, 1])).unwrap().top()
    }

    fn quintic_f7() -> TowerField<Fp> {
        let k = Fp::new(7).unwrap();
        FieldTower::simple_unchecked(k, "θ", &Poly::from_coeffs(&k, vec![3, 1, 0, 0, 0, 1])).unwrap().top()
    }

    #[test]
    fn lambda_examples() {
        let kf = cubic_f7();
        let th = |i| theta_power(&kf, i);
        assert_eq!(scaling_lambda(&kf, &th(0), &th(1)).unwrap(), th(0));
        assert_eq!(scaling_lambda(&kf, &th(1), &th(2)).unwrap(), th(2));
        assert!(matches!(scaling_lambda(&kf, &th(0), &th(0)), Err(Error::NotGeneral(_))));
    }

    #[test]
    fn conjugating_examples() {
        let kf = cubic_f7();
        let th = |i| theta_power(&kf, i);
        let v = vec![th(0), th(1)];
        assert_eq!(conjugating_scalar(&kf, &v, &v).unwrap(), th(0));
        let lambda = conjugating_scalar(&kf, &v, &[th(1), th(2)]).unwrap();
        assert_eq!(lambda, th(1));
        assert!(matches!(conjugating_scalar(&kf, &[th(0)], &v), Err(Error::WrongDimension(_))));
    }

    #[test]
    fn normal_form_examples() {
        let kf = quintic_f7();
        let th = |i| theta_power(&kf, i);
        let nf = normal_form(&kf, &kf.add(&th(2), &th(0)), &th(1)).unwrap();
        assert_eq!((nf.tuple.alpha.clone(), nf.tuple.beta.clone()), (vec![1], vec![0]));
        assert_eq!((nf.b0, nf.b1), (kf.add(&th(2), &th(0)), th(1)));
        // (θ : θ²) is the embedding (1 : θ); both λ = 1 and λ = θ⁻¹ rescale it into W
        assert!(matches!(normal_form(&kf, &th(1), &th(2)), Err(Error::NotGeneral(_))));
        let lambda = kf.add(&th(0), &kf.inv(&th(1)).unwrap());
        let nf = normal_form(&kf, &kf.mul(&lambda, &th(1)), &kf.mul(&lambda, &th(2)));
        assert!(matches!(nf, Err(Error::NotGeneral(_))));
        assert!(matches!(normal_form(&kf, &th(0), &th(1)), Err(Error::NotGeneral(_))));
    }

    #[test]
    fn curve_from_zero_tuple_through_moment_point() {
        let k = Fp::new(7).unwrap();
        let kf = quintic_f7();
        let x = moment_point(&kf, 3).unwrap();
        let tuple = FModuliTuple::zero(2, x.minpoly().clone(), &k).unwrap();
        let c = parametrize_fpn(&x, &tuple).unwrap();
        assert_eq!(c.degree(), 3);
        let (l, pts) = x.geometric_points().unwrap();
        let lifted = c.map::<TowerField<Fp>>(|a| l.embed_base(a));
        assert!(pts.iter().all(|p| lifted.contains(&l, p.coords())));
        // the zero tuple gives j = (θ² : θ) = (θ : 1), outside the normal-form locus
        assert!(matches!(moduli_roundtrip(&x, &tuple), Err(Error::NotGeneral(_))));
        let tuple = FModuliTuple::new(2, x.minpoly().clone(), vec![1], vec![2]).unwrap();
        assert_eq!(moduli_roundtrip(&x, &tuple).unwrap(), tuple);
    }

    #[test]
    fn d_one_is_a_reparametrization() {
        let k = Fp::new(7).unwrap();
        let kf = cubic_f7();
        let x = ClosedPoint::from_field_coords(&kf, vec![kf.one(), kf.generator()]).unwrap();
        let tuple = FModuliTuple::zero(1, x.minpoly().clone(), &k).unwrap();
        let c = parametrize_fpn(&x, &tuple).unwrap();
        assert_eq!(c.degree(), 1);
        assert_eq!(c.ambient(), 1);
    }

    #[test]
    fn conics_from_lines() {
        let k = Fp::new(7).unwrap();
        let frame: Vec<ClosedPoint<Fp>> = (0..3)
            .map(|i| {
                let mut c = vec![0; 3];
                c[i] = 1;
                ClosedPoint::rational(k, c).unwrap()
            })
            .collect();
        let center = crate::projgeom::ZeroCycle::from_points(2, frame).unwrap();
        let cr = crate::cremona::CremonaMap::new(&center).unwrap();
        let line_a = RationalCurve::new(&k, vec![vec![1, 0], vec![0, 1], vec![6, 6]]).unwrap();
        let line_b = RationalCurve::new(&k, vec![vec![1, 0], vec![0, 1], vec![2, 3]]).unwrap();
        let ca = cr.line_to_curve(&line_a).unwrap();
        let cb = cr.line_to_curve(&line_b).unwrap();
        let qa = normalize(&k, implicit_conic(&k, &ca).unwrap()).unwrap();
        let qb = normalize(&k, implicit_conic(&k, &cb).unwrap()).unwrap();
        // monomial order x², xy, xz, y², yz, z²
        assert_eq!(qa, vec![0, 1, 1, 0, 1, 0]);
        assert_ne!(qa, qb);
    }
}
