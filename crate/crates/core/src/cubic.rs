//! Hypersurfaces, curve–hypersurface intersection and the degree-descent step for
//! closed points on cubic threefolds and fourfolds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::RationalCurve;
use crate::error::{Diagnostics, Error, Result};
use crate::field::{Field, FieldTower, FiniteField, Fp, GroundField, TowerField};
use crate::forms::{dehomogenize, leading_zeros, Form};
use crate::json::curve_to_json;
use crate::projgeom::{closed_point_in_lgp, select_prime_to_3, ClosedPoint, ZeroCycle};
use crate::rnc::{rnc_generic_then_specialize, rnc_through, Limit};

/// A hypersurface {F = 0} in P^N over a ground field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypersurface<B: GroundField> {
    ground: B,
    form: Form<B::Elem>,
}

impl<B: GroundField> Hypersurface<B> {
    pub fn new(ground: B, form: Form<B::Elem>) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::Invalid("the zero form defines no hypersurface".into()));
        }
        if form.nvars() < 2 {
            return Err(Error::Invalid("a hypersurface needs at least two variables".into()));
        }
        Ok(Hypersurface { ground, form })
    }

    /// Σ x_i^m in P^N.
    pub fn fermat(ground: B, ambient: usize, m: usize) -> Self {
        Hypersurface { ground, form: Form::fermat(&ground, ambient + 1, m) }
    }

    pub fn ground(&self) -> B {
        self.ground
    }

    pub fn form(&self) -> &Form<B::Elem> {
        &self.form
    }

    pub fn ambient(&self) -> usize {
        self.form.nvars() - 1
    }

    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    /// Whether F vanishes at the point, computed in its residue field.
    pub fn is_on(&self, x: &ClosedPoint<B>) -> Result<bool> {
        if x.ambient() != self.ambient() {
            return Err(Error::DimensionMismatch(format!(
                "point in P^{} for a hypersurface in P^{}",
                x.ambient(),
                self.ambient()
            )));
        }
        let k = x.residue_field();
        Ok(k.is_zero(&self.form.eval_in(k, |c| k.embed_base(c), &x.coords_in_field())))
    }

    pub fn is_on_cycle(&self, c: &ZeroCycle<B>) -> Result<bool> {
        for p in c.points() {
            if !self.is_on(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Pulls a form back along a curve and pushes the zeros forward as a cycle.
/// `None` when the form vanishes on the whole curve.
pub fn pullback_cycle<B: GroundField>(
    k: B,
    form: &Form<B::Elem>,
    curve: &RationalCurve<B::Elem>,
) -> Result<Option<ZeroCycle<B>>> {
    if form.nvars() != curve.ambient() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "curve in P^{} against a form in {} variables",
            curve.ambient(),
            form.nvars()
        )));
    }
    let h = form.pullback(&k, |c| c.clone(), curve.forms());
    if h.iter().all(|c| k.is_zero(c)) {
        return Ok(None);
    }
    let n = curve.ambient();
    let mut parts = Vec::new();
    let z = leading_zeros(&k, &h);
    if z > 0 {
        let at_inf = curve.point_at(&k, &k.one(), &k.zero()).expect("coprime forms");
        parts.push((ClosedPoint::rational(k, at_inf)?, z));
    }
    for (q, mult) in k.factor(&dehomogenize(&k, &h))? {
        let d = q.deg();
        let (p, weight) = if d == 1 {
            let r = k.neg(&q.coeffs()[0]);
            (ClosedPoint::rational(k, curve.point_at(&k, &r, &k.one()).expect("coprime forms"))?, 1)
        } else {
            let field = FieldTower::simple_unchecked(k, "u", &q)?.top();
            let u = field.generator();
            let one = field.one();
            let lifted = curve.map::<TowerField<B>>(|c| field.embed_base(c));
            let coords = lifted.point_at(&field, &u, &one).expect("coprime forms");
            let p = ClosedPoint::from_field_coords(&field, coords)?;
            let w = d / p.degree();
            (p, w)
        };
        parts.push((p, mult * weight));
    }
    let cycle = ZeroCycle::new(n, parts)?;
    debug_assert_eq!(cycle.degree(), form.degree() * curve.degree());
    Ok(Some(cycle))
}

/// Result of intersecting a curve with a hypersurface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersection<B: GroundField> {
    Contained,
    Cycle(ZeroCycle<B>),
}

pub fn intersect_curve<B: GroundField>(x: &Hypersurface<B>, c: &RationalCurve<B::Elem>) -> Result<Intersection<B>> {
    Ok(match pullback_cycle(x.ground, &x.form, c)? {
        None => Intersection::Contained,
        Some(z) => Intersection::Cycle(z),
    })
}

/// The cycle cut on a curve by the hyperplane Σ h_i x_i = 0.
pub fn hyperplane_section<B: GroundField>(
    k: B,
    c: &RationalCurve<B::Elem>,
    h: &[B::Elem],
) -> Result<ZeroCycle<B>> {
    pullback_cycle(k, &Form::linear(&k, h), c)?.ok_or(Error::HyperplaneContainsCurve)
}

/// Deterministic sweep x_0, x_1, …, then x_i + x_j, … for a hyperplane not containing `c`.
pub fn general_hyperplane_section<B: GroundField>(
    k: B,
    c: &RationalCurve<B::Elem>,
) -> Result<(Vec<B::Elem>, ZeroCycle<B>)> {
    let dim = c.ambient() + 1;
    let unit = |i: usize| {
        let mut v = vec![k.zero(); dim];
        v[i] = k.one();
        v
    };
    let mut candidates: Vec<Vec<B::Elem>> = (0..dim).map(unit).collect();
    for i in 0..dim {
        for j in i + 1..dim {
            let mut v = unit(i);
            v[j] = k.one();
            candidates.push(v);
        }
    }
    for h in candidates {
        match hyperplane_section(k, c, &h) {
            Ok(z) => return Ok((h, z)),
            Err(Error::HyperplaneContainsCurve) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::HyperplaneContainsCurve)
}

/// Outcome of [`smoothness_probe`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Smoothness {
    /// No singular point over 𝔽_{p^e} for every e up to the bound.
    CertifiedUpTo(usize),
    NoWitnessFound { samples: usize },
    SingularAt(ClosedPoint<Fp>),
}

/// Largest number of points scanned per extension degree in exhaustive mode.
pub const EXHAUSTIVE_BUDGET: u64 = 100_000_000;

/// Searches for a common zero of F and its partials. Exhaustive over P^N(𝔽_{p^e})
/// for every e with p^(eN) within budget, else random sampling over 𝔽_p.
pub fn smoothness_probe(x: &Hypersurface<Fp>, samples: usize, seed: u64) -> Result<Smoothness> {
    let k = x.ground;
    let n = x.ambient() as u32;
    let p = k.p();
    let mut e_max: usize = 0;
    while (p as f64).powi(((e_max + 1) * n as usize) as i32) <= EXHAUSTIVE_BUDGET as f64 {
        e_max += 1;
    }
    let partials: Vec<Form<u64>> = (0..=n as usize).map(|i| x.form.partial(&k, i)).collect();
    if e_max == 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = FieldTower::new(k).top();
        for _ in 0..samples {
            let pt: Vec<Vec<u64>> = (0..=n).map(|_| l.random(&mut rng)).collect();
            if pt.iter().all(|c| l.is_zero(c)) {
                continue;
            }
            if singular_at(x, &partials, &l, &pt) {
                return Ok(Smoothness::SingularAt(ClosedPoint::from_field_coords(&l, pt)?));
            }
        }
        return Ok(Smoothness::NoWitnessFound { samples });
    }
    for e in 1..=e_max {
        let l = if e == 1 {
            FieldTower::new(k).top()
        } else {
            FieldTower::simple_unchecked(k, "a", &crate::field::ground::canonical_irreducible(k, e))?.top()
        };
        let q = p.pow(e as u32) as usize;
        let elems: Vec<Vec<u64>> = (0..q)
            .map(|mut i| {
                let mut c = vec![0u64; e];
                for d in c.iter_mut() {
                    *d = (i % p as usize) as u64;
                    i /= p as usize;
                }
                l.from_prime_coords(&c)
            })
            .collect();
        for lead in 0..=n as usize {
            let free = n as usize - lead;
            let mut idx = vec![0usize; free];
            loop {
                let mut pt = vec![l.zero(); lead];
                pt.push(l.one());
                pt.extend(idx.iter().map(|&i| elems[i].clone()));
                if singular_at(x, &partials, &l, &pt) {
                    return Ok(Smoothness::SingularAt(ClosedPoint::from_field_coords(&l, pt)?));
                }
                let mut pos = 0;
                while pos < free {
                    idx[pos] += 1;
                    if idx[pos] < q {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == free {
                    break;
                }
            }
        }
    }
    Ok(Smoothness::CertifiedUpTo(e_max))
}

fn singular_at(x: &Hypersurface<Fp>, partials: &[Form<u64>], l: &TowerField<Fp>, pt: &[Vec<u64>]) -> bool {
    let emb = |c: &u64| l.embed_base(c);
    partials.iter().all(|d| l.is_zero(&d.eval_in(l, emb, pt))) && l.is_zero(&x.form.eval_in(l, emb, pt))
}

/// Which construction produced the curve in a descent step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Rational normal curve through a point in linearly general position.
    Lgp,
    /// Limit at t = 1 of the family through a moving point.
    Specialized,
}

/// One step of a descent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentStep {
    pub branch: Branch,
    pub input_degree: usize,
    pub curve: Value,
    pub curve_degree: usize,
    /// True when the curve lies on X and a hyperplane section was used instead.
    pub curve_contained: bool,
    pub hyperplane: Option<Value>,
    pub cycle_degree: usize,
    pub cycle_part_degrees: Vec<usize>,
    pub multiplicity_of_input: usize,
    pub residual_part_degrees: Vec<usize>,
    pub selected_degree: usize,
    pub in_advertised_set: bool,
}

/// Audit trail of a descent.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct DescentTrace {
    pub steps: Vec<DescentStep>,
}

/// Output degrees promised for a point of degree n+4 on a cubic n-fold.
pub fn advertised_degrees(n: usize) -> &'static [usize] {
    match n {
        3 => &[1, 2, 4, 5],
        _ => &[1, 2, 4, 5, 7],
    }
}

/// From a closed point of degree n+4 on a cubic n-fold (n = 3, 4) to one of
/// degree in the advertised set, through a curve of degree ≤ n+1 and a residual cycle.
pub fn descend_step<B: GroundField>(x_hyp: &Hypersurface<B>, x: &ClosedPoint<B>) -> Result<(ClosedPoint<B>, DescentTrace)> {
    let k = x_hyp.ground;
    let n = x_hyp.ambient().checked_sub(1).filter(|n| *n == 3 || *n == 4).ok_or_else(|| {
        Error::DimensionMismatch(format!("descent needs a cubic threefold or fourfold, got P^{}", x_hyp.ambient()))
    })?;
    if x_hyp.degree() != 3 {
        return Err(Error::WrongDegree { expected: 3, got: x_hyp.degree() });
    }
    if x.degree() != n + 4 {
        return Err(Error::WrongDegree { expected: n + 4, got: x.degree() });
    }
    if !x_hyp.is_on(x)? {
        return Err(Error::NotOnHypersurface);
    }
    let cycle = ZeroCycle::from_points(x.ambient(), vec![x.clone()])?;
    let (branch, curve) = if closed_point_in_lgp(x)? {
        (Branch::Lgp, rnc_through(&cycle)?)
    } else {
        let s = rnc_generic_then_specialize(&cycle)?;
        match s.limit {
            Limit::Generic { curve, .. } => (Branch::Specialized, curve),
            Limit::Degenerate(d) => return Err(Error::Unresolved(Box::new(d.diagnostics(&k)))),
        }
    };
    let e = curve.degree();
    let mut step = DescentStep {
        branch,
        input_degree: x.degree(),
        curve: curve_to_json(&k, &curve),
        curve_degree: e,
        curve_contained: false,
        hyperplane: None,
        cycle_degree: 0,
        cycle_part_degrees: Vec::new(),
        multiplicity_of_input: 0,
        residual_part_degrees: Vec::new(),
        selected_degree: 0,
        in_advertised_set: false,
    };
    let selected = match intersect_curve(x_hyp, &curve)? {
        Intersection::Cycle(z) => {
            assert_eq!(z.degree(), 3 * e, "Bézout bookkeeping");
            step.cycle_degree = z.degree();
            step.cycle_part_degrees = z.part_degrees();
            step.multiplicity_of_input = z.multiplicity(x);
            let residual = z.residual(x)?;
            step.residual_part_degrees = residual.part_degrees();
            if residual.degree() == 0 {
                return Err(unresolved("curve meets X only along the input point", &step));
            }
            match select_prime_to_3(&residual) {
                Ok(p) => p,
                Err(Error::DegreeDivisibleBy3(_)) => {
                    return Err(unresolved("residual cycle degree is divisible by 3", &step));
                }
                Err(err) => return Err(err),
            }
        }
        Intersection::Contained => {
            step.curve_contained = true;
            if e % 3 == 0 {
                return Err(unresolved("curve of degree divisible by 3 contained in X", &step));
            }
            let (h, z) = general_hyperplane_section(k, &curve)?;
            step.hyperplane = Some(crate::json::elems_to_json(&k, &h));
            step.cycle_degree = z.degree();
            step.cycle_part_degrees = z.part_degrees();
            select_prime_to_3(&z)?
        }
    };
    step.selected_degree = selected.degree();
    step.in_advertised_set = advertised_degrees(n).contains(&selected.degree());
    debug_assert!(x_hyp.is_on(&selected)?);
    Ok((selected, DescentTrace { steps: vec![step] }))
}

fn unresolved(reason: &str, step: &DescentStep) -> Error {
    Error::Unresolved(Box::new(Diagnostics {
        reason: reason.into(),
        details: json!({ "step": serde_json::to_value(step).unwrap() }),
    }))
}
