//! The Cremona involution centered at n+1 points of P^n in general position.
//!
//! With N the matrix whose columns are the center points and M = N⁻¹, the map is
//! N ∘ (coordinatewise inversion) ∘ M. Cleared of denominators its i-th form is
//! Σ_j N_ij Π_{l≠j} (Mx)_l, and permuting the center points permutes the summands,
//! so for a Galois-stable center every coefficient lies in the ground field.

use crate::curve::RationalCurve;
use crate::error::{Error, Result};
use crate::field::linalg::{self, Matrix};
use crate::field::{Field, GroundField, TowerField};
use crate::forms::Form;
use crate::projgeom::{in_linearly_general_position, ClosedPoint, ProjPoint, ZeroCycle};

#[derive(Debug, Clone)]
pub struct CremonaMap<B: GroundField> {
    ground: B,
    forms: Vec<Form<B::Elem>>,
    split: TowerField<B>,
    frame: Matrix<Vec<B::Elem>>,
}

/// Frame-conjugated coordinate inversion for n+1 independent points over any field.
pub fn cremona_forms<F: Field>(k: &F, points: &[Vec<F::Elem>]) -> Option<Vec<Form<F::Elem>>> {
    let dim = points.len();
    let n_mat: Matrix<F::Elem> = (0..dim).map(|i| points.iter().map(|p| p[i].clone()).collect()).collect();
    let m = linalg::inverse(k, &n_mat)?;
    let lin: Vec<Form<F::Elem>> = m.iter().map(|row| Form::linear(k, row)).collect();
    let psi: Vec<Form<F::Elem>> = (0..dim)
        .map(|j| {
            let mut acc = Form::constant(k, dim, k.one());
            for (l, f) in lin.iter().enumerate() {
                if l != j {
                    acc = acc.mul(k, f);
                }
            }
            acc
        })
        .collect();
    Some(
        (0..dim)
            .map(|i| {
                let mut acc = Form::zero(dim, dim - 1);
                for (j, p) in psi.iter().enumerate() {
                    acc = acc.add(k, &p.scale(k, &n_mat[i][j]));
                }
                acc
            })
            .collect(),
    )
}

impl<B: GroundField> CremonaMap<B> {
    /// The map centered at a reduced cycle of total degree n+1 in P^n.
    pub fn new(center: &ZeroCycle<B>) -> Result<Self> {
        let n = center.ambient();
        if center.degree() != n + 1 {
            return Err(Error::WrongDegree { expected: n + 1, got: center.degree() });
        }
        let (l, pts) = center.geometric_points()?;
        if !in_linearly_general_position(&l, &pts)? {
            return Err(Error::NotLgp);
        }
        let coords: Vec<Vec<Vec<B::Elem>>> = pts.iter().map(|p| p.coords().to_vec()).collect();
        let over_l = cremona_forms(&l, &coords).ok_or(Error::NotLgp)?;
        let k = *l.base();
        let forms = over_l
            .iter()
            .map(|f| f.try_map(&k, |c| l.in_base(c)))
            .collect::<Option<Vec<_>>>()
            .expect("Cremona forms of a Galois-stable center have ground coefficients");
        Ok(CremonaMap { ground: k, forms, split: l, frame: coords })
    }

    pub fn ambient(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn forms(&self) -> &[Form<B::Elem>] {
        &self.forms
    }

    pub fn ground(&self) -> B {
        self.ground
    }

    /// The center's geometric points over the splitting field.
    pub fn center_points(&self) -> (&TowerField<B>, &[Vec<Vec<B::Elem>>]) {
        (&self.split, &self.frame)
    }

    /// Image of a point with coordinates in any field containing the ground field.
    pub fn apply_in<G: Field>(
        &self,
        g: &G,
        emb: impl Fn(&B::Elem) -> G::Elem + Copy,
        x: &[G::Elem],
    ) -> Result<ProjPoint<G::Elem>> {
        if x.len() != self.forms.len() {
            return Err(Error::DimensionMismatch(format!(
                "point in P^{} for a map of P^{}",
                x.len() - 1,
                self.ambient()
            )));
        }
        let img: Vec<G::Elem> = self.forms.iter().map(|f| f.eval_in(g, emb, x)).collect();
        ProjPoint::new(g, img).map_err(|_| Error::IndeterminacyLocus)
    }

    pub fn apply(&self, x: &ProjPoint<B::Elem>) -> Result<ProjPoint<B::Elem>> {
        self.apply_in(&self.ground, |c| c.clone(), x.coords())
    }

    pub fn apply_closed(&self, x: &ClosedPoint<B>) -> Result<ClosedPoint<B>> {
        let k = x.residue_field();
        let img = self.apply_in(k, |c| k.embed_base(c), &x.coords_in_field())?;
        ClosedPoint::from_field_coords(k, img.coords().to_vec())
    }

    /// The image of a line avoiding the spans of all (n−1)-subsets of the center:
    /// a degree-n curve through every center point.
    pub fn line_to_curve(&self, line: &RationalCurve<B::Elem>) -> Result<RationalCurve<B::Elem>> {
        let n = self.ambient();
        if line.degree() != 1 || line.ambient() != n {
            return Err(Error::Invalid("expected a line in the same projective space".into()));
        }
        let l = &self.split;
        let p: Vec<Vec<B::Elem>> = line.forms().iter().map(|f| l.embed_base(&f[0])).collect();
        let q: Vec<Vec<B::Elem>> = line.forms().iter().map(|f| l.embed_base(&f[1])).collect();
        for subset in subsets(n + 1, n - 1) {
            let mut rows: Vec<Vec<Vec<B::Elem>>> = subset.iter().map(|&i| self.frame[i].clone()).collect();
            rows.push(p.clone());
            rows.push(q.clone());
            if linalg::rank(l, &rows) < n + 1 {
                return Err(Error::LineMeetsFundamentalLocus);
            }
        }
        let k = self.ground;
        let forms: Vec<Vec<B::Elem>> =
            self.forms.iter().map(|f| f.pullback(&k, |c| c.clone(), line.forms())).collect();
        let curve = RationalCurve::reduced(&k, forms)?;
        debug_assert_eq!(curve.degree(), n);
        Ok(curve)
    }
}

/// Index subsets of {0..n} of size r, in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// Convenience: the map centered at a single closed point of degree n+1.
pub fn cremona_at<B: GroundField>(center: &ClosedPoint<B>) -> Result<CremonaMap<B>> {
    CremonaMap::new(&ZeroCycle::from_points(center.ambient(), vec![center.clone()])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{q, Qq};
    use crate::field::{FieldTower, Fp, Poly};
    use crate::projgeom::moment_point;

    fn standard_frame<B: GroundField>(k: B, n: usize) -> ZeroCycle<B> {
        let pts = (0..=n)
            .map(|i| {
                let mut c = vec![k.zero(); n + 1];
                c[i] = k.one();
                ClosedPoint::rational(k, c).unwrap()
            })
            .collect();
        ZeroCycle::from_points(n, pts).unwrap()
    }

    #[test]
    fn standard_quadratic_map() {
        let cr = CremonaMap::new(&standard_frame(Qq, 2)).unwrap();
        let m = |e: Vec<u32>| Form::new(&Qq, 3, 2, [(e, q(1))]).unwrap();
        assert_eq!(cr.forms(), &[m(vec![0, 1, 1]), m(vec![1, 0, 1]), m(vec![1, 1, 0])]);
        let p = |v: [i64; 3]| ProjPoint::new(&Qq, v.iter().map(|&x| q(x)).collect()).unwrap();
        assert_eq!(cr.apply(&p([1, 1, 1])).unwrap(), p([1, 1, 1]));
        assert_eq!(cr.apply(&p([1, 2, 3])).unwrap(), p([6, 3, 2]));
        assert_eq!(cr.apply(&p([0, 1, 1])).unwrap(), p([1, 0, 0]));
        assert!(matches!(cr.apply(&p([0, 0, 1])), Err(Error::IndeterminacyLocus)));
    }

    #[test]
    fn moment_center_over_f2_descends() {
        let k = Fp::new(2).unwrap();
        let f = Poly::from_coeffs(&k, vec![1, 1, 0, 1]);
        let l = FieldTower::simple_unchecked(k, "a", &f).unwrap().top();
        let center = moment_point(&l, 2).unwrap();
        let cr = cremona_at(&center).unwrap();
        assert_eq!(cr.forms().len(), 3);
        assert!(cr.forms().iter().all(|f| f.degree() == 2 && !f.is_zero()));
        // the three center points are fundamental
        let (split, pts) = cr.center_points();
        for p in pts {
            assert!(matches!(cr.apply_in(split, |c| split.embed_base(c), p), Err(Error::IndeterminacyLocus)));
        }
    }

    #[test]
    fn line_to_conic() {
        let k = Fp::new(7).unwrap();
        let cr = CremonaMap::new(&standard_frame(k, 2)).unwrap();
        let line = RationalCurve::new(&k, vec![vec![1, 0], vec![0, 1], vec![6, 6]]).unwrap();
        let conic = cr.line_to_curve(&line).unwrap();
        assert_eq!(conic.degree(), 2);
        for u in 0..7 {
            let p = conic.point_at(&k, &u, &1).unwrap();
            let v = (p[1] * p[2] + p[0] * p[2] + p[0] * p[1]) % 7;
            assert_eq!(v, 0);
        }
        for i in 0..3 {
            let mut e = vec![0; 3];
            e[i] = 1;
            assert!(conic.contains(&k, &e));
        }
        let bad = RationalCurve::new(&k, vec![vec![1, 0], vec![0, 1], vec![0, 0]]).unwrap();
        assert!(matches!(cr.line_to_curve(&bad), Err(Error::LineMeetsFundamentalLocus)));
    }

    #[test]
    fn twisted_cubic_from_split_frame() {
        let k = Fp::new(11).unwrap();
        let cr = CremonaMap::new(&standard_frame(k, 3)).unwrap();
        let line = RationalCurve::new(&k, vec![vec![1, 2], vec![3, 1], vec![5, 7], vec![1, 9]]).unwrap();
        assert_eq!(cr.line_to_curve(&line).unwrap().degree(), 3);
    }
}
