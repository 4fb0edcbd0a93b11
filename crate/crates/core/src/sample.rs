//! Seeded search for closed points of a given degree on a hypersurface over 𝔽_p.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cubic::Hypersurface;
use crate::error::{Error, Result};
use crate::field::factor::finite::roots;
use crate::field::ground::canonical_irreducible;
use crate::field::{Field, FieldTower, FiniteField, Fp, Poly, TowerField};
use crate::forms::dehomogenize;
use crate::projgeom::{normalize, ClosedPoint};

/// Largest p^d for which the search runs.
pub const FIELD_SIZE_BUDGET: u64 = 1_000_000_000;

pub const DEFAULT_ATTEMPTS: usize = 2_000;

/// The field 𝔽_{p^d} as a single level over 𝔽_p.
pub fn extension(k: Fp, d: usize) -> Result<TowerField<Fp>> {
    if d == 1 {
        return Ok(FieldTower::new(k).top());
    }
    Ok(FieldTower::simple_unchecked(k, "a", &canonical_irreducible(k, d))?.top())
}

fn check_budget(p: u64, d: usize, budget: u64) -> Result<()> {
    let size = (p as f64).powi(d as i32);
    if size > budget as f64 {
        return Err(Error::BudgetExceeded(format!("{p}^{d} exceeds {budget}")));
    }
    Ok(())
}

/// Size of the Frobenius orbit of a normalized point.
fn orbit_size(l: &TowerField<Fp>, x: &[Vec<u64>]) -> usize {
    let mut y: Vec<Vec<u64>> = x.to_vec();
    for e in 1..=l.degree() {
        y = y.iter().map(|c| l.frobenius(c)).collect();
        if y == x {
            return e;
        }
    }
    l.degree()
}

/// A closed point of degree exactly `d` on X, found by intersecting X with random
/// lines over 𝔽_{p^d} and keeping roots whose Frobenius orbit has size d.
pub fn sample_point(x: &Hypersurface<Fp>, d: usize, seed: u64, budget: u64, attempts: usize) -> Result<ClosedPoint<Fp>> {
    let k = x.ground();
    if d == 0 {
        return Err(Error::Invalid("point degree must be at least 1".into()));
    }
    check_budget(k.p(), d, budget)?;
    let l = extension(k, d)?;
    let dim = x.ambient() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let a: Vec<Vec<u64>> = (0..dim).map(|_| l.random(&mut rng)).collect();
        let b: Vec<Vec<u64>> = (0..dim).map(|_| l.random(&mut rng)).collect();
        let line: Vec<Vec<Vec<u64>>> = b.iter().zip(&a).map(|(bi, ai)| vec![bi.clone(), ai.clone()]).collect();
        let h = x.form().pullback(&l, |c| l.embed_base(c), &line);
        let g: Poly<Vec<u64>> = dehomogenize(&l, &h);
        if g.is_zero() || g.deg() == 0 {
            continue;
        }
        for r in roots(&l, &g) {
            let pt: Vec<Vec<u64>> = a.iter().zip(&b).map(|(ai, bi)| l.add(ai, &l.mul(&r, bi))).collect();
            let Some(pt) = normalize(&l, pt) else { continue };
            if orbit_size(&l, &pt) == d {
                let p = ClosedPoint::from_field_coords(&l, pt)?;
                debug_assert!(x.is_on(&p)?);
                return Ok(p);
            }
        }
    }
    Err(Error::NoneFound(attempts))
}
