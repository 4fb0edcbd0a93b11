use cubicpts::cubic::{advertised_degrees, descend_step, Hypersurface};
use cubicpts::field::Fp;
use cubicpts::sample::{sample_point, DEFAULT_ATTEMPTS, FIELD_SIZE_BUDGET};
use cubicpts::Error;

fn run(p: u64, n: usize, trials: u64) {
    let k = Fp::new(p).unwrap();
    let x = Hypersurface::fermat(k, n + 1, 3);
    for seed in 0..trials {
        let pt = sample_point(&x, n + 4, seed, FIELD_SIZE_BUDGET, DEFAULT_ATTEMPTS).unwrap();
        match descend_step(&x, &pt) {
            Ok((y, trace)) => {
                let s = &trace.steps[0];
                eprintln!("seed {seed}: {:?} curve {} cycle {:?} residual {:?} -> {}", s.branch, s.curve_degree, s.cycle_part_degrees, s.residual_part_degrees, y.degree());
                assert!(x.is_on(&y).unwrap());
                assert!(advertised_degrees(n).contains(&y.degree()), "seed {seed}");
            }
            Err(Error::Unresolved(d)) => eprintln!("seed {seed}: unresolved {}", serde_json::to_string(&d).unwrap()),
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
}

#[test]
fn threefold_over_f5() {
    run(5, 3, 10);
}

#[test]
fn fourfold_over_f7() {
    run(7, 4, 10);
}

fn cubic_through(k: Fp, x: &cubicpts::projgeom::ClosedPoint<Fp>, seed: u64) -> Hypersurface<Fp> {
    use cubicpts::field::{linalg, Field, FiniteField};
    use cubicpts::forms::{monomials, Form};
    use rand::{Rng, SeedableRng};
    let l = x.residue_field();
    let v = x.coords_in_field();
    let mons = monomials(x.ambient() + 1, 3);
    let values: Vec<Vec<u64>> = mons
        .iter()
        .map(|e| l.to_prime_coords(&Form::new(&k, x.ambient() + 1, 3, [(e.clone(), 1)]).unwrap().eval_in(l, |c| l.embed_base(c), &v)))
        .collect();
    let rows: Vec<Vec<u64>> = (0..l.degree()).map(|r| values.iter().map(|c| c[r]).collect()).collect();
    let null = linalg::nullspace(&k, &rows, mons.len());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![0u64; mons.len()];
    for b in &null {
        let c: u64 = rng.gen_range(0..k.p());
        for (a, bi) in coeffs.iter_mut().zip(b) {
            *a = k.add(a, &k.mul(&c, bi));
        }
    }
    Hypersurface::new(k, Form::new(&k, x.ambient() + 1, 3, mons.into_iter().zip(coeffs)).unwrap()).unwrap()
}

#[test]
fn point_in_a_hyperplane_takes_the_specialized_branch() {
    use cubicpts::cubic::{smoothness_probe, Branch, Smoothness};
    use cubicpts::field::Field;
    use cubicpts::projgeom::{closed_point_in_lgp, ClosedPoint};
    use cubicpts::sample::extension;
    let k = Fp::new(5).unwrap();
    let l = extension(k, 7).unwrap();
    let t = l.generator();
    let x = ClosedPoint::from_field_coords(&l, vec![l.one(), t.clone(), l.mul(&t, &t), l.pow(&t, 3), l.zero()]).unwrap();
    assert!(!closed_point_in_lgp(&x).unwrap());
    let mut resolved = 0;
    for seed in 0..6 {
        let hyp = cubic_through(k, &x, seed);
        if !matches!(smoothness_probe(&hyp, 0, 0).unwrap(), Smoothness::CertifiedUpTo(_)) {
            continue;
        }
        assert!(hyp.is_on(&x).unwrap());
        match descend_step(&hyp, &x) {
            Ok((y, trace)) => {
                assert_eq!(trace.steps[0].branch, Branch::Specialized);
                assert!(hyp.is_on(&y).unwrap());
                assert!(advertised_degrees(3).contains(&y.degree()));
                resolved += 1;
            }
            Err(Error::Unresolved(d)) => eprintln!("seed {seed}: {}", d.reason),
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    assert!(resolved > 0);
}

#[test]
fn degenerate_limit_is_reported_not_guessed() {
    use cubicpts::projgeom::closed_point_in_lgp;
    let k = Fp::new(7).unwrap();
    let x = Hypersurface::fermat(k, 5, 3);
    let p = sample_point(&x, 8, 7072, FIELD_SIZE_BUDGET, DEFAULT_ATTEMPTS).unwrap();
    assert!(!closed_point_in_lgp(&p).unwrap());
    match descend_step(&x, &p) {
        Err(Error::Unresolved(d)) => {
            assert_eq!(d.reason, "degenerate specialization at t = 1");
            assert_eq!(d.details["limit_degree"], 1);
        }
        other => panic!("expected an unresolved step, got {other:?}"),
    }
}
