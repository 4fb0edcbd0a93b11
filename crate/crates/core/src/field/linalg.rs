//! Dense linear algebra over an exact field. Matrices are row-major `Vec<Vec<_>>`.

use super::Field;

pub type Matrix<E> = Vec<Vec<E>>;

/// Reduced row echelon form; returns the reduced matrix and the pivot columns.
pub fn rref<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a: Matrix<F::Elem> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !k.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        let inv = k.inv(&a[r][c]).unwrap();
        for x in a[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || k.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = k.sub(x, &k.mul(&f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> usize {
    rref(k, m).1.len()
}

/// A basis of the right kernel {v : m·v = 0}, in the standard
/// free-variable order (each basis vector has a 1 at its free column).
pub fn nullspace<F: Field>(k: &F, m: &[Vec<F::Elem>], cols: usize) -> Matrix<F::Elem> {
    let (r, piv) = rref(k, m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !piv.contains(c)) {
        let mut v = vec![k.zero(); cols];
        v[free] = k.one();
        for (i, &pc) in piv.iter().enumerate() {
            v[pc] = k.neg(&r[i][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solves m·x = b; `None` if inconsistent. Free variables are set to zero.
pub fn solve<F: Field>(k: &F, m: &[Vec<F::Elem>], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols = m.first().map_or(0, Vec::len);
    let aug: Matrix<F::Elem> =
        m.iter().zip(b).map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect()).collect();
    let (r, piv) = rref(k, &aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![k.zero(); cols];
    for (i, &pc) in piv.iter().enumerate() {
        x[pc] = r[i][cols].clone();
    }
    Some(x)
}

pub fn det<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> F::Elem {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = k.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !k.is_zero(&a[i][c])) else {
            return k.zero();
        };
        if pr != c {
            a.swap(pr, c);
            d = k.neg(&d);
        }
        d = k.mul(&d, &a[c][c]);
        let inv = k.inv(&a[c][c]).unwrap();
        for i in c + 1..n {
            if k.is_zero(&a[i][c]) {
                continue;
            }
            let f = k.mul(&a[i][c], &inv);
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in bottom[0].iter_mut().zip(&top[c]).skip(c) {
                *x = k.sub(x, &k.mul(&f, y));
            }
        }
    }
    d
}

pub fn inverse<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> Option<Matrix<F::Elem>> {
    let n = m.len();
    let aug: Matrix<F::Elem> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { k.one() } else { k.zero() }));
            r
        })
        .collect();
    let (r, piv) = rref(k, &aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul<F: Field>(k: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Matrix<F::Elem> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(k.zero(), |acc, l| k.add(&acc, &k.mul(&row[l], &b[l][j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(k: &F, a: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(k.zero(), |acc, (x, y)| k.add(&acc, &k.mul(x, y))))
        .collect()
}

pub fn transpose<E: Clone>(a: &[Vec<E>]) -> Matrix<E> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn identity<F: Field>(k: &F, n: usize) -> Matrix<F::Elem> {
    (0..n).map(|i| (0..n).map(|j| if i == j { k.one() } else { k.zero() }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{q, Qq};
    use crate::field::Fp;
    use proptest::prelude::*;

    #[test]
    fn det_of_vandermonde_over_q() {
        let k = Qq;
        let xs = [1, 2, 4];
        let m: Matrix<_> = xs.iter().map(|&x| (0..3).map(|e| q(x).pow(e)).collect()).collect();
        // (2−1)(4−1)(4−2)
        assert_eq!(det(&k, &m), q(6));
    }

    #[test]
    fn nullspace_of_rank_one_row() {
        let k = Fp::new(5).unwrap();
        let ns = nullspace(&k, &[vec![1, 2, 3]], 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(mat_vec(&k, &[vec![1, 2, 3]], &v), vec![0]);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inverse_times_matrix_is_identity(entries in prop::collection::vec(0u64..11, 16)) {
            let k = Fp::new(11).unwrap();
            let m: Matrix<u64> = entries.chunks(4).map(|c| c.to_vec()).collect();
            match inverse(&k, &m) {
                Some(inv) => {
                    prop_assert_eq!(mat_mul(&k, &m, &inv), identity(&k, 4));
                    prop_assert!(det(&k, &m) != 0);
                }
                None => prop_assert_eq!(det(&k, &m), 0),
            }
        }

        #[test]
        fn solve_returns_a_solution(entries in prop::collection::vec(0u64..7, 12), b in prop::collection::vec(0u64..7, 3)) {
            let k = Fp::new(7).unwrap();
            let m: Matrix<u64> = entries.chunks(4).map(|c| c.to_vec()).collect();
            if let Some(x) = solve(&k, &m, &b) {
                prop_assert_eq!(mat_vec(&k, &m, &x), b);
            } else {
                prop_assert!(rank(&k, &m) < 3);
            }
        }
    }
}
