use isofractal::gf::{enumerate_projective, FieldMatrix, PrimeField};
use isofractal::plucker::{contraction, plucker_matrix};
use isofractal::variety::{
    oracle_points, quadratic_relations, evaluate_relation, rational_points, Mode, DEFAULT_BUDGET,
};
use isofractal::{binomial, index_tuples, PairSet};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Echelon form by elimination from the bottom pivot row, then
/// back-substitution; independent of the library's elimination order.
fn naive_rref(p: i64, mut m: Vec<Vec<i64>>) -> (Vec<Vec<i64>>, usize) {
    let inv = |a: i64| (1..p).find(|x| (a * x).rem_euclid(p) == 1).unwrap();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).rev().find(|&i| m[i][c].rem_euclid(p) != 0) else { continue };
        m.swap(r, pr);
        for i in r + 1..rows {
            let f = m[i][c] * inv(m[r][c].rem_euclid(p));
            for j in 0..cols {
                m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(p);
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    for &(r, c) in pivots.iter().rev() {
        let s = inv(m[r][c].rem_euclid(p));
        for j in 0..cols {
            m[r][j] = (m[r][j] * s).rem_euclid(p);
        }
        for i in 0..r {
            let f = m[i][c];
            for j in 0..cols {
                m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(p);
            }
        }
    }
    for row in &mut m {
        for x in row.iter_mut() {
            *x = x.rem_euclid(p);
        }
    }
    (m, pivots.len())
}

#[test]
fn elimination_matches_naive_oracle() {
    let mut rng = StdRng::seed_from_u64(3);
    for p in [2i64, 3, 5] {
        let f = PrimeField::new(p as u64).unwrap();
        for trial in 0..50 {
            let density = if trial % 2 == 0 { 0.5 } else { 0.15 };
            let rows: Vec<Vec<i64>> = (0..10)
                .map(|_| (0..14).map(|_| if rng.gen_bool(density) { rng.gen_range(1..p) } else { 0 }).collect())
                .collect();
            let m = FieldMatrix::from_rows(f, &rows).unwrap();
            let r = m.rref();
            let (want, rank) = naive_rref(p, rows.clone());
            assert_eq!(r.rank, rank);
            for (i, row) in want.iter().enumerate() {
                let got: Vec<i64> = r.matrix.row(i).iter().map(|&x| x as i64).collect();
                assert_eq!(&got, row, "p={p} trial={trial}");
            }
            assert_eq!(r.matrix.rref().matrix, r.matrix, "idempotent");
            if p == 2 {
                assert_eq!(m.rref_generic(), r);
            }
            let kernel = m.kernel_basis();
            assert_eq!(kernel.len() + r.rank, 14);
            for v in &kernel {
                assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
        }
    }
}

#[test]
fn projective_outputs_pairwise_independent() {
    let mut rng = StdRng::seed_from_u64(5);
    for p in [2u64, 3, 5] {
        let f = PrimeField::new(p).unwrap();
        for d in 1..=4 {
            // random independent vectors of length 6
            let basis = loop {
                let rows: Vec<Vec<i64>> =
                    (0..d).map(|_| (0..6).map(|_| rng.gen_range(0..p as i64)).collect()).collect();
                if FieldMatrix::from_rows(f, &rows).unwrap().rank() == d {
                    break rows.into_iter().map(|r| r.into_iter().map(|x| x as u32).collect()).collect::<Vec<Vec<u32>>>();
                }
            };
            let span = enumerate_projective(f, &basis);
            let all: Vec<Vec<u32>> = span.iter().collect();
            assert_eq!(all.len() as u128, ((p as u128).pow(d as u32) - 1) / (p as u128 - 1));
            for (i, a) in all.iter().enumerate() {
                for b in &all[i + 1..] {
                    for s in 1..p as u32 {
                        let scaled: Vec<u32> = a.iter().map(|&x| f.mul(s, x)).collect();
                        assert_ne!(&scaled, b);
                    }
                }
            }
        }
    }
}

#[test]
fn contraction_matches_signed_matrix() {
    let mut rng = StdRng::seed_from_u64(11);
    for (n, k) in [(2, 2), (3, 2), (3, 3), (4, 3), (5, 4)] {
        let signed = plucker_matrix(n, k, true).unwrap();
        let unsigned = plucker_matrix(n, k, false).unwrap();
        for p in [2u64, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..200 {
                let w: Vec<u32> = (0..binomial(2 * n, k)).map(|_| rng.gen_range(0..p as u32)).collect();
                let direct = contraction(n, k, f, &w).unwrap();
                assert_eq!(direct, signed.apply(f, &w).unwrap());
                if p == 2 {
                    assert_eq!(direct, unsigned.apply(f, &w).unwrap());
                }
            }
        }
    }
}

#[test]
fn row_weights_two_ways_and_zero_columns() {
    for n in 2..=7 {
        let pairs = PairSet::new(n).unwrap();
        for k in 2..=n {
            let b = plucker_matrix(n, k, false).unwrap().support;
            for (r, alpha) in index_tuples(k - 2, 2 * n).unwrap().iter().enumerate() {
                let meeting = pairs
                    .pairs()
                    .filter(|&(i, j)| alpha.contains(i) || alpha.contains(j))
                    .count();
                assert_eq!(b.row_weight(r), n - meeting);
            }
            for (c, beta) in index_tuples(k, 2 * n).unwrap().iter().enumerate() {
                assert_eq!(b.col_weight(c) == 0, pairs.whole_pairs(beta).is_empty(), "n={n} k={k} {beta}");
            }
        }
    }
}

#[test]
fn kernel_dimension_bookkeeping() {
    for (n, k) in [(2, 2), (3, 2), (3, 3), (4, 3), (4, 4), (5, 4)] {
        for p in [2u64, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            for signed in [false, true] {
                let m = plucker_matrix(n, k, signed).unwrap().to_field(f);
                assert_eq!(m.kernel_basis().len(), m.cols() - m.rank());
            }
        }
    }
    let f = PrimeField::new(2).unwrap();
    assert_eq!(plucker_matrix(3, 3, false).unwrap().to_field(f).rank(), 6);
}

#[test]
fn oracle_points_are_decomposable_and_isotropic() {
    for (n, k, q) in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (3, 3, 2)] {
        let f = PrimeField::new(q).unwrap();
        let o = oracle_points(n, k, q, DEFAULT_BUDGET).unwrap();
        let b = plucker_matrix(n, k, true).unwrap();
        let rels = quadratic_relations(n, k).unwrap();
        for w in &o.points {
            assert!(b.apply(f, w).unwrap().iter().all(|&x| x == 0));
            for r in &rels {
                assert_eq!(evaluate_relation(r, w, n, k, f).unwrap(), 0);
            }
        }
    }
}

#[test]
fn modes_agree_at_two_and_partition_the_kernel() {
    for (n, k) in [(2, 2), (3, 2), (3, 3)] {
        let s = rational_points(n, k, 2, Mode::Signed, DEFAULT_BUDGET).unwrap();
        let u = rational_points(n, k, 2, Mode::Unsigned, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.points, u.points);
        let e = s.enumeration.unwrap();
        assert_eq!(e.examined, (1u128 << e.kernel_dim) - 1);
        assert_eq!(e.examined - e.rejected, s.points.len() as u128);
    }
}

#[test]
fn unsigned_mode_differs_in_odd_characteristic() {
    let f = PrimeField::new(3).unwrap();
    let s = plucker_matrix(5, 4, true).unwrap().to_field(f);
    let u = plucker_matrix(5, 4, false).unwrap().to_field(f);
    let ks = s.kernel_basis();
    assert!(ks.iter().any(|v| u.mul_vec(v).unwrap().iter().any(|&x| x != 0)));
}
