mod common;

use std::collections::HashMap;

use goodsets::analysis::{analyze_goodness, decompose, decompose_default, find_boundary, is_full};
use goodsets::components::{full_components, full_subset_indices, geodesic, related_components};
use goodsets::linalg::{self, int, Matrix, Rational};
use goodsets::model::build_incidence;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-2i64..=2, r * c).prop_map(move |v| {
            let rows = v.chunks(c).map(|ch| ch.iter().map(|&x| int(x)).collect()).collect();
            Matrix::from_rows(rows, c).unwrap()
        })
    })
}

fn square_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=5).prop_flat_map(|n| {
        proptest::collection::vec(-2i64..=2, n * n).prop_map(move |v| {
            let rows = v.chunks(n).map(|ch| ch.iter().map(|&x| int(x)).collect()).collect();
            Matrix::from_rows(rows, n).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn rref_is_idempotent_and_rank_is_transpose_invariant(m in small_matrix()) {
        let r = linalg::rref(&m);
        prop_assert_eq!(linalg::rref(&r.reduced), r.clone());
        prop_assert_eq!(r.rank, linalg::rank(&m.transpose()));
        prop_assert_eq!(r.rank, r.pivots.len());
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in small_matrix()) {
        let k = linalg::kernel_basis(&m);
        prop_assert_eq!(k.len(), m.cols() - linalg::rank(&m));
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solutions_have_zero_residual(m in small_matrix(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let b: Vec<Rational> = (0..m.rows()).map(|_| random_rational(&mut g)).collect();
        match linalg::solve(&m, &b) {
            Ok(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), b),
            Err(linalg::LinalgError::Infeasible) => {
                // infeasible exactly when b raises the rank
                let mut rows = m.row_vecs();
                for (row, v) in rows.iter_mut().zip(&b) {
                    row.push(v.clone());
                }
                let aug = Matrix::from_rows(rows, m.cols() + 1).unwrap();
                prop_assert!(linalg::rank(&aug) > linalg::rank(&m));
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn inverse_is_two_sided_or_singular(m in square_matrix()) {
        let rank = linalg::rank(&m);
        match linalg::invert(&m) {
            Ok(inv) => {
                prop_assert_eq!(rank, m.rows());
                prop_assert!(m.mul(&inv).unwrap().is_identity());
                prop_assert!(inv.mul(&m).unwrap().is_identity());
            }
            Err(linalg::LinalgError::Singular { .. }) => prop_assert!(rank < m.rows()),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn elimination_is_deterministic(m in small_matrix()) {
        prop_assert_eq!(linalg::rref(&m), linalg::rref(&m.clone()));
    }
}

#[test]
fn incidence_counts() {
    let mut g = rng(11);
    for _ in 0..100 {
        let dim = g.gen_range(2..=4);
        let s = random_set(&mut g, dim, 10, 4);
        let inc = build_incidence(&s);
        let total: usize = (1..=dim).map(|a| s.projection(a).unwrap().len()).sum();
        assert_eq!(total, inc.coordinate_count());
        for a in 1..=dim {
            assert!(s.projection(a).unwrap().len() <= s.len());
        }
        let m = inc.matrix();
        for r in 0..m.rows() {
            let ones: Vec<usize> = (0..m.cols()).filter(|&c| !m.get(r, c).is_zero()).collect();
            assert_eq!(ones.len(), dim);
            let axes: Vec<usize> = ones.iter().map(|&c| inc.col_labels()[c].axis()).collect();
            assert_eq!(axes, (1..=dim).collect::<Vec<_>>());
        }
        for (c, label) in inc.col_labels().iter().enumerate() {
            let uses = s.iter().filter(|p| p.coord(label.axis()) == label).count();
            let colsum: Rational = (0..m.rows()).map(|r| m.get(r, c).clone()).sum();
            assert_eq!(colsum, int(uses as i64));
        }
    }
}

#[test]
fn incidence_is_permutation_equivariant() {
    let mut g = rng(12);
    for _ in 0..50 {
        let s = random_set(&mut g, 3, 8, 3);
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.reverse();
        let t = s.subset(&order).unwrap();
        let (a, b) = (build_incidence(&s), build_incidence(&t));
        let mut la = a.col_labels().to_vec();
        let mut lb = b.col_labels().to_vec();
        la.sort();
        lb.sort();
        assert_eq!(la, lb);
        for (new_row, &old_row) in order.iter().enumerate() {
            for label in a.col_labels() {
                assert_eq!(
                    a.matrix().get(old_row, a.column_of(label).unwrap()),
                    b.matrix().get(new_row, b.column_of(label).unwrap())
                );
            }
        }
    }
}

#[test]
fn goodness_report_invariants() {
    let mut g = rng(13);
    for _ in 0..200 {
        let dim = g.gen_range(2..=4);
        let s = random_set(&mut g, dim, 10, 3);
        let r = analyze_goodness(&s);
        assert_eq!(r.is_good, r.rank == r.point_count);
        assert!(r.kernel_dim >= dim - 1);
        match &r.certificate {
            Some(c) => assert!(c.verify(&build_incidence(&s))),
            None => assert!(r.is_good),
        }
    }
}

#[test]
fn boundary_matches_complement_invertibility() {
    // second route: B is a boundary iff the columns outside B form an
    // invertible p x p block
    let mut g = rng(14);
    for _ in 0..100 {
        let s = random_good_set(&mut g, 3, 8);
        let b = find_boundary(&s).unwrap();
        let inc = build_incidence(&s);
        let rows: Vec<usize> = (0..s.len()).collect();
        let rest: Vec<usize> = inc
            .col_labels()
            .iter()
            .enumerate()
            .filter(|(_, c)| !b.contains(c))
            .map(|(i, _)| i)
            .collect();
        assert_eq!(b.len(), inc.coordinate_count() - s.len());
        assert!(linalg::invert(&inc.matrix().select(&rows, &rest)).is_ok());
    }
}

#[test]
fn decomposition_uniqueness_and_shifts() {
    let mut g = rng(15);
    for _ in 0..60 {
        let dim = g.gen_range(2..=4);
        let s = random_good_set(&mut g, dim, 10);
        let f: Vec<Rational> = (0..s.len()).map(|_| random_rational(&mut g)).collect();
        let b = find_boundary(&s).unwrap();
        let u: HashMap<_, _> = b.coords.iter().map(|c| (c.clone(), random_rational(&mut g))).collect();
        let d1 = decompose(&s, &f, &b, &u).unwrap();
        let d2 = decompose(&s, &f, &b, &u).unwrap();
        assert_eq!(d1, d2);

        if let Some(first) = b.coords.first() {
            let mut bumped = u.clone();
            *bumped.get_mut(first).unwrap() += int(1);
            let d3 = decompose(&s, &f, &b, &bumped).unwrap();
            assert_ne!(d1, d3);
        }

        // constant shifts summing to zero preserve the equations
        let shifts: Vec<Rational> = {
            let mut v: Vec<Rational> = (1..dim).map(|_| random_rational(&mut g)).collect();
            let total: Rational = v.iter().sum();
            v.push(-total);
            v
        };
        for p in s.iter() {
            let shifted: Rational = p
                .coords()
                .iter()
                .map(|c| d1.get(c).unwrap() + &shifts[c.axis() - 1])
                .sum();
            assert_eq!(shifted, d1.evaluate(p).unwrap());
        }

        // reordering points does not change the pinned solution
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.rotate_left(s.len() / 2);
        let t = s.subset(&order).unwrap();
        let ft: Vec<Rational> = order.iter().map(|&i| f[i].clone()).collect();
        let dt = decompose(&t, &ft, &b, &u).unwrap();
        for (label, v) in d1.values() {
            assert_eq!(dt.get(label), Some(v));
        }
    }
}

#[test]
fn zero_data_decomposes_to_zero() {
    let mut g = rng(16);
    for _ in 0..30 {
        let s = random_good_set(&mut g, 3, 8);
        let d = decompose_default(&s, &vec![Rational::zero(); s.len()]).unwrap();
        assert!(d.values().iter().all(|(_, v)| v.is_zero()));
    }
}

#[test]
fn pruned_enumeration_matches_brute_force() {
    let mut g = rng(17);
    for i in 0..40 {
        let dim = 2 + i % 2;
        let s = random_set(&mut g, dim, 10, 3);
        let fast = full_subset_indices(&s, s.len(), 22).unwrap();
        assert_eq!(fast, brute_force_full(&s), "{s:?}");
    }
}

#[test]
fn component_blocks_are_full_and_partition() {
    let mut g = rng(18);
    for _ in 0..40 {
        let s = random_good_set(&mut g, 3, 10);
        let p = full_components(&s, 22).unwrap();
        let mut seen: Vec<usize> = p.blocks.concat();
        seen.sort_unstable();
        assert_eq!(seen, (0..s.len()).collect::<Vec<_>>());
        for block in p.point_sets(&s) {
            assert_eq!(is_full(&block), Ok(true));
        }
        assert_eq!(related_components(&s, 22).unwrap(), p);
    }
}

#[test]
fn geodesics_in_forests_follow_tree_paths() {
    let mut g = rng(19);
    for _ in 0..60 {
        let s = random_forest(&mut g, 9);
        let e1 = g.gen_range(0..s.len());
        let e2 = g.gen_range(0..s.len());
        let got = geodesic(&s, s.point(e1), s.point(e2), 22).unwrap();
        assert_eq!(got.subset, tree_path(&s, e1, e2), "{s:?} {e1} {e2}");
        assert_eq!(got.alternatives(), 0);
        assert!(got.minimal);
        if let Some(sub) = &got.subset {
            assert_eq!(is_full(&s.subset(sub).unwrap()), Ok(true));
        }
    }
}
