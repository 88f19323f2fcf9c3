mod common;

use common::{config, small_rat, vector};
use genpi_core::linalg::{Rat, RatMatrix, Subspace};
use num_traits::Zero;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(vector(c), r).prop_map(move |rows| RatMatrix::from_rows(c, rows).unwrap())
    })
}

/// Random matrix of rank at most `k` (product of r×k and k×c factors).
fn low_rank(r: usize, c: usize, k: usize) -> impl Strategy<Value = RatMatrix> {
    (proptest::collection::vec(vector(k), r), proptest::collection::vec(vector(c), k)).prop_map(move |(a, b)| {
        let a = RatMatrix::from_rows(k, a).unwrap();
        let b = RatMatrix::from_rows(c, b).unwrap();
        a.mul(&b).unwrap()
    })
}

fn subspace(ambient: usize) -> impl Strategy<Value = Subspace> {
    proptest::collection::vec(vector(ambient), 0..ambient + 1).prop_map(move |vs| Subspace::span(ambient, vs).unwrap())
}

proptest! {
    #![proptest_config(config(200, 0x11a1))]

    #[test]
    fn rank_of_transpose(m in matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank(), m.to_sparse().rank());
    }

    #[test]
    fn left_kernel_complements_rank(m in prop_oneof![matrix(), low_rank(5, 4, 2)]) {
        let k = m.left_kernel_basis();
        prop_assert_eq!(k.dim() + m.rank(), m.nrows());
        for v in k.basis_dense() {
            prop_assert!(m.left_apply(&v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(m.to_sparse().left_kernel_basis(), k);
    }

    #[test]
    fn echelon_form_is_canonical(vs in proptest::collection::vec(vector(5), 1..5), mix in proptest::collection::vec(vector(4), 4)) {
        // a random recombination of the spanning set spans the same space
        let k = vs.len();
        let mixed: Vec<Vec<Rat>> = (0..k)
            .map(|i| {
                let mut row = vs[i].clone();
                for (j, v) in vs.iter().enumerate() {
                    if j != i {
                        for (x, y) in row.iter_mut().zip(v) {
                            *x += &mix[i][j] * y;
                        }
                    }
                }
                row
            })
            .collect();
        let a = Subspace::span(5, vs.clone()).unwrap();
        let b = Subspace::span(5, mixed.into_iter().chain(vs.iter().cloned())).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dimension_formula(a in subspace(5), b in subspace(5)) {
        let s = a.sum(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
        prop_assert!(s.contains(&a).unwrap() && s.contains(&b).unwrap());
        prop_assert!(a.contains(&i).unwrap() && b.contains(&i).unwrap());
    }

    #[test]
    fn solve_returns_a_solution(m in matrix(), x in vector(5)) {
        let x = &x[..m.ncols()];
        let b = m.apply(x);
        let y = m.solve(&b).expect("consistent system");
        prop_assert_eq!(m.apply(&y), b);
    }

    #[test]
    fn sparse_rows_have_unique_keys(c in small_rat(), v in vector(6), w in vector(6)) {
        let s = genpi_core::linalg::SparseVec::from_dense(&v).axpy(&c, &genpi_core::linalg::SparseVec::from_dense(&w));
        let idx: Vec<usize> = s.entries().iter().map(|e| e.0).collect();
        prop_assert!(idx.windows(2).all(|p| p[0] < p[1]));
        prop_assert!(s.entries().iter().all(|e| !e.1.is_zero()));
    }
}
