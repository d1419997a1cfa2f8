//! Property tests over random small matrices.

use proptest::prelude::*;

use rigx_core::budget::Budget;
use rigx_core::dims::{inner_dimension, outer_dimension};
use rigx_core::ds::LinearDs;
use rigx_core::gfmat::{distance_to_subspace, FieldMatrix, Prime, SubspaceBasis};

fn arb_matrix_over(
    primes: &'static [u64],
    max_rows: usize,
    max_cols: usize,
) -> impl Strategy<Value = FieldMatrix> {
    (prop::sample::select(primes), 1..=max_rows, 0..=max_cols).prop_flat_map(
        |(p, rows, cols)| {
            let prime = Prime::new(p).unwrap();
            prop::collection::vec(0..p as u8, rows * cols).prop_map(move |data| {
                FieldMatrix::from_entries(prime, rows, cols, data).unwrap()
            })
        },
    )
}

fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = FieldMatrix> {
    arb_matrix_over(&[2, 3, 5], max_rows, max_cols)
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in arb_matrix(5, 5)) {
        let once = m.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.rank, twice.rank);
        prop_assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn rank_is_subadditive((a, b) in arb_matrix(4, 4).prop_flat_map(|a| {
        let p = a.prime().value() as u64;
        let (rows, cols) = (a.nrows(), a.ncols());
        let b = prop::collection::vec(0..p as u8, rows * cols).prop_map(move |data| {
            FieldMatrix::from_entries(Prime::new(p).unwrap(), rows, cols, data).unwrap()
        });
        (Just(a), b)
    })) {
        let sum = a.add(&b).unwrap();
        prop_assert!(sum.rank() <= a.rank() + b.rank());
    }

    #[test]
    fn matrix_text_round_trips(m in arb_matrix(5, 5)) {
        let text = m.to_text();
        let back = FieldMatrix::from_text(&text).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn ds_text_round_trips((p0, q) in arb_matrix(4, 3).prop_flat_map(|p0| {
        let p = p0.prime().value() as u64;
        let s = p0.nrows();
        let q = prop::collection::vec(0..p as u8, 3 * s).prop_map(move |data| {
            FieldMatrix::from_entries(Prime::new(p).unwrap(), 3, s, data).unwrap()
        });
        (Just(p0), q)
    })) {
        let ds = LinearDs::new(p0, q.clone(), q.max_row_weight()).unwrap();
        let back = LinearDs::from_text(&ds.to_text()).unwrap();
        prop_assert_eq!(back, ds);
    }

    #[test]
    fn distance_zero_iff_member(m in arb_matrix(4, 4), coeffs in prop::collection::vec(0u8..5, 4)) {
        let space = SubspaceBasis::from_rows(&m);
        let p = m.prime();
        // random combination of basis rows is a member
        let mut v = vec![0u8; m.ncols()];
        for (i, &c) in coeffs.iter().take(space.dim()).enumerate() {
            let c = c % p.value();
            for j in 0..m.ncols() {
                v[j] = p.add(v[j], p.mul(c, space.basis().get(i, j)));
            }
        }
        let d = distance_to_subspace(&v, &space, Budget::default()).unwrap();
        prop_assert_eq!(d, 0);
        // and distance zero implies membership for arbitrary vectors
        let w: Vec<u8> = (0..m.ncols()).map(|j| coeffs.get(j).copied().unwrap_or(0) % p.value()).collect();
        let dw = distance_to_subspace(&w, &space, Budget::default()).unwrap();
        prop_assert_eq!(dw == 0, space.contains(&w));
    }

    #[test]
    fn dimension_bounds(m in arb_matrix_over(&[2, 3], 4, 3), t in 1usize..=2) {
        let budget = Budget::default();
        let rank = m.rank();
        let d = inner_dimension(&m, t, budget).unwrap().value;
        prop_assert!(d <= rank);
        let dd = outer_dimension(&m, t, m.nrows(), budget).unwrap().value().unwrap();
        prop_assert!(dd >= rank);
        prop_assert!(dd <= m.nrows());
    }
}
