use isoprod_core::gf2::{in_span, rank, subspace_canonical, BitMatrix, BitVector};
use proptest::prelude::*;

fn vector(len: usize) -> impl Strategy<Value = BitVector> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVector::from_bits(&b))
}

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..80, 0usize..9).prop_flat_map(|(cols, rows)| {
        proptest::collection::vec(vector(cols), rows)
            .prop_map(move |rows| BitMatrix::from_rows(cols, rows).unwrap())
    })
}

proptest! {
    #[test]
    fn rank_equals_transpose_rank(m in matrix()) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert!(rank(&m) <= m.row_count().min(m.col_count()));
    }

    #[test]
    fn in_span_iff_rank_unchanged(m in matrix(), seed in any::<u64>()) {
        let cols = m.col_count();
        let v = BitVector::from_bits(&(0..cols).map(|i| (seed.rotate_left(i as u32) & 1) == 1).collect::<Vec<_>>());
        let mut rows = m.rows().to_vec();
        let before = rank(&m);
        rows.push(v.clone());
        let after = rank(&BitMatrix::from_rows(cols, rows).unwrap());
        prop_assert_eq!(in_span(&v, m.rows()).unwrap(), before == after);
    }

    #[test]
    fn sums_of_rows_are_in_span(m in matrix(), mask in any::<u16>()) {
        let mut v = BitVector::zeros(m.col_count());
        for (k, row) in m.rows().iter().enumerate() {
            if mask >> k & 1 == 1 {
                v.xor_assign(row).unwrap();
            }
        }
        prop_assert!(in_span(&v, m.rows()).unwrap());
    }

    #[test]
    fn null_space_is_the_kernel(m in matrix()) {
        let kernel = m.null_space();
        prop_assert_eq!(kernel.len(), m.col_count() - rank(&m));
        for x in &kernel {
            prop_assert!(m.mul_vec(x).unwrap().is_zero());
        }
        let basis = BitMatrix::from_rows(m.col_count(), kernel.clone()).unwrap();
        prop_assert_eq!(rank(&basis), kernel.len());
    }

    #[test]
    fn canonical_form_ignores_the_basis(m in matrix(), ops in proptest::collection::vec((0usize..9, 0usize..9), 0..20)) {
        let cols = m.col_count();
        let mut rows = m.rows().to_vec();
        let n = rows.len();
        for (i, j) in ops {
            if n >= 2 {
                let (i, j) = (i % n, j % n);
                if i != j {
                    let rj = rows[j].clone();
                    rows[i].xor_assign(&rj).unwrap();
                } else {
                    rows.swap(i, (i + 1) % n);
                }
            }
        }
        prop_assert_eq!(
            subspace_canonical(cols, m.rows()).unwrap(),
            subspace_canonical(cols, &rows).unwrap()
        );
    }

    #[test]
    fn hex_round_trip(v in (1usize..200).prop_flat_map(vector)) {
        let text = v.to_hex();
        prop_assert!(text.starts_with("0x"));
        prop_assert_eq!(BitVector::from_hex(v.len(), &text).unwrap(), v);
    }

    #[test]
    fn addition_and_dot_are_bilinear(
        (x, y, z) in (1usize..130).prop_flat_map(|n| (vector(n), vector(n), vector(n)))
    ) {
        let xy = x.add(&y).unwrap();
        prop_assert_eq!(xy.clone(), y.add(&x).unwrap());
        prop_assert_eq!(xy.add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(xy.dot(&z).unwrap(), x.dot(&z).unwrap() ^ y.dot(&z).unwrap());
        prop_assert!(x.add(&x).unwrap().is_zero());
    }
}

#[test]
fn mismatched_lengths_are_errors() {
    let a = BitVector::zeros(3);
    let b = BitVector::zeros(4);
    assert!(a.add(&b).is_err());
    assert!(a.dot(&b).is_err());
    assert!(BitMatrix::from_rows(3, vec![b]).is_err());
}
