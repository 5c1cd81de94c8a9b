use std::collections::BTreeSet;

use isoprod_core::census::relabel;
use isoprod_core::gf2::{BitMatrix, BitVector};
use isoprod_core::group::{make_group, pair_count, Fc2Group, GroupElement, StructureTensor};
use isoprod_core::iso::is_isomorphic;
use proptest::prelude::*;

fn tensor(s: usize) -> impl Strategy<Value = StructureTensor> {
    proptest::collection::vec(any::<bool>(), s * pair_count(s)).prop_map(move |bits| {
        let c = (0..s)
            .map(|j| {
                BitVector::from_bits(
                    &(0..pair_count(s))
                        .map(|p| bits[p * s + j])
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        StructureTensor::from_vectors(s, c).unwrap()
    })
}

fn group_and_elements(s: usize, k: usize) -> impl Strategy<Value = (Fc2Group, Vec<GroupElement>)> {
    (tensor(s), proptest::collection::vec(0u64..1 << (3 * s), k)).prop_map(|(t, idx)| {
        let g = make_group(t);
        let xs = idx.iter().map(|&i| g.element_from_index(i)).collect();
        (g, xs)
    })
}

proptest! {
    #[test]
    fn group_axioms((g, xs) in (2usize..=4).prop_flat_map(|s| group_and_elements(s, 3))) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        let left = g.multiply(&g.multiply(x, y).unwrap(), z).unwrap();
        let right = g.multiply(x, &g.multiply(y, z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(g.multiply(x, &g.identity()).unwrap(), x.clone());
        prop_assert_eq!(g.multiply(&g.identity(), x).unwrap(), x.clone());
        prop_assert!(g.multiply(x, &g.inverse(x).unwrap()).unwrap().is_identity());
        prop_assert!(g.multiply(&g.inverse(x).unwrap(), x).unwrap().is_identity());
    }

    #[test]
    fn element_order_is_exact((g, xs) in (1usize..=4).prop_flat_map(|s| group_and_elements(s, 1))) {
        let x = &xs[0];
        let n = g.element_order(x).unwrap();
        prop_assert!([1, 2, 4].contains(&n));
        let mut power = g.identity();
        for k in 1..=n {
            power = g.multiply(&power, x).unwrap();
            prop_assert_eq!(power.is_identity(), k == n);
        }
    }

    #[test]
    fn commutators_are_central_and_bilinear((g, xs) in (2usize..=4).prop_flat_map(|s| group_and_elements(s, 3))) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        let c = g.commutator(x, y).unwrap();
        prop_assert!(c.is_central_part());
        prop_assert_eq!(g.multiply(&c, z).unwrap(), g.multiply(z, &c).unwrap());
        // [xz, y] = [x, y][z, y] in class 2
        let xz = g.multiply(x, z).unwrap();
        let lhs = g.commutator(&xz, y).unwrap();
        let rhs = g.multiply(&c, &g.commutator(z, y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugacy_class_matches_brute_force((g, xs) in group_and_elements(2, 1)) {
        let x = &xs[0];
        let brute: BTreeSet<GroupElement> = g.elements().map(|t| g.conjugate(x, &t).unwrap()).collect();
        prop_assert_eq!(g.conjugacy_class(x).unwrap(), brute);
    }

    #[test]
    fn fast_generation_matches_closure((g, xs) in (1usize..=2).prop_flat_map(|s| group_and_elements(s, 4))) {
        let closure = g.subgroup_generated(&xs).unwrap() as u64;
        prop_assert_eq!(g.generates(&xs).unwrap(), closure == g.order());
    }

    #[test]
    fn order_statistics_match_brute_force(t in tensor(2)) {
        let g = make_group(t);
        let mut counts = [0u64; 3];
        for x in g.elements() {
            counts[match g.element_order(&x).unwrap() { 1 => 0, 2 => 1, _ => 2 }] += 1;
        }
        prop_assert_eq!(g.order_statistics(), counts);
    }

    #[test]
    fn hex_round_trips((g, xs) in (1usize..=5).prop_flat_map(|s| group_and_elements(s, 1))) {
        let t = g.tensor();
        prop_assert_eq!(&StructureTensor::from_hex(&t.to_hex()).unwrap(), t);
        prop_assert_eq!(&t.to_string().parse::<StructureTensor>().unwrap(), t);
        prop_assert_eq!(&g.parse_element(&xs[0].to_hex()).unwrap(), &xs[0]);
    }

    #[test]
    fn relabeling_gives_an_isomorphic_group(t in tensor(2), seed in any::<u64>()) {
        let g = make_group(t);
        prop_assume!(g.is_independent());
        // images with trivial squares that still span the quotient
        let r = g.r();
        let candidates: Vec<BitVector> = (1..1u64 << r)
            .map(|k| BitVector::from_u64(r, k))
            .filter(|a| g.square_form(a).is_zero())
            .collect();
        let mut images = Vec::new();
        let mut state = seed;
        for _ in 0..200 {
            if images.len() == r {
                break;
            }
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let pick = candidates[(state >> 33) as usize % candidates.len()].clone();
            let mut trial = images.clone();
            trial.push(pick.clone());
            if BitMatrix::from_rows(r, trial).unwrap().rank() == images.len() + 1 {
                images.push(pick);
            }
        }
        prop_assume!(images.len() == r);
        let other = make_group(relabel(&g, &images));
        prop_assert!(other.is_independent());
        prop_assert!(is_isomorphic(&g, &other).unwrap());
    }
}

#[test]
fn axioms_exhaustive_at_s1() {
    for index in 0..2 {
        let g = make_group(StructureTensor::from_index(1, index).unwrap());
        let all: Vec<GroupElement> = g.elements().collect();
        for x in &all {
            for y in &all {
                let xy = g.multiply(x, y).unwrap();
                for z in &all {
                    assert_eq!(
                        g.multiply(&xy, z).unwrap(),
                        g.multiply(x, &g.multiply(y, z).unwrap()).unwrap()
                    );
                }
            }
            assert!(g.multiply(x, &g.inverse(x).unwrap()).unwrap().is_identity());
        }
    }
}

#[test]
fn independence_matches_generation_by_the_g_i() {
    for index in 0..1u64 << 12 {
        let g = make_group(StructureTensor::from_index(2, index).unwrap());
        let gens: Vec<GroupElement> = (0..4).map(|i| g.gen(i)).collect();
        let generated = g.closure(&gens).unwrap().len() as u64 == g.order();
        assert_eq!(g.is_independent(), generated, "tensor {index:#x}");
    }
}
