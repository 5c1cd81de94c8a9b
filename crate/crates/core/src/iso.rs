//! Isomorphism testing between groups of the family by backtracking.
//!
//! A homomorphism out of an independent group is fixed by the images
//! `x_1, …, x_2s` of the `g_i`. By von Dyck it exists iff every `x_i` is an
//! involution (or trivial) and the map `c(i, i', ·) ↦ [x_i, x_i']` extends to
//! a linear map `H → H'`. It is an isomorphism iff the images of the `x_i`
//! in the Frattini quotient are independent.
//!
//! Squares and commutators only see the `a`-part of an element, so the
//! search may restrict each `x_i` to `b = 0`.

use crate::gf2::{BitMatrix, BitVector, EchelonBasis};
use crate::group::{pairs, Fc2Group, GroupError};

/// Whether `g1 ≅ g2`. Both groups must be independent family members.
pub fn is_isomorphic(g1: &Fc2Group, g2: &Fc2Group) -> Result<bool, GroupError> {
    if g1.s() != g2.s() {
        return Ok(false);
    }
    if !g1.is_independent() || !g2.is_independent() {
        return Err(GroupError::NotIndependent);
    }
    if g1.derived_rank() != g2.derived_rank() || fingerprint(g1) != fingerprint(g2) {
        return Ok(false);
    }
    Ok(find_isomorphism(g1, g2).is_some())
}

/// An isomorphism invariant: for every nonzero functional `λ` on `H`, the
/// rank of the alternating form `λ ∘ [·,·]` and the number of zeros of the
/// quadratic form `λ ∘ (x ↦ x²)`, as a sorted list.
pub fn fingerprint(g: &Fc2Group) -> Vec<(usize, u64)> {
    let (r, s) = (g.r(), g.s());
    assert!(r < 32 && s < 32, "fingerprint is limited to s < 16");
    let squares: Vec<BitVector> = (0..1u64 << r)
        .map(|k| g.square_form(&BitVector::from_u64(r, k)))
        .collect();
    let mut out: Vec<(usize, u64)> = (1..1u64 << s)
        .map(|l| {
            let lambda = BitVector::from_u64(s, l);
            let zeros = squares.iter().filter(|v| !v.dot_unchecked(&lambda)).count() as u64;
            let mut form = BitMatrix::zero(r, r);
            for (i, i2) in pairs(r) {
                if g.tensor().column(i, i2).dot_unchecked(&lambda) {
                    form.set(i, i2, true);
                    form.set(i2, i, true);
                }
            }
            (form.rank(), zeros)
        })
        .collect();
    out.sort_unstable();
    out
}

/// `a`-parts of the images of `g_1, …, g_2s` under some isomorphism `g1 → g2`.
pub fn find_isomorphism(g1: &Fc2Group, g2: &Fc2Group) -> Option<Vec<BitVector>> {
    let r = g1.r();
    assert!(r < 32, "backtracking search is limited to s < 16");
    let candidates: Vec<BitVector> = (1..1u64 << r)
        .map(|k| BitVector::from_u64(r, k))
        .filter(|a| g2.square_form(a).is_zero())
        .collect();
    let mut search = Search {
        g1,
        g2,
        candidates,
        images: Vec::with_capacity(r),
        frattini: EchelonBasis::new(r),
        relations: Relations::default(),
    };
    if search.extend() {
        Some(search.images)
    } else {
        None
    }
}

struct Search<'a> {
    g1: &'a Fc2Group,
    g2: &'a Fc2Group,
    candidates: Vec<BitVector>,
    images: Vec<BitVector>,
    frattini: EchelonBasis,
    relations: Relations,
}

impl Search<'_> {
    fn extend(&mut self) -> bool {
        let k = self.images.len();
        if k == self.g1.r() {
            return true;
        }
        for idx in 0..self.candidates.len() {
            let x = self.candidates[idx].clone();
            if self.frattini.contains(&x) {
                continue;
            }
            let saved = self.relations.mark();
            let consistent = (0..k).all(|i| {
                let source = self.g1.tensor().column(i, k);
                let target = self.g2.commutator_form(&self.images[i], &x);
                self.relations.add(&source, &target)
            });
            if consistent {
                self.frattini.insert(&x);
                self.images.push(x);
                if self.extend() {
                    return true;
                }
                self.images.pop();
                self.frattini.pop();
            }
            self.relations.reset(saved);
        }
        false
    }
}

/// Partial linear map `H → H'` recorded as echelon pairs `(source, target)`.
#[derive(Default)]
struct Relations {
    rows: Vec<(usize, BitVector, BitVector)>,
}

impl Relations {
    fn mark(&self) -> usize {
        self.rows.len()
    }

    fn reset(&mut self, mark: usize) {
        self.rows.truncate(mark);
    }

    /// Records `source ↦ target`; false if this contradicts earlier pairs.
    fn add(&mut self, source: &BitVector, target: &BitVector) -> bool {
        let mut v = source.clone();
        let mut w = target.clone();
        for (p, bv, bw) in &self.rows {
            if v.get(*p) {
                v.xor_unchecked(bv);
                w.xor_unchecked(bw);
            }
        }
        match v.first_one() {
            Some(p) => {
                self.rows.push((p, v, w));
                true
            }
            None => w.is_zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, StructureTensor};

    fn tensor_s2(index: u64) -> StructureTensor {
        StructureTensor::from_index(2, index).unwrap()
    }

    #[test]
    fn every_group_is_isomorphic_to_itself() {
        for index in [0x801u64, 0x021, 0x3f1, 0x6a5] {
            let g = make_group(tensor_s2(index));
            if g.is_independent() {
                assert!(is_isomorphic(&g, &g).unwrap());
            }
        }
    }

    #[test]
    fn swapping_h_labels_gives_isomorphic_group() {
        let t = tensor_s2(0x6a5);
        let swapped =
            StructureTensor::from_vectors(2, vec![t.c_vector(1).clone(), t.c_vector(0).clone()])
                .unwrap();
        let (g1, g2) = (make_group(t), make_group(swapped));
        assert!(g1.is_independent());
        assert!(is_isomorphic(&g1, &g2).unwrap());
    }

    #[test]
    fn different_orders_are_not_isomorphic() {
        let mut t1 = StructureTensor::zero(1).unwrap();
        t1.set(0, 1, 0, true);
        let g1 = make_group(t1);
        let g2 = make_group(tensor_s2(0x801));
        assert!(!is_isomorphic(&g1, &g2).unwrap());
    }

    #[test]
    fn dependent_groups_are_rejected() {
        let g = make_group(tensor_s2(0));
        assert_eq!(is_isomorphic(&g, &g), Err(GroupError::NotIndependent));
    }
}
