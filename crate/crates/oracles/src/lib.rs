//! Slow reference models used to check the engine from the outside.
//!
//! Nothing here shares code with the engine's multiplication: products are
//! formed by rewriting words in the generators, and the small cases are
//! compared against hand-written models.

use std::collections::HashSet;

use isoprod_core::gf2::BitVector;
use isoprod_core::group::{Fc2Group, GroupElement, StructureTensor};

/// A word `g_{letters[0]} ··· g_{letters[k]} · h^central` in the generators.
#[derive(Debug, Clone)]
pub struct Word {
    pub letters: Vec<usize>,
    pub central: Vec<bool>,
}

impl Word {
    pub fn of(x: &GroupElement) -> Self {
        Word {
            letters: x.a().ones().collect(),
            central: (0..x.b().len()).map(|j| x.b().get(j)).collect(),
        }
    }

    /// Brings the word to normal form by adjacent moves only: `g_i g_i = 1`,
    /// and `g_i g_k = g_k g_i [g_i, g_k]` for `k < i`.
    pub fn collect(mut self, t: &StructureTensor) -> Self {
        let mut k = 0;
        while k + 1 < self.letters.len() {
            let (x, y) = (self.letters[k], self.letters[k + 1]);
            if x == y {
                self.letters.drain(k..k + 2);
                k = k.saturating_sub(1);
            } else if x > y {
                self.letters.swap(k, k + 1);
                for (j, bit) in self.central.iter_mut().enumerate() {
                    *bit ^= t.get(y, x, j);
                }
                k = k.saturating_sub(1);
            } else {
                k += 1;
            }
        }
        self
    }

    pub fn into_element(self, g: &Fc2Group) -> GroupElement {
        let mut a = BitVector::zeros(g.r());
        for i in self.letters {
            a.flip(i);
        }
        g.element(a, BitVector::from_bits(&self.central))
            .expect("word built for g")
    }
}

/// `x · y` by collecting the concatenated words.
pub fn multiply(g: &Fc2Group, x: &GroupElement, y: &GroupElement) -> GroupElement {
    let (wx, wy) = (Word::of(x), Word::of(y));
    let word = Word {
        letters: wx.letters.into_iter().chain(wy.letters).collect(),
        central: wx
            .central
            .iter()
            .zip(&wy.central)
            .map(|(p, q)| p ^ q)
            .collect(),
    };
    word.collect(g.tensor()).into_element(g)
}

/// The reversed word, collected.
pub fn inverse(g: &Fc2Group, x: &GroupElement) -> GroupElement {
    let mut w = Word::of(x);
    w.letters.reverse();
    w.collect(g.tensor()).into_element(g)
}

pub fn commutator(g: &Fc2Group, x: &GroupElement, y: &GroupElement) -> GroupElement {
    let xy = multiply(g, x, y);
    let yx = multiply(g, y, x);
    multiply(g, &inverse(g, &yx), &xy)
}

pub fn order(g: &Fc2Group, x: &GroupElement) -> u32 {
    let mut power = x.clone();
    let mut n = 1;
    while !power.is_identity() {
        power = multiply(g, &power, x);
        n += 1;
    }
    n
}

/// The dihedral group of order 8 as `r^k s^e`, with `s r s = r⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct D8 {
    pub k: u8,
    pub e: u8,
}

impl D8 {
    pub const R: D8 = D8 { k: 1, e: 0 };
    pub const S: D8 = D8 { k: 0, e: 1 };
    pub const ONE: D8 = D8 { k: 0, e: 0 };

    pub fn mul(self, other: D8) -> D8 {
        let l = if self.e == 0 {
            other.k
        } else {
            (4 - other.k) % 4
        };
        D8 {
            k: (self.k + l) % 4,
            e: self.e ^ other.e,
        }
    }

    pub fn all() -> impl Iterator<Item = D8> {
        (0..4).flat_map(|k| (0..2).map(move |e| D8 { k, e }))
    }
}

/// The map `g_1 ↦ s`, `g_2 ↦ s r`, `h_1 ↦ r²` on normal forms.
pub fn dihedral_image(x: &GroupElement) -> D8 {
    let gens = [D8::S, D8::S.mul(D8::R), D8::R.mul(D8::R)];
    let mut out = D8::ONE;
    for (bit, image) in [x.a().get(0), x.a().get(1), x.b().get(0)]
        .into_iter()
        .zip(gens)
    {
        if bit {
            out = out.mul(image);
        }
    }
    out
}

/// Whether the dihedral map is a bijective homomorphism, checked on the
/// whole Cayley table.
pub fn matches_dihedral(g: &Fc2Group) -> bool {
    if g.s() != 1 {
        return false;
    }
    let elements: Vec<GroupElement> = g.elements().collect();
    let images: HashSet<D8> = elements.iter().map(dihedral_image).collect();
    images.len() == 8
        && elements.iter().all(|x| {
            elements.iter().all(|y| {
                dihedral_image(&multiply(g, x, y)) == dihedral_image(x).mul(dihedral_image(y))
            })
        })
}

/// Whether sending `g_i` to the lift of `images[i]` extends to an
/// isomorphism `g1 → g2`, checked element by element. Exhaustive, so only
/// for small `s`.
pub fn certify_isomorphism(g1: &Fc2Group, g2: &Fc2Group, images: &[BitVector]) -> bool {
    let (r, s) = (g1.r(), g1.s());
    if g2.s() != s || images.len() != r || s > 3 {
        return false;
    }
    let x: Vec<GroupElement> = images
        .iter()
        .map(|a| {
            g2.element(a.clone(), BitVector::zeros(s))
                .expect("right shape")
        })
        .collect();
    let pair_list: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (i + 1..r).map(move |k| (i, k)))
        .collect();

    // each h_j of g1 as a product of commutators, and its image
    let mut central_images = Vec::with_capacity(s);
    for j in 0..s {
        let found = (0..1u64 << pair_list.len()).find(|mask| {
            (0..s).all(|m| {
                let bit = pair_list
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| mask >> p & 1 == 1)
                    .fold(false, |acc, (_, &(i, k))| acc ^ g1.tensor().get(i, k, m));
                bit == (m == j)
            })
        });
        let Some(mask) = found else { return false };
        let mut image = g2.identity();
        for (p, &(i, k)) in pair_list.iter().enumerate() {
            if mask >> p & 1 == 1 {
                image = multiply(g2, &image, &commutator(g2, &x[i], &x[k]));
            }
        }
        central_images.push(image);
    }

    let phi = |y: &GroupElement| {
        let mut out = g2.identity();
        for i in y.a().ones() {
            out = multiply(g2, &out, &x[i]);
        }
        for j in y.b().ones() {
            out = multiply(g2, &out, &central_images[j]);
        }
        out
    };
    let elements: Vec<GroupElement> = g1.elements().collect();
    let table: Vec<GroupElement> = elements.iter().map(phi).collect();
    if table.iter().collect::<HashSet<_>>().len() != elements.len() {
        return false;
    }
    elements.iter().enumerate().all(|(p, y)| {
        elements.iter().enumerate().all(|(q, z)| {
            let yz = multiply(g1, y, z);
            table[g1.element_index(&yz) as usize] == multiply(g2, &table[p], &table[q])
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use isoprod_core::group::make_group;

    #[test]
    fn rewriting_agrees_with_the_engine_at_s2() {
        for index in [0u64, 1, 0x801, 0xfff, 0x5a5] {
            let g = make_group(StructureTensor::from_index(2, index).unwrap());
            let elements: Vec<GroupElement> = g.elements().collect();
            for x in &elements {
                assert_eq!(inverse(&g, x), g.inverse(x).unwrap());
                assert_eq!(order(&g, x), u32::from(g.element_order(x).unwrap()));
                for y in elements.iter().step_by(7) {
                    assert_eq!(multiply(&g, x, y), g.multiply(x, y).unwrap());
                    assert_eq!(commutator(&g, x, y), g.commutator(x, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn dihedral_model() {
        assert_eq!(D8::all().count(), 8);
        assert_eq!(D8::S.mul(D8::R).mul(D8::S), D8 { k: 3, e: 0 });
        let g = make_group(StructureTensor::from_index(1, 1).unwrap());
        assert!(matches_dihedral(&g));
        let abelian = make_group(StructureTensor::from_index(1, 0).unwrap());
        assert!(!matches_dihedral(&abelian));
    }

    #[test]
    fn identity_map_is_certified() {
        let g = make_group(StructureTensor::from_index(2, 0x801).unwrap());
        let id: Vec<BitVector> = (0..4).map(|i| BitVector::unit(4, i)).collect();
        assert!(certify_isomorphism(&g, &g, &id));
        let other = make_group(StructureTensor::from_index(2, 0x802).unwrap());
        assert!(!certify_isomorphism(&g, &other, &id));
    }
}
