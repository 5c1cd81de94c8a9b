//! The three explicit generating vectors and the conditions under which
//! they have the claimed types.
//!
//! Entries are words in the `g_i`, so they are built once against the
//! [`Class2`] interface and evaluated either in a concrete group or in the
//! universal group, whose centre is the pair space itself. In the universal
//! group the square of a word is a vector `e` of pairs, and in the group of a
//! tensor it becomes `h^b` with `b_j = e · c_j`. Requiring all squares to
//! vanish is therefore a linear system on each `c_j` separately.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector};
use crate::group::{pair_count, pair_index, Fc2Group, GroupElement, StructureTensor};
use crate::invariants::{self, SurfaceInvariants};
use crate::ramification::{
    self, long_relation_product, GeneratorSystem, RamificationError, TypeSignature,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{construction} is undefined for s={s}: {reason}")]
    Undefined {
        construction: ConstructionId,
        s: usize,
        reason: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstructionId {
    T1,
    T2,
    V2 { q: usize },
}

impl ConstructionId {
    /// `T2` for `q = 0`, otherwise `V2` with that `q`.
    pub fn second(q: usize) -> Self {
        if q == 0 {
            Self::T2
        } else {
            Self::V2 { q }
        }
    }

    pub fn check_defined(self, s: usize) -> Result<(), ConstructionError> {
        let undefined = |reason| {
            Err(ConstructionError::Undefined {
                construction: self,
                s,
                reason,
            })
        };
        match self {
            Self::T1 if s == 0 => undefined("needs s >= 1"),
            Self::T1 => Ok(()),
            Self::T2 if s < 3 => undefined("the index pattern g_s g_2 g_3 needs s >= 3"),
            Self::T2 => Ok(()),
            Self::V2 { q } if q == 0 => undefined("needs q >= 1"),
            Self::V2 { .. } if s < 3 => undefined("needs s >= 3"),
            Self::V2 { q } if q + 2 > s => undefined("needs q <= s - 2"),
            Self::V2 { .. } => Ok(()),
        }
    }
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::T1 => write!(f, "T1"),
            Self::T2 => write!(f, "T2"),
            Self::V2 { q } => write!(f, "V2(q={q})"),
        }
    }
}

impl Serialize for ConstructionId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Just enough of a class-2 group to evaluate the construction words.
pub trait Class2 {
    type Elem: Clone;
    fn generator(&self, i: usize) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Self::Elem;

    fn word(&self, letters: &[usize]) -> Self::Elem {
        let mut acc = self.generator(letters[0]);
        for &i in &letters[1..] {
            acc = self.mul(&acc, &self.generator(i));
        }
        acc
    }

    /// `x⁻¹ y⁻¹ x y`.
    fn comm(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let xy = self.mul(x, y);
        self.mul(&self.inv(&self.mul(y, x)), &xy)
    }
}

impl Class2 for Fc2Group {
    type Elem = GroupElement;

    fn generator(&self, i: usize) -> GroupElement {
        self.gen(i)
    }

    fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.multiply(x, y)
            .expect("construction words stay in the group")
    }

    fn inv(&self, x: &GroupElement) -> GroupElement {
        self.inverse(x)
            .expect("construction words stay in the group")
    }
}

/// The free class-2 group on `n` involutions with elementary abelian centre:
/// elements are `(a, z)` with `z` in the pair space.
#[derive(Debug, Clone)]
pub struct UniversalGroup {
    n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalElement {
    pub a: BitVector,
    pub z: BitVector,
}

impl UniversalGroup {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    fn collection(&self, a1: &BitVector, a2: &BitVector) -> BitVector {
        let mut z = BitVector::zeros(self.n * (self.n - 1) / 2);
        for i in a1.ones() {
            for i2 in a2.ones().take_while(|&i2| i2 < i) {
                z.flip(pair_index(self.n, i2, i));
            }
        }
        z
    }

    /// `z`-part of `x²`.
    pub fn square_z(&self, x: &UniversalElement) -> BitVector {
        self.mul(x, x).z
    }
}

impl Class2 for UniversalGroup {
    type Elem = UniversalElement;

    fn generator(&self, i: usize) -> UniversalElement {
        UniversalElement {
            a: BitVector::unit(self.n, i),
            z: BitVector::zeros(self.n * (self.n - 1) / 2),
        }
    }

    fn mul(&self, x: &UniversalElement, y: &UniversalElement) -> UniversalElement {
        let mut z = x.z.add(&y.z).expect("same pair space");
        z.xor_assign(&self.collection(&x.a, &y.a))
            .expect("same pair space");
        UniversalElement {
            a: x.a.add(&y.a).expect("same rank"),
            z,
        }
    }

    fn inv(&self, x: &UniversalElement) -> UniversalElement {
        let mut z = x.z.clone();
        z.xor_assign(&self.collection(&x.a, &x.a))
            .expect("same pair space");
        UniversalElement { a: x.a.clone(), z }
    }
}

/// Handles and spherical entries of a construction, over any class-2 group.
pub struct Words<E> {
    pub handles: Vec<(E, E)>,
    pub spherical: Vec<E>,
}

/// `(g_1, …, g_s, ḡ_s, g_{s+1}, …, g_2s, ḡ_2s)` with
/// `ḡ_s = (g_1 ⋯ g_s)⁻¹` and `ḡ_2s = (g_{s+1} ⋯ g_2s)⁻¹`.
pub fn t1_words<G: Class2>(g: &G, s: usize) -> Words<G::Elem> {
    let mut spherical = Vec::with_capacity(2 * s + 2);
    for o in [0, s] {
        let letters: Vec<usize> = (o..o + s).collect();
        spherical.extend(letters.iter().map(|&i| g.generator(i)));
        spherical.push(g.inv(&g.word(&letters)));
    }
    Words {
        handles: Vec::new(),
        spherical,
    }
}

/// Per half: `g_1g_2, …, g_{s−1}g_s, g_s g_2 g_3, (g_1 g_2 g_3)⁻¹`.
pub fn t2_words<G: Class2>(g: &G, s: usize) -> Words<G::Elem> {
    assert!(s >= 3);
    let mut spherical = Vec::with_capacity(2 * s + 2);
    for o in [0, s] {
        for i in 0..s - 1 {
            spherical.push(g.word(&[o + i, o + i + 1]));
        }
        spherical.push(g.word(&[o + s - 1, o + 1, o + 2]));
        spherical.push(g.inv(&g.word(&[o, o + 1, o + 2])));
    }
    Words {
        handles: Vec::new(),
        spherical,
    }
}

/// Spherical part `g_1g_2, …, g_{s−q}g_{s−q+1}, g_{s−q+1}g_1`, the same on
/// the second half with `h = ∏_{i ≤ q} [g_{s−i+1}, g_{2s−i+1}]` multiplied
/// into the last entry, and handles `(g_{s−i+1}, g_{2s−i+1})` for `i = 1…q`.
pub fn v2_words<G: Class2>(g: &G, s: usize, q: usize) -> Words<G::Elem> {
    assert!(q >= 1 && q + 2 <= s);
    let handles: Vec<_> = (1..=q)
        .map(|i| (g.generator(s - i), g.generator(2 * s - i)))
        .collect();
    let mut h = g.comm(&handles[0].0, &handles[0].1);
    for (a, b) in &handles[1..] {
        h = g.mul(&h, &g.comm(a, b));
    }
    let mut spherical = Vec::with_capacity(2 * (s - q) + 2);
    for o in [0, s] {
        for k in 0..s - q {
            spherical.push(g.word(&[o + k, o + k + 1]));
        }
        spherical.push(g.word(&[o + s - q, o]));
    }
    let last = spherical.pop().expect("nonempty");
    spherical.push(g.mul(&last, &h));
    Words { handles, spherical }
}

pub fn words<G: Class2>(
    g: &G,
    s: usize,
    id: ConstructionId,
) -> Result<Words<G::Elem>, ConstructionError> {
    id.check_defined(s)?;
    Ok(match id {
        ConstructionId::T1 => t1_words(g, s),
        ConstructionId::T2 => t2_words(g, s),
        ConstructionId::V2 { q } => v2_words(g, s, q),
    })
}

pub fn build(g: &Fc2Group, id: ConstructionId) -> Result<GeneratorSystem, ConstructionError> {
    let w = words(g, g.s(), id)?;
    Ok(if w.handles.is_empty() {
        GeneratorSystem::spherical(w.spherical)
    } else {
        GeneratorSystem::with_handles(w.handles, w.spherical)
    })
}

pub fn build_t1(g: &Fc2Group) -> GeneratorSystem {
    build(g, ConstructionId::T1).expect("T1 is defined for every s >= 1")
}

pub fn build_t2_regular(g: &Fc2Group) -> Result<GeneratorSystem, ConstructionError> {
    build(g, ConstructionId::T2)
}

pub fn build_v2_irregular(g: &Fc2Group, q: usize) -> Result<GeneratorSystem, ConstructionError> {
    build(g, ConstructionId::V2 { q })
}

/// Linear conditions on the tensor bits `c(i, i', j)`.
///
/// Each stored equation `e` is a vector over the pairs and stands for the
/// `s` conditions `e · c_j = 0`, one per `j`; the solution set is `W^s` for
/// the common null space `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraintSystem {
    s: usize,
    equations: Vec<BitVector>,
    labels: Vec<String>,
}

impl LinearConstraintSystem {
    pub fn unconstrained(s: usize) -> Self {
        Self {
            s,
            equations: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn pair_len(&self) -> usize {
        pair_count(self.s)
    }

    pub fn equations(&self) -> &[BitVector] {
        &self.equations
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `s · (2s choose 2)`.
    pub fn unknown_count(&self) -> usize {
        self.s * self.pair_len()
    }

    fn matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.pair_len(), self.equations.clone()).expect("pair-space rows")
    }

    /// Rank over the unknowns of a single `c_j`.
    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }

    /// Basis of `W`.
    pub fn solution_basis(&self) -> Vec<BitVector> {
        self.matrix().null_space()
    }

    pub fn free_bits(&self) -> usize {
        self.s * (self.pair_len() - self.rank())
    }

    /// `2^(free bits)`.
    pub fn solution_count(&self) -> BigUint {
        BigUint::one() << self.free_bits()
    }

    /// Solutions whose `c_j` are independent: `∏_{l<s} (2^dim W − 2^l)`.
    pub fn independent_solution_count(&self) -> BigUint {
        let w = self.pair_len() - self.rank();
        let mut count = BigUint::one();
        for l in 0..self.s {
            if l >= w {
                return BigUint::zero();
            }
            count *= (BigUint::one() << w) - (BigUint::one() << l);
        }
        count
    }

    pub fn is_satisfied(&self, t: &StructureTensor) -> bool {
        t.s() == self.s
            && self
                .equations
                .iter()
                .all(|e| t.c_vectors().iter().all(|c| !e.dot(c).expect("pair space")))
    }

    /// A uniform solution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> StructureTensor {
        let basis = self.solution_basis();
        let c = (0..self.s)
            .map(|_| {
                let mut v = BitVector::zeros(self.pair_len());
                for b in &basis {
                    if rng.gen::<bool>() {
                        v.xor_assign(b).expect("pair space");
                    }
                }
                v
            })
            .collect();
        StructureTensor::from_vectors(self.s, c).expect("pair-space vectors")
    }

    /// A uniform independent solution, or `None` when `dim W < s`.
    pub fn sample_independent<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<StructureTensor> {
        if self.pair_len() - self.rank() < self.s {
            return None;
        }
        loop {
            let t = self.sample(rng);
            if t.is_independent() {
                return Some(t);
            }
        }
    }

    /// Both systems at once.
    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.s, other.s);
        Self {
            s: self.s,
            equations: self
                .equations
                .iter()
                .chain(&other.equations)
                .cloned()
                .collect(),
            labels: self.labels.iter().chain(&other.labels).cloned().collect(),
        }
    }
}

/// The conditions under which every spherical entry of `id` squares to 1.
pub fn order2_constraints(
    s: usize,
    id: ConstructionId,
) -> Result<LinearConstraintSystem, ConstructionError> {
    let u = UniversalGroup::new(2 * s);
    let w = words(&u, s, id)?;
    let mut system = LinearConstraintSystem::unconstrained(s);
    for (k, x) in w.spherical.iter().enumerate() {
        let e = u.square_z(x);
        if !e.is_zero() {
            system.equations.push(e);
            system.labels.push(format!("{id} entry {}", k + 1));
        }
    }
    Ok(system)
}

/// Constraints for `T1` together with the second construction for `q`,
/// falling back to `T1` alone when the second one is undefined.
pub fn pair_constraints(s: usize, q: usize) -> LinearConstraintSystem {
    let first = order2_constraints(s, ConstructionId::T1).expect("T1 is defined for s >= 1");
    match order2_constraints(s, ConstructionId::second(q)) {
        Ok(second) => first.union(&second),
        Err(_) => first,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub construction: ConstructionId,
    pub defined: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub order_2_ok: Vec<bool>,
    pub generation_ok: bool,
    pub relation_ok: bool,
}

impl SystemReport {
    fn flags_ok(&self) -> bool {
        self.defined && self.order_2_ok.iter().all(|&b| b) && self.generation_ok && self.relation_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionOutcome {
    Holds,
    Fails,
    Inapplicable,
    NotRun,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    pub tensor: StructureTensor,
    pub s: usize,
    pub q: usize,
    pub systems: [SystemReport; 2],
    pub actual_types: [Option<TypeSignature>; 2],
    pub expected_types: Option<[TypeSignature; 2]>,
    pub disjointness_ok: bool,
    pub criterion: CriterionOutcome,
    pub admissible_ok: bool,
    pub all_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<SurfaceInvariants>,
}

fn examine(
    g: &Fc2Group,
    id: ConstructionId,
) -> (SystemReport, Option<GeneratorSystem>, Option<TypeSignature>) {
    match build(g, id) {
        Err(e) => (
            SystemReport {
                construction: id,
                defined: false,
                error: Some(e.to_string()),
                order_2_ok: Vec::new(),
                generation_ok: false,
                relation_ok: false,
            },
            None,
            None,
        ),
        Ok(sys) => {
            let order_2_ok = sys
                .spherical
                .iter()
                .map(|c| g.element_order(c).expect("built in g") == 2)
                .collect();
            let generation_ok = g.generates(&sys.entries()).expect("built in g");
            let relation_ok = long_relation_product(g, &sys)
                .expect("built in g")
                .is_identity();
            let actual = ramification::validate_system(g, &sys).ok();
            (
                SystemReport {
                    construction: id,
                    defined: true,
                    error: None,
                    order_2_ok,
                    generation_ok,
                    relation_ok,
                },
                Some(sys),
                actual,
            )
        }
    }
}

/// Builds `T1` and the second system for `q`, and records every check.
pub fn construction_validity(g: &Fc2Group, q: usize) -> ConstructionReport {
    let s = g.s();
    let (r1, sys1, t1) = examine(g, ConstructionId::T1);
    let (r2, sys2, t2) = examine(g, ConstructionId::second(q));
    let expected_types = (s >= 1 && q + 1 <= s).then(|| {
        let (a, b) = invariants::theorem_types(s as u32, q as u32);
        [a, b]
    });

    let (disjointness_ok, criterion) = match (&sys1, &sys2) {
        (Some(a), Some(b)) => {
            let disjoint = ramification::are_disjoint(g, a, b).expect("built in g");
            let criterion = match ramification::lemma_criterion(g, a, b) {
                Ok(true) => CriterionOutcome::Holds,
                Ok(false) => CriterionOutcome::Fails,
                Err(RamificationError::CriterionInapplicable { .. }) => {
                    CriterionOutcome::Inapplicable
                }
                Err(e) => panic!("criterion on systems built in g: {e}"),
            };
            (disjoint, criterion)
        }
        _ => (false, CriterionOutcome::NotRun),
    };

    let order = invariants::family_order(s as u32);
    let admissible_ok = match (&t1, &t2) {
        (Some(a), Some(b)) => {
            ramification::is_admissible(&order, a) && ramification::is_admissible(&order, b)
        }
        _ => false,
    };
    let types_match = match (&expected_types, &t1, &t2) {
        (Some([e1, e2]), Some(a), Some(b)) => e1 == a && e2 == b,
        _ => false,
    };
    let all_ok = r1.flags_ok() && r2.flags_ok() && disjointness_ok && admissible_ok && types_match;
    let invariants = match (&t1, &t2) {
        (Some(a), Some(b)) if all_ok => invariants::surface_invariants(&order, a, b).ok(),
        _ => None,
    };
    ConstructionReport {
        tensor: g.tensor().clone(),
        s,
        q,
        systems: [r1, r2],
        actual_types: [t1, t2],
        expected_types,
        disjointness_ok,
        criterion,
        admissible_ok,
        all_ok,
        invariants,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair(s: usize, i: usize, i2: usize) -> BitVector {
        BitVector::unit(pair_count(s), pair_index(2 * s, i, i2))
    }

    #[test]
    fn t1_shape_and_phi_images_at_s2() {
        let g = make_group(StructureTensor::from_index(2, 0b1000_0000_0001).unwrap());
        let sys = build_t1(&g);
        assert_eq!(sys.genus_prime, 0);
        assert_eq!(sys.spherical.len(), 6);
        let images: Vec<u64> = sys.spherical.iter().map(|x| x.a().to_u64()).collect();
        assert_eq!(images, vec![0b0001, 0b0010, 0b0011, 0b0100, 0b1000, 0b1100]);
        assert!(long_relation_product(&g, &sys).unwrap().is_identity());
    }

    #[test]
    fn t2_entries_at_s4() {
        let g = make_group(StructureTensor::zero(4).unwrap());
        let sys = build_t2_regular(&g).unwrap();
        let images: Vec<u64> = sys.spherical.iter().map(|x| x.a().to_u64()).collect();
        let e = |is: &[usize]| is.iter().fold(0u64, |acc, i| acc ^ (1 << (i - 1)));
        assert_eq!(
            images,
            vec![
                e(&[1, 2]),
                e(&[2, 3]),
                e(&[3, 4]),
                e(&[4, 2, 3]),
                e(&[1, 2, 3]),
                e(&[5, 6]),
                e(&[6, 7]),
                e(&[7, 8]),
                e(&[8, 6, 7]),
                e(&[5, 6, 7]),
            ]
        );
        let rank = BitMatrix::from_rows(8, sys.spherical.iter().map(|x| x.a().clone()).collect())
            .unwrap()
            .rank();
        assert_eq!(rank, 8);
    }

    #[test]
    fn undefined_constructions() {
        let g1 = make_group(StructureTensor::from_index(1, 1).unwrap());
        let g2 = make_group(StructureTensor::from_index(2, 1).unwrap());
        assert!(build_t2_regular(&g1).is_err());
        assert!(build_t2_regular(&g2).is_err());
        assert!(build_v2_irregular(&g2, 1).is_err());
        let g4 = make_group(StructureTensor::zero(4).unwrap());
        assert!(build_v2_irregular(&g4, 0).is_err());
        assert!(build_v2_irregular(&g4, 3).is_err());
        assert!(build_v2_irregular(&g4, 2).is_ok());
    }

    #[test]
    fn v2_shape_at_s4_q1() {
        let g = make_group(StructureTensor::zero(4).unwrap());
        let sys = build_v2_irregular(&g, 1).unwrap();
        assert_eq!(sys.genus_prime, 1);
        assert_eq!(sys.handles, vec![(g.gen(3), g.gen(7))]);
        let e = |is: &[usize]| is.iter().fold(0u64, |acc, i| acc ^ (1 << (i - 1)));
        let images: Vec<u64> = sys.spherical.iter().map(|x| x.a().to_u64()).collect();
        assert_eq!(
            images,
            vec![
                e(&[1, 2]),
                e(&[2, 3]),
                e(&[3, 4]),
                e(&[4, 1]),
                e(&[5, 6]),
                e(&[6, 7]),
                e(&[7, 8]),
                e(&[8, 5]),
            ]
        );
    }

    #[test]
    fn single_generator_entries_give_no_equations() {
        let u = UniversalGroup::new(4);
        assert!(u.square_z(&u.generator(2)).is_zero());
        // (g1 g2)² = [g2, g1]
        assert_eq!(u.square_z(&u.word(&[0, 1])), pair(2, 0, 1));
    }

    #[test]
    fn t1_equations_at_s2() {
        let sys = order2_constraints(2, ConstructionId::T1).unwrap();
        assert_eq!(sys.equations(), &[pair(2, 0, 1), pair(2, 2, 3)]);
        assert_eq!(sys.rank(), 2);
        assert_eq!(sys.free_bits(), 8);
        assert_eq!(sys.solution_count(), BigUint::from(256u32));
        assert_eq!(sys.independent_solution_count(), BigUint::from(15u32 * 14));
    }

    #[test]
    fn universal_words_map_onto_concrete_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = 4;
        let u = UniversalGroup::new(2 * s);
        for _ in 0..10 {
            let t = LinearConstraintSystem::unconstrained(s).sample(&mut rng);
            let g = make_group(t.clone());
            for id in [
                ConstructionId::T1,
                ConstructionId::T2,
                ConstructionId::V2 { q: 2 },
            ] {
                let concrete = words(&g, s, id).unwrap();
                let symbolic = words(&u, s, id).unwrap();
                for (x, y) in concrete.spherical.iter().zip(&symbolic.spherical) {
                    assert_eq!(x.a(), &y.a);
                    let b: Vec<bool> = t.c_vectors().iter().map(|c| y.z.dot(c).unwrap()).collect();
                    assert_eq!(x.b(), &BitVector::from_bits(&b));
                }
            }
        }
    }

    #[test]
    fn sampled_solutions_satisfy_and_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (s, q) in [(4, 0), (4, 1), (4, 2), (5, 0)] {
            let system = pair_constraints(s, q);
            for _ in 0..5 {
                let t = system.sample_independent(&mut rng).unwrap();
                assert!(system.is_satisfied(&t));
                let report = construction_validity(&make_group(t), q);
                assert!(report.all_ok, "{}", serde_json::to_string(&report).unwrap());
                let chi = report.invariants.unwrap().chi;
                assert_eq!(
                    chi,
                    invariants::closed_form_chi(s as u32, q as u32).unwrap()
                );
            }
        }
    }

    #[test]
    fn s1_report_records_undefined_second_system() {
        let g = make_group(StructureTensor::from_index(1, 1).unwrap());
        let report = construction_validity(&g, 1);
        assert!(!report.systems[1].defined);
        assert!(report.systems[0].defined);
        assert_eq!(report.systems[0].order_2_ok, vec![true; 4]);
        assert!(!report.all_ok);
        assert_eq!(report.criterion, CriterionOutcome::NotRun);
    }

    #[test]
    fn t1_and_t2_share_a_stabilizer_at_s3() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = pair_constraints(3, 0).sample_independent(&mut rng).unwrap();
        let report = construction_validity(&make_group(t), 0);
        assert!(report.systems.iter().all(SystemReport::flags_ok));
        assert!(!report.disjointness_ok);
        assert_eq!(report.criterion, CriterionOutcome::Fails);
    }
}
