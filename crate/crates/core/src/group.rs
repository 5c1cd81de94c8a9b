//! Exact arithmetic in the Frattini-class-2 family of 2-groups.
//!
//! A group of the family is generated by `g_1, …, g_{2s}` and central
//! `h_1, …, h_s`, all of order two, with
//!
//! ```text
//! [g_i, g_i'] = h_1^c(i,i',1) ··· h_s^c(i,i',s)      (i < i')
//! ```
//!
//! and every other pair of generators commuting. It has order `2^(3s)`.
//! Elements are kept in the normal form `g^a h^b` with `a ∈ GF(2)^(2s)` and
//! `b ∈ GF(2)^s`. Indices in this API are zero-based: `gen(0)` is `g_1`.
//!
//! Commutators follow `[x, y] = x⁻¹ y⁻¹ x y`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector, EchelonBasis, Gf2Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("element has shape ({found_a}, {found_b}), group with s={s} needs ({}, {s})", 2 * s)]
    DimensionMismatch {
        s: usize,
        found_a: usize,
        found_b: usize,
    },
    #[error("the c-vectors of this tensor are not linearly independent")]
    NotIndependent,
    #[error("groups have different orders")]
    OrderMismatch,
    #[error("s must be at least 1")]
    ZeroRank,
    #[error("malformed tensor string {0:?}")]
    MalformedTensor(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Number of unordered generator pairs `(i, i')`, `i < i'`, among `2s` generators.
pub fn pair_count(s: usize) -> usize {
    let n = 2 * s;
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `(i, i')` (zero-based, `i < i' < n`) in lexicographic order.
pub fn pair_index(n: usize, i: usize, i2: usize) -> usize {
    assert!(i < i2 && i2 < n, "pair ({i}, {i2}) invalid for n={n}");
    i * n - i * (i + 1) / 2 + (i2 - i - 1)
}

/// All pairs in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |i2| (i, i2)))
}

/// The GF(2) commutator data `c(i, i', j)`.
///
/// Stored as `s` vectors `c_j` over the pair space. Serialized as
/// `s<s>:0x<hex>`, where bit `k = pair_index · s + j` of the hex value is
/// `c(i, i', j)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructureTensor {
    s: usize,
    c: Vec<BitVector>,
}

impl StructureTensor {
    pub fn zero(s: usize) -> Result<Self, GroupError> {
        if s == 0 {
            return Err(GroupError::ZeroRank);
        }
        Ok(Self {
            s,
            c: vec![BitVector::zeros(pair_count(s)); s],
        })
    }

    /// Builds a tensor from its `s` vectors `c_j` over the pair space.
    pub fn from_vectors(s: usize, c: Vec<BitVector>) -> Result<Self, GroupError> {
        if s == 0 {
            return Err(GroupError::ZeroRank);
        }
        if c.len() != s {
            return Err(GroupError::MalformedTensor(format!(
                "expected {s} c-vectors, got {}",
                c.len()
            )));
        }
        let p = pair_count(s);
        if let Some(bad) = c.iter().find(|v| v.len() != p) {
            return Err(Gf2Error::DimensionMismatch {
                expected: p,
                found: bad.len(),
            }
            .into());
        }
        Ok(Self { s, c })
    }

    /// Tensor whose flattened bit `k` is bit `k` of `index`; needs `s·C(2s,2) <= 64`.
    pub fn from_index(s: usize, index: u64) -> Result<Self, GroupError> {
        let bits = s * pair_count(s);
        assert!(
            bits <= 64,
            "from_index needs at most 64 tensor bits, s={s} has {bits}"
        );
        Self::from_flat(s, &BitVector::from_u64(bits, index))
    }

    pub fn index(&self) -> u64 {
        self.flatten().to_u64()
    }

    fn from_flat(s: usize, flat: &BitVector) -> Result<Self, GroupError> {
        let mut t = Self::zero(s)?;
        for k in flat.ones() {
            t.c[k % s].set(k / s, true);
        }
        Ok(t)
    }

    /// All tensor bits in the fixed order `(pair, j)`, pair-major.
    pub fn flatten(&self) -> BitVector {
        let mut flat = BitVector::zeros(self.s * pair_count(self.s));
        for (j, cj) in self.c.iter().enumerate() {
            for p in cj.ones() {
                flat.set(p * self.s + j, true);
            }
        }
        flat
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of `g` generators, `2s`.
    pub fn r(&self) -> usize {
        2 * self.s
    }

    pub fn get(&self, i: usize, i2: usize, j: usize) -> bool {
        self.c[j].get(pair_index(self.r(), i, i2))
    }

    pub fn set(&mut self, i: usize, i2: usize, j: usize, value: bool) {
        let p = pair_index(self.r(), i, i2);
        self.c[j].set(p, value)
    }

    /// The vector `c_j` over the pair space.
    pub fn c_vector(&self, j: usize) -> &BitVector {
        &self.c[j]
    }

    pub fn c_vectors(&self) -> &[BitVector] {
        &self.c
    }

    /// `(c(i,i',1), …, c(i,i',s))`, the h-exponents of `[g_i, g_i']`.
    pub fn column(&self, i: usize, i2: usize) -> BitVector {
        let p = pair_index(self.r(), i, i2);
        BitVector::from_bits(&self.c.iter().map(|cj| cj.get(p)).collect::<Vec<_>>())
    }

    /// Rank of the `s × C(2s,2)` matrix with rows `c_j`.
    pub fn c_rank(&self) -> usize {
        BitMatrix::from_rows(pair_count(self.s), self.c.clone())
            .expect("c-vectors share the pair-space length")
            .rank()
    }

    pub fn is_independent(&self) -> bool {
        self.c_rank() == self.s
    }

    pub fn to_hex(&self) -> String {
        format!("s{}:{}", self.s, self.flatten().to_hex())
    }

    pub fn from_hex(text: &str) -> Result<Self, GroupError> {
        let malformed = || GroupError::MalformedTensor(text.to_string());
        let rest = text.strip_prefix('s').ok_or_else(malformed)?;
        let (s_part, hex) = rest.split_once(':').ok_or_else(malformed)?;
        if s_part.is_empty() || !s_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let s: usize = s_part.parse().map_err(|_| malformed())?;
        // Anything beyond a few hundred generators is not a tensor anyone can use.
        if s == 0 || s > 256 {
            return Err(malformed());
        }
        let flat = BitVector::from_hex(s * pair_count(s), hex)?;
        Self::from_flat(s, &flat)
    }
}

impl fmt::Debug for StructureTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureTensor({})", self.to_hex())
    }
}

impl fmt::Display for StructureTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for StructureTensor {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_hex(s)
    }
}

impl Serialize for StructureTensor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for StructureTensor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Self::from_hex(&text).map_err(serde::de::Error::custom)
    }
}

/// An element in normal form `g_1^a_1 ··· g_2s^a_2s · h_1^b_1 ··· h_s^b_s`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    a: BitVector,
    b: BitVector,
}

impl GroupElement {
    pub fn a(&self) -> &BitVector {
        &self.a
    }

    pub fn b(&self) -> &BitVector {
        &self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Whether the element lies in the span of the `h_j`.
    pub fn is_central_part(&self) -> bool {
        self.a.is_zero()
    }

    /// Hex of the bit string `a ‖ b` (a-bits first, bit `k` has weight `2^k`).
    pub fn to_hex(&self) -> String {
        self.a.concat(&self.b).to_hex()
    }

    /// Parses [`GroupElement::to_hex`] output for a group with the given `s`.
    pub fn from_hex(s: usize, text: &str) -> Result<Self, GroupError> {
        let bits = BitVector::from_hex(3 * s, text)?;
        Ok(Self {
            a: bits.slice(0, 2 * s),
            b: bits.slice(2 * s, s),
        })
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g^{} h^{}", self.a, self.b)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.a.ones().map(|i| format!("g{}", i + 1)).collect();
        parts.extend(self.b.ones().map(|j| format!("h{}", j + 1)));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("·"))
        }
    }
}

/// How [`Fc2Group::generates_fast`] reached its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerationMethod {
    /// Rank of the images in the Frattini quotient.
    FrattiniRank,
    /// The independence precondition failed; closure was used instead.
    ClosureFallback,
}

/// One group of the family, with its multiplication tables precomputed.
#[derive(Clone)]
pub struct Fc2Group {
    tensor: StructureTensor,
    c_rank: usize,
    // lower[j][i] has bit i' set iff i' < i and c(i', i, j) = 1
    lower: Vec<Vec<BitVector>>,
}

impl fmt::Debug for Fc2Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fc2Group")
            .field("tensor", &self.tensor)
            .field("independent", &self.is_independent())
            .finish()
    }
}

/// Builds the group defined by `tensor`.
pub fn make_group(tensor: StructureTensor) -> Fc2Group {
    Fc2Group::new(tensor)
}

impl Fc2Group {
    pub fn new(tensor: StructureTensor) -> Self {
        let s = tensor.s();
        let r = tensor.r();
        let lower = (0..s)
            .map(|j| {
                (0..r)
                    .map(|i| {
                        let mut row = BitVector::zeros(r);
                        for i2 in 0..i {
                            if tensor.get(i2, i, j) {
                                row.set(i2, true);
                            }
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        let c_rank = tensor.c_rank();
        Self {
            tensor,
            c_rank,
            lower,
        }
    }

    pub fn tensor(&self) -> &StructureTensor {
        &self.tensor
    }

    pub fn s(&self) -> usize {
        self.tensor.s()
    }

    pub fn r(&self) -> usize {
        self.tensor.r()
    }

    /// `log2 |G| = 3s`.
    pub fn order_log2(&self) -> u32 {
        3 * self.s() as u32
    }

    /// `|G| = 2^(3s)`; panics if it does not fit in `u64`.
    pub fn order(&self) -> u64 {
        1u64.checked_shl(self.order_log2())
            .filter(|_| self.order_log2() < 64)
            .expect("group order exceeds u64")
    }

    /// Whether the `c_j` are linearly independent, i.e. the `g_i` alone generate.
    pub fn is_independent(&self) -> bool {
        self.c_rank == self.s()
    }

    /// Dimension of the derived subgroup, the span of all commutator values.
    pub fn derived_rank(&self) -> usize {
        self.c_rank
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            a: BitVector::zeros(self.r()),
            b: BitVector::zeros(self.s()),
        }
    }

    /// `g_{i+1}`.
    pub fn gen(&self, i: usize) -> GroupElement {
        GroupElement {
            a: BitVector::unit(self.r(), i),
            b: BitVector::zeros(self.s()),
        }
    }

    /// `h_{j+1}`.
    pub fn central(&self, j: usize) -> GroupElement {
        GroupElement {
            a: BitVector::zeros(self.r()),
            b: BitVector::unit(self.s(), j),
        }
    }

    pub fn element(&self, a: BitVector, b: BitVector) -> Result<GroupElement, GroupError> {
        let x = GroupElement { a, b };
        self.check(&x)?;
        Ok(x)
    }

    /// Element with `a`-part `a` and trivial `b`-part.
    pub fn lift(&self, a: BitVector) -> Result<GroupElement, GroupError> {
        self.element(a, BitVector::zeros(self.s()))
    }

    /// Element number `index`, reading bits `0..2s` as `a` and the rest as `b`.
    pub fn element_from_index(&self, index: u64) -> GroupElement {
        let s = self.s();
        let bits = BitVector::from_u64(3 * s, index);
        GroupElement {
            a: bits.slice(0, 2 * s),
            b: bits.slice(2 * s, s),
        }
    }

    pub fn element_index(&self, x: &GroupElement) -> u64 {
        x.a.concat(&x.b).to_u64()
    }

    /// All `2^(3s)` elements by increasing index; only sensible for small `s`.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|k| self.element_from_index(k))
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        GroupElement::from_hex(self.s(), text)
    }

    pub fn check(&self, x: &GroupElement) -> Result<(), GroupError> {
        if x.a.len() != self.r() || x.b.len() != self.s() {
            return Err(GroupError::DimensionMismatch {
                s: self.s(),
                found_a: x.a.len(),
                found_b: x.b.len(),
            });
        }
        Ok(())
    }

    /// Central correction from moving `g^a2` left past `g^a1`: for every
    /// `i' < i` with `a1_i = a2_i' = 1` the swap contributes `c(i', i, ·)`.
    pub(crate) fn collection_term(&self, a1: &BitVector, a2: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.s());
        for (j, rows) in self.lower.iter().enumerate() {
            let mut bit = false;
            for i in a1.ones() {
                bit ^= rows[i].dot_unchecked(a2);
            }
            if bit {
                out.set(j, true);
            }
        }
        out
    }

    /// h-part of `[g^a1, g^a2]`: the collection term taken both ways round.
    pub(crate) fn commutator_form(&self, a1: &BitVector, a2: &BitVector) -> BitVector {
        let mut out = self.collection_term(a1, a2);
        out.xor_unchecked(&self.collection_term(a2, a1));
        out
    }

    fn mul_unchecked(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut a = x.a.clone();
        a.xor_unchecked(&y.a);
        let mut b = x.b.clone();
        b.xor_unchecked(&y.b);
        b.xor_unchecked(&self.collection_term(&x.a, &y.a));
        GroupElement { a, b }
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    /// Product of a sequence, left to right.
    pub fn product<'a>(
        &self,
        xs: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Result<GroupElement, GroupError> {
        let mut acc = self.identity();
        for x in xs {
            self.check(x)?;
            acc = self.mul_unchecked(&acc, x);
        }
        Ok(acc)
    }

    pub fn inverse(&self, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        // x·x = h^{collection(a, a)}, so x⁻¹ = g^a h^{b + collection(a, a)}
        let mut b = x.b.clone();
        b.xor_unchecked(&self.collection_term(&x.a, &x.a));
        Ok(GroupElement { a: x.a.clone(), b })
    }

    pub fn square(&self, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.multiply(x, x)
    }

    /// Least `n >= 1` with `x^n = 1`; always 1, 2 or 4 in this family.
    pub fn element_order(&self, x: &GroupElement) -> Result<u8, GroupError> {
        if x.is_identity() {
            self.check(x)?;
            return Ok(1);
        }
        let sq = self.square(x)?;
        if sq.is_identity() {
            return Ok(2);
        }
        let fourth = self.mul_unchecked(&sq, &sq);
        assert!(
            fourth.is_identity(),
            "element {x:?} has order > 4; tensor {:?}",
            self.tensor
        );
        Ok(4)
    }

    /// `x⁻¹ y⁻¹ x y`.
    pub fn commutator(
        &self,
        x: &GroupElement,
        y: &GroupElement,
    ) -> Result<GroupElement, GroupError> {
        let xi = self.inverse(x)?;
        let yi = self.inverse(y)?;
        self.product([&xi, &yi, x, y])
    }

    /// `t x t⁻¹`.
    pub fn conjugate(
        &self,
        x: &GroupElement,
        t: &GroupElement,
    ) -> Result<GroupElement, GroupError> {
        let ti = self.inverse(t)?;
        self.product([t, x, &ti])
    }

    /// `{t x t⁻¹ : t ∈ G}`.
    ///
    /// Conjugates differ from `x` by `[x, t]`, which is central and linear in
    /// the image of `t` in `G / H`, so the class is `x` times the span of
    /// `[x, g_i]` over the generators.
    pub fn conjugacy_class(&self, x: &GroupElement) -> Result<BTreeSet<GroupElement>, GroupError> {
        self.check(x)?;
        let mut span = EchelonBasis::new(self.s());
        for i in 0..self.r() {
            let c = self.commutator(x, &self.gen(i))?;
            debug_assert!(c.a.is_zero());
            span.insert(&c.b);
        }
        Ok(span
            .span_elements()
            .into_iter()
            .map(|z| {
                let mut b = x.b.clone();
                b.xor_unchecked(&z);
                GroupElement { a: x.a.clone(), b }
            })
            .collect())
    }

    /// Image in `G / H(G) ≅ GF(2)^(2s)`: the `a`-part.
    pub fn phi_image(&self, x: &GroupElement) -> Result<BitVector, GroupError> {
        self.check(x)?;
        Ok(x.a.clone())
    }

    /// Order of `⟨xs⟩`, by breadth-first closure.
    pub fn subgroup_generated(&self, xs: &[GroupElement]) -> Result<usize, GroupError> {
        Ok(self.closure(xs)?.len())
    }

    /// The elements of `⟨xs⟩`.
    pub fn closure(&self, xs: &[GroupElement]) -> Result<HashSet<GroupElement>, GroupError> {
        let mut gens = Vec::with_capacity(2 * xs.len());
        for x in xs {
            gens.push(x.clone());
            gens.push(self.inverse(x)?);
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(y) = queue.pop_front() {
            for g in &gens {
                let z = self.mul_unchecked(&y, g);
                if seen.insert(z.clone()) {
                    queue.push_back(z);
                }
            }
        }
        Ok(seen)
    }

    /// Whether `xs` generates `G`.
    ///
    /// For independent tensors `H(G)` is the Frattini subgroup, so this is a
    /// rank test on the images in `G / H`. Otherwise the closure is computed.
    pub fn generates_fast(
        &self,
        xs: &[GroupElement],
    ) -> Result<(bool, GenerationMethod), GroupError> {
        if !self.is_independent() {
            let order = self.subgroup_generated(xs)? as u64;
            return Ok((order == self.order(), GenerationMethod::ClosureFallback));
        }
        let mut basis = EchelonBasis::new(self.r());
        for x in xs {
            self.check(x)?;
            basis.insert(&x.a);
        }
        Ok((basis.dim() == self.r(), GenerationMethod::FrattiniRank))
    }

    pub fn generates(&self, xs: &[GroupElement]) -> Result<bool, GroupError> {
        Ok(self.generates_fast(xs)?.0)
    }

    /// The h-part of `g^a` squared: `Σ c(i, i', ·)` over pairs `i < i'` in the support of `a`.
    pub fn square_form(&self, a: &BitVector) -> BitVector {
        self.collection_term(a, a)
    }

    /// Counts of elements of order 1, 2 and 4.
    pub fn order_statistics(&self) -> [u64; 3] {
        let r = self.r();
        assert!(r < 64);
        let zero_squares = (0..1u64 << r)
            .filter(|&k| self.square_form(&BitVector::from_u64(r, k)).is_zero())
            .count() as u64;
        let per_a = 1u64 << self.s();
        [
            1,
            zero_squares * per_a - 1,
            self.order() - zero_squares * per_a,
        ]
    }
}
