//! Enumeration of the family, isomorphism classification and the component
//! lower bound.
//!
//! Two tensors give isomorphic groups exactly when the spans of their
//! squaring maps, viewed as spaces of quadratic forms on `GF(2)^2s`, lie in
//! one orbit of `GL(2s, 2)`. The alternating forms alone (the commutator
//! map) are too coarse over `GF(2)`. For `s <= 2` the orbits are explored
//! completely and each class is certified with the backtracking oracle; for
//! larger `s` sampled tensors are sorted into classes by the oracle alone.

pub mod bounds;

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::constructions::{self, ConstructionId, LinearConstraintSystem};
use crate::gf2::{subspace_canonical, BitMatrix, BitVector};
use crate::group::{make_group, pair_count, pairs, Fc2Group, StructureTensor};
use crate::iso;

/// Largest `s` for which the whole tensor space is enumerated.
pub const EXHAUSTIVE_MAX_S: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("exhaustive enumeration is limited to s <= {EXHAUSTIVE_MAX_S}, got s={0}")]
    ExhaustiveTooLarge(usize),
    #[error("s must be at least 1")]
    ZeroRank,
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSpaceCount {
    pub total: BigUint,
    pub independent: BigUint,
}

/// `2^(s·N)` tensors, of which `∏_{l<s} (2^N − 2^l)` are independent, with
/// `N = (2s choose 2)`.
pub fn count_tensor_space(s: usize) -> TensorSpaceCount {
    let n = pair_count(s);
    let mut independent = BigUint::one();
    for l in 0..s {
        independent *= (BigUint::one() << n) - (BigUint::one() << l);
    }
    TensorSpaceCount {
        total: BigUint::one() << (s * n),
        independent,
    }
}

/// `|GL(s, 2)|`, the number of ordered bases of an `s`-dimensional span.
pub fn gl_order(s: usize) -> BigUint {
    let mut order = BigUint::one();
    for l in 0..s {
        order *= (BigUint::one() << s) - (BigUint::one() << l);
    }
    order
}

/// A seeded generator for one item of one sampling pool.
pub fn stream_rng(seed: u64, pool: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((pool << 40) | index);
    rng
}

/// `count` independent tensors, uniform over the solutions of `system`.
/// Item `k` depends only on `(seed, pool, k)`.
pub fn sample_tensors(
    system: &LinearConstraintSystem,
    count: usize,
    seed: u64,
    pool: u64,
) -> Vec<StructureTensor> {
    (0..count as u64)
        .into_par_iter()
        .filter_map(|k| system.sample_independent(&mut stream_rng(seed, pool, k)))
        .collect()
}

/// Sampling pool of the constraint space for `q`; pool 0 is unconstrained.
pub fn constrained_pool(q: usize) -> u64 {
    1 + q as u64
}

/// Values of `q` with a defined irregular construction, plus `q = 0`.
pub fn q_range(s: usize) -> std::ops::RangeInclusive<usize> {
    0..=s.saturating_sub(2)
}

/// Independent tensors of one `c`-span.
#[derive(Debug, Clone)]
pub struct SpanEntry {
    pub key: BitMatrix,
    /// The enumeration-first tensor with this span.
    pub first: StructureTensor,
    pub tensors: u64,
}

#[derive(Debug, Clone)]
pub struct SpanTable {
    pub s: usize,
    pub total: u64,
    pub independent: u64,
    /// Sorted by key.
    pub spans: Vec<SpanEntry>,
}

fn span_key(t: &StructureTensor) -> BitMatrix {
    subspace_canonical(pair_count(t.s()), t.c_vectors()).expect("pair-space vectors")
}

pub fn enumerate_spans(s: usize) -> Result<SpanTable, CensusError> {
    if s == 0 {
        return Err(CensusError::ZeroRank);
    }
    if s > EXHAUSTIVE_MAX_S {
        return Err(CensusError::ExhaustiveTooLarge(s));
    }
    let bits = s * pair_count(s);
    let total = 1u64 << bits;
    let found: Vec<(BitMatrix, u64)> = (0..total)
        .into_par_iter()
        .filter_map(|k| {
            let t = StructureTensor::from_index(s, k).expect("index in range");
            t.is_independent().then(|| (span_key(&t), k))
        })
        .collect();
    let independent = found.len() as u64;
    let mut by_key: std::collections::BTreeMap<BitMatrix, (u64, u64)> = Default::default();
    for (key, k) in found {
        let entry = by_key.entry(key).or_insert((k, 0));
        entry.0 = entry.0.min(k);
        entry.1 += 1;
    }
    let spans = by_key
        .into_iter()
        .map(|(key, (first, tensors))| SpanEntry {
            key,
            first: StructureTensor::from_index(s, first).expect("index in range"),
            tensors,
        })
        .collect();
    Ok(SpanTable {
        s,
        total,
        independent,
        spans,
    })
}

/// Forms on `GF(2)^n`: pair coefficients, then (optionally) diagonal ones.
struct FormSpace {
    n: usize,
    pairs: Vec<(usize, usize)>,
    diagonal: bool,
}

impl FormSpace {
    fn new(n: usize, diagonal: bool) -> Self {
        Self {
            n,
            pairs: pairs(n).collect(),
            diagonal,
        }
    }

    fn len(&self) -> usize {
        self.pairs.len() + if self.diagonal { self.n } else { 0 }
    }

    fn embed(&self, c: &BitVector) -> BitVector {
        if self.diagonal {
            c.concat(&BitVector::zeros(self.n))
        } else {
            c.clone()
        }
    }

    fn polar(&self, form: &BitVector, x: &BitVector, y: &BitVector) -> bool {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(p, _)| form.get(*p))
            .fold(false, |acc, (_, &(k, l))| {
                acc ^ ((x.get(k) && y.get(l)) ^ (x.get(l) && y.get(k)))
            })
    }

    fn value(&self, form: &BitVector, x: &BitVector) -> bool {
        let mut acc = false;
        for (p, &(k, l)) in self.pairs.iter().enumerate() {
            acc ^= form.get(p) && x.get(k) && x.get(l);
        }
        let offset = self.pairs.len();
        for k in 0..self.n {
            acc ^= form.get(offset + k) && x.get(k);
        }
        acc
    }

    /// The form `x ↦ Q(M x)` where `M e_i = images[i]`.
    fn pull_back(&self, form: &BitVector, images: &[BitVector]) -> BitVector {
        let mut out = BitVector::zeros(self.len());
        for (p, &(i, i2)) in self.pairs.iter().enumerate() {
            out.set(p, self.polar(form, &images[i], &images[i2]));
        }
        if self.diagonal {
            for (i, m) in images.iter().enumerate() {
                out.set(self.pairs.len() + i, self.value(form, m));
            }
        }
        out
    }

    fn pull_back_span(&self, span: &BitMatrix, images: &[BitVector]) -> BitMatrix {
        let rows: Vec<BitVector> = span
            .rows()
            .iter()
            .map(|f| self.pull_back(f, images))
            .collect();
        subspace_canonical(self.len(), &rows).expect("form-space vectors")
    }
}

/// Images of the basis under generators of `GL(n, 2)`: an `n`-cycle, a
/// transposition and one transvection.
fn gl_generators(n: usize) -> Vec<Vec<BitVector>> {
    let unit = |i| BitVector::unit(n, i);
    if n == 1 {
        return Vec::new();
    }
    let cycle = (0..n).map(|i| unit((i + 1) % n)).collect();
    let mut swap: Vec<BitVector> = (0..n).map(unit).collect();
    swap.swap(0, 1);
    let mut transvection: Vec<BitVector> = (0..n).map(unit).collect();
    transvection[1].flip(0);
    vec![cycle, swap, transvection]
}

/// Orbit label of every span, numbered by first appearance.
fn span_orbits(table: &SpanTable, diagonal: bool) -> Vec<usize> {
    let n = 2 * table.s;
    let space = FormSpace::new(n, diagonal);
    let generators = gl_generators(n);
    let embed = |entry: &SpanEntry| {
        let rows: Vec<BitVector> = entry.key.rows().iter().map(|c| space.embed(c)).collect();
        subspace_canonical(space.len(), &rows).expect("form-space vectors")
    };
    let index: HashMap<BitMatrix, usize> = table
        .spans
        .iter()
        .enumerate()
        .map(|(k, e)| (embed(e), k))
        .collect();
    let mut label = vec![usize::MAX; table.spans.len()];
    let mut next = 0;
    for start in 0..table.spans.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let origin = embed(&table.spans[start]);
        let mut seen = HashSet::from([origin.clone()]);
        let mut queue = VecDeque::from([origin]);
        while let Some(span) = queue.pop_front() {
            if let Some(&k) = index.get(&span) {
                label[k] = next;
            }
            for images in &generators {
                let image = space.pull_back_span(&span, images);
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        next += 1;
    }
    label
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationMethod {
    /// Orbits of quadratic spans, confirmed by the oracle.
    CertifiedOrbits,
    /// Orbits disagreed with the oracle; the oracle's classes are used.
    Oracle,
}

#[derive(Debug, Clone)]
pub struct Classification {
    /// Class of each span in the table.
    pub class_of_span: Vec<usize>,
    /// Representative span of each class, ordered by representative tensor.
    pub representatives: Vec<usize>,
    pub alternating_orbits: usize,
    pub method: ClassificationMethod,
}

fn renumber(labels: &[usize], table: &SpanTable) -> (Vec<usize>, Vec<usize>) {
    let classes = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut best: Vec<Option<usize>> = vec![None; classes];
    for (k, &c) in labels.iter().enumerate() {
        let better = match best[c] {
            None => true,
            Some(b) => table.spans[k].first.index() < table.spans[b].first.index(),
        };
        if better {
            best[c] = Some(k);
        }
    }
    let mut reps: Vec<usize> = best
        .into_iter()
        .map(|b| b.expect("nonempty class"))
        .collect();
    reps.sort_by_key(|&k| table.spans[k].first.index());
    let mut new_label = vec![0; classes];
    for (new, &k) in reps.iter().enumerate() {
        new_label[labels[k]] = new;
    }
    (labels.iter().map(|&c| new_label[c]).collect(), reps)
}

/// Sorts tensors into isomorphism classes with the backtracking oracle.
/// Returns the class of each tensor and the first member of each class.
pub fn classify_by_oracle(tensors: &[StructureTensor]) -> (Vec<usize>, Vec<usize>) {
    let groups: Vec<Fc2Group> = tensors.par_iter().map(|t| make_group(t.clone())).collect();
    let prints: Vec<_> = groups.par_iter().map(iso::fingerprint).collect();
    let mut reps: Vec<usize> = Vec::new();
    let mut class = Vec::with_capacity(tensors.len());
    for k in 0..tensors.len() {
        let found = reps.par_iter().position_first(|&r| {
            prints[r] == prints[k]
                && iso::is_isomorphic(&groups[r], &groups[k]).expect("independent tensors")
        });
        match found {
            Some(c) => class.push(c),
            None => {
                class.push(reps.len());
                reps.push(k);
            }
        }
    }
    (class, reps)
}

/// Orbit classification of all spans, certified against the oracle.
pub fn classify(table: &SpanTable) -> Classification {
    let quadratic = span_orbits(table, true);
    let alternating = span_orbits(table, false);
    let alternating_orbits = alternating.iter().copied().max().map_or(0, |m| m + 1);
    let (class_of_span, representatives) = renumber(&quadratic, table);

    let groups: Vec<Fc2Group> = table
        .spans
        .par_iter()
        .map(|e| make_group(e.first.clone()))
        .collect();
    let iso = |a: usize, b: usize| iso::is_isomorphic(&groups[a], &groups[b]).expect("independent");
    let reps_distinct = (0..representatives.len())
        .into_par_iter()
        .flat_map_iter(|x| (x + 1..representatives.len()).map(move |y| (x, y)))
        .all(|(x, y)| !iso(representatives[x], representatives[y]));
    let members_agree = (0..table.spans.len())
        .into_par_iter()
        .all(|k| iso(representatives[class_of_span[k]], k));

    if reps_distinct && members_agree {
        return Classification {
            class_of_span,
            representatives,
            alternating_orbits,
            method: ClassificationMethod::CertifiedOrbits,
        };
    }
    let firsts: Vec<StructureTensor> = table.spans.iter().map(|e| e.first.clone()).collect();
    let (labels, _) = classify_by_oracle(&firsts);
    let (class_of_span, representatives) = renumber(&labels, table);
    Classification {
        class_of_span,
        representatives,
        alternating_orbits,
        method: ClassificationMethod::Oracle,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintCount {
    pub construction: String,
    pub q: Option<usize>,
    pub defined: bool,
    pub equations: usize,
    pub free_bits: usize,
    #[serde(serialize_with = "crate::json::big_uint")]
    pub solutions: BigUint,
    #[serde(serialize_with = "crate::json::big_uint")]
    pub independent_solutions: BigUint,
    /// Independent tensors satisfying the system, counted one by one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumerated: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentBound {
    pub q: usize,
    pub count: usize,
    /// Tensors whose construction report was examined.
    pub examined: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub s: usize,
    pub mode: CensusMode,
    #[serde(serialize_with = "crate::json::big_uint")]
    pub total_tensors: BigUint,
    #[serde(serialize_with = "crate::json::big_uint")]
    pub independent_tensors: BigUint,
    #[serde(serialize_with = "crate::json::big_uint")]
    pub distinct_spans: BigUint,
    pub constraint_satisfying_tensors: Vec<ConstraintCount>,
    pub iso_classes: usize,
    /// False in sampling mode, where only classes met by the sample count.
    pub iso_classes_exact: bool,
    pub iso_class_representatives: Vec<StructureTensor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternating_orbits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationMethod>,
    pub component_lower_bound: Vec<ComponentBound>,
}

fn constraint_counts(s: usize, table: Option<&SpanTable>) -> Vec<ConstraintCount> {
    let mut systems = vec![(
        "T1".to_string(),
        None,
        true,
        constructions::order2_constraints(s, ConstructionId::T1).expect("T1 is defined"),
    )];
    for q in q_range(s) {
        let second = ConstructionId::second(q);
        systems.push((
            format!("T1+{second}"),
            Some(q),
            second.check_defined(s).is_ok(),
            constructions::pair_constraints(s, q),
        ));
    }
    systems
        .into_iter()
        .map(|(construction, q, defined, system)| {
            let enumerated = table.map(|_| {
                let bits = s * pair_count(s);
                (0..1u64 << bits)
                    .into_par_iter()
                    .filter(|&k| {
                        let t = StructureTensor::from_index(s, k).expect("index in range");
                        t.is_independent() && system.is_satisfied(&t)
                    })
                    .count() as u64
            });
            ConstraintCount {
                construction,
                q,
                defined,
                equations: system.equations().len(),
                free_bits: system.free_bits(),
                solutions: system.solution_count(),
                independent_solutions: system.independent_solution_count(),
                enumerated,
            }
        })
        .collect()
}

pub fn census(s: usize, mode: CensusMode) -> Result<CensusReport, CensusError> {
    if s == 0 {
        return Err(CensusError::ZeroRank);
    }
    let space = count_tensor_space(s);
    let distinct_spans = &space.independent / gl_order(s);
    let report = match mode {
        CensusMode::Exhaustive => {
            let table = enumerate_spans(s)?;
            let classification = classify(&table);
            let component_lower_bound = q_range(s)
                .map(|q| {
                    let valid: Vec<bool> = table
                        .spans
                        .par_iter()
                        .map(|e| {
                            constructions::construction_validity(&make_group(e.first.clone()), q)
                                .all_ok
                        })
                        .collect();
                    let mut hit = vec![false; classification.representatives.len()];
                    for (k, ok) in valid.iter().enumerate() {
                        hit[classification.class_of_span[k]] |= ok;
                    }
                    ComponentBound {
                        q,
                        count: hit.iter().filter(|&&h| h).count(),
                        examined: valid.len(),
                    }
                })
                .collect();
            if BigUint::from(table.total) != space.total
                || BigUint::from(table.independent) != space.independent
                || BigUint::from(table.spans.len()) != distinct_spans
            {
                return Err(CensusError::InvariantViolation(format!(
                    "enumeration ({} total, {} independent, {} spans) disagrees with the counting formulas",
                    table.total,
                    table.independent,
                    table.spans.len()
                )));
            }
            CensusReport {
                s,
                mode,
                total_tensors: space.total,
                independent_tensors: space.independent,
                distinct_spans,
                constraint_satisfying_tensors: constraint_counts(s, Some(&table)),
                iso_classes: classification.representatives.len(),
                iso_classes_exact: true,
                iso_class_representatives: classification
                    .representatives
                    .iter()
                    .map(|&k| table.spans[k].first.clone())
                    .collect(),
                alternating_orbits: Some(classification.alternating_orbits),
                classification: Some(classification.method),
                component_lower_bound,
            }
        }
        CensusMode::Sample { count, seed } => {
            let mut tensors =
                sample_tensors(&LinearConstraintSystem::unconstrained(s), count, seed, 0);
            let mut pools = Vec::new();
            for q in q_range(s) {
                let sample = sample_tensors(
                    &constructions::pair_constraints(s, q),
                    count,
                    seed,
                    constrained_pool(q),
                );
                let start = tensors.len();
                tensors.extend(sample);
                pools.push((q, start..tensors.len()));
            }
            let (class, reps) = classify_by_oracle(&tensors);
            let component_lower_bound = pools
                .into_iter()
                .map(|(q, range)| {
                    let hits: std::collections::BTreeSet<usize> = range
                        .clone()
                        .into_par_iter()
                        .filter(|&k| {
                            constructions::construction_validity(&make_group(tensors[k].clone()), q)
                                .all_ok
                        })
                        .map(|k| class[k])
                        .collect::<Vec<_>>()
                        .into_iter()
                        .collect();
                    ComponentBound {
                        q,
                        count: hits.len(),
                        examined: range.len(),
                    }
                })
                .collect();
            CensusReport {
                s,
                mode,
                total_tensors: space.total,
                independent_tensors: space.independent,
                distinct_spans,
                constraint_satisfying_tensors: constraint_counts(s, None),
                iso_classes: reps.len(),
                iso_classes_exact: false,
                iso_class_representatives: reps.iter().map(|&k| tensors[k].clone()).collect(),
                alternating_orbits: None,
                classification: None,
                component_lower_bound,
            }
        }
    };
    report.check()?;
    Ok(report)
}

impl CensusReport {
    /// The ordering and consistency conditions every report must meet.
    pub fn check(&self) -> Result<(), CensusError> {
        let fail = |m: String| Err(CensusError::InvariantViolation(m));
        if self.independent_tensors > self.total_tensors {
            return fail("more independent tensors than tensors".into());
        }
        if BigUint::from(self.iso_classes) > self.independent_tensors {
            return fail("more classes than independent tensors".into());
        }
        for c in &self.constraint_satisfying_tensors {
            if c.independent_solutions > self.independent_tensors {
                return fail(format!(
                    "{} has more solutions than independent tensors",
                    c.construction
                ));
            }
            if let Some(e) = c.enumerated {
                if BigUint::from(e) != c.independent_solutions {
                    return fail(format!(
                        "{}: enumerated {e} solutions, formula gives {}",
                        c.construction, c.independent_solutions
                    ));
                }
            }
        }
        for b in &self.component_lower_bound {
            if b.count > self.iso_classes {
                return fail(format!(
                    "component bound {} exceeds {} classes",
                    b.count, self.iso_classes
                ));
            }
        }
        Ok(())
    }
}

/// `[g_i, g_i']` for every pair, as a tensor: the group obtained by sending
/// `g_i` to the lift of `images[i]`.
pub fn relabel(g: &Fc2Group, images: &[BitVector]) -> StructureTensor {
    let s = g.s();
    let mut t = StructureTensor::zero(s).expect("s >= 1");
    for (i, i2) in pairs(2 * s) {
        let x = g.lift(images[i].clone()).expect("rank 2s");
        let y = g.lift(images[i2].clone()).expect("rank 2s");
        for j in g.commutator(&x, &y).expect("same group").b().ones() {
            t.set(i, i2, j, true);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_space_counts() {
        let c = count_tensor_space(1);
        assert_eq!(
            (c.total, c.independent),
            (BigUint::from(2u32), BigUint::one())
        );
        let c = count_tensor_space(2);
        assert_eq!(c.total, BigUint::from(4096u32));
        assert_eq!(c.independent, BigUint::from(3906u32));
        assert_eq!(&c.independent / gl_order(2), BigUint::from(651u32));
    }

    #[test]
    fn s1_census() {
        let r = census(1, CensusMode::Exhaustive).unwrap();
        assert_eq!(r.iso_classes, 1);
        assert_eq!(r.iso_class_representatives[0].to_hex(), "s1:0x1");
        assert_eq!(r.component_lower_bound.len(), 1);
        assert_eq!(r.component_lower_bound[0].count, 0);
    }

    #[test]
    fn exhaustive_limit() {
        assert_eq!(
            enumerate_spans(3).unwrap_err(),
            CensusError::ExhaustiveTooLarge(3)
        );
        assert_eq!(enumerate_spans(0).unwrap_err(), CensusError::ZeroRank);
    }

    #[test]
    fn gl_generators_generate() {
        // the closure of the generators acting on nonzero vectors of GF(2)^3
        // reaches every ordered basis: |GL(3, 2)| = 168
        let gens = gl_generators(3);
        let start: Vec<BitVector> = (0..3).map(|i| BitVector::unit(3, i)).collect();
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(m) = queue.pop_front() {
            for g in &gens {
                let image: Vec<BitVector> = g
                    .iter()
                    .map(|col| {
                        col.ones()
                            .fold(BitVector::zeros(3), |acc, i| acc.add(&m[i]).unwrap())
                    })
                    .collect();
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        assert_eq!(seen.len(), 168);
    }

    #[test]
    fn sample_streams_are_order_independent() {
        let system = LinearConstraintSystem::unconstrained(3);
        let a = sample_tensors(&system, 6, 42, 0);
        let b = sample_tensors(&system, 3, 42, 0);
        assert_eq!(&a[..3], &b[..]);
        assert_ne!(sample_tensors(&system, 3, 43, 0), b);
    }
}
