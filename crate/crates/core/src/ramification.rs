//! Systems of generators, stabilizer sets and ramification structures.
//!
//! A system of generators of type `(g' | m_1, …, m_r)` is a tuple
//! `(a_1, b_1, …, a_g', b_g', c_1, …, c_r)` that generates the group, has
//! `ord(c_i) = m_i`, and satisfies `c_1 ··· c_r · ∏ [a_i, b_i] = 1`. Two
//! systems are disjoint when their stabilizer sets `Σ` meet only in the
//! identity, and a disjoint pair of admissible systems is a ramification
//! structure.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::BitVector;
use crate::group::{Fc2Group, GroupElement, GroupError};
use crate::invariants;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamificationError {
    #[error("system does not generate: quotient rank {quotient_rank} of {required}")]
    GenerationFailure {
        quotient_rank: usize,
        required: usize,
    },
    #[error("long relation fails: product is {residual}")]
    RelationFailure { residual: String },
    #[error("spherical entry {index} is the identity")]
    TrivialSphericalEntry { index: usize },
    #[error("type {signature} is not admissible for |G| = {order}")]
    NotAdmissible { order: BigUint, signature: String },
    #[error("stabilizer sets share {witness}")]
    NotDisjoint { witness: String },
    #[error(
        "criterion needs involutions; spherical entry {index} of system {system} has order {order}"
    )]
    CriterionInapplicable {
        system: usize,
        index: usize,
        order: u8,
    },
    #[error("malformed generator system: {0}")]
    Malformed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A type `(g' | m_1, …, m_r)` with branch orders kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSignature {
    pub genus_prime: u32,
    pub branch_orders: Vec<u32>,
}

impl TypeSignature {
    pub fn new(genus_prime: u32, mut branch_orders: Vec<u32>) -> Self {
        branch_orders.sort_unstable();
        Self {
            genus_prime,
            branch_orders,
        }
    }
}

impl fmt::Display for TypeSignature {
    /// Repeated orders collapse to `m^k`, e.g. `(1 | 2^4,3^2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut k = 0;
        while k < self.branch_orders.len() {
            let m = self.branch_orders[k];
            let run = self.branch_orders[k..]
                .iter()
                .take_while(|&&x| x == m)
                .count();
            parts.push(if run == 1 {
                m.to_string()
            } else {
                format!("{m}^{run}")
            });
            k += run;
        }
        write!(f, "({} | {})", self.genus_prime, parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed type signature {0:?}")]
pub struct TypeParseError(String);

impl FromStr for TypeSignature {
    type Err = TypeParseError;

    /// Accepts the `Display` form; whitespace is ignored.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || TypeParseError(text.to_string());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(err)?;
        let (genus, orders) = inner.split_once('|').ok_or_else(err)?;
        let parse_u32 = |t: &str| -> Result<u32, TypeParseError> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            t.parse().map_err(|_| err())
        };
        let genus_prime = parse_u32(genus)?;
        let mut branch_orders = Vec::new();
        if !orders.is_empty() {
            for part in orders.split(',') {
                let (m, k) = match part.split_once('^') {
                    Some((m, k)) => (parse_u32(m)?, parse_u32(k)?),
                    None => (parse_u32(part)?, 1),
                };
                if m < 2 || k == 0 || branch_orders.len() + k as usize > 1 << 16 {
                    return Err(err());
                }
                branch_orders.extend(std::iter::repeat_n(m, k as usize));
            }
        }
        Ok(Self::new(genus_prime, branch_orders))
    }
}

impl Serialize for TypeSignature {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TypeSignature {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// `(a_1, b_1, …, a_g', b_g'; c_1, …, c_r)`. The spherical order is kept as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSystem {
    pub genus_prime: u32,
    /// `(a_i, b_i)` in order.
    pub handles: Vec<(GroupElement, GroupElement)>,
    pub spherical: Vec<GroupElement>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorSystemWire {
    genus_prime: u32,
    handles: Vec<String>,
    spherical: Vec<String>,
}

impl GeneratorSystem {
    pub fn spherical(spherical: Vec<GroupElement>) -> Self {
        Self {
            genus_prime: 0,
            handles: Vec::new(),
            spherical,
        }
    }

    pub fn with_handles(
        handles: Vec<(GroupElement, GroupElement)>,
        spherical: Vec<GroupElement>,
    ) -> Self {
        Self {
            genus_prime: handles.len() as u32,
            handles,
            spherical,
        }
    }

    /// All `2g' + r` entries: handles first, then the spherical part.
    pub fn entries(&self) -> Vec<GroupElement> {
        self.handles
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .chain(self.spherical.iter().cloned())
            .collect()
    }

    /// `{"genus_prime": g', "handles": [a_1, b_1, …], "spherical": [c_1, …]}`
    /// with every element as its hex string.
    pub fn to_json(&self) -> String {
        let wire = GeneratorSystemWire {
            genus_prime: self.genus_prime,
            handles: self
                .handles
                .iter()
                .flat_map(|(a, b)| [a.to_hex(), b.to_hex()])
                .collect(),
            spherical: self.spherical.iter().map(GroupElement::to_hex).collect(),
        };
        serde_json::to_string(&wire).expect("plain strings serialize")
    }

    /// Parses [`GeneratorSystem::to_json`] output for a group with the given `s`.
    pub fn from_json(s: usize, text: &str) -> Result<Self, RamificationError> {
        let wire: GeneratorSystemWire =
            serde_json::from_str(text).map_err(|e| RamificationError::Malformed(e.to_string()))?;
        if wire.handles.len() != 2 * wire.genus_prime as usize {
            return Err(RamificationError::Malformed(format!(
                "genus_prime {} needs {} handle entries, got {}",
                wire.genus_prime,
                2 * wire.genus_prime,
                wire.handles.len()
            )));
        }
        let parse = |h: &String| GroupElement::from_hex(s, h);
        let flat = wire
            .handles
            .iter()
            .map(parse)
            .collect::<Result<Vec<_>, _>>()?;
        let handles = flat
            .chunks_exact(2)
            .map(|p| (p[0].clone(), p[1].clone()))
            .collect();
        let spherical = wire
            .spherical
            .iter()
            .map(parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            genus_prime: wire.genus_prime,
            handles,
            spherical,
        })
    }
}

/// `c_1 ··· c_r · ∏ [a_i, b_i]`.
pub fn long_relation_product(
    g: &Fc2Group,
    sys: &GeneratorSystem,
) -> Result<GroupElement, RamificationError> {
    let mut acc = g.product(&sys.spherical)?;
    for (a, b) in &sys.handles {
        acc = g.multiply(&acc, &g.commutator(a, b)?)?;
    }
    Ok(acc)
}

/// Checks generation, the long relation and nontrivial spherical entries;
/// returns the computed type.
pub fn validate_system(
    g: &Fc2Group,
    sys: &GeneratorSystem,
) -> Result<TypeSignature, RamificationError> {
    if sys.handles.len() != sys.genus_prime as usize {
        return Err(RamificationError::Malformed(format!(
            "genus_prime {} with {} handle pairs",
            sys.genus_prime,
            sys.handles.len()
        )));
    }
    let entries = sys.entries();
    for x in &entries {
        g.check(x)?;
    }
    if !g.generates(&entries)? {
        let mut basis = crate::gf2::EchelonBasis::new(g.r());
        for x in &entries {
            basis.insert(x.a());
        }
        return Err(RamificationError::GenerationFailure {
            quotient_rank: basis.dim(),
            required: g.r(),
        });
    }
    let residual = long_relation_product(g, sys)?;
    if !residual.is_identity() {
        return Err(RamificationError::RelationFailure {
            residual: residual.to_hex(),
        });
    }
    let mut orders = Vec::with_capacity(sys.spherical.len());
    for (index, c) in sys.spherical.iter().enumerate() {
        match g.element_order(c)? {
            1 => return Err(RamificationError::TrivialSphericalEntry { index }),
            m => orders.push(m as u32),
        }
    }
    Ok(TypeSignature::new(sys.genus_prime, orders))
}

/// `Σ(V)`: all conjugates of all powers of the spherical entries, plus 1.
pub fn sigma_set(
    g: &Fc2Group,
    sys: &GeneratorSystem,
) -> Result<BTreeSet<GroupElement>, RamificationError> {
    let mut out = BTreeSet::new();
    out.insert(g.identity());
    for c in &sys.spherical {
        let mut power = c.clone();
        while !power.is_identity() {
            out.extend(g.conjugacy_class(&power)?);
            power = g.multiply(&power, c)?;
        }
    }
    Ok(out)
}

/// Some element of `Σ(V₁) ∩ Σ(V₂)` other than the identity, if any.
pub fn disjointness_witness(
    g: &Fc2Group,
    s1: &GeneratorSystem,
    s2: &GeneratorSystem,
) -> Result<Option<GroupElement>, RamificationError> {
    let a = sigma_set(g, s1)?;
    let b = sigma_set(g, s2)?;
    Ok(a.intersection(&b).find(|x| !x.is_identity()).cloned())
}

/// Whether `Σ(V₁) ∩ Σ(V₂) = {1}`, by direct computation.
pub fn are_disjoint(
    g: &Fc2Group,
    s1: &GeneratorSystem,
    s2: &GeneratorSystem,
) -> Result<bool, RamificationError> {
    Ok(disjointness_witness(g, s1, s2)?.is_none())
}

/// Sufficient condition for disjointness when every spherical entry is an
/// involution: the images in `G / H` of the entries outside `H` must not
/// overlap, and neither may the entries inside `H`.
pub fn lemma_criterion(
    g: &Fc2Group,
    s1: &GeneratorSystem,
    s2: &GeneratorSystem,
) -> Result<bool, RamificationError> {
    let split = |system: usize, sys: &GeneratorSystem| {
        let mut outside: BTreeSet<BitVector> = BTreeSet::new();
        let mut inside: BTreeSet<GroupElement> = BTreeSet::new();
        for (index, c) in sys.spherical.iter().enumerate() {
            let order = g.element_order(c)?;
            if order != 2 {
                return Err(RamificationError::CriterionInapplicable {
                    system,
                    index,
                    order,
                });
            }
            if c.is_central_part() {
                inside.insert(c.clone());
            } else {
                outside.insert(g.phi_image(c)?);
            }
        }
        Ok((outside, inside))
    };
    let (b1, b1_central) = split(1, s1)?;
    let (b2, b2_central) = split(2, s2)?;
    Ok(b1.is_disjoint(&b2) && b1_central.is_disjoint(&b2_central))
}

/// Whether a `G`-cover of this type has integral genus at least two.
pub fn is_admissible(order: &BigUint, t: &TypeSignature) -> bool {
    invariants::genus_admissible(order, t)
}

/// How disjointness of a structure was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DisjointnessMethod {
    Criterion,
    Direct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationStructure {
    pub first: GeneratorSystem,
    pub second: GeneratorSystem,
    pub types: (TypeSignature, TypeSignature),
    pub disjointness: DisjointnessMethod,
}

/// Validates both systems, their admissibility and disjointness.
pub fn make_structure(
    g: &Fc2Group,
    s1: &GeneratorSystem,
    s2: &GeneratorSystem,
) -> Result<RamificationStructure, RamificationError> {
    let t1 = validate_system(g, s1)?;
    let t2 = validate_system(g, s2)?;
    let order = BigUint::from(1u8) << g.order_log2();
    for t in [&t1, &t2] {
        if !is_admissible(&order, t) {
            return Err(RamificationError::NotAdmissible {
                order: order.clone(),
                signature: t.to_string(),
            });
        }
    }
    let disjointness = match lemma_criterion(g, s1, s2) {
        Ok(true) => DisjointnessMethod::Criterion,
        Ok(false) | Err(RamificationError::CriterionInapplicable { .. }) => {
            if let Some(w) = disjointness_witness(g, s1, s2)? {
                return Err(RamificationError::NotDisjoint {
                    witness: w.to_hex(),
                });
            }
            DisjointnessMethod::Direct
        }
        Err(e) => return Err(e),
    };
    Ok(RamificationStructure {
        first: s1.clone(),
        second: s2.clone(),
        types: (t1, t2),
        disjointness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, StructureTensor};

    fn d8() -> Fc2Group {
        let mut t = StructureTensor::zero(1).unwrap();
        t.set(0, 1, 0, true);
        make_group(t)
    }

    #[test]
    fn type_signature_rendering_and_parsing() {
        let t = TypeSignature::new(1, vec![3, 2, 2, 3, 2, 2]);
        assert_eq!(t.branch_orders, vec![2, 2, 2, 2, 3, 3]);
        assert_eq!(t.to_string(), "(1 | 2^4,3^2)");
        assert_eq!("(1 | 2^4,3^2)".parse::<TypeSignature>().unwrap(), t);
        assert_eq!(
            "(0|2,5)".parse::<TypeSignature>().unwrap().to_string(),
            "(0 | 2,5)"
        );
        assert_eq!(
            "(2 | )".parse::<TypeSignature>().unwrap(),
            TypeSignature::new(2, vec![])
        );
        for bad in [
            "", "(0 2)", "(0|1)", "(x|2)", "(0|2^0)", "0|2", "(0|2^)", "(0|2,,3)",
        ] {
            assert!(bad.parse::<TypeSignature>().is_err(), "{bad}");
        }
    }

    #[test]
    fn non_generating_system_fails() {
        let g = d8();
        let sys = GeneratorSystem::spherical(vec![g.gen(0), g.gen(0)]);
        assert!(matches!(
            validate_system(&g, &sys),
            Err(RamificationError::GenerationFailure {
                quotient_rank: 1,
                required: 2
            })
        ));
    }

    #[test]
    fn broken_long_relation_fails() {
        let g = d8();
        // g1·g2 = g1g2 ≠ 1
        let sys = GeneratorSystem::spherical(vec![g.gen(0), g.gen(1)]);
        assert!(matches!(
            validate_system(&g, &sys),
            Err(RamificationError::RelationFailure { .. })
        ));
    }

    #[test]
    fn d8_spherical_system_validates() {
        let g = d8();
        let sys = GeneratorSystem::spherical(vec![g.gen(0), g.gen(0), g.gen(1), g.gen(1)]);
        assert_eq!(
            validate_system(&g, &sys).unwrap(),
            TypeSignature::new(0, vec![2; 4])
        );
    }

    #[test]
    fn trivial_spherical_entry_is_rejected() {
        let g = d8();
        let sys =
            GeneratorSystem::spherical(vec![g.gen(0), g.gen(0), g.gen(1), g.gen(1), g.identity()]);
        assert!(matches!(
            validate_system(&g, &sys),
            Err(RamificationError::TrivialSphericalEntry { index: 4 })
        ));
    }

    #[test]
    fn sigma_set_examples() {
        let g = d8();
        let empty = GeneratorSystem::spherical(vec![]);
        assert_eq!(
            sigma_set(&g, &empty)
                .unwrap()
                .into_iter()
                .collect::<Vec<_>>(),
            vec![g.identity()]
        );
        let sys = GeneratorSystem::spherical(vec![g.gen(0), g.gen(0)]);
        let g1h1 = g.multiply(&g.gen(0), &g.central(0)).unwrap();
        assert_eq!(
            sigma_set(&g, &sys).unwrap(),
            [g.identity(), g.gen(0), g1h1.clone()].into_iter().collect()
        );
        let conj = GeneratorSystem::spherical(vec![g1h1.clone(), g1h1]);
        assert_eq!(sigma_set(&g, &conj).unwrap().len(), 3);
    }

    #[test]
    fn sigma_set_includes_powers_of_order_four_entries() {
        let g = d8();
        let x = g.multiply(&g.gen(0), &g.gen(1)).unwrap();
        let sys = GeneratorSystem::spherical(vec![x.clone()]);
        let sigma = sigma_set(&g, &sys).unwrap();
        assert!(sigma.contains(&g.central(0)));
        assert_eq!(sigma.len(), 4);
    }

    #[test]
    fn disjointness_examples() {
        let g = d8();
        let sys = GeneratorSystem::spherical(vec![g.gen(0), g.gen(0), g.gen(1), g.gen(1)]);
        assert!(!are_disjoint(&g, &sys, &sys).unwrap());

        let a = GeneratorSystem::spherical(vec![g.gen(0), g.gen(0)]);
        let b = GeneratorSystem::spherical(vec![g.gen(1), g.gen(1)]);
        assert!(lemma_criterion(&g, &a, &b).unwrap());
        assert!(are_disjoint(&g, &a, &b).unwrap());

        let ha = GeneratorSystem::spherical(vec![g.gen(0), g.central(0)]);
        let hb = GeneratorSystem::spherical(vec![g.gen(1), g.central(0)]);
        assert!(!lemma_criterion(&g, &ha, &hb).unwrap());
        assert!(!are_disjoint(&g, &ha, &hb).unwrap());
    }

    #[test]
    fn criterion_is_inapplicable_to_order_four_entries() {
        let g = d8();
        let x = g.multiply(&g.gen(0), &g.gen(1)).unwrap();
        let a = GeneratorSystem::spherical(vec![x]);
        let b = GeneratorSystem::spherical(vec![g.gen(0)]);
        assert!(matches!(
            lemma_criterion(&g, &a, &b),
            Err(RamificationError::CriterionInapplicable {
                system: 1,
                index: 0,
                order: 4
            })
        ));
    }

    #[test]
    fn admissibility_examples() {
        let t4 = TypeSignature::new(0, vec![2; 4]);
        assert!(!is_admissible(&BigUint::from(8u32), &t4));
        assert!(is_admissible(
            &BigUint::from(64u32),
            &TypeSignature::new(0, vec![2; 6])
        ));
        let s = 4u32;
        let t = TypeSignature::new(1, vec![2; (2 * s - 2 + 2) as usize]);
        assert!(is_admissible(&invariants::family_order(s), &t));
    }

    #[test]
    fn make_structure_on_order_8_is_not_admissible() {
        let g = d8();
        let sys = GeneratorSystem::spherical(vec![g.gen(0), g.gen(0), g.gen(1), g.gen(1)]);
        let x = g.multiply(&g.gen(0), &g.central(0)).unwrap();
        let y = g.multiply(&g.gen(1), &g.central(0)).unwrap();
        let other = GeneratorSystem::spherical(vec![x.clone(), x, y.clone(), y]);
        assert!(matches!(
            make_structure(&g, &sys, &other),
            Err(RamificationError::NotAdmissible { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let g = d8();
        let sys = GeneratorSystem::with_handles(vec![(g.gen(0), g.gen(1))], vec![g.central(0)]);
        let text = sys.to_json();
        assert_eq!(
            text,
            r#"{"genus_prime":1,"handles":["0x1","0x2"],"spherical":["0x4"]}"#
        );
        assert_eq!(GeneratorSystem::from_json(1, &text).unwrap(), sys);
        for bad in [
            r#"{"genus_prime":1,"handles":["0x1"],"spherical":[]}"#,
            r#"{"genus_prime":0,"handles":[],"spherical":["0x8"]}"#,
            r#"{"genus_prime":0,"handles":[],"spherical":["zz"]}"#,
            r#"{"genus_prime":0,"handles":[]}"#,
            r#"{"genus_prime":0,"handles":[],"spherical":[],"extra":1}"#,
            "[]",
        ] {
            assert!(GeneratorSystem::from_json(1, bad).is_err(), "{bad}");
        }
    }
}
