//! Numerical invariants of the curves and surfaces attached to a group
//! order and a pair of types.
//!
//! Everything is exact: genera are rationals until proven integral, and
//! `χ` is computed both from the genera and from the product formula
//! `4χ = |G| · A₁ · A₂` with `Aᵢ = 2g'ᵢ − 2 + Σ (1 − 1/m)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::ramification::TypeSignature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("type {signature} does not give an integral genus for order {order}")]
    NotRealizable { order: BigUint, signature: String },
    #[error("type {signature} is not admissible for order {order}")]
    NotAdmissible { order: BigUint, signature: String },
    #[error("internal invariant violated: {0}")]
    Inconsistent(String),
    #[error("closed form needs s >= 2, got s={0}")]
    DegenerateRank(u32),
}

/// `2g' − 2 + Σ (1 − 1/mᵢ)`.
pub fn orbifold_term(t: &TypeSignature) -> BigRational {
    let mut acc = BigRational::from_integer(BigInt::from(2 * t.genus_prime as i64 - 2));
    for &m in &t.branch_orders {
        acc += BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m));
    }
    acc
}

fn rational(order: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(order.clone()))
}

/// Solution `g` of `2g − 2 = |G| (2g' − 2 + Σ (1 − 1/mᵢ))`; not always an integer.
pub fn rh_genus(order: &BigUint, t: &TypeSignature) -> BigRational {
    rational(order) * orbifold_term(t) / BigInt::from(2) + BigRational::one()
}

/// The Riemann–Hurwitz genus, if it is an integer.
pub fn integral_genus(order: &BigUint, t: &TypeSignature) -> Result<BigInt, InvariantsError> {
    let g = rh_genus(order, t);
    if g.is_integer() {
        Ok(g.to_integer())
    } else {
        Err(InvariantsError::NotRealizable {
            order: order.clone(),
            signature: t.to_string(),
        })
    }
}

/// Whether the covering curve has integral genus at least two.
pub fn genus_admissible(order: &BigUint, t: &TypeSignature) -> bool {
    integral_genus(order, t).is_ok_and(|g| g >= BigInt::from(2))
}

/// Topological Euler number `2 − 2g` of the covering curve.
///
/// Also evaluated as `|G| (e(C') − Σ (1 − 1/mᵢ))` with `e(C') = 2 − 2g'`;
/// the two routes must agree.
pub fn curve_euler(order: &BigUint, t: &TypeSignature) -> Result<BigInt, InvariantsError> {
    let g = integral_genus(order, t)?;
    let via_genus = BigInt::from(2) - BigInt::from(2) * &g;
    let via_branching = -(rational(order) * orbifold_term(t));
    if via_branching != BigRational::from_integer(via_genus.clone()) {
        return Err(InvariantsError::Inconsistent(format!(
            "Euler number routes disagree for {t}: {via_genus} vs {via_branching}"
        )));
    }
    Ok(via_genus)
}

/// Invariants of `S = (C₁ × C₂)/G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    #[serde(serialize_with = "crate::json::big_int")]
    pub chi: BigInt,
    #[serde(rename = "K2", serialize_with = "crate::json::big_int")]
    pub k2: BigInt,
    #[serde(serialize_with = "crate::json::big_int")]
    pub e: BigInt,
    pub q: u32,
    #[serde(serialize_with = "crate::json::big_int")]
    pub g1: BigInt,
    #[serde(serialize_with = "crate::json::big_int")]
    pub g2: BigInt,
    #[serde(serialize_with = "crate::json::big_uint")]
    pub group_order: BigUint,
}

pub fn surface_invariants(
    order: &BigUint,
    t1: &TypeSignature,
    t2: &TypeSignature,
) -> Result<SurfaceInvariants, InvariantsError> {
    for t in [t1, t2] {
        if !genus_admissible(order, t) {
            return Err(InvariantsError::NotAdmissible {
                order: order.clone(),
                signature: t.to_string(),
            });
        }
    }
    let g1 = integral_genus(order, t1)?;
    let g2 = integral_genus(order, t2)?;
    let n = BigInt::from(order.clone());

    let numerator: BigInt = (&g1 - BigInt::one()) * (&g2 - BigInt::one());
    if !(&numerator % &n).is_zero() {
        return Err(InvariantsError::Inconsistent(format!(
            "(g1-1)(g2-1) = {numerator} is not divisible by |G| = {n}"
        )));
    }
    let chi = &numerator / &n;

    let four_chi = rational(order) * orbifold_term(t1) * orbifold_term(t2);
    if four_chi != BigRational::from_integer(BigInt::from(4) * &chi) {
        return Err(InvariantsError::Inconsistent(format!(
            "χ from genera ({chi}) disagrees with the product formula (4χ = {four_chi})"
        )));
    }
    if !chi.is_positive() {
        return Err(InvariantsError::Inconsistent(format!(
            "χ = {chi} is not positive"
        )));
    }

    Ok(SurfaceInvariants {
        k2: BigInt::from(8) * &chi,
        e: BigInt::from(4) * &chi,
        chi,
        q: t1.genus_prime + t2.genus_prime,
        g1,
        g2,
        group_order: order.clone(),
    })
}

/// `2^(3s−2) (s − 1)(s + q − 1)`.
pub fn closed_form_chi(s: u32, q: u32) -> Result<BigInt, InvariantsError> {
    if s < 2 {
        return Err(InvariantsError::DegenerateRank(s));
    }
    Ok((BigInt::one() << (3 * s - 2)) * BigInt::from(s - 1) * BigInt::from(s + q - 1))
}

/// `|G| = 2^(3s)`.
pub fn family_order(s: u32) -> BigUint {
    BigUint::one() << (3 * s)
}

/// The pair of types realized by the constructions: `(0 | 2^(2s+2))` and
/// `(q | 2^(2s−2q+2))`.
pub fn theorem_types(s: u32, q: u32) -> (TypeSignature, TypeSignature) {
    assert!(2 * q <= 2 * s + 2, "q={q} too large for s={s}");
    (
        TypeSignature::new(0, vec![2; (2 * s + 2) as usize]),
        TypeSignature::new(q, vec![2; (2 * s - 2 * q + 2) as usize]),
    )
}

/// Surface invariants for the theorem types of `(s, q)`.
pub fn family_invariants(s: u32, q: u32) -> Result<SurfaceInvariants, InvariantsError> {
    let (t1, t2) = theorem_types(s, q);
    surface_invariants(&family_order(s), &t1, &t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(g: u32, orders: &[u32]) -> TypeSignature {
        TypeSignature::new(g, orders.to_vec())
    }

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn rh_genus_examples() {
        assert_eq!(rh_genus(&n(8), &t(0, &[2, 2, 2, 2])), BigRational::one());
        // (0 | 2^(2s+2)) at s = 2: 2^(3s-1)(s-1)+1 = 33
        assert_eq!(
            integral_genus(&n(64), &t(0, &[2; 6])).unwrap(),
            BigInt::from(33)
        );
        // s = 4, q = 2: (2 | 2^6) on order 2^12 gives 2^11·5 + 1
        assert_eq!(
            integral_genus(&family_order(4), &t(2, &[2; 6])).unwrap(),
            BigInt::from(10241)
        );
    }

    #[test]
    fn non_integral_genus_is_flagged() {
        // order 2, (0 | 3): 2g - 2 = 2(-2 + 2/3)
        let g = rh_genus(&n(2), &t(0, &[3]));
        assert!(!g.is_integer());
        assert!(matches!(
            integral_genus(&n(2), &t(0, &[3])),
            Err(InvariantsError::NotRealizable { .. })
        ));
    }

    #[test]
    fn curve_euler_examples() {
        assert_eq!(curve_euler(&n(8), &t(0, &[2; 4])).unwrap(), BigInt::zero());
        // s = 2: 2^6 (1 - 2) = -64 = 2 - 2·33
        assert_eq!(
            curve_euler(&n(64), &t(0, &[2; 6])).unwrap(),
            BigInt::from(-64)
        );
        assert_eq!(
            curve_euler(&family_order(4), &t(0, &[2; 10])).unwrap(),
            BigInt::from(-12288)
        );
    }

    #[test]
    fn surface_invariants_examples() {
        let inv = family_invariants(2, 0).unwrap();
        assert_eq!(inv.chi, BigInt::from(16));
        assert_eq!(inv.k2, BigInt::from(128));
        assert_eq!(inv.e, BigInt::from(64));
        assert_eq!(inv.q, 0);

        let inv = family_invariants(4, 0).unwrap();
        assert_eq!(inv.chi, BigInt::from(9216));
        assert_eq!(inv.k2, BigInt::from(73728));

        assert_eq!(family_invariants(4, 1).unwrap().chi, BigInt::from(12288));
    }

    #[test]
    fn surface_invariants_rejects_inadmissible() {
        let err = surface_invariants(&n(8), &t(0, &[2; 4]), &t(0, &[2; 4])).unwrap_err();
        assert!(matches!(err, InvariantsError::NotAdmissible { .. }));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_chi(2, 0).unwrap(), BigInt::from(16));
        assert_eq!(closed_form_chi(3, 1).unwrap(), BigInt::from(768));
        for s in 2..12 {
            let q0 = closed_form_chi(s, 0).unwrap();
            let square = (BigInt::one() << (3 * s - 2)) * BigInt::from((s - 1) * (s - 1));
            assert_eq!(q0, square);
        }
        assert_eq!(
            closed_form_chi(1, 0),
            Err(InvariantsError::DegenerateRank(1))
        );
    }

    #[test]
    fn closed_form_matches_pipeline_and_is_monotone() {
        for s in 2..=12u32 {
            for q in 0..=s.saturating_sub(2) {
                let inv = family_invariants(s, q).unwrap();
                assert_eq!(inv.chi, closed_form_chi(s, q).unwrap(), "s={s} q={q}");
                assert_eq!(inv.q, q);
                if q > 0 {
                    assert!(closed_form_chi(s, q).unwrap() > closed_form_chi(s, q - 1).unwrap());
                }
            }
            if s > 2 {
                assert!(closed_form_chi(s, 0).unwrap() > closed_form_chi(s - 1, 0).unwrap());
            }
        }
    }
}
