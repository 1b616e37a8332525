//! Atiyah–Singer ρ-invariants of lens spaces as exact cyclotomic vectors.
//!
//! The defect at g ∈ Z/p is ∏ₖ (ζ^{g aₖ} + 1)/(ζ^{g aₖ} - 1), signed by the
//! orientation of the space. No overall normalization is applied; only
//! zero/nonzero verdicts of differences are meaningful.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lens::{homotopy_witnesses, LensSpace};
use crate::Cyclotomic;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoInvariant {
    pub p: u64,
    /// Defect at g for g = 1 … p-1 (index g - 1).
    pub values: Vec<Cyclotomic>,
    /// Σ_g values[g], a rational number.
    pub total: Cyclotomic,
}

impl RhoInvariant {
    pub fn at(&self, g: u64) -> &Cyclotomic {
        &self.values[(g % self.p) as usize - 1]
    }

    pub fn negated(&self) -> Self {
        Self {
            p: self.p,
            values: self.values.iter().map(|v| -v).collect(),
            total: -&self.total,
        }
    }

    /// values[g^r] equals the Galois conjugate ζ ↦ ζ^r of values[g].
    pub fn is_galois_equivariant(&self) -> bool {
        let p = self.p;
        (1..p).all(|g| (1..p).all(|r| *self.at(g * r % p) == self.at(g).galois(r)))
    }
}

/// (ζ^x + 1)/(ζ^x - 1) for x = 1 … p-1 (index x - 1).
fn cotangent_factors(p: u64) -> Result<Vec<Cyclotomic>> {
    let one = Cyclotomic::one(p);
    (1..p as i64)
        .map(|x| {
            let z = Cyclotomic::zeta_pow(p, x);
            (&z + &one).try_div(&(&z - &one))
        })
        .collect()
}

pub fn rho_invariant(l: &LensSpace) -> Result<RhoInvariant> {
    let p = l.prime().get();
    let factors = cotangent_factors(p)?;
    let sign = Cyclotomic::from_scalar(p, BigRational::from_integer(l.orientation().into()));
    let values: Vec<Cyclotomic> = (1..p)
        .map(|g| {
            l.weights()
                .iter()
                .fold(sign.clone(), |acc, &a| &acc * &factors[(g * a % p) as usize - 1])
        })
        .collect();
    let total = values
        .iter()
        .fold(Cyclotomic::zero(p), |acc, v| &acc + v);
    Ok(RhoInvariant { p, values, total })
}

/// ρ₁(g) - deg·ρ₂(e·g) for one homotopy witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDifference {
    pub e: u64,
    /// +1 if the equivalence preserves the given orientations, -1 otherwise.
    pub degree: i8,
    pub values: Vec<Cyclotomic>,
    pub zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoVerdict {
    /// Vanishing difference: the pair are normally cobordant candidates.
    Zero,
    Nonzero,
    /// No homotopy equivalence to align along.
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoDifference {
    pub witnesses: Vec<WitnessDifference>,
    /// Zero for some witness of either degree.
    pub verdict: RhoVerdict,
    /// Zero for some orientation-preserving witness.
    pub oriented_verdict: RhoVerdict,
}

impl RhoDifference {
    pub fn is_zero(&self) -> bool {
        self.verdict == RhoVerdict::Zero
    }

    pub fn witness(&self, e: u64) -> Option<&WitnessDifference> {
        self.witnesses.iter().find(|w| w.e == e)
    }
}

pub fn rho_difference(l1: &LensSpace, l2: &LensSpace) -> Result<RhoDifference> {
    let ws = homotopy_witnesses(l1, l2);
    if ws.is_empty() {
        return Ok(RhoDifference {
            witnesses: Vec::new(),
            verdict: RhoVerdict::Incomparable,
            oriented_verdict: RhoVerdict::Incomparable,
        });
    }
    let p = l1.prime().get();
    let (r1, r2) = (rho_invariant(l1)?, rho_invariant(l2)?);
    let witnesses: Vec<WitnessDifference> = ws
        .into_iter()
        .map(|(e, degree)| {
            let values: Vec<Cyclotomic> = (1..p)
                .map(|g| {
                    let other = r2.at(e * g % p);
                    if degree > 0 {
                        r1.at(g) - other
                    } else {
                        r1.at(g) + other
                    }
                })
                .collect();
            let zero = values.iter().all(Cyclotomic::is_zero);
            WitnessDifference {
                e,
                degree,
                values,
                zero,
            }
        })
        .collect();
    let verdict_of = |ok: bool| if ok { RhoVerdict::Zero } else { RhoVerdict::Nonzero };
    Ok(RhoDifference {
        verdict: verdict_of(witnesses.iter().any(|w| w.zero)),
        oriented_verdict: verdict_of(witnesses.iter().any(|w| w.zero && w.degree > 0)),
        witnesses,
    })
}

/// Σ_g values as a rational, when it is one.
pub fn total_as_rational(r: &RhoInvariant) -> Option<BigRational> {
    r.total.as_scalar()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lens::isometric;
    use crate::PrimeModulus;

    fn l(p: u64, w: &[i64]) -> LensSpace {
        LensSpace::new(p, w).unwrap()
    }

    #[test]
    fn self_difference_vanishes() {
        let m = l(7, &[1, 2, 3]);
        let d = rho_difference(&m, &m).unwrap();
        assert!(d.is_zero());
        assert!(d.witness(1).unwrap().zero);
        assert_eq!(d.oriented_verdict, RhoVerdict::Zero);
    }

    #[test]
    fn distinguishes_homotopy_equivalent_pair() {
        let d = rho_difference(&l(7, &[1, 1, 1]), &l(7, &[1, 2, 4])).unwrap();
        assert!(!d.witnesses.is_empty());
        assert_eq!(d.verdict, RhoVerdict::Nonzero);
    }

    #[test]
    fn isometric_pair_aligns() {
        let (a, b) = (l(5, &[1, 1]), l(5, &[2, 2]));
        assert!(isometric(&a, &b).is_some());
        assert!(rho_difference(&a, &b).unwrap().is_zero());
        // raw weights (2, 3) fold to (2, 2) with reversed orientation
        let c = l(5, &[2, 3]);
        let d = rho_difference(&a, &c).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.oriented_verdict, RhoVerdict::Nonzero);
    }

    #[test]
    fn incomparable_without_witness() {
        let d = rho_difference(&l(5, &[1, 1]), &l(5, &[1, 2])).unwrap();
        assert_eq!(d.verdict, RhoVerdict::Incomparable);
    }

    #[test]
    fn galois_equivariance_and_orientation() {
        for w in [&[1i64][..], &[1, 2], &[1, 2, 3], &[3, 3, 5, 1]] {
            let r = rho_invariant(&l(11, w)).unwrap();
            assert!(r.is_galois_equivariant());
            let rev = rho_invariant(&l(11, w).reversed()).unwrap();
            assert_eq!(rev, r.negated());
            assert!(total_as_rational(&r).is_some());
        }
    }

    #[test]
    fn lens_circle_has_known_total() {
        // Σ_g (ζ^g + 1)/(ζ^g - 1) = 0 since the summand is odd under g ↦ -g
        let r = rho_invariant(&l(7, &[1])).unwrap();
        assert!(r.total.is_zero());
        let p = PrimeModulus::new(7).unwrap();
        assert_eq!(r.values.len() as u64, p.get() - 1);
    }

    #[test]
    fn antisymmetry_under_inverse_witness() {
        let (a, b) = (l(7, &[1, 1, 1]), l(7, &[1, 2, 4]));
        let d = rho_difference(&a, &b).unwrap();
        let d_rev = rho_difference(&b, &a).unwrap();
        let p = PrimeModulus::new(7).unwrap();
        for w in &d.witnesses {
            let inv = p.inv(w.e).unwrap();
            let back = d_rev.witness(inv).unwrap();
            assert_eq!(back.degree, w.degree);
            for g in 1..7u64 {
                let lhs = &back.values[g as usize - 1];
                let src = &w.values[(inv * g % 7) as usize - 1];
                let rhs = if w.degree > 0 { -src } else { src.clone() };
                assert_eq!(*lhs, rhs);
            }
        }
    }
}
