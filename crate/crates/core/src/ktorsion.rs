//! Algebraic detectors for thickness in codimensions 1 and 2: the rank of the
//! Whitehead group of Z/p and the relative class number h⁻(p), which decides
//! whether K̃₀(Z[Z/p]) can be nonzero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};
use crate::exactnum::modular::primitive_roots_mod_p;
use crate::exactnum::{CyclotomicPoly, PrimeModulus};

/// Default upper bound on p for [`h_minus`].
pub const H_MINUS_BOUND: u64 = 200;

/// Below this bound every prime with h⁻(p) = 1 also has h⁺(p) = 1.
pub const PLUS_PART_VERIFIED_BELOW: u64 = 163;

/// Rank of Wh(Z/p).
pub fn whitehead_rank(p: PrimeModulus) -> u64 {
    (p.get() - 3) / 2
}

/// h⁻(p) with the default bound.
pub fn h_minus(p: PrimeModulus) -> Result<BigInt> {
    h_minus_bounded(p, H_MINUS_BOUND)
}

/// h⁻(p) = 2p ∏_{χ odd} (-B_{1,χ}/2), with B_{1,χ} = (1/p) Σ a·χ(a) and the
/// characters valued in Q(ζ_{p-1}).
pub fn h_minus_bounded(p: PrimeModulus, bound: u64) -> Result<BigInt> {
    let q = p.get();
    if q > bound {
        return Err(Error::PrimeBeyondBound { p: q, bound });
    }
    let g = primitive_roots_mod_p(p).next().expect("odd primes have primitive roots");
    let ring = CyclotomicPoly::new(q - 1);
    // r[i] = g^i mod p, so χ_k(r[i]) = ζ^{k i}
    let r: Vec<u64> = (0..q - 1).map(|i| p.pow(g, i)).collect();
    let scale = BigRational::new(BigInt::from(-1), BigInt::from(2 * q));

    let mut prod = ring.constant(BigRational::one());
    for k in (1..q - 1).step_by(2) {
        let b = ring.from_terms(
            r.iter()
                .enumerate()
                .map(|(i, &ri)| (BigRational::from_integer(ri.into()), k * i as u64)),
        );
        let factor: Vec<BigRational> = b.iter().map(|c| c * &scale).collect();
        prod = ring.mul(&prod, &factor);
    }
    let value = ring
        .as_scalar(&prod)
        .ok_or_else(|| Error::Inconsistency(format!("h-(p) product for p = {q} is not rational")))?
        * BigRational::from_integer(BigInt::from(2 * q));
    if !value.is_integer() || !value.is_positive() {
        return Err(Error::Inconsistency(format!(
            "h-(p) for p = {q} evaluated to {value}, not a positive integer"
        )));
    }
    Ok(value.to_integer())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum K0Status {
    Trivial,
    Nontrivial,
    UnknownUnderPlusPart,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowCodimDetectors {
    pub p: u64,
    pub wh_rank: u64,
    #[serde_as(as = "DisplayFromStr")]
    pub h_minus: BigInt,
    pub k0_trivial: K0Status,
    pub tate_h0_note: String,
}

pub fn low_codim_detectors(p: PrimeModulus) -> Result<LowCodimDetectors> {
    let h = h_minus(p)?;
    let k0 = if !h.is_one() {
        K0Status::Nontrivial
    } else if p.get() < PLUS_PART_VERIFIED_BELOW {
        K0Status::Trivial
    } else {
        K0Status::UnknownUnderPlusPart
    };
    let tate_h0_note = match k0 {
        K0Status::Trivial => "K~0(Z[Z/p]) = 0, so the Tate group H^0(Z/2; K~0) vanishes and \
                              every class in TT2 already lies in TT1"
            .to_string(),
        K0Status::Nontrivial => format!(
            "K~0(Z[Z/p]) has order divisible by h-(p) = {h}; classes in TT2 but not TT1 \
             correspond to nonzero elements of H^0(Z/2; K~0), which may be nontrivial"
        ),
        K0Status::UnknownUnderPlusPart => "h-(p) = 1 but the plus part of the class number is \
                                           not verified here; H^0(Z/2; K~0) may be nontrivial"
            .to_string(),
    };
    Ok(LowCodimDetectors {
        p: p.get(),
        wh_rank: whitehead_rank(p),
        h_minus: h,
        k0_trivial: k0,
        tate_h0_note,
    })
}
