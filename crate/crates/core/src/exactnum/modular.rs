//! Modular arithmetic over small moduli and p-adic valuations.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 3 && is_prime(p) {
            Ok(PrimeModulus(p))
        } else {
            Err(Error::NotOddPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Number of distinct nontrivial real irreducibles, `(p - 1) / 2`.
    #[inline]
    pub fn half(self) -> usize {
        ((self.0 - 1) / 2) as usize
    }

    /// Reduce a signed integer into `0..p`.
    #[inline]
    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    /// Fold a nonzero residue into `1..=(p-1)/2`, identifying `a` with `p - a`.
    /// Returns the folded value and whether a sign flip was needed.
    pub fn fold(self, x: i64) -> Option<(u64, bool)> {
        let r = self.reduce(x);
        if r == 0 {
            None
        } else if 2 * r < self.0 {
            Some((r, false))
        } else {
            Some((self.0 - r, true))
        }
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        mod_pow(a, e, self.0)
    }

    pub fn inv(self, a: u64) -> Result<u64> {
        mod_inv(a, self.0).ok_or(Error::NotAUnit {
            r: a as i64,
            p: self.0,
        })
    }

    pub fn units(self) -> impl Iterator<Item = u64> {
        1..self.0
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(p: PrimeModulus) -> u64 {
        p.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mod_pow(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * a as u128) % m as u128) as u64;
        }
        a = ((a as u128 * a as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `a` modulo `m`, or `None` if `a` is not a unit.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if a.gcd(&m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True when `g` generates the unit group mod `p` (p prime).
pub fn is_primitive_root_mod_p(g: u64, p: u64) -> bool {
    if g.is_multiple_of(p) {
        return false;
    }
    prime_factors(p - 1)
        .into_iter()
        .all(|q| mod_pow(g, (p - 1) / q, p) != 1)
}

/// Primitive roots mod `p`, in increasing order.
pub fn primitive_roots_mod_p(p: PrimeModulus) -> impl Iterator<Item = u64> {
    let p = p.get();
    (2..p).filter(move |&g| is_primitive_root_mod_p(g, p))
}

/// Smallest positive generator of the unit group mod `p^2`.
///
/// A primitive root `g` mod `p` lifts to `p^2` unless `g^(p-1) = 1 (mod p^2)`,
/// so the search only tests the lifting condition.
pub fn primitive_root_mod_p_squared(p: PrimeModulus) -> u64 {
    let q = p.get();
    let sq = q * q;
    (2..sq)
        .find(|&g| is_primitive_root_mod_p(g % q, q) && mod_pow(g, q - 1, sq) != 1)
        .expect("odd prime squares always have primitive roots")
}

/// Largest `v` with `p^v | x`.
pub fn p_adic_valuation<T>(x: &T, p: &T) -> Result<u32>
where
    T: Integer + Clone,
{
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(p);
        if !r.is_zero() {
            return Ok(v);
        }
        y = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn rejects_non_odd_primes() {
        for bad in [0, 1, 2, 4, 9, 15, 91] {
            assert_eq!(PrimeModulus::new(bad), Err(Error::NotOddPrime(bad)));
        }
        assert!(PrimeModulus::new(199).is_ok());
    }

    #[test]
    fn smallest_primitive_roots_mod_p_squared() {
        // Frozen from exhaustive order computation over all residues mod p^2.
        assert_eq!(primitive_root_mod_p_squared(pm(3)), 2);
        assert_eq!(primitive_root_mod_p_squared(pm(5)), 2);
        assert_eq!(primitive_root_mod_p_squared(pm(7)), 3);
    }

    #[test]
    fn primitive_root_has_full_order() {
        for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
            let p = pm(p);
            let q = p.get();
            let g = primitive_root_mod_p_squared(p);
            assert_eq!(multiplicative_order(g, q * q), Some(q * (q - 1)));
            assert_eq!(multiplicative_order(g, q), Some(q - 1));
            // nothing smaller works
            for h in 2..g {
                assert_ne!(multiplicative_order(h, q * q), Some(q * (q - 1)));
            }
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_valuation(&8i64, &5), Ok(0));
        assert_eq!(p_adic_valuation(&50i64, &5), Ok(2));
        assert_eq!(p_adic_valuation(&-50i64, &5), Ok(2));
        assert_eq!(p_adic_valuation(&0i64, &5), Err(Error::ZeroValuation));
        for p in [3i64, 5, 7, 11, 13] {
            for k in 0..=12u32 {
                assert_eq!(p_adic_valuation(&p.pow(k), &p), Ok(k));
            }
        }
    }

    #[test]
    fn valuation_on_bigints() {
        use num_bigint::BigInt;
        let x = BigInt::from(7).pow(40u32) * 3;
        assert_eq!(p_adic_valuation(&x, &BigInt::from(7)), Ok(40));
    }

    #[test]
    fn fold_identifies_negatives() {
        let p = pm(7);
        assert_eq!(p.fold(4), Some((3, true)));
        assert_eq!(p.fold(-1), Some((1, true)));
        assert_eq!(p.fold(9), Some((2, false)));
        assert_eq!(p.fold(14), None);
    }

    #[test]
    fn inverses() {
        let p = pm(11);
        for a in 1..11 {
            assert_eq!(p.mul(a, p.inv(a).unwrap()), 1);
        }
        assert!(p.inv(0).is_err());
    }
}
