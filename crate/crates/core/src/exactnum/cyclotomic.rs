//! Elements of the cyclotomic field Q(ζ_p) for an odd prime p.
//!
//! Elements are stored on the basis ζ, ζ², …, ζ^{p-1}. The relation
//! 1 + ζ + … + ζ^{p-1} = 0 makes this a Q-basis, and the Galois automorphism
//! ζ ↦ ζ^r acts by permuting coordinates.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FieldScalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber<T> {
    p: u64,
    /// `coeffs[j - 1]` is the coefficient of ζ^j.
    coeffs: Vec<T>,
}

impl<T: FieldScalar> CyclotomicNumber<T> {
    pub fn zero(p: u64) -> Self {
        Self {
            p,
            coeffs: vec![T::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u64) -> Self {
        Self::from_scalar(p, T::one())
    }

    pub fn from_scalar(p: u64, c: T) -> Self {
        Self {
            p,
            coeffs: vec![-c; (p - 1) as usize],
        }
    }

    /// Builds from the coordinates on ζ, …, ζ^{p-1}.
    pub fn from_coeffs(p: u64, coeffs: Vec<T>) -> Self {
        assert_eq!(coeffs.len() as u64, p - 1, "need p - 1 coefficients");
        Self { p, coeffs }
    }

    /// Image of Σ c_k ζ^k (k = 0..p) from the group ring Q[Z/p].
    pub fn from_group_ring(p: u64, ring: &[T]) -> Self {
        assert_eq!(ring.len() as u64, p);
        let c0 = ring[0].clone();
        Self {
            p,
            coeffs: ring[1..].iter().map(|c| c.clone() - c0.clone()).collect(),
        }
    }

    /// ζ^k, with k taken mod p.
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        let k = k.rem_euclid(p as i64) as usize;
        if k == 0 {
            return Self::one(p);
        }
        let mut z = Self::zero(p);
        z.coeffs[k - 1] = T::one();
        z
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value, when the element lies in Q.
    pub fn as_scalar(&self) -> Option<T> {
        let first = self.coeffs[0].clone();
        if self.coeffs.iter().all(|c| *c == first) {
            Some(-first)
        } else {
            None
        }
    }

    /// Galois automorphism ζ ↦ ζ^r for r prime to p.
    pub fn galois(&self, r: u64) -> Self {
        assert!(!r.is_multiple_of(self.p), "Galois exponent must be a unit");
        let mut out = vec![T::zero(); self.coeffs.len()];
        for (j, c) in self.coeffs.iter().enumerate() {
            let k = ((j as u64 + 1) * r) % self.p;
            out[(k - 1) as usize] = c.clone();
        }
        Self {
            p: self.p,
            coeffs: out,
        }
    }

    /// Complex conjugation, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(self.p - 1)
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed cyclotomic fields");
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        let p = self.p as usize;
        let mut ring = vec![T::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j + 2) % p;
                ring[k] = ring[k].clone() + a.clone() * b.clone();
            }
        }
        Self::from_group_ring(self.p, &ring)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> T {
        let conjugates = self.conjugate_product();
        (self.mul_ref(&conjugates))
            .as_scalar()
            .expect("norm of an element lies in Q")
    }

    fn conjugate_product(&self) -> Self {
        (2..self.p).fold(Self::one(self.p), |acc, r| acc.mul_ref(&self.galois(r)))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.p));
        }
        let conjugates = self.conjugate_product();
        let n = self
            .mul_ref(&conjugates)
            .as_scalar()
            .expect("norm of an element lies in Q");
        Ok(conjugates.scale(&(T::one() / n)))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other);
        Ok(self.mul_ref(&other.inverse()?))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }
}

impl<T: FieldScalar> Add<&CyclotomicNumber<T>> for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn add(self, other: &CyclotomicNumber<T>) -> CyclotomicNumber<T> {
        self.check_prime(other);
        CyclotomicNumber {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: FieldScalar> Sub<&CyclotomicNumber<T>> for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn sub(self, other: &CyclotomicNumber<T>) -> CyclotomicNumber<T> {
        self.check_prime(other);
        CyclotomicNumber {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: FieldScalar> Mul<&CyclotomicNumber<T>> for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn mul(self, other: &CyclotomicNumber<T>) -> CyclotomicNumber<T> {
        self.mul_ref(other)
    }
}

impl<T: FieldScalar> Neg for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn neg(self) -> CyclotomicNumber<T> {
        CyclotomicNumber {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: FieldScalar> $tr for CyclotomicNumber<T> {
            type Output = CyclotomicNumber<T>;

            fn $m(self, other: CyclotomicNumber<T>) -> CyclotomicNumber<T> {
                (&self).$m(&other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: FieldScalar> Neg for CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn neg(self) -> CyclotomicNumber<T> {
        -&self
    }
}

impl<T: FieldScalar + fmt::Display> fmt::Display for CyclotomicNumber<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_scalar() {
            return write!(f, "{c}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{}", j + 1)?;
        }
        Ok(())
    }
}

impl<T: FieldScalar + fmt::Display> fmt::Debug for CyclotomicNumber<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(z_{})[{self}]", self.p)
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    p: u64,
    coeffs: Vec<String>,
}

impl<T: FieldScalar + fmt::Display> Serialize for CyclotomicNumber<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de, T> Deserialize<'de> for CyclotomicNumber<T>
where
    T: FieldScalar + FromStr,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        if w.p < 3 || w.coeffs.len() as u64 != w.p - 1 {
            return Err(D::Error::custom("coefficient count must be p - 1"));
        }
        let coeffs = w
            .coeffs
            .iter()
            .map(|c| c.parse::<T>().map_err(|_| D::Error::custom("bad rational")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { p: w.p, coeffs })
    }
}
