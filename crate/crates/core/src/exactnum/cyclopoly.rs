//! Q(ζ_m) for arbitrary m, as polynomials reduced modulo the cyclotomic
//! polynomial Φ_m. Used where the conductor is composite (character values
//! of (Z/p)^× live in Q(ζ_{p-1})).

use super::FieldScalar;

/// Dense integer polynomial, lowest degree first.
type IntPoly = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicPoly {
    m: u64,
    /// Φ_m, monic, lowest degree first.
    phi: IntPoly,
}

impl CyclotomicPoly {
    pub fn new(m: u64) -> Self {
        assert!(m >= 1);
        Self {
            m,
            phi: cyclotomic_polynomial(m),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    /// φ(m), the field degree.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn modulus(&self) -> &[i64] {
        &self.phi
    }

    pub fn zero<T: FieldScalar>(&self) -> Vec<T> {
        vec![T::zero(); self.degree()]
    }

    pub fn constant<T: FieldScalar>(&self, c: T) -> Vec<T> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// Σ c_i ζ^{e_i} with exponents taken mod m.
    pub fn from_terms<T, I>(&self, terms: I) -> Vec<T>
    where
        T: FieldScalar,
        I: IntoIterator<Item = (T, u64)>,
    {
        let mut full = vec![T::zero(); self.m as usize];
        for (c, e) in terms {
            let e = (e % self.m) as usize;
            full[e] = full[e].clone() + c;
        }
        self.reduce(full)
    }

    pub fn reduce<T: FieldScalar>(&self, mut poly: Vec<T>) -> Vec<T> {
        let d = self.degree();
        while poly.len() > d {
            let top = poly.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = poly.len() - d;
            // x^{d+shift} = -Σ_{i<d} phi_i x^{i+shift}
            for (i, c) in self.phi[..d].iter().enumerate() {
                if *c != 0 {
                    let idx = i + shift;
                    poly[idx] = poly[idx].clone() - top.clone() * int_scalar::<T>(*c);
                }
            }
        }
        poly.resize(d, T::zero());
        poly
    }

    pub fn mul<T: FieldScalar>(&self, a: &[T], b: &[T]) -> Vec<T> {
        if a.is_empty() || b.is_empty() {
            return self.zero();
        }
        let mut out = vec![T::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = out[i + j].clone() + x.clone() * y.clone();
                }
            }
        }
        self.reduce(out)
    }

    /// The rational value of `a`, when it lies in Q.
    pub fn as_scalar<T: FieldScalar>(&self, a: &[T]) -> Option<T> {
        if a[1..].iter().all(|c| c.is_zero()) {
            Some(a[0].clone())
        } else {
            None
        }
    }
}

fn int_scalar<T: FieldScalar>(c: i64) -> T {
    let mut acc = T::zero();
    let unit = if c < 0 { -T::one() } else { T::one() };
    for _ in 0..c.unsigned_abs() {
        acc = acc + unit.clone();
    }
    acc
}

/// Φ_m via exact division of x^m - 1 by Φ_d for proper divisors d.
pub fn cyclotomic_polynomial(m: u64) -> IntPoly {
    let mut num: IntPoly = vec![0; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> IntPoly {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}
