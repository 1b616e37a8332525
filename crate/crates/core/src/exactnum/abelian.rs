use std::fmt;

use serde::{Deserialize, Serialize};

use super::IntScalar;

/// Finite abelian group in invariant-factor form d₁ | d₂ | … | d_r, each d_i ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup<T> {
    invariant_factors: Vec<T>,
}

impl<T: IntScalar> FiniteAbelianGroup<T> {
    pub fn trivial() -> Self {
        Self {
            invariant_factors: Vec::new(),
        }
    }

    /// Validates the divisibility chain.
    pub fn new(invariant_factors: Vec<T>) -> Option<Self> {
        let two = T::one() + T::one();
        let ok = invariant_factors.iter().all(|d| *d >= two)
            && invariant_factors
                .windows(2)
                .all(|w| w[1].is_multiple_of(&w[0]));
        ok.then_some(Self { invariant_factors })
    }

    pub fn cyclic(n: T) -> Self {
        if n.abs().is_one() {
            Self::trivial()
        } else {
            Self {
                invariant_factors: vec![n.abs()],
            }
        }
    }

    pub fn invariant_factors(&self) -> &[T] {
        &self.invariant_factors
    }

    pub fn order(&self) -> T {
        self.invariant_factors
            .iter()
            .fold(T::one(), |acc, d| acc * d.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn identity(&self) -> GroupElement<T> {
        GroupElement {
            coords: vec![T::zero(); self.rank()],
        }
    }

    /// Reduces raw coordinates into canonical representatives `0 <= c_i < d_i`.
    pub fn element(&self, raw: &[T]) -> GroupElement<T> {
        assert_eq!(raw.len(), self.rank());
        GroupElement {
            coords: raw
                .iter()
                .zip(&self.invariant_factors)
                .map(|(c, d)| c.mod_floor(d))
                .collect(),
        }
    }

    pub fn add(&self, a: &GroupElement<T>, b: &GroupElement<T>) -> GroupElement<T> {
        let raw: Vec<T> = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x.clone() + y.clone())
            .collect();
        self.element(&raw)
    }

    pub fn neg(&self, a: &GroupElement<T>) -> GroupElement<T> {
        let raw: Vec<T> = a.coords.iter().map(|x| -x.clone()).collect();
        self.element(&raw)
    }

    pub fn scale(&self, k: &T, a: &GroupElement<T>) -> GroupElement<T> {
        let raw: Vec<T> = a.coords.iter().map(|x| x.clone() * k.clone()).collect();
        self.element(&raw)
    }

    /// Order of an element: lcm of d_i / gcd(c_i, d_i).
    pub fn element_order(&self, a: &GroupElement<T>) -> T {
        a.coords
            .iter()
            .zip(&self.invariant_factors)
            .fold(T::one(), |acc, (c, d)| acc.lcm(&(d.clone() / c.gcd(d))))
    }
}

impl<T: IntScalar + fmt::Display> fmt::Display for FiniteAbelianGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Element of a [`FiniteAbelianGroup`] in canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement<T> {
    coords: Vec<T>,
}

impl<T: IntScalar> GroupElement<T> {
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_chain_is_validated() {
        assert!(FiniteAbelianGroup::new(vec![2i64, 6]).is_some());
        assert!(FiniteAbelianGroup::new(vec![6i64, 2]).is_none());
        assert!(FiniteAbelianGroup::new(vec![1i64, 2]).is_none());
        assert_eq!(FiniteAbelianGroup::new(vec![2i64, 6]).unwrap().order(), 12);
    }

    #[test]
    fn element_orders() {
        let g = FiniteAbelianGroup::new(vec![5i64, 25]).unwrap();
        assert_eq!(g.element_order(&g.element(&[0, 5])), 5);
        assert_eq!(g.element_order(&g.element(&[1, 5])), 5);
        assert_eq!(g.element_order(&g.element(&[0, 1])), 25);
        assert_eq!(g.element_order(&g.identity()), 1);
        let x = g.element(&[3, 7]);
        assert!(g.add(&x, &g.neg(&x)).is_zero());
    }
}
