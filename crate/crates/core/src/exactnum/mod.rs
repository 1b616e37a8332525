//! Exact arithmetic substrate: residues, valuations, cyclotomic fields and
//! Smith normal form over the integers.

use std::fmt::Debug;
use std::ops::Neg;

use num_integer::Integer;
use num_traits::{Num, Signed};

pub mod abelian;
pub mod cyclopoly;
pub mod cyclotomic;
pub mod matrix;
pub mod modular;
pub mod snf;

pub use abelian::{FiniteAbelianGroup, GroupElement};
pub use cyclopoly::CyclotomicPoly;
pub use cyclotomic::CyclotomicNumber;
pub use matrix::IntegerMatrix;
pub use modular::{p_adic_valuation, primitive_root_mod_p_squared, PrimeModulus};
pub use snf::{smith_normal_form, SmithForm};

/// Coefficient field for cyclotomic arithmetic (`Rational64`, `BigRational`, ...).
pub trait FieldScalar: Clone + PartialEq + Debug + Num + Neg<Output = Self> {}

impl<T> FieldScalar for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> {}

/// Euclidean ring of matrix entries (`i64`, `i128`, `BigInt`, ...).
pub trait IntScalar: Clone + Debug + Integer + Signed {}

impl<T> IntScalar for T where T: Clone + Debug + Integer + Signed {}
