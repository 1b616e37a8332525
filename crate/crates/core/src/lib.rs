//! Exact classification of linear lens spaces L(p; a₁, …, aₙ) with odd prime
//! fundamental group: isometry, homotopy and tangential homotopy equivalence,
//! ρ-invariants, K-theory of lens spaces, and the tangential thickness
//! filtration of their normal invariants.
//!
//! Everything is exact. The arithmetic substrate in [`exactnum`] is generic
//! over its scalar types; the aliases below fix the instantiations used by
//! the classifiers.

pub mod error;
pub mod exactnum;
pub mod ktorsion;
pub mod lens;
pub mod oracle;
pub mod repring;
pub mod rho;
pub mod thickness;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use error::{Error, Result};
pub use exactnum::PrimeModulus;
pub use lens::{ClassificationVerdict, LensSpace, MuProfile};
pub use repring::{ComplexVirtualRep, KRingPresentation, VirtualRep};
pub use rho::RhoInvariant;
pub use thickness::{ThetaFiltration, ThicknessReport};

/// Exact rational scalar.
pub type Rational = BigRational;
/// Element of Q(ζ_p) with arbitrary-precision rational coordinates.
pub type Cyclotomic = exactnum::CyclotomicNumber<BigRational>;
/// Integer matrix with arbitrary-precision entries.
pub type IntMatrix = exactnum::IntegerMatrix<BigInt>;
/// Finite abelian group with arbitrary-precision invariant factors.
pub type AbelianGroup = exactnum::FiniteAbelianGroup<BigInt>;
/// Group element matching [`AbelianGroup`].
pub type AbelianElement = exactnum::GroupElement<BigInt>;
