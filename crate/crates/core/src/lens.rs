//! Linear lens spaces L(p; a₁, …, aₙ) and their classification up to
//! isometry, homotopy equivalence and tangential homotopy equivalence.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::PrimeModulus;
use crate::repring::{in_kernel_with, KRingPresentation, VirtualRep};

/// A linear lens space of dimension 2n-1.
///
/// Weights are folded into 1 … (p-1)/2 and sorted. Folding a ↦ p - a
/// conjugates one complex coordinate, so the parity of the number of folds is
/// kept as `orientation` (+1 or -1) relative to the standard orientation of
/// the folded space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LensSpace {
    p: PrimeModulus,
    weights: Vec<u64>,
    orientation: i8,
}

impl LensSpace {
    pub fn new(p: u64, raw: &[i64]) -> Result<Self> {
        Self::with_prime(PrimeModulus::new(p)?, raw)
    }

    pub fn with_prime(p: PrimeModulus, raw: &[i64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::NoWeights);
        }
        let mut orientation = 1i8;
        let mut weights = Vec::with_capacity(raw.len());
        for &a in raw {
            let (k, flipped) = p.fold(a).ok_or(Error::WeightDivisibleByP { weight: a, p: p.get() })?;
            if flipped {
                orientation = -orientation;
            }
            weights.push(k);
        }
        weights.sort_unstable();
        Ok(Self {
            p,
            weights,
            orientation,
        })
    }

    pub fn prime(&self) -> PrimeModulus {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.weights.len() as u64
    }

    pub fn dim(&self) -> u64 {
        2 * self.n() - 1
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    /// Same space with the opposite orientation.
    pub fn reversed(&self) -> Self {
        Self {
            orientation: -self.orientation,
            ..self.clone()
        }
    }

    /// ∏ aᵢ mod p for the weights as originally given (sign included).
    pub fn weight_product(&self) -> u64 {
        let prod = self.weights.iter().fold(1, |acc, &a| self.p.mul(acc, a));
        if self.orientation < 0 {
            self.p.reduce(-(prod as i64))
        } else {
            prod
        }
    }

    /// L(p; v·a₁, …, v·aₙ).
    pub fn scaled(&self, v: u64) -> Result<Self> {
        let raw: Vec<i64> = self
            .weights
            .iter()
            .map(|&a| self.p.mul(a, self.p.reduce(v as i64)) as i64)
            .collect();
        let s = Self::with_prime(self.p, &raw)?;
        Ok(Self {
            orientation: s.orientation * self.orientation,
            ..s
        })
    }

    /// Σ ρ_{aᵢ}, the representation whose unit sphere covers the space.
    pub fn representation(&self) -> VirtualRep {
        VirtualRep::from_weights(self.p, &self.weights).expect("weights are units")
    }

    /// Whether two spaces can be compared at all (same p and n).
    pub fn comparable(&self, other: &Self) -> bool {
        self.p == other.p && self.n() == other.n()
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "L({}; {})", self.p.get(), w.join(","))
    }
}

/// Number of weights congruent to ±k, for k = 1 … (p-1)/2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MuProfile {
    pub counts: Vec<u64>,
}

pub fn mu_profile(l: &LensSpace) -> MuProfile {
    let mut counts = vec![0; l.p.half()];
    for &a in &l.weights {
        counts[a as usize - 1] += 1;
    }
    MuProfile { counts }
}

/// Smallest unit s with {±s·aᵢ} = {±bᵢ}, if any.
pub fn isometric(l1: &LensSpace, l2: &LensSpace) -> Option<u64> {
    if !l1.comparable(l2) {
        return None;
    }
    l1.p.units()
        .take(l1.p.half())
        .find(|&s| l1.scaled(s).is_ok_and(|m| m.weights == l2.weights))
}

/// All units e with ∏aᵢ ≡ ±eⁿ ∏bᵢ (mod p), paired with the sign (+1/-1)
/// that makes the congruence hold for the oriented weights.
pub fn homotopy_witnesses(l1: &LensSpace, l2: &LensSpace) -> Vec<(u64, i8)> {
    if !l1.comparable(l2) {
        return Vec::new();
    }
    let p = l1.p;
    let (pa, pb) = (l1.weight_product(), l2.weight_product());
    p.units()
        .filter_map(|e| {
            let rhs = p.mul(p.pow(e, l1.n()), pb);
            if rhs == pa {
                Some((e, 1))
            } else if p.reduce(-(rhs as i64)) == pa {
                Some((e, -1))
            } else {
                None
            }
        })
        .collect()
}

/// Smallest homotopy witness e.
pub fn homotopy_equivalent(l1: &LensSpace, l2: &LensSpace) -> Option<u64> {
    homotopy_witnesses(l1, l2).first().map(|&(e, _)| e)
}

/// Why a pair fails to be tangentially equivalent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotTangentialReason {
    NotComparable,
    NotHomotopyEquivalent,
    TangentClassesDiffer,
}

/// Outcome of the tangential test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentialVerdict {
    pub equivalent: bool,
    /// Homotopy witness e realizing the equivalence.
    pub witness: Option<u64>,
    pub reason: Option<NotTangentialReason>,
    /// Whether the fiber-homotopy-triviality constraint (difference mod p a
    /// multiple of Σρ_j) was imposed. It is imposed for n ≥ p - 1 only.
    pub fht_constraint_applied: bool,
}

fn fht_constraint_holds(d: &VirtualRep) -> bool {
    let p = d.prime().get() as i64;
    let first = d.mult()[0].rem_euclid(p);
    d.mult().iter().all(|m| m.rem_euclid(p) == first)
}

/// Tangential test against a prebuilt presentation for (p, n).
///
/// For a homotopy witness e, the weights of the first space are re-indexed
/// by e⁻¹ so that the equivalence induces the identity on π₁; the stable
/// tangent classes then agree iff V' - W lies in the common kernel A.
pub fn tangential_with(
    l1: &LensSpace,
    l2: &LensSpace,
    k: &KRingPresentation,
) -> Result<TangentialVerdict> {
    let fht = l1.n() + 1 >= l1.p.get();
    let fail = |reason| TangentialVerdict {
        equivalent: false,
        witness: None,
        reason: Some(reason),
        fht_constraint_applied: fht,
    };
    if !l1.comparable(l2) {
        return Ok(fail(NotTangentialReason::NotComparable));
    }
    if k.prime() != l1.p || k.n() != l1.n() {
        return Err(Error::MismatchedPrime(k.prime().get(), l1.p.get()));
    }
    let witnesses = homotopy_witnesses(l1, l2);
    if witnesses.is_empty() {
        return Ok(fail(NotTangentialReason::NotHomotopyEquivalent));
    }
    let (v, w) = (l1.representation(), l2.representation());
    for (e, _) in witnesses {
        let d = v.reindex(l1.p.inv(e)?)?.sub(&w);
        if fht && !fht_constraint_holds(&d) {
            continue;
        }
        if in_kernel_with(&d, k)? {
            return Ok(TangentialVerdict {
                equivalent: true,
                witness: Some(e),
                reason: None,
                fht_constraint_applied: fht,
            });
        }
    }
    Ok(fail(NotTangentialReason::TangentClassesDiffer))
}

pub fn tangential_verdict(l1: &LensSpace, l2: &LensSpace) -> Result<TangentialVerdict> {
    let k = KRingPresentation::shared(l1.p, l1.n())?;
    tangential_with(l1, l2, &k)
}

pub fn tangentially_equivalent(l1: &LensSpace, l2: &LensSpace) -> bool {
    tangential_verdict(l1, l2).is_ok_and(|v| v.equivalent)
}

/// A boolean relation together with its witness unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnessed {
    pub holds: bool,
    pub witness: Option<u64>,
}

impl Witnessed {
    fn from(w: Option<u64>) -> Self {
        Self {
            holds: w.is_some(),
            witness: w,
        }
    }
}

/// Conclusions attached to a classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    /// Different p or n.
    NotComparable,
    NotHomotopyEquivalent,
    /// Homotopy equivalent, but no equivalence preserves stable tangent bundles.
    HomotopyEquivalentNotTangential,
    /// Isometric, hence diffeomorphic.
    Isometric,
    /// Tangentially equivalent with n ≥ p - 1, which forces an isometry.
    StableRangeRigidity,
    /// Tangentially equivalent: M × R³ and N × R³ are diffeomorphic.
    ProductWithR3Diffeomorphic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub first: LensSpace,
    pub second: LensSpace,
    pub isometric: Witnessed,
    pub homotopy_equivalent: Witnessed,
    pub tangentially_equivalent: Witnessed,
    pub fht_constraint_applied: bool,
    pub conclusions: Vec<Conclusion>,
}

pub fn classify_with(
    l1: &LensSpace,
    l2: &LensSpace,
    k: Option<&KRingPresentation>,
) -> Result<ClassificationVerdict> {
    let iso = isometric(l1, l2);
    let he = homotopy_equivalent(l1, l2);
    let tang = match (l1.comparable(l2), k) {
        (true, Some(k)) => tangential_with(l1, l2, k)?,
        _ => tangential_verdict(l1, l2)?,
    };
    if iso.is_some() && (he.is_none() || !tang.equivalent) {
        return Err(Error::Inconsistency(format!(
            "{l1} and {l2} are isometric but not {} equivalent",
            if he.is_none() { "homotopy" } else { "tangentially" }
        )));
    }
    if tang.equivalent && he.is_none() {
        return Err(Error::Inconsistency(format!(
            "{l1} and {l2} are tangentially but not homotopy equivalent"
        )));
    }

    let mut conclusions = Vec::new();
    if !l1.comparable(l2) {
        conclusions.push(Conclusion::NotComparable);
    } else if he.is_none() {
        conclusions.push(Conclusion::NotHomotopyEquivalent);
    } else if !tang.equivalent {
        conclusions.push(Conclusion::HomotopyEquivalentNotTangential);
    } else {
        if l1.n() + 1 >= l1.p.get() {
            if iso.is_none() {
                return Err(Error::Inconsistency(format!(
                    "{l1} and {l2} are tangentially equivalent with n >= p - 1 but not isometric"
                )));
            }
            conclusions.push(Conclusion::StableRangeRigidity);
        }
        conclusions.push(Conclusion::ProductWithR3Diffeomorphic);
    }
    if iso.is_some() {
        conclusions.insert(0, Conclusion::Isometric);
    }

    Ok(ClassificationVerdict {
        first: l1.clone(),
        second: l2.clone(),
        isometric: Witnessed::from(iso),
        homotopy_equivalent: Witnessed::from(he),
        tangentially_equivalent: Witnessed::from(tang.witness),
        fht_constraint_applied: tang.fht_constraint_applied,
        conclusions,
    })
}

pub fn classify(l1: &LensSpace, l2: &LensSpace) -> Result<ClassificationVerdict> {
    classify_with(l1, l2, None)
}

/// Verdict for a tangentially equivalent pair. In the range n ≥ p - 1 an
/// isometry must exist; failing to find one is reported as an inconsistency.
pub fn folkman_conclusion(l1: &LensSpace, l2: &LensSpace) -> Result<ClassificationVerdict> {
    let v = classify(l1, l2)?;
    if !v.tangentially_equivalent.holds {
        return Err(Error::NotTangential);
    }
    Ok(v)
}

/// Every rescaling L(p; v·a) is isometric to L.
pub fn rigidity_check(l: &LensSpace) -> bool {
    l.p.units()
        .all(|v| l.scaled(v).is_ok_and(|m| isometric(&m, l).is_some()))
}

/// Shape of the coefficient difference between two representations
/// V = Σ aⱼρⱼ and W = Σ bⱼρⱼ whose difference lies in the kernel A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientPattern {
    Equal,
    /// a_{j1} = p + c = b_{j2}, b_{j1} = c = a_{j2}, and aⱼ = bⱼ = c elsewhere.
    /// Indices are 1-based.
    Swap { j1: usize, j2: usize, c: i64 },
    /// Some aⱼ - bⱼ is not divisible by p.
    NotDivisible,
    /// Divisible differences that fit neither shape above.
    Other,
}

impl CoefficientPattern {
    /// Equal, or a swap with base c ∈ {0, 1}.
    pub fn conforms(&self) -> bool {
        match self {
            Self::Equal => true,
            Self::Swap { c, .. } => *c == 0 || *c == 1,
            _ => false,
        }
    }
}

pub fn coefficient_pattern(p: u64, a: &[i64], b: &[i64]) -> CoefficientPattern {
    let p = p as i64;
    if a.iter().zip(b).any(|(x, y)| (x - y) % p != 0) {
        return CoefficientPattern::NotDivisible;
    }
    if a == b {
        return CoefficientPattern::Equal;
    }
    let plus: Vec<usize> = (0..a.len()).filter(|&j| a[j] - b[j] == p).collect();
    let minus: Vec<usize> = (0..a.len()).filter(|&j| b[j] - a[j] == p).collect();
    let differing = (0..a.len()).filter(|&j| a[j] != b[j]).count();
    if plus.len() != 1 || minus.len() != 1 || differing != 2 {
        return CoefficientPattern::Other;
    }
    let (j1, j2) = (plus[0], minus[0]);
    let c = b[j1];
    let rest_ok = (0..a.len())
        .filter(|&j| j != j1 && j != j2)
        .all(|j| a[j] == c);
    if a[j2] == c && rest_ok {
        CoefficientPattern::Swap {
            j1: j1 + 1,
            j2: j2 + 1,
            c,
        }
    } else {
        CoefficientPattern::Other
    }
}

/// Coefficient patterns of s·V against W for every unit s (up to sign) with
/// s·V - W in the kernel A.
pub fn kernel_patterns(
    l1: &LensSpace,
    l2: &LensSpace,
    k: &KRingPresentation,
) -> Result<Vec<(u64, CoefficientPattern)>> {
    if !l1.comparable(l2) {
        return Ok(Vec::new());
    }
    let (v, w) = (l1.representation(), l2.representation());
    let mut out = Vec::new();
    for s in l1.p.units().take(l1.p.half()) {
        let vs = v.reindex(s)?;
        if in_kernel_with(&vs.sub(&w), k)? {
            out.push((s, coefficient_pattern(l1.p.get(), vs.mult(), w.mult())));
        }
    }
    Ok(out)
}
